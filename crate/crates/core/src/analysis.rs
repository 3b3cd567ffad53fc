//! Equivalences on finite trees, bisimulation minimization, determinization
//! and branch words.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::label::{Label, Symbol};
use crate::semantics::path_language;
use crate::tree::{ClassInterner, SyncTree, TreeBuilder, VertexId};

/// Whether the roots are related by some bisimulation.
pub fn bisimilar(t1: &SyncTree, t2: &SyncTree) -> bool {
    let mut interner = ClassInterner::default();
    let a = interner.bisim_classes(t1);
    let b = interner.bisim_classes(t2);
    a[0] == b[0]
}

/// Bisimilarity up to depth `d`: with `d = 0` always true; with `d + 1`
/// each labelled edge from either root has an equally labelled partner from
/// the other root whose targets are `d`-bisimilar.
pub fn bounded_bisim(t1: &SyncTree, t2: &SyncTree, d: usize) -> bool {
    // Beyond the larger height the level classes no longer change.
    let rounds = d.min(t1.height().max(t2.height()) + 1);
    let mut c1 = vec![0u32; t1.num_vertices()];
    let mut c2 = vec![0u32; t2.num_vertices()];
    for _ in 0..rounds {
        let mut interner = ClassInterner::default();
        c1 = level(t1, &c1, &mut interner);
        c2 = level(t2, &c2, &mut interner);
    }
    c1[0] == c2[0]
}

fn level(t: &SyncTree, prev: &[u32], interner: &mut ClassInterner) -> Vec<u32> {
    (0..t.num_vertices())
        .map(|u| {
            let mut sig: Vec<(Label, u32)> = t
                .children(u)
                .iter()
                .map(|(l, v)| (l.clone(), prev[*v]))
                .collect();
            sig.sort();
            sig.dedup();
            interner.intern(sig)
        })
        .collect()
}

/// Same path language.
pub fn lang_equal(t1: &SyncTree, t2: &SyncTree) -> bool {
    path_language(t1) == path_language(t2)
}

/// Keeps, at every vertex, one child per (label, bisimilarity class).
///
/// The result is bisimilar to `t`, has no vertex with two equally labelled
/// bisimilar children, and is a fixed point of `minimize`.
pub fn minimize(t: &SyncTree) -> SyncTree {
    let class = ClassInterner::default().bisim_classes(t);
    let mut b = TreeBuilder::new();
    let mut stack = vec![(0usize, t.root())];
    while let Some((dst, src)) = stack.pop() {
        let mut seen = HashSet::new();
        for (label, child) in t.children(src) {
            if seen.insert((label, class[*child])) {
                let c = b.add_child(dst, label.clone());
                stack.push((c, *child));
            }
        }
    }
    b.finish()
}

/// No vertex has two equally labelled children with bisimilar subtrees.
pub fn is_minimal(t: &SyncTree) -> bool {
    let class = ClassInterner::default().bisim_classes(t);
    (0..t.num_vertices()).all(|u| {
        let mut seen = HashSet::new();
        t.children(u)
            .iter()
            .all(|(l, v)| seen.insert((l, class[*v])))
    })
}

/// No vertex has two equally labelled outgoing edges.
pub fn is_deterministic(t: &SyncTree) -> bool {
    (0..t.num_vertices()).all(|u| {
        let mut seen = HashSet::new();
        t.children(u).iter().all(|(l, _)| seen.insert(l))
    })
}

/// A tree whose edges carry `(label, index)`; the indices at a vertex with
/// out-degree `l` are exactly `1..=l`.
///
/// Vertices are numbered breadth-first, siblings in index order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DetTree {
    edges: Vec<Vec<(Label, usize, VertexId)>>,
}

impl DetTree {
    pub fn root(&self) -> VertexId {
        0
    }

    pub fn num_vertices(&self) -> usize {
        self.edges.len()
    }

    /// `(label, index, child)` in index order.
    pub fn children(&self, v: VertexId) -> &[(Label, usize, VertexId)] {
        &self.edges[v]
    }

    /// Forgets the indices.
    pub fn strip(&self) -> SyncTree {
        let mut b = TreeBuilder::new();
        let mut map = vec![0; self.edges.len()];
        for u in 0..self.edges.len() {
            for (l, _, v) in &self.edges[u] {
                map[*v] = b.add_child(map[u], l.clone());
            }
        }
        b.finish()
    }

    /// Indices at each vertex are a permutation of `1..=out-degree`.
    pub fn check_indices(&self) -> bool {
        self.edges.iter().all(|es| {
            let idx: BTreeSet<usize> = es.iter().map(|e| e.1).collect();
            idx.len() == es.len() && idx.iter().copied().eq(1..=es.len())
        })
    }
}

/// Total order on labels: actions listed in `order` first, in that order;
/// other actions by text; exit last.
fn label_cmp(order: &[Symbol], x: &Label, y: &Label) -> Ordering {
    let rank = |l: &Label| match l {
        Label::Action(a) => match order.iter().position(|b| b == a) {
            Some(p) => (0, p, None),
            None => (1, 0, Some(a.clone())),
        },
        Label::Exit => (2, 0, None),
    };
    rank(x).cmp(&rank(y))
}

/// Canonical determinization with actions ordered by their text.
pub fn determinize(t: &SyncTree) -> DetTree {
    determinize_with_order(t, &[])
}

/// Canonical determinization: siblings are sorted by label (actions in
/// `order` first, in that order, then other actions by text, exit last) and
/// then by the canonical key of their subtree; the `j`-th sibling gets
/// index `j`.
pub fn determinize_with_order(t: &SyncTree, order: &[Symbol]) -> DetTree {
    let keys = t.subtree_keys();
    let mut edges: Vec<Vec<(Label, usize, VertexId)>> = vec![Vec::new()];
    let mut queue = std::collections::VecDeque::from([(0usize, t.root())]);
    while let Some((dst, src)) = queue.pop_front() {
        let mut kids: Vec<&(Label, VertexId)> = t.children(src).iter().collect();
        kids.sort_by(|(l1, v1), (l2, v2)| {
            label_cmp(order, l1, l2).then_with(|| keys[*v1].cmp(&keys[*v2]))
        });
        for (j, (l, v)) in kids.into_iter().enumerate() {
            let id = edges.len();
            edges.push(Vec::new());
            edges[dst].push((l.clone(), j + 1, id));
            queue.push_back((id, *v));
        }
    }
    DetTree { edges }
}

/// `k0 (a1,i1) k1 ... (am,im) km`: out-degrees along a root path and the
/// indexed edges taken.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BranchWord {
    pub degrees: Vec<usize>,
    pub steps: Vec<(Label, usize)>,
}

impl BranchWord {
    /// Every index is within the preceding degree, and an exit step occurs
    /// exactly as the last step, into degree 0.
    pub fn is_well_formed(&self) -> bool {
        if self.degrees.len() != self.steps.len() + 1 {
            return false;
        }
        let m = self.steps.len();
        self.steps.iter().enumerate().all(|(j, (label, i))| {
            let in_range = *i >= 1 && *i <= self.degrees[j];
            let exit_ok = !label.is_exit() || (j + 1 == m && self.degrees[m] == 0);
            in_range && exit_ok
        })
    }

    /// Action labels of the steps, exits skipped.
    pub fn actions(&self) -> impl Iterator<Item = &Symbol> {
        self.steps.iter().filter_map(|(l, _)| l.as_action())
    }
}

impl fmt::Display for BranchWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.degrees[0])?;
        for ((l, i), k) in self.steps.iter().zip(&self.degrees[1..]) {
            write!(f, " ({l},{i}) {k}")?;
        }
        Ok(())
    }
}

/// One branch word per vertex, in vertex order.
pub fn branch_words(t: &DetTree) -> Vec<BranchWord> {
    let mut out: Vec<BranchWord> = Vec::with_capacity(t.num_vertices());
    out.push(BranchWord {
        degrees: vec![t.children(0).len()],
        steps: Vec::new(),
    });
    for u in 0..t.num_vertices() {
        for (l, i, v) in t.children(u) {
            let mut w = out[u].clone();
            w.steps.push((l.clone(), *i));
            w.degrees.push(t.children(*v).len());
            debug_assert_eq!(out.len(), *v);
            out.push(w);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> SyncTree {
        s.parse().unwrap()
    }

    fn atom(a: &str) -> SyncTree {
        SyncTree::atom(&Symbol::new(a))
    }

    #[test]
    fn bisimilarity_examples() {
        assert!(bisimilar(&atom("a").sum(&atom("a")), &atom("a")));
        let lhs = atom("a").seq_product(&SyncTree::one().sum(&SyncTree::one()));
        assert!(bisimilar(&lhs, &atom("a").sum(&atom("a"))));
        assert!(!lhs.is_isomorphic(&atom("a").sum(&atom("a"))));
        assert!(!bisimilar(&atom("a"), &atom("b")));
    }

    #[test]
    fn bounded_examples() {
        let t1 = SyncTree::prefix(&Symbol::new("a"), &atom("b"));
        let t2 = atom("a");
        assert!(bounded_bisim(&t1, &t2, 0));
        assert!(bounded_bisim(&t1, &t2, 1));
        assert!(!bounded_bisim(&t1, &t2, 2));
        assert!(!bounded_bisim(&t1, &t2, 50));
    }

    #[test]
    fn language_examples() {
        assert!(lang_equal(&SyncTree::zero(), &SyncTree::zero()));
        let dead = lit("(a())");
        assert!(lang_equal(&dead, &SyncTree::zero()));
        assert!(!dead.is_isomorphic(&SyncTree::zero()));
        assert!(!bisimilar(&dead, &SyncTree::zero()));
        assert!(!lang_equal(&atom("a"), &atom("b")));
    }

    #[test]
    fn minimize_examples() {
        assert!(minimize(&atom("a").sum(&atom("a"))).is_isomorphic(&atom("a")));
        let ab = atom("a").sum(&atom("b"));
        assert!(minimize(&ab).is_isomorphic(&ab));
        let a = Symbol::new("a");
        let t =
            SyncTree::prefix(&a, &atom("b").sum(&atom("b"))).sum(&SyncTree::prefix(&a, &atom("b")));
        let m = minimize(&t);
        assert!(m.is_isomorphic(&SyncTree::prefix(&a, &atom("b"))));
        assert!(is_minimal(&m));
        assert!(!is_minimal(&t));
        assert_eq!(minimize(&m), m);
    }

    #[test]
    fn determinize_examples() {
        let d = determinize(&atom("b").sum(&atom("a")));
        let root: Vec<_> = d
            .children(0)
            .iter()
            .map(|(l, i, _)| (l.to_string(), *i))
            .collect();
        assert_eq!(root, vec![("a".to_string(), 1), ("b".to_string(), 2)]);

        let order = [Symbol::new("b"), Symbol::new("a")];
        let d = determinize_with_order(&atom("a").sum(&atom("b")), &order);
        let root: Vec<_> = d
            .children(0)
            .iter()
            .map(|(l, i, _)| (l.to_string(), *i))
            .collect();
        assert_eq!(root, vec![("b".to_string(), 1), ("a".to_string(), 2)]);

        let d = determinize(&atom("a").sum(&atom("a")));
        assert_eq!(d.children(0).len(), 2);
        assert!(d.check_indices());
        let d = determinize(&SyncTree::one());
        assert_eq!(d.children(0)[0].0, Label::Exit);
        assert_eq!(d.children(0)[0].1, 1);
        // Exit sorts after actions.
        let d = determinize(&lit("(!() z())"));
        assert_eq!(d.children(0)[1].0, Label::Exit);
    }

    #[test]
    fn branch_word_examples() {
        let words: Vec<String> = branch_words(&determinize(&SyncTree::zero()))
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, vec!["0"]);
        let words: Vec<String> = branch_words(&determinize(&atom("a")))
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, vec!["1", "1 (a,1) 1", "1 (a,1) 1 (!,1) 0"]);
        for w in branch_words(&determinize(&lit("(a(b() !()) a(!()) c())"))) {
            assert!(w.is_well_formed(), "{w}");
        }
        let bad = BranchWord {
            degrees: vec![1, 1],
            steps: vec![(Label::Exit, 1)],
        };
        assert!(!bad.is_well_formed());
    }

    #[test]
    fn determinism_examples() {
        assert!(is_deterministic(&atom("a").sum(&atom("b"))));
        assert!(!is_deterministic(&atom("a").sum(&atom("a"))));
    }
}
