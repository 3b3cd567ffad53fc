//! Finite synchronization trees and the tree algebra.
//!
//! A [`SyncTree`] is stored as an arena of vertices. Vertex `0` is the root
//! and every child has a larger index than its parent, so a reverse scan over
//! the arena visits children before parents. Children form a multiset: the
//! order in which edges are stored carries no meaning.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::label::{Label, Symbol};

pub type VertexId = usize;

#[derive(Clone, PartialEq, Eq)]
pub struct SyncTree {
    edges: Vec<Vec<(Label, VertexId)>>,
}

impl SyncTree {
    /// The tree with a single vertex and no edges.
    pub fn zero() -> Self {
        SyncTree {
            edges: vec![Vec::new()],
        }
    }

    /// Root with one exit edge.
    pub fn one() -> Self {
        let mut b = TreeBuilder::new();
        b.add_child(0, Label::Exit);
        b.finish()
    }

    /// `a` as a constant: root, an `a`-edge, then an exit edge.
    pub fn atom(a: &Symbol) -> Self {
        let mut b = TreeBuilder::new();
        let v = b.add_child(0, Label::Action(a.clone()));
        b.add_child(v, Label::Exit);
        b.finish()
    }

    pub fn root(&self) -> VertexId {
        0
    }

    pub fn num_vertices(&self) -> usize {
        self.edges.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn children(&self, v: VertexId) -> &[(Label, VertexId)] {
        &self.edges[v]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.edges[v].len()
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.edges[v].is_empty()
    }

    /// Iterator over all edges as `(source, label, target)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, &Label, VertexId)> {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(u, es)| es.iter().map(move |(l, v)| (u, l, *v)))
    }

    /// Depth of every vertex, indexed by vertex id.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.edges.len()];
        for u in 0..self.edges.len() {
            for &(_, v) in &self.edges[u] {
                depth[v] = depth[u] + 1;
            }
        }
        depth
    }

    /// Length of the longest root path (0 for the empty tree).
    pub fn height(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// Parent of every vertex; the root maps to `None`.
    pub fn parents(&self) -> Vec<Option<(VertexId, Label)>> {
        let mut parent = vec![None; self.edges.len()];
        for (u, l, v) in self.edges() {
            parent[v] = Some((u, l.clone()));
        }
        parent
    }

    /// Every action symbol occurring on an edge.
    pub fn actions(&self) -> BTreeSet<Symbol> {
        self.edges()
            .filter_map(|(_, l, _)| l.as_action().cloned())
            .collect()
    }

    /// Checks the rooted-tree and exit-leaf invariants.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.edges.len();
        let mut indegree = vec![0usize; n];
        for (u, l, v) in self.edges() {
            if v >= n {
                return Err(format!("edge {u} -> {v} points outside the tree"));
            }
            if v <= u {
                return Err(format!("edge {u} -> {v} breaks parent-before-child order"));
            }
            indegree[v] += 1;
            if l.is_exit() && !self.edges[v].is_empty() {
                return Err(format!("exit edge {u} -> {v} does not end in a leaf"));
            }
        }
        if indegree[0] != 0 {
            return Err("root has an incoming edge".into());
        }
        if let Some(v) = (1..n).find(|&v| indegree[v] != 1) {
            return Err(format!("vertex {v} has {} parents", indegree[v]));
        }
        Ok(())
    }

    /// Tree sum: disjoint union with the two roots identified.
    pub fn sum(&self, other: &SyncTree) -> SyncTree {
        let mut b = TreeBuilder::new();
        b.graft(0, self, 0);
        b.graft(0, other, 0);
        b.finish()
    }

    /// Sum of any number of trees; the empty sum is `0`.
    pub fn sum_all<'a>(trees: impl IntoIterator<Item = &'a SyncTree>) -> SyncTree {
        let mut b = TreeBuilder::new();
        for t in trees {
            b.graft(0, t, 0);
        }
        b.finish()
    }

    /// Sequential product: every exit edge of `self` is replaced by a fresh
    /// copy of `other` whose root is identified with the exit vertex.
    pub fn seq_product(&self, other: &SyncTree) -> SyncTree {
        let mut b = TreeBuilder::new();
        let mut stack = vec![(0usize, 0usize)];
        while let Some((dst, src)) = stack.pop() {
            for (label, child) in &self.edges[src] {
                if label.is_exit() {
                    b.graft(dst, other, 0);
                } else {
                    let c = b.add_child(dst, label.clone());
                    stack.push((c, *child));
                }
            }
        }
        b.finish()
    }

    /// Prefixing `a.t`: a new root with a single `a`-edge into a copy of `t`.
    pub fn prefix(a: &Symbol, t: &SyncTree) -> SyncTree {
        let mut b = TreeBuilder::new();
        let v = b.add_child(0, Label::Action(a.clone()));
        b.graft(v, t, 0);
        b.finish()
    }

    /// `B`-contraction. Kept vertices are the root and every vertex entered
    /// by an edge whose label is not in `B`; a path `B*c` between kept
    /// vertices becomes a single `c`-edge. With `B` empty this is a copy.
    pub fn contract(&self, erased: &BTreeSet<Symbol>) -> SyncTree {
        let hidden = |l: &Label| matches!(l, Label::Action(s) if erased.contains(s));
        let mut b = TreeBuilder::new();
        let mut stack = vec![(0usize, 0usize)];
        while let Some((dst, src)) = stack.pop() {
            // Walk every B-path from `src`; each visible edge found becomes
            // an edge of `dst`.
            let mut frontier = vec![src];
            while let Some(x) = frontier.pop() {
                for (label, y) in &self.edges[x] {
                    if hidden(label) {
                        frontier.push(*y);
                    } else {
                        let c = b.add_child(dst, label.clone());
                        stack.push((c, *y));
                    }
                }
            }
        }
        b.finish()
    }

    /// Keeps exactly the vertices of depth at most `depth`.
    pub fn truncate(&self, depth: usize) -> SyncTree {
        let mut b = TreeBuilder::new();
        let mut stack = vec![(0usize, 0usize, 0usize)];
        while let Some((dst, src, d)) = stack.pop() {
            if d == depth {
                continue;
            }
            for (label, child) in &self.edges[src] {
                let c = b.add_child(dst, label.clone());
                stack.push((c, *child, d + 1));
            }
        }
        b.finish()
    }

    /// Copy of the subtree rooted at `v`.
    pub fn subtree(&self, v: VertexId) -> SyncTree {
        let mut b = TreeBuilder::new();
        b.graft(0, self, v);
        b.finish()
    }

    /// Canonical encoding: equal keys exactly for isomorphic trees.
    pub fn canonical_key(&self) -> CanonicalKey {
        CanonicalKey(self.subtree_keys().swap_remove(0))
    }

    /// Canonical key text of every subtree, indexed by vertex.
    pub(crate) fn subtree_keys(&self) -> Vec<String> {
        let mut keys: Vec<String> = vec![String::new(); self.edges.len()];
        for u in (0..self.edges.len()).rev() {
            let mut parts: Vec<(&Label, &str)> = self.edges[u]
                .iter()
                .map(|(l, v)| (l, keys[*v].as_str()))
                .collect();
            parts.sort();
            let mut s = String::from("(");
            for (l, k) in parts {
                s.push_str(&l.to_string());
                s.push_str(k);
            }
            s.push(')');
            keys[u] = s;
        }
        keys
    }

    /// Isomorphic copy with siblings in canonical order and vertices
    /// numbered breadth-first. Isomorphic trees get identical forms.
    pub fn canonical_form(&self) -> SyncTree {
        let keys = self.subtree_keys();
        let mut b = TreeBuilder::new();
        let mut queue = std::collections::VecDeque::from([(0usize, 0usize)]);
        while let Some((dst, src)) = queue.pop_front() {
            let mut kids: Vec<&(Label, VertexId)> = self.edges[src].iter().collect();
            kids.sort_by(|x, y| (&x.0, &keys[x.1]).cmp(&(&y.0, &keys[y.1])));
            for (l, c) in kids {
                let v = b.add_child(dst, l.clone());
                queue.push_back((v, *c));
            }
        }
        b.finish()
    }

    pub fn is_isomorphic(&self, other: &SyncTree) -> bool {
        let mut interner = ClassInterner::default();
        let a = interner.iso_classes(self);
        let b = interner.iso_classes(other);
        a[0] == b[0]
    }

    /// Whether there is a root-preserving, label-preserving injective
    /// morphism from `self` into `other`.
    pub fn embeds_into(&self, other: &SyncTree) -> bool {
        let mut interner = ClassInterner::default();
        let ca = interner.iso_classes(self);
        let cb = interner.iso_classes(other);
        let mut memo = HashMap::new();
        embeds_at(self, &ca, 0, other, &cb, 0, &mut memo)
    }
}

fn embeds_at(
    a: &SyncTree,
    ca: &[u32],
    u: VertexId,
    b: &SyncTree,
    cb: &[u32],
    v: VertexId,
    memo: &mut HashMap<(u32, u32), bool>,
) -> bool {
    if let Some(&r) = memo.get(&(ca[u], cb[v])) {
        return r;
    }
    let left = a.children(u);
    let right = b.children(v);
    let result = left.len() <= right.len() && {
        // Children of `u` must be matched injectively to equally labelled
        // children of `v` into which they embed.
        let mut adj: Vec<Vec<usize>> = Vec::with_capacity(left.len());
        for (l1, c1) in left {
            let mut row = Vec::new();
            for (j, (l2, c2)) in right.iter().enumerate() {
                if l1 == l2 && embeds_at(a, ca, *c1, b, cb, *c2, memo) {
                    row.push(j);
                }
            }
            adj.push(row);
        }
        max_matching(&adj, right.len()) == left.len()
    };
    memo.insert((ca[u], cb[v]), result);
    result
}

/// Size of a maximum bipartite matching (augmenting paths).
fn max_matching(adj: &[Vec<usize>], right_len: usize) -> usize {
    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none() || augment(owner[j].unwrap(), adj, seen, owner) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right_len];
    let mut matched = 0;
    for i in 0..adj.len() {
        let mut seen = vec![false; right_len];
        if augment(i, adj, &mut seen, &mut owner) {
            matched += 1;
        }
    }
    matched
}

/// Hash-consing of vertex signatures. Trees classified through the same
/// interner get comparable class ids.
#[derive(Default)]
pub(crate) struct ClassInterner {
    ids: HashMap<Vec<(Label, u32)>, u32>,
}

impl ClassInterner {
    pub(crate) fn intern(&mut self, sig: Vec<(Label, u32)>) -> u32 {
        let next = self.ids.len() as u32;
        *self.ids.entry(sig).or_insert(next)
    }

    /// Isomorphism class of every vertex: children as a sorted multiset.
    pub(crate) fn iso_classes(&mut self, t: &SyncTree) -> Vec<u32> {
        self.classes_by(t, false)
    }

    /// Bisimilarity class of every vertex: children as a set.
    pub(crate) fn bisim_classes(&mut self, t: &SyncTree) -> Vec<u32> {
        self.classes_by(t, true)
    }

    fn classes_by(&mut self, t: &SyncTree, dedup: bool) -> Vec<u32> {
        let mut class = vec![0u32; t.num_vertices()];
        for u in (0..t.num_vertices()).rev() {
            let mut sig: Vec<(Label, u32)> = t
                .children(u)
                .iter()
                .map(|(l, v)| (l.clone(), class[*v]))
                .collect();
            sig.sort();
            if dedup {
                sig.dedup();
            }
            class[u] = self.intern(sig);
        }
        class
    }
}

/// Incremental construction of a [`SyncTree`].
#[derive(Debug, Default)]
pub struct TreeBuilder {
    edges: Vec<Vec<(Label, VertexId)>>,
    exit_target: Vec<bool>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        TreeBuilder {
            edges: vec![Vec::new()],
            exit_target: vec![false],
        }
    }

    pub fn root(&self) -> VertexId {
        0
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Adds a fresh child of `parent`.
    ///
    /// # Panics
    /// If `parent` is the target of an exit edge.
    pub fn add_child(&mut self, parent: VertexId, label: Label) -> VertexId {
        assert!(
            !self.exit_target[parent],
            "the target of an exit edge must stay a leaf"
        );
        let id = self.edges.len();
        self.exit_target.push(label.is_exit());
        self.edges.push(Vec::new());
        self.edges[parent].push((label, id));
        id
    }

    /// Copies the edges leaving `src_vertex` of `src` (and everything below
    /// them) under `at`.
    pub fn graft(&mut self, at: VertexId, src: &SyncTree, src_vertex: VertexId) {
        let mut stack = vec![(at, src_vertex)];
        while let Some((dst, s)) = stack.pop() {
            for (label, child) in &src.edges[s] {
                let c = self.add_child(dst, label.clone());
                stack.push((c, *child));
            }
        }
    }

    pub fn finish(self) -> SyncTree {
        SyncTree { edges: self.edges }
    }
}

/// Canonical encoding of a tree up to isomorphism.
///
/// The encoding is the tree literal with siblings sorted by `(label, key)`,
/// so it also parses back into a tree of the same class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Prints the canonical tree literal.
impl fmt::Display for SyncTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.canonical_key().as_str())
    }
}

impl fmt::Debug for SyncTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SyncTree{}", self.canonical_key())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("tree literal, offset {offset}: {message}")]
pub struct TreeLiteralError {
    pub offset: usize,
    pub message: String,
}

/// Parses the tree literal format `(<edge>*)` with `<edge> ::= LABEL <tree>`,
/// where the exit label is written `!`.
impl FromStr for SyncTree {
    type Err = TreeLiteralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = LiteralParser {
            src: s.as_bytes(),
            pos: 0,
            builder: TreeBuilder::new(),
        };
        p.expect(b'(')?;
        p.edges_of(0)?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input after tree literal"));
        }
        Ok(p.builder.finish())
    }
}

struct LiteralParser<'a> {
    src: &'a [u8],
    pos: usize,
    builder: TreeBuilder,
}

impl LiteralParser<'_> {
    fn error(&self, message: &str) -> TreeLiteralError {
        TreeLiteralError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), TreeLiteralError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    // Called after the opening parenthesis of the vertex `at`.
    fn edges_of(&mut self, at: VertexId) -> Result<(), TreeLiteralError> {
        // Explicit stack: literals of deep trees must not overflow.
        let mut stack = vec![at];
        while let Some(&v) = stack.last() {
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b')') => {
                    self.pos += 1;
                    stack.pop();
                }
                Some(_) => {
                    let label = self.label()?;
                    if self.builder.exit_target[v] {
                        return Err(self.error("exit edge target must be a leaf"));
                    }
                    let c = self.builder.add_child(v, label);
                    self.expect(b'(')?;
                    stack.push(c);
                }
                None => return Err(self.error("unexpected end of tree literal")),
            }
        }
        Ok(())
    }

    fn label(&mut self) -> Result<Label, TreeLiteralError> {
        if self.src[self.pos] == b'!' {
            self.pos += 1;
            return Ok(Label::Exit);
        }
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric()
                || self.src[self.pos] == b'_'
                || self.src[self.pos] == b'\'')
        {
            self.pos += 1;
        }
        if start == self.pos || !(self.src[start].is_ascii_alphabetic() || self.src[start] == b'_')
        {
            self.pos = start;
            return Err(self.error("expected an edge label"));
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(Label::action(name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Symbol {
        Symbol::new(s)
    }

    fn lit(s: &str) -> SyncTree {
        s.parse().unwrap()
    }

    #[test]
    fn constants() {
        let z = SyncTree::zero();
        assert_eq!((z.num_vertices(), z.num_edges()), (1, 0));
        let o = SyncTree::one();
        assert_eq!((o.num_vertices(), o.num_edges()), (2, 1));
        assert!(o.children(0)[0].0.is_exit());
        let a = SyncTree::atom(&sym("a"));
        assert_eq!(a.num_vertices(), 3);
        assert_eq!(a.to_string(), "(a(!()))");
    }

    #[test]
    fn sum_with_zero_is_structurally_identical() {
        let a = SyncTree::atom(&sym("a"));
        assert_eq!(SyncTree::zero().sum(&a), a);
    }

    #[test]
    fn sum_of_equal_atoms() {
        let a = SyncTree::atom(&sym("a"));
        assert_eq!(a.sum(&a).to_string(), "(a(!())a(!()))");
    }

    #[test]
    fn seq_product_examples() {
        let a = SyncTree::atom(&sym("a"));
        let b = SyncTree::atom(&sym("b"));
        assert_eq!(SyncTree::one().seq_product(&b), b);
        let dead = a.seq_product(&SyncTree::zero());
        assert_eq!(dead.to_string(), "(a())");
    }

    #[test]
    fn prefix_examples() {
        let a = sym("a");
        assert!(SyncTree::prefix(&a, &SyncTree::one()).is_isomorphic(&SyncTree::atom(&a)));
        let p = SyncTree::prefix(&a, &SyncTree::zero());
        assert_eq!((p.num_vertices(), p.num_edges()), (2, 1));
        let left = SyncTree::prefix(&a, &SyncTree::one().sum(&SyncTree::one()));
        let at = SyncTree::atom(&a);
        assert!(!left.is_isomorphic(&at.sum(&at)));
    }

    #[test]
    fn contraction_merges_erased_paths() {
        let t = lit("(a() e(e(b()) c(!())) e(e(b())))");
        let e: BTreeSet<Symbol> = [sym("e")].into();
        let c = t.contract(&e);
        assert!(c.is_isomorphic(&lit("(a() b() c(!()) b())")));
        c.check_invariants().unwrap();
    }

    #[test]
    fn contraction_of_atom_over_its_action() {
        let b: BTreeSet<Symbol> = [sym("b")].into();
        assert_eq!(SyncTree::atom(&sym("b")).contract(&b), SyncTree::one());
        let t = lit("(a(b()) c(!()))");
        assert!(t.contract(&BTreeSet::new()).is_isomorphic(&t));
    }

    #[test]
    fn keys_distinguish_labels_and_ignore_order() {
        let a = SyncTree::atom(&sym("a"));
        let b = SyncTree::atom(&sym("b"));
        assert_ne!(a.canonical_key(), b.canonical_key());
        assert_eq!(a.sum(&b).canonical_key(), b.sum(&a).canonical_key());
        assert!(a.sum(&b).is_isomorphic(&b.sum(&a)));
    }

    #[test]
    fn embedding_examples() {
        let a = SyncTree::atom(&sym("a"));
        let b = SyncTree::atom(&sym("b"));
        assert!(a.embeds_into(&a.sum(&b)));
        assert!(!a.sum(&a).embeds_into(&a));
        assert!(SyncTree::zero().embeds_into(&a));
        // Injectivity across a shared label with different continuations.
        let t1 = lit("(a(b()) a(c()))");
        let t2 = lit("(a(b() c()) a())");
        assert!(!t1.embeds_into(&t2));
        let t3 = lit("(a(b() c()) a(c()))");
        assert!(t1.embeds_into(&t3));
    }

    #[test]
    fn truncation() {
        let t = lit("(a(b(!())) !())");
        assert_eq!(t.truncate(0), SyncTree::zero());
        assert!(t.truncate(1).is_isomorphic(&lit("(a() !())")));
        assert!(t.truncate(5).is_isomorphic(&t));
    }

    #[test]
    fn literal_errors() {
        assert!("(a(!(b())))".parse::<SyncTree>().is_err());
        assert!("(a(".parse::<SyncTree>().is_err());
        assert!("(a())x".parse::<SyncTree>().is_err());
        assert!("(1())".parse::<SyncTree>().is_err());
        let t = lit("  ( a ( ! ( ) )  b ( ) ) ");
        assert_eq!(t.num_edges(), 3);
    }

    #[test]
    fn height_and_depths() {
        let t = lit("(a(b(!())) c())");
        assert_eq!(t.height(), 3);
        assert_eq!(SyncTree::zero().height(), 0);
    }
}
