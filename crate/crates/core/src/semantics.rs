//! Interpretation of closed functor-free terms as synchronization trees and
//! as finite languages, finite approximants of schemes, and the graph
//! constructions that compute the tree denoted by a term.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::label::{sum_branch_label, Label, Symbol, UNIT_LABEL};
use crate::scheme::{Equation, ExpandError, Scheme};
use crate::term::{SigKind, Term};
use crate::tree::{SyncTree, TreeBuilder, VertexId};

pub use crate::lts::unfold_lts;

/// Default cap on the number of vertices an interpretation may build.
pub const DEFAULT_TREE_BUDGET: usize = 4_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("term contains a parameter variable")]
    NotClosed,
    #[error("term contains a functor application")]
    NotFunctorFree,
    #[error("{what} is not a {sig} constructor")]
    IllegalConstructor { what: &'static str, sig: SigKind },
    #[error("root functor {name} has rank {rank}; approximants need rank 0")]
    RootHasParameters { name: String, rank: usize },
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error("tree would have {needed} vertices, budget is {budget}")]
    TreeBudgetExceeded { needed: u128, budget: usize },
}

fn check_ground(t: &Term) -> Result<(), SemanticsError> {
    if !t.is_closed() {
        return Err(SemanticsError::NotClosed);
    }
    if !t.is_functor_free() {
        return Err(SemanticsError::NotFunctorFree);
    }
    Ok(())
}

/// `(vertices, exit edges)` of the tree a ground term denotes, saturating.
fn measure(t: &Term) -> (u128, u128) {
    match t {
        Term::Zero => (1, 0),
        Term::One => (2, 1),
        Term::Action(_) => (3, 1),
        Term::Prefix(_, s) => {
            let (v, x) = measure(s);
            (v.saturating_add(1), x)
        }
        Term::Sum(l, r) => {
            let (v1, x1) = measure(l);
            let (v2, x2) = measure(r);
            (v1.saturating_add(v2) - 1, x1.saturating_add(x2))
        }
        Term::SumN(ts) => ts.iter().fold((1, 0), |(v, x), s| {
            let (v2, x2) = measure(s);
            (v.saturating_add(v2) - 1, x.saturating_add(x2))
        }),
        Term::Seq(l, r) => {
            let (v1, x1) = measure(l);
            let (v2, x2) = measure(r);
            // Each exit leaf of the left factor is replaced by the non-root
            // vertices of a copy of the right factor.
            (
                (v1 - x1).saturating_add(x1.saturating_mul(v2 - 1)),
                x1.saturating_mul(x2),
            )
        }
        Term::Var(_) | Term::App(..) => (1, 0),
    }
}

/// Number of vertices of the tree denoted by a ground term, saturating.
pub fn tree_size(t: &Term) -> u128 {
    measure(t).0
}

/// The tree denoted by a closed functor-free term, by structural fold.
/// `SumN` folds left-nested.
pub fn interpret_tree(t: &Term) -> Result<SyncTree, SemanticsError> {
    interpret_tree_with_budget(t, DEFAULT_TREE_BUDGET)
}

pub fn interpret_tree_with_budget(t: &Term, budget: usize) -> Result<SyncTree, SemanticsError> {
    check_ground(t)?;
    let needed = tree_size(t);
    if needed > budget as u128 {
        return Err(SemanticsError::TreeBudgetExceeded { needed, budget });
    }
    Ok(fold_tree(t))
}

fn fold_tree(t: &Term) -> SyncTree {
    match t {
        Term::Zero | Term::Var(_) | Term::App(..) => SyncTree::zero(),
        Term::One => SyncTree::one(),
        Term::Action(a) => SyncTree::atom(a),
        Term::Prefix(a, s) => SyncTree::prefix(a, &fold_tree(s)),
        Term::Sum(l, r) => fold_tree(l).sum(&fold_tree(r)),
        Term::SumN(ts) => ts
            .iter()
            .fold(SyncTree::zero(), |acc, s| acc.sum(&fold_tree(s))),
        Term::Seq(l, r) => fold_tree(l).seq_product(&fold_tree(r)),
    }
}

/// `interpret_tree(t).truncate(d)`, computed without building the deeper
/// part of the tree.
pub fn interpret_tree_to_depth(t: &Term, d: usize) -> Result<SyncTree, SemanticsError> {
    interpret_tree_to_depth_with_budget(t, d, DEFAULT_TREE_BUDGET)
}

pub fn interpret_tree_to_depth_with_budget(
    t: &Term,
    d: usize,
    budget: usize,
) -> Result<SyncTree, SemanticsError> {
    check_ground(t)?;
    let mut cx = DepthFold::new(&[], budget);
    let top = cx.env(Vec::new());
    cx.fold(t, top, 0, d)
}

/// A parameter bound to an argument term, evaluated where it was written.
#[derive(Clone, Copy)]
struct Closure<'a> {
    term: &'a Term,
    env: usize,
    stage: usize,
}

/// Depth-bounded evaluation. Applications are unfolded on demand: `F_j` at
/// stage `s` is `0` when `s = 0` and otherwise its body with the arguments
/// bound and every application inside at stage `s - 1`. Only what lies
/// within the depth bound is ever built.
struct DepthFold<'a> {
    bodies: &'a [Equation],
    envs: Vec<Vec<Closure<'a>>>,
    memo: HashMap<(*const Term, usize, usize, usize), SyncTree>,
    budget: usize,
}

impl<'a> DepthFold<'a> {
    fn new(bodies: &'a [Equation], budget: usize) -> Self {
        DepthFold {
            bodies,
            envs: Vec::new(),
            memo: HashMap::new(),
            budget,
        }
    }

    fn env(&mut self, bound: Vec<Closure<'a>>) -> usize {
        self.envs.push(bound);
        self.envs.len() - 1
    }

    fn fold(
        &mut self,
        t: &'a Term,
        env: usize,
        stage: usize,
        d: usize,
    ) -> Result<SyncTree, SemanticsError> {
        if d == 0 {
            return Ok(SyncTree::zero());
        }
        let key = (t as *const Term, env, stage, d);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let out = match t {
            Term::Zero => SyncTree::zero(),
            Term::Var(i) => {
                let c = self.envs[env][*i - 1];
                self.fold(c.term, c.env, c.stage, d)?
            }
            Term::App(_, _) if stage == 0 => SyncTree::zero(),
            Term::App(j, args) => {
                let bound = args
                    .iter()
                    .map(|a| Closure {
                        term: a,
                        env,
                        stage,
                    })
                    .collect();
                let inner = self.env(bound);
                self.fold(&self.bodies[*j].body, inner, stage - 1, d)?
            }
            Term::One => SyncTree::one(),
            Term::Action(a) => SyncTree::atom(a).truncate(d),
            Term::Prefix(a, s) => SyncTree::prefix(a, &self.fold(s, env, stage, d - 1)?),
            Term::Sum(l, r) => self
                .fold(l, env, stage, d)?
                .sum(&self.fold(r, env, stage, d)?),
            Term::SumN(ts) => {
                let mut acc = SyncTree::zero();
                for s in ts {
                    acc = acc.sum(&self.fold(s, env, stage, d)?);
                }
                acc
            }
            Term::Seq(l, r) => {
                let left = self.fold(l, env, stage, d)?;
                let depths = left.depths();
                let mut b = TreeBuilder::new();
                let mut stack = vec![(0usize, 0usize)];
                while let Some((dst, src)) = stack.pop() {
                    for (label, child) in left.children(src) {
                        if label.is_exit() {
                            // Exit sources sit at depth < d.
                            let right = self.fold(r, env, stage, d - depths[src])?;
                            b.graft(dst, &right, 0);
                            if b.len() > self.budget {
                                return Err(SemanticsError::TreeBudgetExceeded {
                                    needed: b.len() as u128,
                                    budget: self.budget,
                                });
                            }
                        } else {
                            let c = b.add_child(dst, label.clone());
                            stack.push((c, *child));
                        }
                    }
                }
                b.finish()
            }
        };
        if out.num_vertices() > self.budget {
            return Err(SemanticsError::TreeBudgetExceeded {
                needed: out.num_vertices() as u128,
                budget: self.budget,
            });
        }
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

fn root_rank_zero(s: &Scheme) -> Result<(), SemanticsError> {
    if let Some(root) = s.equations.first() {
        if root.rank != 0 {
            return Err(SemanticsError::RootHasParameters {
                name: root.name.clone(),
                rank: root.rank,
            });
        }
    }
    Ok(())
}

/// The tree of the `n`-th Kleene iterate of the root functor.
pub fn approximant(s: &Scheme, n: usize) -> Result<SyncTree, SemanticsError> {
    root_rank_zero(s)?;
    interpret_tree(&s.expand(n)?)
}

/// `approximant(s, n).truncate(d)`, computed directly.
///
/// The expanded term is never materialized, so this stays cheap for stages
/// whose full approximant is out of reach.
pub fn approximant_to_depth(s: &Scheme, n: usize, d: usize) -> Result<SyncTree, SemanticsError> {
    root_rank_zero(s)?;
    s.validate().map_err(ExpandError::Invalid)?;
    if n == 0 {
        return Ok(SyncTree::zero());
    }
    let mut cx = DepthFold::new(&s.equations, DEFAULT_TREE_BUDGET);
    let top = cx.env(Vec::new());
    cx.fold(&s.equations[0].body, top, n - 1, d)
}

/// A finite set of finite action words.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Lang(BTreeSet<Vec<Symbol>>);

impl Lang {
    pub fn empty() -> Self {
        Lang(BTreeSet::new())
    }

    /// `{ε}`.
    pub fn epsilon() -> Self {
        Lang(BTreeSet::from([Vec::new()]))
    }

    pub fn symbol(a: &Symbol) -> Self {
        Lang(BTreeSet::from([vec![a.clone()]]))
    }

    pub fn from_words(words: impl IntoIterator<Item = Vec<Symbol>>) -> Self {
        Lang(words.into_iter().collect())
    }

    /// Builds a language from strings whose characters are one-letter
    /// actions; `""` is the empty word.
    pub fn from_strs<'a>(words: impl IntoIterator<Item = &'a str>) -> Self {
        Lang(
            words
                .into_iter()
                .map(|w| w.chars().map(|c| Symbol::new(&c.to_string())).collect())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, w: &[Symbol]) -> bool {
        self.0.contains(w)
    }

    pub fn words(&self) -> impl Iterator<Item = &Vec<Symbol>> {
        self.0.iter()
    }

    pub fn union(&self, other: &Lang) -> Lang {
        Lang(self.0.union(&other.0).cloned().collect())
    }

    pub fn concat(&self, other: &Lang) -> Lang {
        let mut out = BTreeSet::new();
        for u in &self.0 {
            for v in &other.0 {
                let mut w = u.clone();
                w.extend(v.iter().cloned());
                out.insert(w);
            }
        }
        Lang(out)
    }

    /// `{a}·L`.
    pub fn prefixed(&self, a: &Symbol) -> Lang {
        Lang(
            self.0
                .iter()
                .map(|w| {
                    let mut x = vec![a.clone()];
                    x.extend(w.iter().cloned());
                    x
                })
                .collect(),
        )
    }

    /// Words in shortlex order: by length, then lexicographically.
    pub fn shortlex(&self) -> Vec<&Vec<Symbol>> {
        let mut ws: Vec<_> = self.0.iter().collect();
        ws.sort_by(|u, v| u.len().cmp(&v.len()).then_with(|| u.cmp(v)));
        ws
    }

    /// One word as text; `()` for the empty word.
    pub fn render_word(w: &[Symbol]) -> String {
        if w.is_empty() {
            return "()".into();
        }
        let sep = if w.iter().all(|a| a.as_str().chars().count() == 1) {
            ""
        } else {
            " "
        };
        w.iter().map(|a| a.as_str()).collect::<Vec<_>>().join(sep)
    }
}

/// One word per line, shortlex order.
impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, w) in self.shortlex().into_iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            f.write_str(&Lang::render_word(w))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self
            .shortlex()
            .into_iter()
            .map(|w| Lang::render_word(w))
            .collect();
        write!(f, "{{{}}}", ws.join(", "))
    }
}

/// The language denoted by a closed functor-free term.
pub fn interpret_lang(t: &Term) -> Result<Lang, SemanticsError> {
    check_ground(t)?;
    Ok(fold_lang(t))
}

fn fold_lang(t: &Term) -> Lang {
    match t {
        Term::Zero | Term::Var(_) | Term::App(..) => Lang::empty(),
        Term::One => Lang::epsilon(),
        Term::Action(a) => Lang::symbol(a),
        Term::Prefix(a, s) => fold_lang(s).prefixed(a),
        Term::Sum(l, r) => fold_lang(l).union(&fold_lang(r)),
        Term::SumN(ts) => ts
            .iter()
            .fold(Lang::empty(), |acc, s| acc.union(&fold_lang(s))),
        Term::Seq(l, r) => fold_lang(l).concat(&fold_lang(r)),
    }
}

/// Action words labelling root paths that end in the source of an exit edge.
pub fn path_language(t: &SyncTree) -> Lang {
    let mut out = BTreeSet::new();
    let mut stack: Vec<(VertexId, Vec<Symbol>)> = vec![(t.root(), Vec::new())];
    while let Some((v, w)) = stack.pop() {
        for (label, c) in t.children(v) {
            match label {
                Label::Exit => {
                    out.insert(w.clone());
                }
                Label::Action(a) => {
                    let mut x = w.clone();
                    x.push(a.clone());
                    stack.push((*c, x));
                }
            }
        }
    }
    Lang(out)
}

/// Flattened term tree used by the graph constructions.
struct TermGraph<'a> {
    nodes: Vec<&'a Term>,
    kids: Vec<Vec<usize>>,
}

impl<'a> TermGraph<'a> {
    fn new(t: &'a Term) -> Self {
        let mut g = TermGraph {
            nodes: vec![t],
            kids: vec![Vec::new()],
        };
        let mut i = 0;
        while i < g.nodes.len() {
            for c in g.nodes[i].children() {
                let id = g.nodes.len();
                g.nodes.push(c);
                g.kids.push(Vec::new());
                g.kids[i].push(id);
            }
            i += 1;
        }
        g
    }
}

/// The tree denoted by a closed functor-free Delta term, via the leaf graph
/// `G(t)`: unfold it from its root and contract the `1`-edges.
pub fn tau_delta(t: &Term) -> Result<SyncTree, SemanticsError> {
    check_ground(t)?;
    if let Some(what) = first_illegal(t, SigKind::Delta) {
        return Err(SemanticsError::IllegalConstructor {
            what,
            sig: SigKind::Delta,
        });
    }
    let g = TermGraph::new(t);

    // Root-to-leaf paths of the leaves labelled in A ∪ {1}, as the sequence
    // of (internal node, index of the child taken).
    let mut leaves: Vec<(usize, Vec<(usize, usize)>)> = Vec::new();
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((v, path)) = stack.pop() {
        match g.nodes[v] {
            Term::One | Term::Action(_) => leaves.push((v, path)),
            Term::Zero => {}
            _ => {
                for (k, &c) in g.kids[v].iter().enumerate().rev() {
                    let mut p: Vec<(usize, usize)> = path.clone();
                    p.push((v, k));
                    stack.push((c, p));
                }
            }
        }
    }
    let is_seq = |n: usize| matches!(g.nodes[n], Term::Seq(..));
    // Every product on the path segment is entered through child `k`.
    let through = |seg: &[(usize, usize)], k: usize| seg.iter().all(|&(n, c)| !is_seq(n) || c == k);
    let label_of = |v: usize| match g.nodes[v] {
        Term::Action(a) => Label::Action(a.clone()),
        _ => Label::Action(Symbol::new(UNIT_LABEL)),
    };

    let in_m: Vec<bool> = leaves.iter().map(|(_, p)| through(p, 0)).collect();
    let in_e: Vec<bool> = leaves.iter().map(|(_, p)| through(p, 1)).collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); leaves.len()];
    for (i, (_, p)) in leaves.iter().enumerate() {
        for (j, (_, q)) in leaves.iter().enumerate() {
            let split = p.iter().zip(q).take_while(|(x, y)| x == y).count();
            let (Some(&(w, cp)), Some(&(w2, cq))) = (p.get(split), q.get(split)) else {
                continue;
            };
            debug_assert_eq!(w, w2);
            if is_seq(w)
                && cp == 0
                && cq == 1
                && through(&p[split + 1..], 1)
                && through(&q[split + 1..], 0)
            {
                succ[i].push(j);
            }
        }
    }

    // Unfold the acyclic graph from the fresh root.
    let mut b = TreeBuilder::new();
    let mut work: Vec<(VertexId, usize)> = Vec::new();
    for (j, &m) in in_m.iter().enumerate() {
        if m {
            let c = b.add_child(0, label_of(leaves[j].0));
            work.push((c, j));
        }
    }
    while let Some((v, i)) = work.pop() {
        if b.len() > DEFAULT_TREE_BUDGET {
            return Err(SemanticsError::TreeBudgetExceeded {
                needed: b.len() as u128,
                budget: DEFAULT_TREE_BUDGET,
            });
        }
        for &j in &succ[i] {
            let c = b.add_child(v, label_of(leaves[j].0));
            work.push((c, j));
        }
        if in_e[i] {
            b.add_child(v, Label::Exit);
        }
    }
    let unit = BTreeSet::from([Symbol::new(UNIT_LABEL)]);
    Ok(b.finish().contract(&unit))
}

/// The tree denoted by a closed functor-free Gamma (or Gamma~) term, via
/// the term tree `H(t)` with its sum edges contracted.
pub fn tau_gamma(t: &Term) -> Result<SyncTree, SemanticsError> {
    check_ground(t)?;
    if let Some(what) = first_illegal(t, SigKind::GammaTilde) {
        return Err(SemanticsError::IllegalConstructor {
            what,
            sig: SigKind::Gamma,
        });
    }
    let mut b = TreeBuilder::new();
    let mut branch_labels = BTreeSet::new();
    let mut stack = vec![(0usize, t)];
    while let Some((v, s)) = stack.pop() {
        match s {
            Term::One => {
                b.add_child(v, Label::Exit);
            }
            Term::Prefix(a, body) => {
                let c = b.add_child(v, Label::Action(a.clone()));
                stack.push((c, body));
            }
            Term::Sum(l, r) => {
                for (k, x) in [(1, l), (2, r)] {
                    let sym = Symbol::new(&sum_branch_label(k));
                    branch_labels.insert(sym.clone());
                    let c = b.add_child(v, Label::Action(sym));
                    stack.push((c, x));
                }
            }
            Term::SumN(ts) => {
                for (k, x) in ts.iter().enumerate() {
                    let sym = Symbol::new(&sum_branch_label(k + 1));
                    branch_labels.insert(sym.clone());
                    let c = b.add_child(v, Label::Action(sym));
                    stack.push((c, x));
                }
            }
            _ => {}
        }
    }
    Ok(b.finish().contract(&branch_labels))
}

fn first_illegal(t: &Term, sig: SigKind) -> Option<&'static str> {
    let mut stack = vec![t];
    while let Some(s) = stack.pop() {
        let bad = match (s, sig) {
            (Term::Prefix(..), SigKind::Delta) => Some("prefix"),
            (Term::SumN(_), SigKind::Delta) => Some("+n"),
            (Term::Seq(..), SigKind::Gamma | SigKind::GammaTilde) => Some("'*'"),
            (Term::Action(_), SigKind::Gamma | SigKind::GammaTilde) => Some("action constant"),
            _ => None,
        };
        if bad.is_some() {
            return bad;
        }
        stack.extend(s.children());
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_scheme;

    fn lit(s: &str) -> SyncTree {
        s.parse().unwrap()
    }

    fn a(s: &str) -> Term {
        Term::action(s)
    }

    /// a·((1+a)+((1+1)·b))
    fn fig6_term() -> Term {
        Term::seq(
            a("a"),
            Term::sum(
                Term::sum(Term::One, a("a")),
                Term::seq(Term::sum(Term::One, Term::One), a("b")),
            ),
        )
    }

    #[test]
    fn fold_examples() {
        assert_eq!(interpret_tree(&Term::One).unwrap(), SyncTree::one());
        let t = Term::seq(
            Term::seq(Term::One, Term::seq(Term::Zero, a("b"))),
            Term::One,
        );
        assert_eq!(interpret_tree(&t).unwrap(), SyncTree::zero());
        let expected = lit("(a(!() a(!()) b(!()) b(!())))");
        assert!(interpret_tree(&fig6_term())
            .unwrap()
            .is_isomorphic(&expected));
    }

    #[test]
    fn tau_delta_examples() {
        let t = Term::seq(
            Term::seq(Term::One, Term::seq(Term::Zero, a("b"))),
            Term::One,
        );
        assert_eq!(tau_delta(&t).unwrap(), SyncTree::zero());
        assert_eq!(tau_delta(&Term::One).unwrap(), SyncTree::one());
        let expected = lit("(a(!() a(!()) b(!()) b(!())))");
        assert!(tau_delta(&fig6_term()).unwrap().is_isomorphic(&expected));
        // A product nested in a left factor must not skip its own right factor.
        let t = Term::seq(Term::seq(Term::One, a("a")), a("b"));
        assert!(tau_delta(&t).unwrap().is_isomorphic(&lit("(a(b(!())))")));
        assert!(tau_delta(&Term::prefix("a", Term::One)).is_err());
    }

    #[test]
    fn tau_gamma_examples() {
        // a.(c.0 + d.1) + 1
        let t = Term::sum(
            Term::prefix(
                "a",
                Term::sum(Term::prefix("c", Term::Zero), Term::prefix("d", Term::One)),
            ),
            Term::One,
        );
        let tree = tau_gamma(&t).unwrap();
        assert!(tree.is_isomorphic(&lit("(!() a(c() d(!())))")));
        assert!(tree.is_isomorphic(&interpret_tree(&t).unwrap()));
        assert_eq!(tau_gamma(&Term::Zero).unwrap(), SyncTree::zero());
        assert!(tau_gamma(&Term::prefix("a", Term::One))
            .unwrap()
            .is_isomorphic(&SyncTree::atom(&Symbol::new("a"))));
        assert_eq!(interpret_lang(&t).unwrap(), Lang::from_strs(["", "ad"]));
    }

    #[test]
    fn language_fold() {
        assert!(interpret_lang(&Term::Zero).unwrap().is_empty());
        let t = Term::seq(a("a"), Term::sum(Term::One, a("b")));
        assert_eq!(interpret_lang(&t).unwrap(), Lang::from_strs(["a", "ab"]));
        assert_eq!(path_language(&SyncTree::one()), Lang::epsilon());
        assert_eq!(
            path_language(&SyncTree::atom(&Symbol::new("a"))),
            Lang::from_strs(["a"])
        );
    }

    #[test]
    fn lang_rendering() {
        let l = Lang::from_strs(["aabb", "", "ab", "b", "a"]);
        assert_eq!(l.to_string(), "()\na\nb\nab\naabb");
        let long = Lang::from_words([vec![Symbol::new("push"), Symbol::new("pop")]]);
        assert_eq!(long.to_string(), "push pop");
        assert_eq!(Lang::empty().to_string(), "");
    }

    #[test]
    fn approximant_examples() {
        let s = parse_scheme("%signature delta\n%actions a\nX = X*a + a;").unwrap();
        let t2 = approximant(&s, 2).unwrap();
        let sym = Symbol::new("a");
        let expected =
            SyncTree::atom(&sym).sum(&SyncTree::atom(&sym).seq_product(&SyncTree::atom(&sym)));
        assert!(t2.is_isomorphic(&expected));
        assert_eq!(t2.num_vertices(), 6);
        assert_eq!(approximant(&s, 0).unwrap(), SyncTree::zero());

        let f = parse_scheme("%signature delta\n%actions a b\nF = 1 + a*F*b;").unwrap();
        assert_eq!(
            path_language(&approximant(&f, 3).unwrap()),
            Lang::from_strs(["", "ab", "aabb"])
        );
    }

    #[test]
    fn rank_and_budget_errors() {
        let s = parse_scheme("%signature gamma\n%actions a\nF(v1) = a.v1;").unwrap();
        assert!(matches!(
            approximant(&s, 1),
            Err(SemanticsError::RootHasParameters { .. })
        ));
        let s = parse_scheme("%signature delta\n%actions a\nX = (X + X)*(X + X) + a;").unwrap();
        let t = s.expand(4).unwrap();
        assert!(tree_size(&t) > 1000);
        assert!(matches!(
            interpret_tree_with_budget(&t, 1000),
            Err(SemanticsError::TreeBudgetExceeded { .. })
        ));
    }

    #[test]
    fn measured_size_matches_fold() {
        for t in [
            fig6_term(),
            Term::seq(
                Term::sum(Term::One, Term::One),
                Term::sum(a("a"), Term::One),
            ),
            Term::seq(Term::seq(a("a"), Term::Zero), Term::One),
        ] {
            assert_eq!(tree_size(&t), fold_tree(&t).num_vertices() as u128);
        }
    }

    #[test]
    fn truncated_fold_matches_truncation() {
        let s = parse_scheme("%signature delta\n%actions a b\nG = 1 + a*G*b*G;").unwrap();
        let t = s.expand(4).unwrap();
        let full = interpret_tree(&t).unwrap();
        for d in 0..=9 {
            assert!(interpret_tree_to_depth(&t, d)
                .unwrap()
                .is_isomorphic(&full.truncate(d)));
        }
    }
}
