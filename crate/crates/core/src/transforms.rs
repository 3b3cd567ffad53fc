//! Scheme-to-scheme transformations.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::label::Symbol;
use crate::scheme::{Diagnostic, Equation, Scheme};
use crate::term::{SigKind, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("invalid scheme: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("expected a {expected} scheme, found {found}")]
    WrongSignature { expected: String, found: SigKind },
    #[error("scheme is not regular: {name} has rank {rank}")]
    NotRegular { name: String, rank: usize },
    #[error("not in unary form: {0}")]
    Shape(String),
    #[error("in {functor}: {subterm} is not right-linear; a functor is followed by more than 1")]
    NotRightLinear { functor: String, subterm: String },
    #[error("contraction needs a non-empty set of actions")]
    EmptyContraction,
    #[error("actions not in the alphabet: {}", .0.iter().map(|a| a.as_str()).collect::<Vec<_>>().join(", "))]
    UnknownActions(Vec<Symbol>),
    #[error("root functor {name} has rank {rank}; composition needs rank 0")]
    RootHasParameters { name: String, rank: usize },
    #[error("cannot compose a {0} scheme with a {1} scheme")]
    SignatureMismatch(SigKind, SigKind),
}

fn valid(s: &Scheme) -> Result<(), TransformError> {
    s.validate().map_err(TransformError::Invalid)
}

fn expect_kind(s: &Scheme, kinds: &[SigKind]) -> Result<(), TransformError> {
    if kinds.contains(&s.kind()) {
        return Ok(());
    }
    Err(TransformError::WrongSignature {
        expected: kinds
            .iter()
            .map(|k| k.keyword())
            .collect::<Vec<_>>()
            .join(" or "),
        found: s.kind(),
    })
}

fn expect_regular(s: &Scheme) -> Result<(), TransformError> {
    match s.equations.iter().find(|e| e.rank != 0) {
        Some(e) => Err(TransformError::NotRegular {
            name: e.name.clone(),
            rank: e.rank,
        }),
        None => Ok(()),
    }
}

/// `base` if unused, else `base_k` for the least `k >= 1` that is.
fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}_{k}"))
        .find(|n| !taken.contains(n))
        .unwrap()
}

/// Adds `shift` to every functor index.
fn shift_apps(t: &Term, shift: usize) -> Term {
    map_term(t, &|s| match s {
        Term::App(i, args) => Some(Term::App(
            i + shift,
            args.iter().map(|a| shift_apps(a, shift)).collect(),
        )),
        _ => None,
    })
}

/// Bottom-up rewrite: `f` may replace a node outright; otherwise its
/// children are rewritten.
fn map_term(t: &Term, f: &dyn Fn(&Term) -> Option<Term>) -> Term {
    if let Some(r) = f(t) {
        return r;
    }
    match t {
        Term::Zero | Term::One | Term::Action(_) | Term::Var(_) => t.clone(),
        Term::Prefix(a, s) => Term::Prefix(a.clone(), Box::new(map_term(s, f))),
        Term::Sum(l, r) => Term::sum(map_term(l, f), map_term(r, f)),
        Term::Seq(l, r) => Term::seq(map_term(l, f), map_term(r, f)),
        Term::SumN(ts) => Term::SumN(ts.iter().map(|s| map_term(s, f)).collect()),
        Term::App(i, ts) => Term::App(*i, ts.iter().map(|s| map_term(s, f)).collect()),
    }
}

/// Regular Delta scheme to a Gamma scheme with unary functors.
///
/// Equation `F_i = t_i` becomes `F_i(v1) = t_i'`, and a fresh root
/// `G0 = F_1(1)` is added in front. `t'` is defined by `F_i' = F_i(v1)`,
/// `0' = 0`, `1' = v1`, `a' = a.v1`, sums pointwise, and
/// `(t1*t2)' = t1'[v1 := t2']`.
pub fn delta_to_gamma(e: &Scheme) -> Result<Scheme, TransformError> {
    valid(e)?;
    expect_kind(e, &[SigKind::Delta])?;
    expect_regular(e)?;
    let taken: BTreeSet<String> = e.equations.iter().map(|q| q.name.clone()).collect();
    let mut equations = vec![Equation {
        name: fresh_name("G0", &taken),
        rank: 0,
        body: Term::App(1, vec![Term::One]),
    }];
    for q in &e.equations {
        equations.push(Equation {
            name: q.name.clone(),
            rank: 1,
            body: prime(&q.body),
        });
    }
    Ok(Scheme::new(
        Signature::new(SigKind::Gamma, e.sig.alphabet.clone()),
        equations,
    ))
}

fn prime(t: &Term) -> Term {
    match t {
        Term::App(i, _) => Term::App(i + 1, vec![Term::Var(1)]),
        Term::Zero => Term::Zero,
        Term::One => Term::Var(1),
        Term::Action(a) => Term::Prefix(a.clone(), Box::new(Term::Var(1))),
        Term::Sum(l, r) => Term::sum(prime(l), prime(r)),
        Term::Seq(l, r) => prime(l).substitute(&[prime(r)]),
        Term::Prefix(..) | Term::SumN(_) | Term::Var(_) => {
            unreachable!("validated regular Delta body")
        }
    }
}

/// Inverse of [`delta_to_gamma`] on schemes of the form `G0 = Gj(1)`,
/// `Gi(v1) = p_i` with every `p_i` free of the constant `1`.
///
/// `Gj` becomes the root of the output, the other functors keep their
/// relative order. Hat rules: `0^ = 0`, `v1^ = 1`, sums pointwise,
/// `(a.p)^ = a*p^`, `Gi(p)^ = Fi*p^`.
pub fn gamma_unary_to_delta(g: &Scheme) -> Result<Scheme, TransformError> {
    valid(g)?;
    expect_kind(g, &[SigKind::Gamma])?;
    let shape = |m: &str| Err(TransformError::Shape(m.to_string()));
    let root = g.root();
    if root.rank != 0 {
        return shape("the first equation must have rank 0");
    }
    let j = match &root.body {
        Term::App(j, args) if *j != 0 && args.as_slice() == [Term::One] => *j,
        _ => return shape("the first equation must read G0 = Gj(1)"),
    };
    for q in &g.equations[1..] {
        if q.rank != 1 {
            return Err(TransformError::Shape(format!(
                "functor {} has rank {}, expected 1",
                q.name, q.rank
            )));
        }
        if q.body.any(&|t| matches!(t, Term::One)) {
            return Err(TransformError::Shape(format!(
                "the body of {} contains the constant 1",
                q.name
            )));
        }
        if q.body.any(&|t| matches!(t, Term::App(0, _))) {
            return Err(TransformError::Shape(format!(
                "the body of {} refers to the root {}",
                q.name, root.name
            )));
        }
    }
    // Output position of each input functor 1..m.
    let mut order: Vec<usize> = vec![j];
    order.extend((1..g.equations.len()).filter(|&i| i != j));
    let mut pos = vec![0; g.equations.len()];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    let equations = order
        .iter()
        .map(|&i| Equation {
            name: g.equations[i].name.clone(),
            rank: 0,
            body: hat(&g.equations[i].body, &pos),
        })
        .collect();
    Ok(Scheme::new(
        Signature::new(SigKind::Delta, g.sig.alphabet.clone()),
        equations,
    ))
}

fn hat(p: &Term, pos: &[usize]) -> Term {
    match p {
        Term::Zero => Term::Zero,
        Term::Var(_) => Term::One,
        Term::Sum(l, r) => Term::sum(hat(l, pos), hat(r, pos)),
        Term::Prefix(a, s) => Term::seq(Term::Action(a.clone()), hat(s, pos)),
        Term::App(i, args) => Term::seq(Term::App(pos[*i], vec![]), hat(&args[0], pos)),
        Term::One | Term::Action(_) | Term::Seq(..) | Term::SumN(_) => {
            unreachable!("checked unary-form body")
        }
    }
}

/// Regular Gamma scheme to a right-linear Delta scheme: every `a.t` becomes
/// `a*t`.
pub fn gamma_regular_to_right_linear(e: &Scheme) -> Result<Scheme, TransformError> {
    valid(e)?;
    expect_kind(e, &[SigKind::Gamma])?;
    expect_regular(e)?;
    fn go(t: &Term) -> Term {
        map_term(t, &|s| match s {
            Term::Prefix(a, body) => Some(Term::seq(Term::Action(a.clone()), go(body))),
            _ => None,
        })
    }
    let equations = e
        .equations
        .iter()
        .map(|q| Equation {
            name: q.name.clone(),
            rank: 0,
            body: go(&q.body),
        })
        .collect();
    Ok(Scheme::new(
        Signature::new(SigKind::Delta, e.sig.alphabet.clone()),
        equations,
    ))
}

/// Right-linear Delta scheme to a regular Gamma scheme.
///
/// A body is translated as `t'(1)` where `0'(g) = 0`, `1'(g) = g`,
/// `a'(g) = a.g`, `(t1 + t2)'(g) = t1'(g) + t2'(g)`,
/// `(t1*t2)'(g) = t1'(t2'(g))` and `F'(1) = F`. A functor that would need a
/// continuation other than `1` makes the scheme not right-linear.
pub fn right_linear_to_gamma_regular(e: &Scheme) -> Result<Scheme, TransformError> {
    valid(e)?;
    expect_kind(e, &[SigKind::Delta])?;
    expect_regular(e)?;
    let mut equations = Vec::with_capacity(e.equations.len());
    for q in &e.equations {
        let body = conv(&q.body, &Term::One).map_err(|at| {
            let mut text = String::new();
            at.unwrap_or(&q.body)
                .write_with(&|i| e.equations[i].name.clone(), &mut text);
            TransformError::NotRightLinear {
                functor: q.name.clone(),
                subterm: text,
            }
        })?;
        equations.push(Equation {
            name: q.name.clone(),
            rank: 0,
            body,
        });
    }
    Ok(Scheme::new(
        Signature::new(SigKind::Gamma, e.sig.alphabet.clone()),
        equations,
    ))
}

/// `Err(None)` marks a functor with a nontrivial continuation; the enclosing
/// product fills in the offending subterm.
fn conv<'a>(t: &'a Term, g: &Term) -> Result<Term, Option<&'a Term>> {
    Ok(match t {
        Term::Zero => Term::Zero,
        Term::One => g.clone(),
        Term::Action(a) => Term::Prefix(a.clone(), Box::new(g.clone())),
        Term::Sum(l, r) => Term::sum(conv(l, g)?, conv(r, g)?),
        Term::Seq(l, r) => {
            let tail = conv(r, g)?;
            conv(l, &tail).map_err(|at| at.or(Some(t)))?
        }
        Term::App(..) if *g == Term::One => t.clone(),
        Term::App(..) => return Err(None),
        Term::Prefix(..) | Term::SumN(_) | Term::Var(_) => {
            unreachable!("checked regular Delta body")
        }
    })
}

/// Gamma~ scheme to a Gamma scheme: `+n(t1..tn)` becomes
/// `((t1 + t2) + ...) + tn`, and `+1(t)` becomes `t + 0`.
pub fn desugar_tilde(e: &Scheme) -> Result<Scheme, TransformError> {
    valid(e)?;
    expect_kind(e, &[SigKind::GammaTilde, SigKind::Gamma])?;
    fn go(t: &Term) -> Term {
        map_term(t, &|s| match s {
            Term::SumN(ts) => {
                let mut it = ts.iter().map(go);
                let first = it.next().expect("validated: n >= 1");
                Some(if ts.len() == 1 {
                    Term::sum(first, Term::Zero)
                } else {
                    it.fold(first, Term::sum)
                })
            }
            _ => None,
        })
    }
    let equations = e
        .equations
        .iter()
        .map(|q| Equation {
            name: q.name.clone(),
            rank: q.rank,
            body: go(&q.body),
        })
        .collect();
    Ok(Scheme::new(
        Signature::new(SigKind::Gamma, e.sig.alphabet.clone()),
        equations,
    ))
}

/// Scheme for the `B`-contraction of the tree a scheme defines.
///
/// Gamma and Gamma~: `b.t` becomes `t` for `b` in `B`. Delta: the constant
/// `b` becomes `1`. The alphabet loses `B`. Redexes such as `1*X` are left
/// in place; see [`simplify`].
pub fn contract_scheme(e: &Scheme, b: &BTreeSet<Symbol>) -> Result<Scheme, TransformError> {
    valid(e)?;
    if b.is_empty() {
        return Err(TransformError::EmptyContraction);
    }
    let unknown: Vec<Symbol> = b.iter().filter(|x| !e.sig.has_action(x)).cloned().collect();
    if !unknown.is_empty() {
        return Err(TransformError::UnknownActions(unknown));
    }
    let go = |t: &Term| -> Term {
        fn rec(t: &Term, b: &BTreeSet<Symbol>) -> Term {
            map_term(t, &|s| match s {
                Term::Prefix(x, body) if b.contains(x) => Some(rec(body, b)),
                Term::Action(x) if b.contains(x) => Some(Term::One),
                _ => None,
            })
        }
        rec(t, b)
    };
    let equations = e
        .equations
        .iter()
        .map(|q| Equation {
            name: q.name.clone(),
            rank: q.rank,
            body: go(&q.body),
        })
        .collect();
    let alphabet = e
        .sig
        .alphabet
        .iter()
        .filter(|x| !b.contains(x))
        .cloned()
        .collect::<Vec<_>>();
    Ok(Scheme::new(Signature::new(e.kind(), alphabet), equations))
}

/// Scheme for the sequential product of the trees defined by `e` and `e2`.
///
/// Gamma and Gamma~: every `1` in the bodies of `e` is replaced by the root
/// of `e2`, and the equations of `e2` are appended. Delta: a fresh root
/// `R = F1 * F1'` is put in front of both systems, since action constants
/// carry exits of their own. Functors of `e2` whose names clash with `e`
/// get a `_k` suffix.
pub fn seq_compose(e: &Scheme, e2: &Scheme) -> Result<Scheme, TransformError> {
    valid(e)?;
    valid(e2)?;
    for s in [e, e2] {
        if s.root().rank != 0 {
            return Err(TransformError::RootHasParameters {
                name: s.root().name.clone(),
                rank: s.root().rank,
            });
        }
    }
    if e.kind() != e2.kind() {
        return Err(TransformError::SignatureMismatch(e.kind(), e2.kind()));
    }
    let mut alphabet = e.sig.alphabet.clone();
    for a in &e2.sig.alphabet {
        if !alphabet.contains(a) {
            alphabet.push(a.clone());
        }
    }
    let mut taken: BTreeSet<String> = e.equations.iter().map(|q| q.name.clone()).collect();
    let mut renamed = Vec::with_capacity(e2.equations.len());
    for q in &e2.equations {
        let name = fresh_name(&q.name, &taken);
        taken.insert(name.clone());
        renamed.push(name);
    }
    let m = e.equations.len();
    let mut equations = Vec::with_capacity(m + e2.equations.len() + 1);
    let offset = match e.kind() {
        SigKind::Delta => {
            let name = fresh_name("R", &taken);
            equations.push(Equation {
                name,
                rank: 0,
                body: Term::seq(Term::App(1, vec![]), Term::App(m + 1, vec![])),
            });
            for q in &e.equations {
                equations.push(Equation {
                    name: q.name.clone(),
                    rank: q.rank,
                    body: shift_apps(&q.body, 1),
                });
            }
            1
        }
        SigKind::Gamma | SigKind::GammaTilde => {
            for q in &e.equations {
                equations.push(Equation {
                    name: q.name.clone(),
                    rank: q.rank,
                    body: map_term(&q.body, &|s| match s {
                        Term::One => Some(Term::App(m, vec![])),
                        _ => None,
                    }),
                });
            }
            0
        }
    };
    for (q, name) in e2.equations.iter().zip(renamed) {
        equations.push(Equation {
            name,
            rank: q.rank,
            body: shift_apps(&q.body, m + offset),
        });
    }
    Ok(Scheme::new(Signature::new(e.kind(), alphabet), equations))
}

/// Applies `0 + t = t + 0 = t`, `0*t = 0`, `1*t = t*1 = t` bottom-up. The
/// approximants of the result are isomorphic to those of the input.
pub fn simplify(e: &Scheme) -> Scheme {
    fn go(t: &Term) -> Term {
        match t {
            Term::Sum(l, r) => match (go(l), go(r)) {
                (Term::Zero, x) | (x, Term::Zero) => x,
                (x, y) => Term::sum(x, y),
            },
            Term::Seq(l, r) => match (go(l), go(r)) {
                (Term::Zero, _) => Term::Zero,
                (Term::One, x) | (x, Term::One) => x,
                (x, y) => Term::seq(x, y),
            },
            Term::Prefix(a, s) => Term::Prefix(a.clone(), Box::new(go(s))),
            Term::SumN(ts) => Term::SumN(ts.iter().map(go).collect()),
            Term::App(i, ts) => Term::App(*i, ts.iter().map(go).collect()),
            Term::Zero | Term::One | Term::Action(_) | Term::Var(_) => t.clone(),
        }
    }
    Scheme::new(
        e.sig.clone(),
        e.equations
            .iter()
            .map(|q| Equation {
                name: q.name.clone(),
                rank: q.rank,
                body: go(&q.body),
            })
            .collect(),
    )
}

/// Whether two schemes are syntactically identical up to a bijective
/// renaming of functors (and a permutation of equations). The matching is
/// driven from the roots; equations not reachable from the root are then
/// paired in order.
pub fn equal_up_to_renaming(s1: &Scheme, s2: &Scheme) -> bool {
    if s1.kind() != s2.kind()
        || s1.equations.len() != s2.equations.len()
        || s1.sig.alphabet.iter().collect::<BTreeSet<_>>()
            != s2.sig.alphabet.iter().collect::<BTreeSet<_>>()
    {
        return false;
    }
    if s1.equations.is_empty() {
        return true;
    }
    let mut m = Matching::default();
    if !m.pair(0, 0) {
        return false;
    }
    let mut next_unpaired = 0;
    loop {
        while let Some((i, j)) = m.queue.pop_front() {
            let (a, b) = (&s1.equations[i], &s2.equations[j]);
            if a.rank != b.rank {
                return false;
            }
            let mut pending = Vec::new();
            if !same_shape(&a.body, &b.body, &mut pending) {
                return false;
            }
            if !pending.into_iter().all(|(x, y)| m.pair(x, y)) {
                return false;
            }
        }
        // Pair the next unreached equations in order, if any remain.
        while next_unpaired < s1.equations.len() && m.fwd.contains_key(&next_unpaired) {
            next_unpaired += 1;
        }
        if next_unpaired == s1.equations.len() {
            return true;
        }
        let j = (0..s2.equations.len())
            .find(|j| !m.bwd.contains_key(j))
            .expect("equal counts");
        if !m.pair(next_unpaired, j) {
            return false;
        }
    }
}

#[derive(Default)]
struct Matching {
    fwd: HashMap<usize, usize>,
    bwd: HashMap<usize, usize>,
    queue: VecDeque<(usize, usize)>,
}

impl Matching {
    fn pair(&mut self, i: usize, j: usize) -> bool {
        match (self.fwd.get(&i), self.bwd.get(&j)) {
            (Some(&x), _) => x == j,
            (None, Some(_)) => false,
            (None, None) => {
                self.fwd.insert(i, j);
                self.bwd.insert(j, i);
                self.queue.push_back((i, j));
                true
            }
        }
    }
}

fn same_shape(a: &Term, b: &Term, apps: &mut Vec<(usize, usize)>) -> bool {
    match (a, b) {
        (Term::Zero, Term::Zero) | (Term::One, Term::One) => true,
        (Term::Action(x), Term::Action(y)) => x == y,
        (Term::Var(x), Term::Var(y)) => x == y,
        (Term::Prefix(x, s), Term::Prefix(y, t)) => x == y && same_shape(s, t, apps),
        (Term::Sum(l1, r1), Term::Sum(l2, r2)) | (Term::Seq(l1, r1), Term::Seq(l2, r2)) => {
            same_shape(l1, l2, apps) && same_shape(r1, r2, apps)
        }
        (Term::SumN(xs), Term::SumN(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| same_shape(x, y, apps))
        }
        (Term::App(i, xs), Term::App(j, ys)) => {
            apps.push((*i, *j));
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| same_shape(x, y, apps))
        }
        _ => false,
    }
}
