//! Recursion schemes: validation, printing, and symbolic Kleene expansion.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::label::Symbol;
use crate::term::{SigKind, Signature, Term};

/// Default cap on the number of term nodes `expand` may build.
pub const DEFAULT_TERM_BUDGET: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub name: String,
    pub rank: usize,
    pub body: Term,
}

/// An ordered system of equations `F_i(v1..vk_i) = t_i`. The first equation
/// is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    pub sig: Signature,
    pub equations: Vec<Equation>,
}

/// One violated scheme invariant.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("scheme has no equations")]
    Empty,
    #[error("functor {0} is defined more than once")]
    DuplicateFunctor(String),
    #[error("in {functor}: {what} is not allowed in signature {sig}")]
    IllegalConstructor {
        functor: String,
        what: String,
        sig: SigKind,
    },
    #[error("in {functor}: action {action} is not declared")]
    UnknownAction { functor: String, action: Symbol },
    #[error("in {functor}: unbound variable v{index}")]
    UnboundVariable { functor: String, index: usize },
    #[error("in {functor}: reference to undefined functor #{index}")]
    UnknownFunctor { functor: String, index: usize },
    #[error("in {functor}: {callee} expects {expected} argument(s), got {found}")]
    ArityMismatch {
        functor: String,
        callee: String,
        expected: usize,
        found: usize,
    },
    #[error("in {functor}: a sum +n needs n >= 1")]
    EmptySum { functor: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExpandError {
    #[error("invalid scheme: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("expansion needs {needed} term nodes, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: usize },
}

fn join_diagnostics(ds: &[Diagnostic]) -> String {
    ds.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Scheme {
    pub fn new(sig: Signature, equations: Vec<Equation>) -> Self {
        Scheme { sig, equations }
    }

    pub fn kind(&self) -> SigKind {
        self.sig.kind
    }

    pub fn root(&self) -> &Equation {
        &self.equations[0]
    }

    /// All ranks are zero.
    pub fn is_regular(&self) -> bool {
        self.equations.iter().all(|e| e.rank == 0)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.equations.iter().position(|e| e.name == name)
    }

    pub fn names(&self) -> BTreeSet<&str> {
        self.equations.iter().map(|e| e.name.as_str()).collect()
    }

    /// Collects every violated invariant.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.equations.is_empty() {
            out.push(Diagnostic::Empty);
        }
        let mut seen = BTreeSet::new();
        for eq in &self.equations {
            if !seen.insert(eq.name.as_str()) {
                out.push(Diagnostic::DuplicateFunctor(eq.name.clone()));
            }
        }
        for eq in &self.equations {
            let mut stack = vec![&eq.body];
            while let Some(t) = stack.pop() {
                self.check_node(eq, t, &mut out);
                stack.extend(t.children());
            }
        }
        out
    }

    fn check_node(&self, eq: &Equation, t: &Term, out: &mut Vec<Diagnostic>) {
        let kind = self.sig.kind;
        let illegal = |what: &str| Diagnostic::IllegalConstructor {
            functor: eq.name.clone(),
            what: what.to_string(),
            sig: kind,
        };
        let check_action = |a: &Symbol, out: &mut Vec<Diagnostic>| {
            if !self.sig.has_action(a) {
                out.push(Diagnostic::UnknownAction {
                    functor: eq.name.clone(),
                    action: a.clone(),
                });
            }
        };
        match t {
            Term::Zero | Term::One | Term::Sum(..) => {}
            Term::Action(a) => {
                if kind != SigKind::Delta {
                    out.push(illegal(&format!("action constant {a}")));
                }
                check_action(a, out);
            }
            Term::Prefix(a, _) => {
                if !kind.has_prefix() {
                    out.push(illegal(&format!("prefix {a}.")));
                }
                check_action(a, out);
            }
            Term::Seq(..) => {
                if kind != SigKind::Delta {
                    out.push(illegal("sequential product"));
                }
            }
            Term::SumN(ts) => {
                if kind != SigKind::GammaTilde {
                    out.push(illegal(&format!("+{}", ts.len())));
                }
                if ts.is_empty() {
                    out.push(Diagnostic::EmptySum {
                        functor: eq.name.clone(),
                    });
                }
            }
            Term::Var(j) => {
                if *j == 0 || *j > eq.rank {
                    out.push(Diagnostic::UnboundVariable {
                        functor: eq.name.clone(),
                        index: *j,
                    });
                }
            }
            Term::App(i, args) => match self.equations.get(*i) {
                None => out.push(Diagnostic::UnknownFunctor {
                    functor: eq.name.clone(),
                    index: *i,
                }),
                Some(callee) if callee.rank != args.len() => out.push(Diagnostic::ArityMismatch {
                    functor: eq.name.clone(),
                    callee: callee.name.clone(),
                    expected: callee.rank,
                    found: args.len(),
                }),
                Some(_) => {}
            },
        }
    }

    pub fn validate(&self) -> Result<(), Vec<Diagnostic>> {
        let ds = self.diagnostics();
        if ds.is_empty() {
            Ok(())
        } else {
            Err(ds)
        }
    }

    /// The `n`-th Kleene iterate of the root functor, as a functor-free term.
    pub fn expand(&self, n: usize) -> Result<Term, ExpandError> {
        self.expand_with_budget(n, DEFAULT_TERM_BUDGET)
    }

    /// Like [`Scheme::expand`], refusing before any built term would exceed
    /// `budget` nodes.
    pub fn expand_with_budget(&self, n: usize, budget: usize) -> Result<Term, ExpandError> {
        self.validate().map_err(ExpandError::Invalid)?;
        let m = self.equations.len();

        // needed[i]: functors whose i-th iterate is required.
        let mut needed = vec![vec![false; m]; n + 1];
        needed[n][0] = true;
        for i in (1..=n).rev() {
            for j in 0..m {
                if needed[i][j] {
                    let mut stack = vec![&self.equations[j].body];
                    while let Some(t) = stack.pop() {
                        if let Term::App(l, _) = t {
                            needed[i - 1][*l] = true;
                        }
                        stack.extend(t.children());
                    }
                }
            }
        }

        // Stage 0 is the constant-0 functor everywhere.
        let mut stage: Vec<Option<Iterate>> = (0..m)
            .map(|j| {
                needed[0][j].then(|| Iterate {
                    term: Term::Zero,
                    size: 1,
                    var_counts: vec![0; self.equations[j].rank],
                })
            })
            .collect();
        for row in needed.iter().skip(1) {
            let mut next = Vec::with_capacity(m);
            for (j, eq) in self.equations.iter().enumerate() {
                if !row[j] {
                    next.push(None);
                    continue;
                }
                let (size, var_counts) = measure(&eq.body, eq.rank, &stage);
                if size > budget as u128 {
                    return Err(ExpandError::BudgetExceeded {
                        needed: size,
                        budget,
                    });
                }
                next.push(Some(Iterate {
                    term: rewrite(&eq.body, &stage),
                    size,
                    var_counts,
                }));
            }
            stage = next;
        }
        Ok(stage[0].take().expect("root iterate").term)
    }
}

struct Iterate {
    term: Term,
    size: u128,
    var_counts: Vec<u128>,
}

/// Size and parameter-occurrence counts of `rewrite(t, prev)`, computed
/// without building it.
fn measure(t: &Term, rank: usize, prev: &[Option<Iterate>]) -> (u128, Vec<u128>) {
    match t {
        Term::Zero | Term::One | Term::Action(_) => (1, vec![0; rank]),
        Term::Var(j) => {
            let mut v = vec![0; rank];
            v[j - 1] = 1;
            (1, v)
        }
        Term::Prefix(_, s) => {
            let (n, v) = measure(s, rank, prev);
            (n.saturating_add(1), v)
        }
        Term::Sum(..) | Term::Seq(..) | Term::SumN(_) => {
            let mut total = 1u128;
            let mut counts = vec![0u128; rank];
            for c in t.children() {
                let (n, v) = measure(c, rank, prev);
                total = total.saturating_add(n);
                for (acc, x) in counts.iter_mut().zip(v) {
                    *acc = acc.saturating_add(x);
                }
            }
            (total, counts)
        }
        Term::App(l, args) => {
            let callee = prev[*l].as_ref().expect("iterate computed");
            let mut total = callee.size;
            let mut counts = vec![0u128; rank];
            for (k, arg) in args.iter().enumerate() {
                let occ = callee.var_counts[k];
                if occ == 0 {
                    continue;
                }
                let (n, v) = measure(arg, rank, prev);
                total = total
                    .saturating_sub(occ)
                    .saturating_add(occ.saturating_mul(n));
                for (acc, x) in counts.iter_mut().zip(v) {
                    *acc = acc.saturating_add(occ.saturating_mul(x));
                }
            }
            (total, counts)
        }
    }
}

/// One Kleene step: applications are replaced by the previous iterate of the
/// callee with its parameters bound to the rewritten arguments.
fn rewrite(t: &Term, prev: &[Option<Iterate>]) -> Term {
    match t {
        Term::App(l, args) => {
            let callee = prev[*l].as_ref().expect("iterate computed");
            let args: Vec<Term> = args.iter().map(|a| rewrite(a, prev)).collect();
            callee.term.substitute(&args)
        }
        Term::Zero | Term::One | Term::Action(_) | Term::Var(_) => t.clone(),
        Term::Prefix(a, s) => Term::Prefix(a.clone(), Box::new(rewrite(s, prev))),
        Term::Sum(l, r) => Term::sum(rewrite(l, prev), rewrite(r, prev)),
        Term::Seq(l, r) => Term::seq(rewrite(l, prev), rewrite(r, prev)),
        Term::SumN(ts) => Term::SumN(ts.iter().map(|s| rewrite(s, prev)).collect()),
    }
}

impl Scheme {
    /// Body of equation `i` in concrete syntax.
    pub fn body_text(&self, i: usize) -> String {
        let mut s = String::new();
        let names = |k: usize| {
            self.equations
                .get(k)
                .map(|e| e.name.clone())
                .unwrap_or_else(|| format!("?{k}"))
        };
        self.equations[i].body.write_with(&names, &mut s);
        s
    }
}

/// Prints the scheme in the grammar accepted by the parser.
impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "%signature {}\n%actions", self.sig.kind)?;
        for a in &self.sig.alphabet {
            write!(f, " {a}")?;
        }
        writeln!(f)?;
        for (i, eq) in self.equations.iter().enumerate() {
            f.write_str(&eq.name)?;
            if eq.rank > 0 {
                let params: Vec<String> = (1..=eq.rank).map(|j| format!("v{j}")).collect();
                write!(f, "({})", params.join(", "))?;
            }
            writeln!(f, " = {};", self.body_text(i))?;
        }
        Ok(())
    }
}
