use std::fmt;

use crate::label::Symbol;

/// Which operation symbols a term may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SigKind {
    /// `0`, `1`, binary `+`, unary prefixing `a.t`.
    Gamma,
    /// `0`, `1`, binary `+`, binary `*`, action constants.
    Delta,
    /// Gamma plus the sums `+n(t1, ..., tn)` of any rank `n >= 1`.
    GammaTilde,
}

impl SigKind {
    pub fn keyword(self) -> &'static str {
        match self {
            SigKind::Gamma => "gamma",
            SigKind::Delta => "delta",
            SigKind::GammaTilde => "gamma~",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "gamma" => Some(SigKind::Gamma),
            "delta" => Some(SigKind::Delta),
            "gamma~" => Some(SigKind::GammaTilde),
            _ => None,
        }
    }

    pub fn has_prefix(self) -> bool {
        !matches!(self, SigKind::Delta)
    }
}

impl fmt::Display for SigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A signature kind together with its action alphabet, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub kind: SigKind,
    pub alphabet: Vec<Symbol>,
}

impl Signature {
    pub fn new(kind: SigKind, alphabet: impl IntoIterator<Item = Symbol>) -> Self {
        Signature {
            kind,
            alphabet: alphabet.into_iter().collect(),
        }
    }

    pub fn has_action(&self, a: &Symbol) -> bool {
        self.alphabet.contains(a)
    }
}

/// Finite term over a signature extended with functor variables and
/// positional parameters `v1..vk`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    /// Action constant (Delta only).
    Action(Symbol),
    /// `a.t` (Gamma and Gamma~).
    Prefix(Symbol, Box<Term>),
    Sum(Box<Term>, Box<Term>),
    /// `+n(t1, ..., tn)` (Gamma~ only); kept in order.
    SumN(Vec<Term>),
    /// `t1 * t2` (Delta only).
    Seq(Box<Term>, Box<Term>),
    /// Parameter `v_j`, 1-based.
    Var(usize),
    /// Application of the functor with the given equation index.
    App(usize, Vec<Term>),
}

impl Term {
    pub fn action(a: &str) -> Term {
        Term::Action(Symbol::new(a))
    }

    pub fn prefix(a: &str, t: Term) -> Term {
        Term::Prefix(Symbol::new(a), Box::new(t))
    }

    pub fn sum(l: Term, r: Term) -> Term {
        Term::Sum(Box::new(l), Box::new(r))
    }

    pub fn seq(l: Term, r: Term) -> Term {
        Term::Seq(Box::new(l), Box::new(r))
    }

    /// Direct subterms, left to right.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Zero | Term::One | Term::Action(_) | Term::Var(_) => vec![],
            Term::Prefix(_, t) => vec![t],
            Term::Sum(l, r) | Term::Seq(l, r) => vec![l, r],
            Term::SumN(ts) | Term::App(_, ts) => ts.iter().collect(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            n += 1;
            stack.extend(t.children());
        }
        n
    }

    pub fn is_closed(&self) -> bool {
        !self.any(&|t| matches!(t, Term::Var(_)))
    }

    pub fn is_functor_free(&self) -> bool {
        !self.any(&|t| matches!(t, Term::App(..)))
    }

    /// Whether some node satisfies `pred`.
    pub fn any(&self, pred: &dyn Fn(&Term) -> bool) -> bool {
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if pred(t) {
                return true;
            }
            stack.extend(t.children());
        }
        false
    }

    /// Replaces every `Var(j)` by `args[j-1]`. Variables without a matching
    /// argument are left untouched.
    pub fn substitute(&self, args: &[Term]) -> Term {
        self.map_vars(&|j| args.get(j - 1).cloned())
    }

    pub(crate) fn map_vars(&self, f: &dyn Fn(usize) -> Option<Term>) -> Term {
        match self {
            Term::Var(j) => f(*j).unwrap_or(Term::Var(*j)),
            Term::Zero | Term::One | Term::Action(_) => self.clone(),
            Term::Prefix(a, t) => Term::Prefix(a.clone(), Box::new(t.map_vars(f))),
            Term::Sum(l, r) => Term::sum(l.map_vars(f), r.map_vars(f)),
            Term::Seq(l, r) => Term::seq(l.map_vars(f), r.map_vars(f)),
            Term::SumN(ts) => Term::SumN(ts.iter().map(|t| t.map_vars(f)).collect()),
            Term::App(i, ts) => Term::App(*i, ts.iter().map(|t| t.map_vars(f)).collect()),
        }
    }

    /// Writes the term in the concrete syntax, naming functors through
    /// `names`.
    pub fn write_with(&self, names: &dyn Fn(usize) -> String, out: &mut String) {
        self.write_prec(names, Prec::Sum, out);
    }

    fn write_prec(&self, names: &dyn Fn(usize) -> String, prec: Prec, out: &mut String) {
        match self {
            Term::Zero => out.push('0'),
            Term::One => out.push('1'),
            Term::Action(a) => out.push_str(a.as_str()),
            Term::Var(j) => {
                out.push('v');
                out.push_str(&j.to_string());
            }
            Term::Prefix(a, t) => {
                out.push_str(a.as_str());
                out.push('.');
                t.write_prec(names, Prec::Atom, out);
            }
            Term::Sum(l, r) => {
                let paren = prec > Prec::Sum;
                if paren {
                    out.push('(');
                }
                l.write_prec(names, Prec::Sum, out);
                out.push_str(" + ");
                r.write_prec(names, Prec::Seq, out);
                if paren {
                    out.push(')');
                }
            }
            Term::Seq(l, r) => {
                let paren = prec > Prec::Seq;
                if paren {
                    out.push('(');
                }
                l.write_prec(names, Prec::Seq, out);
                out.push('*');
                r.write_prec(names, Prec::Atom, out);
                if paren {
                    out.push(')');
                }
            }
            Term::SumN(ts) => {
                out.push('+');
                out.push_str(&ts.len().to_string());
                write_args(ts, names, out);
            }
            Term::App(i, ts) => {
                out.push_str(&names(*i));
                if !ts.is_empty() {
                    write_args(ts, names, out);
                }
            }
        }
    }
}

fn write_args(ts: &[Term], names: &dyn Fn(usize) -> String, out: &mut String) {
    out.push('(');
    for (k, t) in ts.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        t.write_prec(names, Prec::Sum, out);
    }
    out.push(')');
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Sum,
    Seq,
    Atom,
}

/// Prints functors as `F<index>`; schemes print with their own names.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_with(&|i| format!("F{}", i + 1), &mut s);
        f.write_str(&s)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
