//! Finite labelled transition systems with initial and accepting states.
//!
//! ```text
//! %lts
//! %actions a b
//! %states q0 q1          # optional; when present every state must be listed
//! %initial q0
//! %accepting q0
//! q0 a q1
//! q1 b q0
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::label::{Label, Symbol};
use crate::parse::{is_ident_char, is_ident_start};
use crate::tree::{SyncTree, TreeBuilder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    pub alphabet: Vec<Symbol>,
    pub states: Vec<String>,
    pub initial: usize,
    pub accepting: BTreeSet<usize>,
    /// `(source, action, target)` as state indices.
    pub edges: Vec<(usize, Symbol, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct LtsError {
    pub line: usize,
    pub kind: LtsErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LtsErrorKind {
    #[error("expected %lts header")]
    MissingHeader,
    #[error("missing %initial directive")]
    MissingInitial,
    #[error("missing %actions directive")]
    MissingActions,
    #[error("state {0} is not declared")]
    UndeclaredState(String),
    #[error("action {0} is not declared")]
    UnknownAction(String),
    #[error("{0}")]
    Syntax(String),
}

impl Lts {
    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    /// Outgoing `(action, target)` pairs of every state, in edge order.
    pub fn successors(&self) -> Vec<Vec<(Symbol, usize)>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for (p, a, q) in &self.edges {
            out[*p].push((a.clone(), *q));
        }
        out
    }

    /// Unfolding from the initial state, cut at depth `d`.
    ///
    /// Vertices are the action paths of length at most `d`. Every vertex whose
    /// path ends in an accepting state also gets an exit edge, whatever its
    /// depth; exit edges do not count towards `d`.
    pub fn unfold(&self, d: usize) -> SyncTree {
        let succ = self.successors();
        let mut b = TreeBuilder::new();
        let mut stack = vec![(b.root(), self.initial, 0usize)];
        while let Some((v, q, depth)) = stack.pop() {
            if depth < d {
                for (a, r) in &succ[q] {
                    let c = b.add_child(v, Label::Action(a.clone()));
                    stack.push((c, *r, depth + 1));
                }
            }
            if self.accepting.contains(&q) {
                b.add_child(v, Label::Exit);
            }
        }
        b.finish()
    }
}

/// Depth-truncated unfolding; see [`Lts::unfold`].
pub fn unfold_lts(g: &Lts, d: usize) -> SyncTree {
    g.unfold(d)
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(is_ident_start) && cs.all(is_ident_char)
}

/// Parses and validates an LTS description.
pub fn parse_lts(text: &str) -> Result<Lts, LtsError> {
    let mut header = false;
    let mut alphabet: Option<Vec<Symbol>> = None;
    let mut declared: Option<Vec<String>> = None;
    let mut initial: Option<(String, usize)> = None;
    let mut accepting: Vec<(String, usize)> = Vec::new();
    let mut raw_edges: Vec<(String, String, String, usize)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |kind| LtsError { line, kind };
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        let Some(first) = words.first() else {
            continue;
        };
        for w in &words {
            let name = w.strip_prefix('%').unwrap_or(w);
            if !is_name(name) || (w.starts_with('%') && w != first) {
                return Err(err(LtsErrorKind::Syntax(format!("unexpected token {w}"))));
            }
        }
        if !header {
            if *first != "%lts" || words.len() != 1 {
                return Err(err(LtsErrorKind::MissingHeader));
            }
            header = true;
            continue;
        }
        let rest: Vec<String> = words[1..].iter().map(|s| s.to_string()).collect();
        match *first {
            "%lts" => return Err(err(LtsErrorKind::Syntax("duplicate %lts header".into()))),
            "%actions" => {
                if alphabet.is_some() {
                    return Err(err(LtsErrorKind::Syntax("duplicate %actions".into())));
                }
                alphabet = Some(rest.iter().map(|a| Symbol::new(a)).collect());
            }
            "%states" => {
                if declared.is_some() {
                    return Err(err(LtsErrorKind::Syntax("duplicate %states".into())));
                }
                declared = Some(rest);
            }
            "%initial" => {
                if initial.is_some() || rest.len() != 1 {
                    return Err(err(LtsErrorKind::Syntax(
                        "%initial takes exactly one state and appears once".into(),
                    )));
                }
                initial = Some((rest[0].clone(), line));
            }
            "%accepting" => accepting.extend(rest.into_iter().map(|q| (q, line))),
            d if d.starts_with('%') => {
                return Err(err(LtsErrorKind::Syntax(format!("unknown directive {d}"))))
            }
            _ => {
                let [p, a, q] = words[..] else {
                    return Err(err(LtsErrorKind::Syntax(
                        "an edge line has the form `source action target`".into(),
                    )));
                };
                raw_edges.push((p.into(), a.into(), q.into(), line));
            }
        }
    }
    let end = text.lines().count().max(1);
    if !header {
        return Err(LtsError {
            line: end,
            kind: LtsErrorKind::MissingHeader,
        });
    }
    let alphabet = alphabet.ok_or(LtsError {
        line: end,
        kind: LtsErrorKind::MissingActions,
    })?;
    let (init_name, init_line) = initial.ok_or(LtsError {
        line: end,
        kind: LtsErrorKind::MissingInitial,
    })?;

    let mut states: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let fixed = declared.is_some();
    for q in declared.unwrap_or_default() {
        if !index.contains_key(&q) {
            index.insert(q.clone(), states.len());
            states.push(q);
        }
    }
    let mut state = |q: &str, line: usize| -> Result<usize, LtsError> {
        if let Some(&i) = index.get(q) {
            return Ok(i);
        }
        if fixed {
            return Err(LtsError {
                line,
                kind: LtsErrorKind::UndeclaredState(q.to_string()),
            });
        }
        index.insert(q.to_string(), states.len());
        states.push(q.to_string());
        Ok(states.len() - 1)
    };
    let initial = state(&init_name, init_line)?;
    let mut acc = BTreeSet::new();
    for (q, line) in &accepting {
        acc.insert(state(q, *line)?);
    }
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (p, a, q, line) in &raw_edges {
        let p = state(p, *line)?;
        let q = state(q, *line)?;
        let a = Symbol::new(a);
        if !alphabet.contains(&a) {
            return Err(LtsError {
                line: *line,
                kind: LtsErrorKind::UnknownAction(a.to_string()),
            });
        }
        edges.push((p, a, q));
    }
    Ok(Lts {
        alphabet,
        states,
        initial,
        accepting: acc,
        edges,
    })
}

/// Prints in the format read by [`parse_lts`].
impl fmt::Display for Lts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "%lts")?;
        write!(f, "%actions")?;
        for a in &self.alphabet {
            write!(f, " {a}")?;
        }
        write!(f, "\n%states")?;
        for q in &self.states {
            write!(f, " {q}")?;
        }
        writeln!(f, "\n%initial {}", self.states[self.initial])?;
        write!(f, "%accepting")?;
        for q in &self.accepting {
            write!(f, " {}", self.states[*q])?;
        }
        writeln!(f)?;
        for (p, a, q) in &self.edges {
            writeln!(f, "{} {a} {}", self.states[*p], self.states[*q])?;
        }
        Ok(())
    }
}
