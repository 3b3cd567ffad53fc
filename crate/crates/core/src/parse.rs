//! Concrete syntax for recursion schemes.
//!
//! ```text
//! %signature gamma|delta|gamma~
//! %actions a b c
//! NAME ['(' v1, .., vk ')'] = term ;
//! ```
//!
//! Terms: `0`, `1`, action identifiers, `a.t` (prefix, right-associative,
//! binds tightest), `t * t` (left-associative, tighter than `+`), `t + t`
//! (left-associative), `+n(t1, .., tn)`, `F(args)`, parentheses. In Gamma
//! signatures a bare action `a` abbreviates `a.1`. `#` starts a comment that
//! runs to the end of the line. The first equation is the root.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::label::Symbol;
use crate::scheme::{Equation, Scheme};
use crate::term::{SigKind, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    Lexical(char),
    #[error("{0}")]
    Syntax(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("{name} expects {expected} argument(s), got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("{what} is not allowed in signature {sig}")]
    IllegalConstructor { what: String, sig: SigKind },
    #[error("functor {0} is defined more than once")]
    DuplicateFunctor(String),
    #[error("missing %signature directive")]
    MissingSignature,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    pub(crate) fn error(self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            kind,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(u64),
    Directive(String),
    Plus,
    Star,
    Dot,
    Comma,
    LParen,
    RParen,
    Equals,
    Semi,
    Tilde,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier {s}"),
            Tok::Int(n) => write!(f, "number {n}"),
            Tok::Directive(d) => write!(f, "%{d}"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Comma => f.write_str("','"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Equals => f.write_str("'='"),
            Tok::Semi => f.write_str("';'"),
            Tok::Tilde => f.write_str("'~'"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c == '\n' {
            bump(&mut chars);
            out.push((Tok::Newline, pos));
        } else if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if is_ident_start(c) || c == '%' {
            let directive = c == '%';
            if directive {
                bump(&mut chars);
            }
            let mut s = String::new();
            while chars.peek().is_some_and(|&c| is_ident_char(c)) {
                s.push(bump(&mut chars));
            }
            if directive {
                if s.is_empty() {
                    return Err(pos.error(ParseErrorKind::Lexical('%')));
                }
                out.push((Tok::Directive(s), pos));
            } else {
                out.push((Tok::Ident(s), pos));
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(bump(&mut chars));
            }
            let n = s
                .parse()
                .map_err(|_| pos.error(ParseErrorKind::Syntax("number too large".into())))?;
            out.push((Tok::Int(n), pos));
        } else {
            let tok = match c {
                '+' => Tok::Plus,
                '*' => Tok::Star,
                '.' => Tok::Dot,
                ',' => Tok::Comma,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '=' => Tok::Equals,
                ';' => Tok::Semi,
                '~' => Tok::Tilde,
                other => return Err(pos.error(ParseErrorKind::Lexical(other))),
            };
            bump(&mut chars);
            out.push((tok, pos));
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// Unresolved term, as read.
#[derive(Debug)]
enum Raw {
    Zero,
    One,
    Name(String),
    Call(String, Vec<Raw>),
    Prefix(String, Box<Raw>),
    Sum(Box<Raw>, Box<Raw>),
    Seq(Box<Raw>, Box<Raw>),
    SumN(u64, Vec<Raw>),
    At(Pos, Box<Raw>),
}

struct RawEquation {
    name: String,
    params: usize,
    body: Raw,
    pos: Pos,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.next();
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.pos().error(ParseErrorKind::Syntax(format!(
            "expected {wanted}, found {}",
            self.peek()
        )))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Pos, ParseError> {
        self.skip_newlines();
        if *self.peek() == tok {
            Ok(self.next().1)
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn ident(&mut self, wanted: &str) -> Result<(String, Pos), ParseError> {
        self.skip_newlines();
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.next().1;
                Ok((s, p))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn term(&mut self) -> Result<Raw, ParseError> {
        let mut left = self.product()?;
        loop {
            self.skip_newlines();
            if *self.peek() != Tok::Plus {
                return Ok(left);
            }
            let p = self.next().1;
            let right = self.product()?;
            left = Raw::At(p, Box::new(Raw::Sum(Box::new(left), Box::new(right))));
        }
    }

    fn product(&mut self) -> Result<Raw, ParseError> {
        let mut left = self.primary()?;
        loop {
            self.skip_newlines();
            if *self.peek() != Tok::Star {
                return Ok(left);
            }
            let p = self.next().1;
            let right = self.primary()?;
            left = Raw::At(p, Box::new(Raw::Seq(Box::new(left), Box::new(right))));
        }
    }

    fn primary(&mut self) -> Result<Raw, ParseError> {
        self.skip_newlines();
        let p = self.pos();
        let raw = match self.peek().clone() {
            Tok::Int(0) => {
                self.next();
                Raw::Zero
            }
            Tok::Int(1) => {
                self.next();
                Raw::One
            }
            Tok::Plus => {
                self.next();
                let n = match self.next() {
                    (Tok::Int(n), _) => n,
                    (_, q) => {
                        return Err(
                            q.error(ParseErrorKind::Syntax("expected a rank after '+'".into()))
                        )
                    }
                };
                Raw::SumN(n, self.args()?)
            }
            Tok::Ident(name) => {
                self.next();
                match self.peek() {
                    Tok::Dot => {
                        self.next();
                        Raw::Prefix(name, Box::new(self.primary()?))
                    }
                    Tok::LParen => Raw::Call(name, self.args()?),
                    _ => Raw::Name(name),
                }
            }
            Tok::LParen => {
                self.next();
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                return Ok(t);
            }
            _ => return Err(self.unexpected("a term")),
        };
        Ok(Raw::At(p, Box::new(raw)))
    }

    fn args(&mut self) -> Result<Vec<Raw>, ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let mut args = vec![self.term()?];
        loop {
            self.skip_newlines();
            match self.peek() {
                Tok::Comma => {
                    self.next();
                    args.push(self.term()?);
                }
                Tok::RParen => {
                    self.next();
                    return Ok(args);
                }
                _ => return Err(self.unexpected("',' or ')'")),
            }
        }
    }

    fn equation(&mut self) -> Result<RawEquation, ParseError> {
        let (name, pos) = self.ident("an equation")?;
        let mut params = 0;
        if *self.peek() == Tok::LParen {
            self.next();
            loop {
                let (v, vp) = self.ident("a parameter")?;
                params += 1;
                if v != format!("v{params}") {
                    return Err(vp.error(ParseErrorKind::Syntax(format!(
                        "parameters must be named v1, v2, ... in order; found {v} in position {params}"
                    ))));
                }
                self.skip_newlines();
                match self.next() {
                    (Tok::Comma, _) => continue,
                    (Tok::RParen, _) => break,
                    (_, q) => {
                        return Err(q.error(ParseErrorKind::Syntax("expected ',' or ')'".into())))
                    }
                }
            }
        }
        self.expect(Tok::Equals, "'='")?;
        let body = self.term()?;
        self.expect(Tok::Semi, "';'")?;
        Ok(RawEquation {
            name,
            params,
            body,
            pos,
        })
    }
}

/// Parses and validates a scheme.
pub fn parse_scheme(text: &str) -> Result<Scheme, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let mut kind = None;
    let mut alphabet: Vec<Symbol> = Vec::new();
    loop {
        p.skip_newlines();
        let Tok::Directive(d) = p.peek().clone() else {
            break;
        };
        let dpos = p.next().1;
        match d.as_str() {
            "signature" => {
                if kind.is_some() {
                    return Err(dpos.error(ParseErrorKind::Syntax(
                        "duplicate %signature directive".into(),
                    )));
                }
                let (word, wpos) = p.ident("gamma, delta or gamma~")?;
                let word = if *p.peek() == Tok::Tilde {
                    p.next();
                    format!("{word}~")
                } else {
                    word
                };
                kind = Some(SigKind::from_keyword(&word).ok_or_else(|| {
                    wpos.error(ParseErrorKind::Syntax(format!("unknown signature {word}")))
                })?);
            }
            "actions" => {
                while let Tok::Ident(a) = p.peek().clone() {
                    let apos = p.next().1;
                    let sym = Symbol::new(&a);
                    if alphabet.contains(&sym) {
                        return Err(apos
                            .error(ParseErrorKind::Syntax(format!("action {a} declared twice"))));
                    }
                    alphabet.push(sym);
                }
            }
            other => {
                return Err(dpos.error(ParseErrorKind::Syntax(format!(
                    "unknown directive %{other}"
                ))))
            }
        }
    }
    let kind = kind.ok_or_else(|| p.pos().error(ParseErrorKind::MissingSignature))?;

    let mut raws = Vec::new();
    loop {
        p.skip_newlines();
        if *p.peek() == Tok::Eof {
            break;
        }
        raws.push(p.equation()?);
    }
    if raws.is_empty() {
        return Err(p.pos().error(ParseErrorKind::Syntax(
            "expected at least one equation".into(),
        )));
    }

    let mut table: HashMap<String, (usize, usize)> = HashMap::new();
    for (i, r) in raws.iter().enumerate() {
        if table.insert(r.name.clone(), (i, r.params)).is_some() {
            return Err(r
                .pos
                .error(ParseErrorKind::DuplicateFunctor(r.name.clone())));
        }
        if alphabet.iter().any(|a| a.as_str() == r.name) {
            return Err(r.pos.error(ParseErrorKind::Syntax(format!(
                "{} is both an action and a functor",
                r.name
            ))));
        }
    }
    let sig = Signature::new(kind, alphabet);
    let mut equations = Vec::with_capacity(raws.len());
    for r in &raws {
        let ctx = Resolver {
            sig: &sig,
            table: &table,
            rank: r.params,
        };
        equations.push(Equation {
            name: r.name.clone(),
            rank: r.params,
            body: ctx.resolve(&r.body, r.pos)?,
        });
    }
    let scheme = Scheme::new(sig, equations);
    if let Err(ds) = scheme.validate() {
        // Resolution already enforces every invariant.
        unreachable!("resolved scheme failed validation: {ds:?}");
    }
    Ok(scheme)
}

struct Resolver<'a> {
    sig: &'a Signature,
    table: &'a HashMap<String, (usize, usize)>,
    rank: usize,
}

fn parameter_index(name: &str) -> Option<usize> {
    name.strip_prefix('v')
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|d| d.parse().ok())
}

impl Resolver<'_> {
    fn illegal(&self, pos: Pos, what: String) -> ParseError {
        pos.error(ParseErrorKind::IllegalConstructor {
            what,
            sig: self.sig.kind,
        })
    }

    fn action(&self, name: &str) -> Option<Symbol> {
        self.sig
            .alphabet
            .iter()
            .find(|a| a.as_str() == name)
            .cloned()
    }

    fn resolve(&self, raw: &Raw, pos: Pos) -> Result<Term, ParseError> {
        let kind = self.sig.kind;
        Ok(match raw {
            Raw::At(p, inner) => return self.resolve(inner, *p),
            Raw::Zero => Term::Zero,
            Raw::One => Term::One,
            Raw::Name(name) => {
                if let Some(j) = parameter_index(name).filter(|&j| j >= 1 && j <= self.rank) {
                    Term::Var(j)
                } else if let Some(&(i, rank)) = self.table.get(name) {
                    if rank != 0 {
                        return Err(pos.error(ParseErrorKind::ArityMismatch {
                            name: name.clone(),
                            expected: rank,
                            found: 0,
                        }));
                    }
                    Term::App(i, vec![])
                } else if let Some(a) = self.action(name) {
                    match kind {
                        SigKind::Delta => Term::Action(a),
                        // `a` abbreviates `a.1`.
                        SigKind::Gamma | SigKind::GammaTilde => {
                            Term::Prefix(a, Box::new(Term::One))
                        }
                    }
                } else if parameter_index(name).is_some() {
                    return Err(pos.error(ParseErrorKind::UnboundVariable(name.clone())));
                } else {
                    return Err(pos.error(ParseErrorKind::UnknownSymbol(name.clone())));
                }
            }
            Raw::Call(name, args) => {
                let Some(&(i, rank)) = self.table.get(name) else {
                    return Err(pos.error(ParseErrorKind::UnknownSymbol(name.clone())));
                };
                if rank != args.len() {
                    return Err(pos.error(ParseErrorKind::ArityMismatch {
                        name: name.clone(),
                        expected: rank,
                        found: args.len(),
                    }));
                }
                let args = args
                    .iter()
                    .map(|a| self.resolve(a, pos))
                    .collect::<Result<_, _>>()?;
                Term::App(i, args)
            }
            Raw::Prefix(name, body) => {
                if !kind.has_prefix() {
                    return Err(self.illegal(pos, format!("prefix {name}.")));
                }
                let Some(a) = self.action(name) else {
                    return Err(pos.error(ParseErrorKind::UnknownSymbol(name.clone())));
                };
                Term::Prefix(a, Box::new(self.resolve(body, pos)?))
            }
            Raw::Sum(l, r) => Term::sum(self.resolve(l, pos)?, self.resolve(r, pos)?),
            Raw::Seq(l, r) => {
                if kind != SigKind::Delta {
                    return Err(self.illegal(pos, "sequential product '*'".into()));
                }
                Term::seq(self.resolve(l, pos)?, self.resolve(r, pos)?)
            }
            Raw::SumN(n, args) => {
                if kind != SigKind::GammaTilde {
                    return Err(self.illegal(pos, format!("+{n}")));
                }
                if *n as usize != args.len() || *n == 0 {
                    return Err(pos.error(ParseErrorKind::ArityMismatch {
                        name: format!("+{n}"),
                        expected: *n as usize,
                        found: args.len(),
                    }));
                }
                Term::SumN(
                    args.iter()
                        .map(|a| self.resolve(a, pos))
                        .collect::<Result<_, _>>()?,
                )
            }
        })
    }
}
