//! Random terms, schemes and trees for the property and acceptance tests.
//!
//! Every generator is driven by an explicit RNG so corpora are reproducible
//! from a seed; the proptest strategies draw a seed and call the same
//! generators.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use synctree::semantics::tree_size;
use synctree::{Equation, Label, Scheme, SigKind, Signature, Symbol, SyncTree, Term, TreeBuilder};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const ACTIONS: [&str; 3] = ["a", "b", "c"];

fn pick_action(r: &mut impl Rng) -> Symbol {
    Symbol::new(ACTIONS[r.gen_range(0..ACTIONS.len())])
}

/// What a generated body may refer to.
#[derive(Clone)]
pub struct Ctx {
    pub kind: SigKind,
    /// Parameters `v1..v{vars}` in scope.
    pub vars: usize,
    /// Ranks of the functors that may be applied.
    pub ranks: Vec<usize>,
}

impl Ctx {
    pub fn ground(kind: SigKind) -> Self {
        Ctx {
            kind,
            vars: 0,
            ranks: Vec::new(),
        }
    }
}

fn leaf(r: &mut impl Rng, ctx: &Ctx) -> Term {
    let mut options: Vec<u8> = vec![0, 1];
    if ctx.kind == SigKind::Delta {
        options.push(2);
        options.push(2);
    }
    if ctx.vars > 0 {
        options.push(3);
        options.push(3);
    }
    if ctx.ranks.contains(&0) {
        options.push(4);
    }
    match *options.choose(r).unwrap() {
        0 => Term::Zero,
        1 => Term::One,
        2 => Term::Action(pick_action(r)),
        3 => Term::Var(r.gen_range(1..=ctx.vars)),
        _ => {
            let zeros: Vec<usize> = (0..ctx.ranks.len())
                .filter(|&i| ctx.ranks[i] == 0)
                .collect();
            Term::App(*zeros.choose(r).unwrap(), vec![])
        }
    }
}

/// A term with at most `size` nodes.
pub fn gen_term<R: Rng>(r: &mut R, ctx: &Ctx, size: usize) -> Term {
    if size <= 1 {
        return leaf(r, ctx);
    }
    let apps: Vec<usize> = (0..ctx.ranks.len())
        .filter(|&i| ctx.ranks[i] > 0 && ctx.ranks[i] < size)
        .collect();
    let mut options: Vec<u8> = vec![0, 0, 1];
    match ctx.kind {
        SigKind::Delta => options.extend([2, 2]),
        SigKind::Gamma => options.extend([3, 3]),
        SigKind::GammaTilde => options.extend([3, 3, 4]),
    }
    if !apps.is_empty() {
        options.extend([5, 5]);
    }
    let split = |r: &mut R| {
        let rest = size - 1;
        let l = r.gen_range(1..=rest);
        (l, (rest - l).max(1))
    };
    match *options.choose(r).unwrap() {
        0 => {
            let (l, rr) = split(r);
            Term::sum(gen_term(r, ctx, l), gen_term(r, ctx, rr))
        }
        1 => leaf(r, ctx),
        2 => {
            let (l, rr) = split(r);
            Term::seq(gen_term(r, ctx, l), gen_term(r, ctx, rr))
        }
        3 => Term::Prefix(pick_action(r), Box::new(gen_term(r, ctx, size - 1))),
        4 => {
            let n = r.gen_range(1..=3.min(size - 1));
            let each = ((size - 1) / n).max(1);
            Term::SumN((0..n).map(|_| gen_term(r, ctx, each)).collect())
        }
        _ => {
            let f = *apps.choose(r).unwrap();
            let k = ctx.ranks[f];
            let each = ((size - 1) / k).max(1);
            Term::App(f, (0..k).map(|_| gen_term(r, ctx, each)).collect())
        }
    }
}

/// Closed functor-free term of the given signature, size at most `max`.
pub fn gen_ground_term(r: &mut impl Rng, kind: SigKind, max: usize) -> Term {
    let size = r.gen_range(1..=max);
    gen_term(r, &Ctx::ground(kind), size)
}

fn signature(kind: SigKind) -> Signature {
    Signature::new(kind, ACTIONS.iter().map(|a| Symbol::new(a)))
}

/// A valid scheme: `1..=max_eqs` equations, bodies of at most `max_body`
/// nodes, ranks 0 when `regular`, else the root has rank 0 and the others
/// rank 0..=2. Rejects schemes whose stage-`stage` approximant would exceed
/// `max_vertices` vertices.
pub fn gen_scheme(
    r: &mut impl Rng,
    kind: SigKind,
    regular: bool,
    max_eqs: usize,
    max_body: usize,
    stage: usize,
    max_vertices: u128,
) -> Scheme {
    loop {
        let m = r.gen_range(1..=max_eqs);
        let ranks: Vec<usize> = (0..m)
            .map(|i| {
                if regular || i == 0 {
                    0
                } else {
                    r.gen_range(0..=2)
                }
            })
            .collect();
        let equations = (0..m)
            .map(|i| Equation {
                name: format!("F{}", i + 1),
                rank: ranks[i],
                body: {
                    let ctx = Ctx {
                        kind,
                        vars: ranks[i],
                        ranks: ranks.clone(),
                    };
                    let size = r.gen_range(1..=max_body);
                    gen_term(r, &ctx, size)
                },
            })
            .collect();
        let s = Scheme::new(signature(kind), equations);
        if s.validate().is_err() {
            continue;
        }
        match s.expand_with_budget(stage, 200_000) {
            Ok(t) if tree_size(&t) <= max_vertices => return s,
            _ => continue,
        }
    }
}

/// `G0 = Gj(1)` followed by unary functors whose bodies avoid `1`.
pub fn gen_unary_scheme(r: &mut impl Rng) -> Scheme {
    let m = r.gen_range(1..=3);
    let j = r.gen_range(1..=m);
    fn body(r: &mut impl Rng, m: usize, size: usize) -> Term {
        if size <= 1 {
            return if r.gen_bool(0.7) {
                Term::Var(1)
            } else {
                Term::Zero
            };
        }
        match r.gen_range(0..4) {
            0 => {
                let l = r.gen_range(1..size);
                Term::sum(body(r, m, l), body(r, m, (size - 1 - l).max(1)))
            }
            1 => Term::Prefix(pick_action(r), Box::new(body(r, m, size - 1))),
            2 => Term::App(r.gen_range(1..=m), vec![body(r, m, size - 1)]),
            _ => body(r, m, 1),
        }
    }
    let mut equations = vec![Equation {
        name: "G0".into(),
        rank: 0,
        body: Term::App(j, vec![Term::One]),
    }];
    for i in 1..=m {
        let size = r.gen_range(1..=10);
        equations.push(Equation {
            name: format!("G{i}"),
            rank: 1,
            body: body(r, m, size),
        });
    }
    Scheme::new(signature(SigKind::Gamma), equations)
}

/// A random tree with at most `max_vertices` vertices over `labels` plus
/// exits.
pub fn gen_tree(r: &mut impl Rng, labels: &[&str], max_vertices: usize) -> SyncTree {
    let target = r.gen_range(1..=max_vertices);
    let mut b = TreeBuilder::new();
    let mut open: Vec<usize> = vec![0];
    while b.len() < target {
        let parent = open[r.gen_range(0..open.len())];
        if r.gen_bool(0.15) {
            b.add_child(parent, Label::Exit);
        } else {
            let l = labels[r.gen_range(0..labels.len())];
            let c = b.add_child(parent, Label::action(l));
            open.push(c);
        }
    }
    b.finish()
}

/// A random deterministic tree: each vertex has at most one edge per label.
pub fn gen_det_tree(r: &mut impl Rng, labels: &[&str], depth: usize) -> SyncTree {
    let mut b = TreeBuilder::new();
    let mut stack = vec![(0usize, 0usize)];
    while let Some((v, d)) = stack.pop() {
        if r.gen_bool(0.3) {
            b.add_child(v, Label::Exit);
        }
        if d == depth {
            continue;
        }
        for l in labels {
            if r.gen_bool(0.5) {
                let c = b.add_child(v, Label::action(l));
                stack.push((c, d + 1));
            }
        }
    }
    b.finish()
}

/// Copies `t`, duplicating random branches and shuffling siblings, so the
/// result is bisimilar to `t`.
pub fn inflate(r: &mut impl Rng, t: &SyncTree) -> SyncTree {
    let mut b = TreeBuilder::new();
    let mut stack = vec![(0usize, t.root())];
    while let Some((dst, src)) = stack.pop() {
        let mut kids: Vec<(Label, usize)> = t.children(src).to_vec();
        let extra: Vec<(Label, usize)> = kids.iter().filter(|_| r.gen_bool(0.3)).cloned().collect();
        kids.extend(extra);
        kids.shuffle(r);
        for (l, c) in kids {
            let v = b.add_child(dst, l);
            stack.push((v, c));
        }
    }
    b.finish()
}

pub fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

pub fn arb_tree(max_vertices: usize) -> impl Strategy<Value = SyncTree> {
    seeds().prop_map(move |s| gen_tree(&mut rng(s), &["a", "b"], max_vertices))
}

pub fn arb_ground_term(kind: SigKind, max: usize) -> impl Strategy<Value = Term> {
    seeds().prop_map(move |s| gen_ground_term(&mut rng(s), kind, max))
}

pub fn arb_scheme(kind: SigKind, regular: bool) -> impl Strategy<Value = Scheme> {
    seeds().prop_map(move |s| gen_scheme(&mut rng(s), kind, regular, 3, 10, 5, 50_000))
}
