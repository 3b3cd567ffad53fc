mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use synctree::{Label, Symbol, SyncTree, TreeBuilder};

use common::arb_tree;

/// Isomorphism by backtracking over child pairings.
fn iso_oracle(t1: &SyncTree, u: usize, t2: &SyncTree, v: usize) -> bool {
    let (a, b) = (t1.children(u), t2.children(v));
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    fn go(
        i: usize,
        a: &[(Label, usize)],
        b: &[(Label, usize)],
        used: &mut [bool],
        t1: &SyncTree,
        t2: &SyncTree,
    ) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if !used[j] && a[i].0 == b[j].0 && iso_oracle(t1, a[i].1, t2, b[j].1) {
                used[j] = true;
                if go(i + 1, a, b, used, t1, t2) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(0, a, b, &mut used, t1, t2)
}

/// Injective root-preserving morphism by backtracking.
fn embed_oracle(t1: &SyncTree, u: usize, t2: &SyncTree, v: usize) -> bool {
    let (a, b) = (t1.children(u), t2.children(v));
    if a.len() > b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    fn go(
        i: usize,
        a: &[(Label, usize)],
        b: &[(Label, usize)],
        used: &mut [bool],
        t1: &SyncTree,
        t2: &SyncTree,
    ) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if !used[j] && a[i].0 == b[j].0 && embed_oracle(t1, a[i].1, t2, b[j].1) {
                used[j] = true;
                if go(i + 1, a, b, used, t1, t2) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(0, a, b, &mut used, t1, t2)
}

/// Copy of `t` with every sibling list permuted and vertices renumbered.
fn shuffled(r: &mut impl Rng, t: &SyncTree) -> SyncTree {
    let mut b = TreeBuilder::new();
    let mut stack = vec![(0usize, t.root())];
    while let Some((dst, src)) = stack.pop() {
        let mut kids = t.children(src).to_vec();
        kids.shuffle(r);
        for (l, c) in kids {
            let v = b.add_child(dst, l);
            stack.push((v, c));
        }
    }
    b.finish()
}

fn sym(s: &str) -> Symbol {
    Symbol::new(s)
}

#[test]
fn left_distributivity_fails() {
    let a = SyncTree::atom(&sym("a"));
    let lhs = a.seq_product(&SyncTree::one().sum(&SyncTree::one()));
    let rhs = a.sum(&a);
    assert!(!lhs.is_isomorphic(&rhs));
    assert!(!iso_oracle(&lhs, 0, &rhs, 0));
}

#[test]
fn constants_and_prefix() {
    let a = sym("a");
    assert_eq!(SyncTree::zero().num_vertices(), 1);
    assert_eq!(SyncTree::one().num_edges(), 1);
    assert_eq!(SyncTree::atom(&a).num_vertices(), 3);
    assert!(SyncTree::prefix(&a, &SyncTree::one()).is_isomorphic(&SyncTree::atom(&a)));
    assert_eq!(SyncTree::prefix(&a, &SyncTree::zero()).num_vertices(), 2);
    assert_eq!(
        SyncTree::zero().sum(&SyncTree::atom(&a)),
        SyncTree::atom(&a)
    );
    assert!(SyncTree::one()
        .seq_product(&SyncTree::atom(&sym("b")))
        .is_isomorphic(&SyncTree::atom(&sym("b"))));
    let dead = SyncTree::atom(&a).seq_product(&SyncTree::zero());
    assert!(dead.is_isomorphic(&"(a())".parse().unwrap()));
}

proptest! {
    #[test]
    fn canonical_key_matches_oracle(t1 in arb_tree(9), t2 in arb_tree(9), seed in any::<u64>()) {
        let keys_equal = t1.canonical_key() == t2.canonical_key();
        prop_assert_eq!(keys_equal, iso_oracle(&t1, 0, &t2, 0));
        prop_assert_eq!(keys_equal, t1.is_isomorphic(&t2));
        let s = shuffled(&mut common::rng(seed), &t1);
        prop_assert!(iso_oracle(&t1, 0, &s, 0));
        prop_assert_eq!(s.canonical_key(), t1.canonical_key());
        prop_assert_eq!(s.canonical_form(), t1.canonical_form());
        prop_assert!(t1.canonical_form().is_isomorphic(&t1));
        prop_assert_eq!(keys_equal, t1.canonical_form() == t2.canonical_form());
    }

    #[test]
    fn literal_round_trip(t in arb_tree(14)) {
        let lit: SyncTree = t.to_string().parse().unwrap();
        prop_assert!(lit.is_isomorphic(&t));
        prop_assert_eq!(lit.canonical_key(), t.canonical_key());
    }

    #[test]
    fn embedding_matches_oracle(t1 in arb_tree(7), t2 in arb_tree(10)) {
        prop_assert_eq!(t1.embeds_into(&t2), embed_oracle(&t1, 0, &t2, 0));
        prop_assert!(t1.embeds_into(&t1.sum(&t2)));
    }

    #[test]
    fn sum_laws(t1 in arb_tree(10), t2 in arb_tree(10), t3 in arb_tree(10)) {
        prop_assert_eq!(t1.sum(&t2).canonical_key(), t2.sum(&t1).canonical_key());
        prop_assert_eq!(
            t1.sum(&t2).sum(&t3).canonical_key(),
            t1.sum(&t2.sum(&t3)).canonical_key()
        );
        prop_assert!(t1.sum(&SyncTree::zero()).is_isomorphic(&t1));
        prop_assert!(SyncTree::zero().sum(&t1).is_isomorphic(&t1));
    }

    #[test]
    fn seq_laws(t1 in arb_tree(8), t2 in arb_tree(8), t3 in arb_tree(8)) {
        prop_assert_eq!(
            t1.seq_product(&t2).seq_product(&t3).canonical_key(),
            t1.seq_product(&t2.seq_product(&t3)).canonical_key()
        );
        prop_assert!(t1.seq_product(&SyncTree::one()).is_isomorphic(&t1));
        prop_assert!(SyncTree::one().seq_product(&t1).is_isomorphic(&t1));
        prop_assert!(t1.sum(&t2).seq_product(&t3)
            .is_isomorphic(&t1.seq_product(&t3).sum(&t2.seq_product(&t3))));
        prop_assert!(SyncTree::zero().seq_product(&t1).is_isomorphic(&SyncTree::zero()));
    }

    #[test]
    fn operations_keep_invariants(t1 in arb_tree(12), t2 in arb_tree(12), d in 0usize..5) {
        let a = sym("a");
        for t in [
            t1.sum(&t2),
            t1.seq_product(&t2),
            SyncTree::prefix(&a, &t1),
            t1.contract(&BTreeSet::from([a.clone()])),
            t1.truncate(d),
        ] {
            prop_assert!(t.check_invariants().is_ok());
        }
    }

    #[test]
    fn contraction_composes(t in arb_tree(14)) {
        let t = t.sum(&SyncTree::prefix(&sym("c"), &t));
        let b1 = BTreeSet::from([sym("a")]);
        let b2 = BTreeSet::from([sym("b")]);
        let both: BTreeSet<Symbol> = b1.union(&b2).cloned().collect();
        prop_assert!(t.contract(&b1).contract(&b2).is_isomorphic(&t.contract(&both)));
        prop_assert!(t.contract(&BTreeSet::new()).is_isomorphic(&t));
    }

    #[test]
    fn truncation_embeds(t in arb_tree(14), d in 0usize..6) {
        let cut = t.truncate(d);
        prop_assert!(cut.embeds_into(&t));
        prop_assert!(cut.height() <= d);
        prop_assert!(t.truncate(t.height()).is_isomorphic(&t));
    }
}
