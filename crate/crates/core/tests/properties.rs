//! Structural invariants of the relation category: exhaustive checks at
//! the smallest sizes plus randomized coverage via proptest.

use proptest::prelude::*;
use relcat_core::backend::{self, tables, ObjectRef};
use relcat_core::rel::{self, Relation};

fn all_finset2_relations() -> Vec<Relation> {
    let a = ObjectRef::finset(2);
    (0u32..16)
        .map(|mask| {
            let pairs: Vec<(usize, usize)> = (0..4)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (i / 2, i % 2))
                .collect();
            Relation::new(a.clone(), a.clone(), pairs).unwrap()
        })
        .collect()
}

#[test]
fn composition_is_associative_exhaustively() {
    let rels = all_finset2_relations();
    for r in &rels {
        for s in &rels {
            for t in &rels {
                let left = rel::compose(&rel::compose(r, s).unwrap(), t).unwrap();
                let right = rel::compose(r, &rel::compose(s, t).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn unit_laws_exhaustively() {
    let id = rel::identity(&ObjectRef::finset(2));
    for r in all_finset2_relations() {
        assert_eq!(rel::compose(&id, &r).unwrap(), r);
        assert_eq!(rel::compose(&r, &id).unwrap(), r);
    }
}

#[test]
fn positive_relations_satisfy_the_lemma() {
    // every composite s-dagger-after-s is symmetric and satisfies the
    // positivity condition, for all small FinSet witnesses
    let a = ObjectRef::finset(2);
    let x = ObjectRef::finset(3);
    for mask in 0u64..(1 << 6) {
        let pairs: Vec<(usize, usize)> = (0..6)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (i / 3, i % 3))
            .collect();
        let s = Relation::new(a.clone(), x.clone(), pairs).unwrap();
        let r = rel::compose(&s, &rel::dagger(&s)).unwrap();
        assert!(rel::is_symmetric(&r).unwrap());
        assert!(rel::satisfies_pos_condition(&r).unwrap());
        assert!(rel::is_positive(&r).unwrap().is_some());
    }
}

fn arb_finset_relation(
    max_dom: usize,
    max_cod: usize,
) -> impl Strategy<Value = Relation> {
    (0..=max_dom, 0..=max_cod).prop_flat_map(|(n, m)| {
        proptest::collection::btree_set((0..n.max(1), 0..m.max(1)), 0..=(n * m).min(12))
            .prop_map(move |pairs| {
                let dom = ObjectRef::finset(n);
                let cod = ObjectRef::finset(m);
                let pairs: Vec<(usize, usize)> = pairs
                    .into_iter()
                    .filter(|&(a, b)| a < n && b < m)
                    .collect();
                Relation::new(dom, cod, pairs).unwrap()
            })
    })
}

fn arb_group_endo() -> impl Strategy<Value = Relation> {
    (0..3u8, proptest::collection::btree_set(0..16usize, 0..4)).prop_map(|(which, seed)| {
        let g = match which {
            0 => ObjectRef::fingrp(&tables::cyclic(2)).unwrap(),
            1 => ObjectRef::fingrp(&tables::cyclic(4)).unwrap(),
            _ => ObjectRef::fingrp(&tables::klein_four()).unwrap(),
        };
        let sq = backend::product(&g, &g).unwrap();
        let seed = seed.into_iter().map(|x| x % sq.size()).collect();
        let closed = backend::subobject_generated(&sq, &seed).unwrap();
        Relation::new(
            g.clone(),
            g.clone(),
            closed
                .iter()
                .map(|&i| backend::unpair_index(g.size(), i)),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn dagger_is_an_involution(r in arb_finset_relation(4, 4)) {
        prop_assert_eq!(rel::dagger(&rel::dagger(&r)), r);
    }

    #[test]
    fn meet_is_a_lower_bound(
        (r, s) in (0..=4usize).prop_flat_map(|n| {
            let make = move || {
                proptest::collection::btree_set((0..n.max(1), 0..n.max(1)), 0..=n * n)
            };
            (make(), make()).prop_map(move |(p1, p2)| {
                let a = ObjectRef::finset(n);
                let fix = |ps: std::collections::BTreeSet<(usize, usize)>| {
                    Relation::new(
                        a.clone(),
                        a.clone(),
                        ps.into_iter().filter(|&(x, y)| x < n && y < n),
                    )
                    .unwrap()
                };
                (fix(p1), fix(p2))
            })
        })
    ) {
        let m = rel::meet(&r, &s).unwrap();
        prop_assert!(rel::leq(&m, &r).unwrap());
        prop_assert!(rel::leq(&m, &s).unwrap());
        // composition is monotone in the left argument
        let through = rel::compose(&m, &rel::dagger(&s)).unwrap();
        let bigger = rel::compose(&r, &rel::dagger(&s)).unwrap();
        prop_assert!(rel::leq(&through, &bigger).unwrap());
    }

    #[test]
    fn subgroup_relations_are_difunctional_prop(r in arb_group_endo()) {
        prop_assert!(rel::is_difunctional(&r));
        // reflexive subalgebra relations are equivalences in Mal'cev backends
        if rel::is_reflexive(&r).unwrap() {
            prop_assert!(rel::is_equivalence(&r).unwrap());
        }
    }

    #[test]
    fn positivity_condition_matches_witness_existence(r in arb_group_endo()) {
        let by_condition = rel::satisfies_pos_condition(&r).unwrap();
        let witness = rel::is_positive(&r).unwrap();
        prop_assert_eq!(by_condition, witness.is_some());
        if let Some(w) = witness {
            prop_assert!(w.verifies(&r));
        }
    }

    #[test]
    fn enumerated_subobjects_are_closed_and_generated(seed in proptest::collection::btree_set(0..8usize, 0..3)) {
        let g = ObjectRef::fingrp(&tables::cyclic(8)).unwrap();
        let closed = backend::subobject_generated(&g, &seed).unwrap();
        prop_assert!(backend::is_subobject(&g, &closed).unwrap());
        let again = backend::subobject_generated(&g, &closed).unwrap();
        prop_assert_eq!(closed, again);
    }
}
