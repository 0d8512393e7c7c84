use std::collections::HashSet;

use num_bigint::BigUint;
use oasym::group::{vector_orbit, DEFAULT_ORBIT_CAP};
use oasym::*;
use proptest::prelude::*;

/// All products of generators, by breadth-first closure.
fn closure(gens: &[Permutation], n: usize) -> HashSet<Vec<u32>> {
    let id = Permutation::identity(n);
    let mut seen = HashSet::from([id.images().to_vec()]);
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = s.compose(&g).unwrap();
            if seen.insert(h.images().to_vec()) {
                frontier.push(h);
            }
        }
    }
    seen
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|img| Permutation::from_images(img).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_matches_closure(a in perm_strategy(8), b in perm_strategy(8)) {
        let gens = [a, b];
        let elems = closure(&gens, 8);
        prop_assert_eq!(group_order(&gens).unwrap(), BigUint::from(elems.len()));
    }

    #[test]
    fn membership_matches_closure(a in perm_strategy(7), b in perm_strategy(7), probes in prop::collection::vec(perm_strategy(7), 8)) {
        let gens = [a, b];
        let elems = closure(&gens, 7);
        let group = PermGroup::new(7, gens.to_vec()).unwrap();
        for p in &probes {
            prop_assert_eq!(group.contains(p).unwrap(), elems.contains(p.images()));
        }
        let listed: HashSet<Vec<u32>> = group.elements(10_000).unwrap().iter().map(|g| g.images().to_vec()).collect();
        prop_assert_eq!(listed, elems);
    }

    #[test]
    fn compose_is_associative(a in perm_strategy(9), b in perm_strategy(9), c in perm_strategy(9)) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn orbit_preserves_count_multiset(k in 2usize..=4, counts in prop::collection::vec(0i64..4, 16)) {
        let v = counts[..1 << k].to_vec();
        let gens = strength2_generators(k).unwrap().perms;
        let orbit = vector_orbit(&v, &gens, DEFAULT_ORBIT_CAP).unwrap();
        let mut sorted = v.clone();
        sorted.sort_unstable();
        for m in &orbit.members {
            let mut s = m.clone();
            s.sort_unstable();
            prop_assert_eq!(&s, &sorted);
        }
        prop_assert!(orbit.members.contains(&v));
        // orbit-stabilizer: orbit size divides the group order
        let order = group_order(&gens).unwrap();
        prop_assert_eq!(order % BigUint::from(orbit.len()), BigUint::from(0u32));
    }
}

#[test]
fn rho_relations() {
    for k in 2..=6 {
        let flip_sets = (1..=k).map(|i| sign_flip_perm(i, k).unwrap());
        for f in flip_sets {
            assert!(f.compose(&f).unwrap().is_identity());
        }
        for i in 1..=k {
            let ri = rho_perm(i, k).unwrap();
            assert!(ri.compose(&ri).unwrap().is_identity());
            for j in i + 1..=k {
                let rj = rho_perm(j, k).unwrap();
                let conj = ri.compose(&rj).unwrap().compose(&ri).unwrap();
                assert_eq!(conj, factor_swap_perm(i, j, k).unwrap(), "k={k} i={i} j={j}");
            }
        }
    }
}

#[test]
fn symgen_generators_preserve_their_row_spaces() {
    for k in 1..=6 {
        for t in 1..=k {
            for g in &wreath_generators(k).unwrap().perms {
                assert!(perm_preserves_rowspace(g, k, t).unwrap());
            }
        }
        if k >= 2 {
            for g in &strength2_generators(k).unwrap().perms {
                assert!(perm_preserves_rowspace(g, k, 2).unwrap());
            }
        }
    }
    // ρ mixes main effects with interactions, so strength one is not preserved
    assert!(!perm_preserves_rowspace(&rho_perm(1, 4).unwrap(), 4, 1).unwrap());
}
