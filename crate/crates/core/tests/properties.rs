//! Property tests for the algebraic core: random permutations and random
//! small groups, checked against the laws the library promises.

use binarity_core::action::{coset_action, induced_action};
use binarity_core::binarity::{
    exact_arity, r_ell, run_battery, verify_witness, ArityResult, CountMethod, TestSelection,
    Verdict, VerifyOutcome,
};
use binarity_core::closure::{two_closure, OrbitalPartition};
use binarity_core::format::{witness_from_json, witness_to_json};
use binarity_core::group::PermGroup;
use binarity_core::perm::{Permutation, Point};
use binarity_core::Budgets;
use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;

/// A uniform-ish random permutation of degree `n`: argsort of random keys.
fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    proptest::collection::vec(any::<u64>(), n).prop_map(move |keys| {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by_key(|&i| (keys[i], i));
        let mut images = vec![0 as Point; n];
        for (dst, &src) in idx.iter().enumerate() {
            images[src] = dst as Point;
        }
        Permutation::from_images(images).expect("valid permutation")
    })
}

/// A random group: degree in `degrees`, 1 to `max_gens` random generators.
fn group(
    degrees: std::ops::RangeInclusive<usize>,
    max_gens: usize,
) -> impl Strategy<Value = PermGroup> {
    degrees.prop_flat_map(move |n| {
        proptest::collection::vec(perm(n), 1..=max_gens)
            .prop_map(move |gens| PermGroup::new(n, gens).expect("valid group"))
    })
}

proptest! {
    #[test]
    fn compose_is_associative(
        (a, b, c) in (1usize..=10).prop_flat_map(|n| (perm(n), perm(n), perm(n)))
    ) {
        prop_assert_eq!(
            a.compose(&b).unwrap().compose(&c).unwrap(),
            a.compose(&b.compose(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn identity_and_inverse_laws(p in (1usize..=12).prop_flat_map(perm)) {
        let e = Permutation::identity(p.degree());
        prop_assert_eq!(p.compose(&e).unwrap(), p.clone());
        prop_assert_eq!(e.compose(&p).unwrap(), p.clone());
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert!(p.inverse().compose(&p).unwrap().is_identity());
    }

    #[test]
    fn action_respects_composition(
        (a, b) in (1usize..=12).prop_flat_map(|n| (perm(n), perm(n)))
    ) {
        let ab = a.compose(&b).unwrap();
        for w in 0..a.degree() as Point {
            prop_assert_eq!(ab.image(w), b.image(a.image(w)));
        }
    }

    #[test]
    fn cycle_string_roundtrips(p in (1usize..=12).prop_flat_map(perm)) {
        let text = p.to_cycle_string();
        let back = Permutation::parse(&text, p.degree()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn conjugation_preserves_structure(
        (p, x) in (2usize..=10).prop_flat_map(|n| (perm(n), perm(n)))
    ) {
        let conj = p.conjugate_by(&x);
        prop_assert_eq!(conj.support().len(), p.support().len());
        prop_assert_eq!(conj.element_order(), p.element_order());
        // supp(p^x) = supp(p)^x as sets.
        let mut moved: Vec<Point> = p.support().iter().map(|&w| x.image(w)).collect();
        moved.sort_unstable();
        prop_assert_eq!(conj.support(), moved);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbit_stabilizer_theorem(g in group(2..=6, 3), alpha_raw in any::<u32>()) {
        let alpha = alpha_raw % g.degree() as Point;
        let orbit = g.orbit_of(alpha).unwrap();
        let stab = g.point_stabilizer(alpha).unwrap();
        prop_assert_eq!(
            BigUint::from(orbit.len() as u64) * stab.order(),
            g.order()
        );
    }

    #[test]
    fn transporter_matches_reachability(
        g in group(2..=6, 3),
        a_raw in any::<u32>(),
        b_raw in any::<u32>()
    ) {
        let a = a_raw % g.degree() as Point;
        let b = b_raw % g.degree() as Point;
        let orbit = g.orbit_of(a).unwrap();
        match g.transporter(&[a], &[b]).unwrap() {
            Some(t) => {
                prop_assert!(orbit.contains(&b));
                prop_assert_eq!(t.image(a), b);
                prop_assert!(g.is_member(&t).unwrap());
            }
            None => prop_assert!(!orbit.contains(&b)),
        }
    }

    #[test]
    fn element_enumeration_matches_order(g in group(2..=5, 2)) {
        let order = g.order();
        let elements: Vec<Permutation> = g.chain().elements().collect();
        prop_assert_eq!(BigUint::from(elements.len() as u64), order);
        let mut seen: std::collections::HashSet<Vec<Point>> = Default::default();
        for e in &elements {
            prop_assert!(g.is_member(e).unwrap());
            prop_assert!(seen.insert(e.images().to_vec()), "duplicate element");
        }
    }

    #[test]
    fn setwise_stabilizer_agrees_with_enumeration(
        g in group(2..=5, 2),
        picks in proptest::collection::vec(any::<u32>(), 1..=3)
    ) {
        let budgets = Budgets::default();
        let n = g.degree() as Point;
        let mut lambda: Vec<Point> = picks.iter().map(|&p| p % n).collect();
        lambda.sort_unstable();
        lambda.dedup();
        let stab = g.setwise_stabilizer(&lambda, &budgets).unwrap();
        let by_enumeration = g
            .chain()
            .elements()
            .filter(|e| {
                let mut image: Vec<Point> = lambda.iter().map(|&w| e.image(w)).collect();
                image.sort_unstable();
                image == lambda
            })
            .count();
        prop_assert_eq!(BigUint::from(by_enumeration as u64), stab.order());
        for gen in stab.generators() {
            prop_assert!(g.is_member(gen).unwrap());
        }
    }

    #[test]
    fn coset_action_over_point_stabilizer_has_orbit_degree(
        g in group(2..=6, 3)
    ) {
        let budgets = Budgets::default();
        let stab = g.point_stabilizer(0).unwrap();
        let action = coset_action(&g, &stab, &budgets).unwrap();
        let orbit = g.orbit_of(0).unwrap();
        prop_assert_eq!(action.index as usize, orbit.len());
        let kernel = action.kernel().unwrap();
        // |image| · |kernel| = |G|.
        prop_assert_eq!(action.group.order() * kernel.order(), g.order());
    }

    #[test]
    fn induced_action_on_an_orbit_is_transitive_quotient(
        g in group(2..=6, 3)
    ) {
        let budgets = Budgets::default();
        let orbit = g.orbit_of(0).unwrap();
        let mut lambda = orbit.clone();
        lambda.sort_unstable();
        let induced = induced_action(&g, &lambda, &budgets).unwrap();
        prop_assert_eq!(induced.group.degree(), lambda.len());
        prop_assert!(induced.group.is_transitive());
        // The image order divides |G|.
        prop_assert!((g.order() % induced.group.order()).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn two_closure_contains_group_and_is_idempotent(g in group(2..=6, 3)) {
        let budgets = Budgets::default();
        let result = two_closure(&g, &budgets).unwrap();
        let closure = result.closure.to_group();
        prop_assert!(closure.contains_group(&g));
        prop_assert!(BigUint::from(0u32) == &result.closure_order % g.order());

        // The closure preserves the orbital partition, so it is 2-closed.
        let again = two_closure(&closure, &budgets).unwrap();
        prop_assert!(again.is_two_closed);
        prop_assert_eq!(again.closure_order, result.closure_order);

        // Same orbital partition as the original group.
        let part_g = OrbitalPartition::compute(&g, &budgets).unwrap();
        let part_c = OrbitalPartition::compute(&closure, &budgets).unwrap();
        prop_assert_eq!(part_g.num_colors(), part_c.num_colors());
        for gen in closure.generators() {
            prop_assert!(part_g.is_preserved_by(gen));
        }
    }

    #[test]
    fn r_ell_methods_agree(g in group(2..=6, 3), ell in 2u32..=3) {
        let budgets = Budgets::default();
        let a = r_ell(&g, ell, CountMethod::CharacterSum, &budgets).unwrap();
        let b = r_ell(&g, ell, CountMethod::DirectOrbit, &budgets).unwrap();
        prop_assert_eq!(a.count, b.count);
    }

    #[test]
    fn r2_equals_off_diagonal_orbital_count(g in group(2..=6, 3)) {
        let budgets = Budgets::default();
        let r2 = r_ell(&g, 2, CountMethod::DirectOrbit, &budgets).unwrap();
        let part = OrbitalPartition::compute(&g, &budgets).unwrap();
        prop_assert_eq!(r2.count, BigUint::from(part.num_off_diagonal_colors()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn battery_is_sound_against_the_oracle(g in group(2..=6, 3)) {
        let budgets = Budgets::default();
        let battery = run_battery(&g, "random", &TestSelection::default(), &budgets).unwrap();
        let arity = exact_arity(&g, &budgets).unwrap();
        match battery.verdict {
            Verdict::NonBinary => {
                prop_assert!(matches!(arity, ArityResult::Exact(k) if k != 2),
                    "battery claims non-binary but oracle says arity 2");
            }
            Verdict::Binary => {
                prop_assert!(matches!(arity, ArityResult::Exact(2)));
            }
            Verdict::Inconclusive => {}
        }
        // Every certificate verifies, and survives a serialization trip.
        for cert in battery.certificates() {
            prop_assert!(matches!(verify_witness(cert), VerifyOutcome::Verified));
            let json = witness_to_json(cert);
            let back = witness_from_json(&json).unwrap();
            prop_assert!(matches!(verify_witness(&back), VerifyOutcome::Verified));
        }
    }
}
