//! Acceptance suite: eleven end-to-end criteria, one test (and thus one
//! pass/fail line in the harness output) per criterion. Each test prints a
//! summary line visible with `--nocapture` and enforces its runtime bound.
//!
//! Run with: `cargo test --test acceptance`

use std::time::{Duration, Instant};

use binarity_core::action::coset_action;
use binarity_core::binarity::{
    exact_arity, r_ell, run_battery, test1_character_bound, verify_witness, witness_from_closure,
    ArityResult, CountMethod, Test1Outcome, Test2Outcome, TestSelection, Verdict, VerifyOutcome,
    WitnessKind,
};
use binarity_core::closure::{two_closure, two_closure_by_enumeration, ClosureGroup};
use binarity_core::corpus::{
    a4_x_s5, a4_x_s5_subgroup_32, a6_on_180, builtin_corpus, frobenius_32, heisenberg_27,
    l3_3_normalizer_action, m11_11, m11_12, pgl2_19, transitive_small,
};
use binarity_core::reduction::{
    fix_count_centralizer, lemma_m2_shapes, lemma_m2_witness, sylow_overgroups, test5_alot,
    LemmaOutcome, Test5Config, Test5Outcome,
};
use binarity_core::{Budgets, Error};
use num_bigint::BigUint;
use num_traits::One;

fn check_runtime(start: Instant, bound: Duration, what: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= bound,
        "{what} took {elapsed:?}, exceeding the {bound:?} bound"
    );
}

/// Criterion 1 — oracle soundness sweep: on every transitive group of
/// degree ≤ 7 and order ≤ 5000 in the shipped corpus, no test claims
/// NonBinary where the exhaustive oracle proves arity 2, and every emitted
/// certificate verifies.
#[test]
fn criterion_01_oracle_soundness_sweep() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let mut checked = 0usize;
    for entry in transitive_small() {
        if entry.order > 5000 {
            continue;
        }
        let battery = run_battery(
            &entry.group,
            &entry.name,
            &TestSelection::default(),
            &budgets,
        )
        .unwrap();
        let arity = match exact_arity(&entry.group, &budgets).unwrap() {
            ArityResult::Exact(k) => k,
            ArityResult::LowerBound(k) => panic!(
                "oracle must be exact at degree <= 7, got lower bound {k} on {}",
                entry.name
            ),
        };
        let binary = arity == 2;
        if let Some(Test1Outcome::NonBinary(e)) = &battery.test1 {
            assert!(!binary, "{}: test1 fired (ell={}) but arity is 2", entry.name, e.ell);
        }
        if let Some(Test2Outcome::NonBinary { .. }) = &battery.test2 {
            assert!(!binary, "{}: test2 fired but arity is 2", entry.name);
        }
        if matches!(
            &battery.test3,
            Some(binarity_core::binarity::Test3Outcome::NonBinary(_))
        ) {
            assert!(!binary, "{}: test3 fired but arity is 2", entry.name);
        }
        if battery.verdict == Verdict::NonBinary {
            assert!(!binary, "{}: verdict NonBinary but arity is 2", entry.name);
        }
        for cert in battery.certificates() {
            assert!(
                matches!(verify_witness(cert), VerifyOutcome::Verified),
                "{}: certificate failed verification",
                entry.name
            );
        }
        checked += 1;
    }
    assert!(checked >= 36, "expected at least 36 groups, swept {checked}");
    check_runtime(start, Duration::from_secs(600), "criterion 1");
    println!("criterion 1: PASS — {checked} groups swept, tests sound against the oracle");
}

/// Criterion 2 — r_ℓ cross-validation: the two counting methods agree for
/// ℓ ∈ {2,3,4} on all corpus groups of degree ≤ 10; Alt(4) has r₂ = 1,
/// r₃ = 2; the character bound fires at ℓ = 3 with bound 1.
#[test]
fn criterion_02_r_ell_cross_validation() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let mut checked = 0usize;
    for entry in builtin_corpus() {
        if entry.group.degree() > 10 {
            continue;
        }
        for ell in 2..=4u32 {
            let a = r_ell(&entry.group, ell, CountMethod::CharacterSum, &budgets).unwrap();
            let b = r_ell(&entry.group, ell, CountMethod::DirectOrbit, &budgets).unwrap();
            assert_eq!(
                a.count, b.count,
                "{}: methods disagree at ell = {ell}",
                entry.name
            );
        }
        checked += 1;
    }
    assert!(checked >= 39, "expected at least 39 groups, checked {checked}");

    let a4 = binarity_core::corpus::alternating(4);
    let r2 = r_ell(&a4, 2, CountMethod::CharacterSum, &budgets).unwrap();
    let r3 = r_ell(&a4, 3, CountMethod::CharacterSum, &budgets).unwrap();
    assert_eq!(r2.count, BigUint::one());
    assert_eq!(r3.count, BigUint::from(2u32));
    match test1_character_bound(&a4, &budgets).unwrap() {
        Test1Outcome::NonBinary(e) => {
            assert_eq!(e.ell, 3);
            assert_eq!(e.bound, BigUint::one());
            assert_eq!(e.r_ell, BigUint::from(2u32));
        }
        other => panic!("test1 must fire on Alt(4), got {other:?}"),
    }
    check_runtime(start, Duration::from_secs(60), "criterion 2");
    println!("criterion 2: PASS — methods agree on {checked} groups; Alt(4) r2=1, r3=2, fires at ell=3");
}

/// Criterion 3 — M11: the degree-11 action fires the character bound with
/// r₅ = 7 > 1, and the degree-12 action fires with its least ℓ recorded.
#[test]
fn criterion_03_m11_character_bounds() {
    let start = Instant::now();
    let budgets = Budgets::default();

    let deg11 = m11_11();
    assert_eq!(deg11.order(), BigUint::from(7920u32));
    match test1_character_bound(&deg11, &budgets).unwrap() {
        Test1Outcome::NonBinary(e) => {
            assert_eq!(e.ell, 5, "degree 11 must fire at ell = 5");
            assert_eq!(e.r_ell, BigUint::from(7u32), "r_5 must be exactly 7");
            assert_eq!(e.bound, BigUint::one(), "bound must be 1 (r_2 = 1)");
        }
        other => panic!("test1 must fire on M11 degree 11, got {other:?}"),
    }

    let deg12 = m11_12(&budgets).unwrap();
    assert_eq!(deg12.degree(), 12);
    assert_eq!(deg12.order(), BigUint::from(7920u32));
    let least_ell = match test1_character_bound(&deg12, &budgets).unwrap() {
        Test1Outcome::NonBinary(e) => {
            assert_eq!(e.ell, 4, "degree 12 is 3- but not 4-transitive");
            assert!(e.r_ell > e.bound);
            e.ell
        }
        other => panic!("test1 must fire on M11 degree 12, got {other:?}"),
    };
    check_runtime(start, Duration::from_secs(60), "criterion 3");
    println!("criterion 3: PASS — degree 11 fires at ell=5 with r_5=7; degree 12 fires at ell={least_ell}");
}

/// Criterion 4 — 2-closure ground truth: for all corpus groups of degree
/// ≤ 8 the backtrack closure equals brute-force enumeration over Sym(Ω);
/// C₅ regular is 2-closed; Alt(4) natural has closure of order 24.
#[test]
fn criterion_04_closure_ground_truth() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let mut checked = 0usize;
    for entry in builtin_corpus() {
        if entry.group.degree() > 8 {
            continue;
        }
        let result = two_closure(&entry.group, &budgets).unwrap();
        let by_search = result.closure.to_group();
        let by_enumeration = two_closure_by_enumeration(&entry.group, &budgets).unwrap();
        assert!(
            by_search.same_group_as(&by_enumeration),
            "{}: closure mismatch (search order {}, enumeration order {})",
            entry.name,
            by_search.order(),
            by_enumeration.order()
        );
        checked += 1;
    }
    assert!(checked >= 37, "expected at least 37 groups, checked {checked}");

    let c5 = binarity_core::corpus::cyclic(5);
    assert!(two_closure(&c5, &budgets).unwrap().is_two_closed);

    let a4 = binarity_core::corpus::alternating(4);
    let a4_closure = two_closure(&a4, &budgets).unwrap();
    assert!(!a4_closure.is_two_closed);
    assert_eq!(a4_closure.closure_order, BigUint::from(24u32));

    check_runtime(start, Duration::from_secs(300), "criterion 4");
    println!("criterion 4: PASS — {checked} closures match enumeration; C5 2-closed; Alt(4) closure order 24");
}

/// Criterion 5 — L₃(3) fixture: the degree-13 coset action on the
/// normalizer of an elementary abelian group of order 9 is not 2-closed,
/// with a verified strong witness.
#[test]
fn criterion_05_l3_3_not_two_closed() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let action = l3_3_normalizer_action(&budgets).unwrap();
    let g = action.group;
    assert_eq!(g.degree(), 13);
    assert_eq!(g.order(), BigUint::from(5616u32));

    let result = two_closure(&g, &budgets).unwrap();
    assert!(!result.is_two_closed, "the action must not be 2-closed");

    match witness_from_closure(&g, "L3(3) on 13 cosets", &budgets).unwrap() {
        Test2Outcome::NonBinary {
            certificate: Some(cert),
            ..
        } => {
            assert_eq!(cert.kind, WitnessKind::Strong);
            assert!(matches!(verify_witness(&cert), VerifyOutcome::Verified));
        }
        other => panic!("expected a strong witness, got {other:?}"),
    }
    check_runtime(start, Duration::from_secs(60), "criterion 5");
    println!("criterion 5: PASS — degree-13 action not 2-closed, strong witness verified");
}

/// Criterion 6 — Frobenius 2⁵:31 on 32 points: the closure is the full
/// symmetric group, returned symbolically via the 2-transitive shortcut.
#[test]
fn criterion_06_frobenius_closure_is_full_symmetric() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let g = frobenius_32();
    assert_eq!(g.degree(), 32);
    assert_eq!(g.order(), BigUint::from(32u32 * 31));

    let result = two_closure(&g, &budgets).unwrap();
    assert!(result.two_transitive_shortcut);
    match &result.closure {
        ClosureGroup::FullSymmetric { degree } => assert_eq!(*degree, 32),
        ClosureGroup::Group(_) => panic!("closure must be symbolic Sym(32)"),
    }
    let mut fact = BigUint::one();
    for k in 1..=32u32 {
        fact *= BigUint::from(k);
    }
    assert_eq!(result.closure_order, fact);
    check_runtime(start, Duration::from_secs(60), "criterion 6");
    println!("criterion 6: PASS — closure is Sym(32), symbolic, order 32!");
}

/// Criterion 7 — extraspecial analog: the faithful transitive degree-9
/// action of the exponent-3 extraspecial group of order 27 has 2-closure
/// of order exactly 81.
#[test]
fn criterion_07_extraspecial_closure_order_81() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let g = heisenberg_27();
    assert_eq!(g.degree(), 9);
    assert_eq!(g.order(), BigUint::from(27u32));
    assert!(g.is_transitive());

    let result = two_closure(&g, &budgets).unwrap();
    assert_eq!(result.closure_order, BigUint::from(81u32));
    assert!(!result.is_two_closed);
    check_runtime(start, Duration::from_secs(60), "criterion 7");
    println!("criterion 7: PASS — degree-9 extraspecial action has closure order 81");
}

/// Criterion 8 — the degree-45 coset action of A₄×S₅ on a subgroup of
/// shape 2×2×D₄ is non-binary with a verified certificate.
#[test]
fn criterion_08_a4xs5_degree_45_reduction() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let g = a4_x_s5();
    let h = a4_x_s5_subgroup_32();
    assert_eq!(g.order(), BigUint::from(1440u32));
    assert_eq!(h.order(), BigUint::from(32u32));

    let action = coset_action(&g, &h, &budgets).unwrap();
    assert_eq!(action.index, 45);

    let battery = run_battery(
        &action.group,
        "A4 x S5 on 45 cosets of 2x2xD4",
        &TestSelection::default(),
        &budgets,
    )
    .unwrap();
    assert_eq!(battery.verdict, Verdict::NonBinary);
    let certs = battery.certificates();
    assert!(!certs.is_empty(), "a certificate must be produced");
    for cert in certs {
        assert!(matches!(verify_witness(cert), VerifyOutcome::Verified));
    }
    check_runtime(start, Duration::from_secs(60), "criterion 8");
    println!("criterion 8: PASS — degree-45 action non-binary with verified certificate");
}

/// Criterion 9 — Test 5 on PGL₂(19) with the 51-digit even index and
/// d = 2: the odd-degree coset actions have degrees {171, 285, 855} and
/// each is independently non-binary, so the big action is non-binary.
#[test]
fn criterion_09_test5_pgl2_19() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let m = pgl2_19();
    assert_eq!(m.order(), BigUint::from(6840u32));

    // Independent enumeration: overgroups of a Sylow 2-subgroup, i.e. the
    // subgroups of odd index, sorted by index.
    let overgroups = sylow_overgroups(&m, 2, &budgets).unwrap();
    let mut indices: Vec<u64> = overgroups
        .iter()
        .map(|h| {
            let idx = m.order() / h.order();
            idx.to_string().parse::<u64>().unwrap()
        })
        .collect();
    indices.sort_unstable();
    assert_eq!(indices, vec![1, 171, 285, 855]);

    // The 51-digit even index of the fixture; d = 2 does not divide
    // |Ω| − 1.
    let omega: BigUint = "118131202455338139749482442245864145761075200000000"
        .parse()
        .unwrap();
    assert_eq!(omega.to_string().len(), 51);
    assert!((&omega % 2u32) == BigUint::from(0u32));

    let cfg = Test5Config::new(m, "PGL(2,19)", omega, 2);
    match test5_alot(&cfg, &budgets).unwrap() {
        Test5Outcome::NonBinary { actions } => {
            let mut degrees: Vec<u64> = actions.iter().map(|a| a.degree).collect();
            degrees.sort_unstable();
            assert_eq!(degrees, vec![171, 285, 855]);
            for a in &actions {
                assert_eq!(
                    a.verdict,
                    Verdict::NonBinary,
                    "degree-{} action must be independently non-binary",
                    a.degree
                );
            }
        }
        Test5Outcome::Inconclusive { reason, .. } => {
            panic!("test 5 must conclude non-binary, got inconclusive: {reason}")
        }
    }
    check_runtime(start, Duration::from_secs(600), "criterion 9");
    println!("criterion 9: PASS — odd-degree actions {{171, 285, 855}} all non-binary");
}

/// Criterion 10 — the 180-point A₆ configuration at p = 2 yields a
/// three-block commuting-involution certificate: |Λ| = 3p = 6, the induced
/// permutations match the required cycle shapes, the witness verifies, and
/// the two tuples cover 12 points in total.
#[test]
fn criterion_10_three_block_lemma_on_a6() {
    let start = Instant::now();
    let budgets = Budgets::default();
    let fx = a6_on_180(&budgets).unwrap();
    let g180 = fx.action.group;
    assert_eq!(g180.degree(), 180);

    let witness = match lemma_m2_witness(&g180, "A6 on 180 points", 0, 2, &fx.g, &fx.h, &budgets) {
        Ok(LemmaOutcome::Applicable(w)) => w,
        Ok(LemmaOutcome::NotApplicable(reason)) => {
            panic!("lemma hypotheses must hold on the fixture: {reason}")
        }
        Err(e) => panic!("lemma application failed: {e}"),
    };
    assert_eq!(witness.p, 2);
    assert_eq!(witness.lambda.len(), 6, "|Λ| = 3p = 6");
    assert!(
        lemma_m2_shapes(&witness.lambda, &fx.g, &fx.h, 2),
        "induced permutations must match the three-block cycle shapes"
    );
    let cert = &witness.certificate;
    assert_eq!(cert.i.len() + cert.j.len(), 12, "12 points across I and J");
    assert!(matches!(verify_witness(cert), VerifyOutcome::Verified));
    check_runtime(start, Duration::from_secs(60), "criterion 10");
    println!("criterion 10: PASS — |Λ| = 6 certificate with matching shapes, verified");
}

/// Criterion 11 — fixed-point formula arithmetic: the centralizer-quotient
/// form reproduces 1540, 108345600000, and 6000 exactly, and rejects the
/// non-integral 28800/19200 input.
#[test]
fn criterion_11_fix_count_formula_arithmetic() {
    let start = Instant::now();
    let q = |a: u64, b: u64| {
        fix_count_centralizer(&BigUint::from(a), &BigUint::from(b)).map(|d| d.fix_count)
    };
    assert_eq!(q(44352000, 28800).unwrap(), BigUint::from(1540u32));
    assert_eq!(
        q(1365154560000000, 12600).unwrap(),
        BigUint::from(108345600000u64)
    );
    assert_eq!(q(302400000, 50400).unwrap(), BigUint::from(6000u32));
    assert!(matches!(q(28800, 19200), Err(Error::NotIntegral { .. })));
    check_runtime(start, Duration::from_secs(10), "criterion 11");
    println!("criterion 11: PASS — 1540, 108345600000, 6000 reproduced; 28800/19200 rejected");
}
