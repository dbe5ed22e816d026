//! Binarity tests, witness certificates, and the arity oracle.
//!
//! An action of `G` on `Ω` is *binary* when every pair of same-length tuples
//! that is 2-subtuple complete is conjugate under `G`. A *witness* of
//! non-binarity is a pair of tuples `(I, J)` together with an element of `G`
//! for every pair of positions (proving 2-subtuple completeness) such that no
//! element of `G` maps `I` to `J` entrywise. Witnesses are independently
//! checkable; [`verify_witness`] re-derives everything from the group's
//! generators.

use crate::closure::two_closure;
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::group::{OrbitReps, PermGroup};
use crate::perm::{Permutation, Point};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap, HashSet};

/// How an ℓ-tuple orbit count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    /// `(1/|G|) Σ_g |Fix(g)| (|Fix(g)|-1) ⋯ (|Fix(g)|-ℓ+1)` over all
    /// elements, enumerated through the stabilizer chain.
    CharacterSum,
    /// Breadth-first orbit counting on injective ℓ-tuples.
    DirectOrbit,
}

/// The number of orbits of `G` on injective ℓ-tuples.
#[derive(Debug, Clone)]
pub struct OrbitCounts {
    pub ell: u32,
    pub count: BigUint,
    pub method: CountMethod,
}

/// Computes `r_ℓ`, the number of orbits on injective ℓ-tuples.
pub fn r_ell(g: &PermGroup, ell: u32, method: CountMethod, budgets: &Budgets) -> Result<OrbitCounts> {
    if ell == 0 {
        return Err(Error::Unsupported("ℓ must be at least 1".into()));
    }
    let count = match method {
        CountMethod::CharacterSum => r_ell_character_sum(g, ell, budgets)?,
        CountMethod::DirectOrbit => r_ell_direct(g, ell, budgets)?,
    };
    Ok(OrbitCounts { ell, count, method })
}

fn falling_factorial_u128(x: u64, ell: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for k in 0..ell as u64 {
        if x < k + 1 {
            return Some(0);
        }
        acc = acc.checked_mul((x - k) as u128)?;
    }
    Some(acc)
}

fn r_ell_character_sum(g: &PermGroup, ell: u32, budgets: &Budgets) -> Result<BigUint> {
    let order = g.order();
    if order > BigUint::from(budgets.element_cap) {
        return Err(Error::Budget {
            what: "character-sum element enumeration",
            limit: budgets.element_cap,
        });
    }
    let mut sum = BigUint::zero();
    for element in g.chain().elements() {
        let fix = element.fixed_point_count() as u64;
        match falling_factorial_u128(fix, ell) {
            Some(ff) => sum += BigUint::from(ff),
            None => {
                let mut ff = BigUint::one();
                for k in 0..ell as u64 {
                    ff *= BigUint::from(fix - k);
                }
                sum += ff;
            }
        }
    }
    let (quotient, remainder) = num_integer::div_rem(sum.clone(), order.clone());
    if !remainder.is_zero() {
        return Err(Error::NotIntegral {
            numerator: sum.to_string(),
            denominator: order.to_string(),
        });
    }
    Ok(quotient)
}

fn injective_tuple_count(n: usize, ell: u32) -> BigUint {
    let mut acc = BigUint::one();
    for k in 0..ell as usize {
        if k >= n {
            return BigUint::zero();
        }
        acc *= BigUint::from(n - k);
    }
    acc
}

fn r_ell_direct(g: &PermGroup, ell: u32, budgets: &Budgets) -> Result<BigUint> {
    let n = g.degree();
    let total = injective_tuple_count(n, ell);
    if total > BigUint::from(budgets.tuple_budget) {
        return Err(Error::Budget {
            what: "injective tuple enumeration",
            limit: budgets.tuple_budget,
        });
    }
    if total.is_zero() {
        return Ok(BigUint::zero());
    }
    let ell = ell as usize;
    let mut visited: HashSet<Vec<Point>> = HashSet::new();
    let mut orbits = 0u64;
    let mut stack: Vec<Vec<Point>> = Vec::new();
    // Lexicographic scan over injective tuples.
    let mut tuple: Vec<Point> = Vec::with_capacity(ell);
    scan_injective_tuples(n, ell, &mut tuple, &mut |t: &[Point]| {
        if visited.contains(t) {
            return;
        }
        orbits += 1;
        // BFS the orbit of this tuple.
        visited.insert(t.to_vec());
        stack.clear();
        stack.push(t.to_vec());
        let mut head = 0;
        while head < stack.len() {
            let cur = stack[head].clone();
            head += 1;
            for gen in g.generators() {
                let img: Vec<Point> = cur.iter().map(|&p| gen.image(p)).collect();
                if !visited.contains(&img) {
                    visited.insert(img.clone());
                    stack.push(img);
                }
            }
        }
    });
    Ok(BigUint::from(orbits))
}

fn scan_injective_tuples(n: usize, ell: usize, tuple: &mut Vec<Point>, f: &mut impl FnMut(&[Point])) {
    if tuple.len() == ell {
        f(tuple);
        return;
    }
    for p in 0..n as Point {
        if !tuple.contains(&p) {
            tuple.push(p);
            scan_injective_tuples(n, ell, tuple, f);
            tuple.pop();
        }
    }
}

/// Evidence produced by Test 1: an ℓ with `r_ℓ > r₂^(ℓ(ℓ-1)/2)`.
#[derive(Debug, Clone)]
pub struct CharacterBoundEvidence {
    pub ell: u32,
    pub r_ell: BigUint,
    pub r2: BigUint,
    pub bound: BigUint,
    pub method: CountMethod,
}

/// One probed ℓ that did not fire.
#[derive(Debug, Clone)]
pub struct ProbeRecord {
    pub ell: u32,
    pub r_ell: BigUint,
    pub bound: BigUint,
}

/// Outcome of Test 1 (the character bound).
#[derive(Debug, Clone)]
pub enum Test1Outcome {
    /// Non-binary: the least ℓ violating the bound, with the numbers.
    NonBinary(CharacterBoundEvidence),
    Inconclusive { probed: Vec<ProbeRecord> },
    Skipped { reason: String },
}

/// Test 1: for a transitive action, binarity forces
/// `r_ℓ ≤ r₂^(ℓ(ℓ-1)/2)`; any ℓ violating the bound proves non-binarity
/// (with no explicit witness tuple). Probes ℓ = 3 .. `budgets.max_ell`.
pub fn test1_character_bound(g: &PermGroup, budgets: &Budgets) -> Result<Test1Outcome> {
    if !g.is_transitive() {
        return Ok(Test1Outcome::Skipped {
            reason: "action is not transitive".into(),
        });
    }
    let pick_method = |ell: u32| -> Option<CountMethod> {
        if g.order() <= BigUint::from(budgets.element_cap) {
            Some(CountMethod::CharacterSum)
        } else if injective_tuple_count(g.degree(), ell) <= BigUint::from(budgets.tuple_budget) {
            Some(CountMethod::DirectOrbit)
        } else {
            None
        }
    };
    let Some(method2) = pick_method(2) else {
        return Ok(Test1Outcome::Skipped {
            reason: "orbit counts exceed both the element and tuple budgets".into(),
        });
    };
    let r2 = r_ell(g, 2, method2, budgets)?.count;
    let mut probed = Vec::new();
    for ell in 3..=budgets.max_ell {
        let Some(method) = pick_method(ell) else {
            return Ok(Test1Outcome::Skipped {
                reason: format!("orbit count for ℓ = {ell} exceeds budgets"),
            });
        };
        let r_l = r_ell(g, ell, method, budgets)?.count;
        let bound = r2.pow(ell * (ell - 1) / 2);
        if r_l > bound {
            return Ok(Test1Outcome::NonBinary(CharacterBoundEvidence {
                ell,
                r_ell: r_l,
                r2,
                bound,
                method,
            }));
        }
        probed.push(ProbeRecord {
            ell,
            r_ell: r_l,
            bound,
        });
    }
    Ok(Test1Outcome::Inconclusive { probed })
}

/// Whether a witness tuple covers all of Ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    Plain,
    Strong,
}

/// An independently verifiable non-binarity certificate: tuples `I`, `J` of
/// equal length, an element of `G` per position pair proving 2-subtuple
/// completeness, and the (re-checkable) claim that no element of `G` maps
/// `I` to `J`.
#[derive(Debug, Clone)]
pub struct WitnessCertificate {
    pub group_name: String,
    pub group: PermGroup,
    pub i: Vec<Point>,
    pub j: Vec<Point>,
    /// Keyed by position pair `(u, v)` with `u < v`; the element maps
    /// `(I_u, I_v)` to `(J_u, J_v)`.
    pub pair_transporters: BTreeMap<(u32, u32), Permutation>,
    pub kind: WitnessKind,
}

/// Verdict of [`verify_witness`]. Rejection carries a human-readable reason;
/// it is a value, not an error, so batch verification can proceed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome {
    Verified,
    Rejected(String),
}

/// Re-checks a certificate from scratch against its embedded group:
/// shape and ranges, membership and action of every pair transporter,
/// completeness of the pair table, non-conjugacy of `I` and `J` by a fresh
/// transporter search, and (for `Strong`) that `I` exhausts Ω.
pub fn verify_witness(cert: &WitnessCertificate) -> VerifyOutcome {
    let g = &cert.group;
    let n = g.degree();
    if cert.i.len() != cert.j.len() {
        return VerifyOutcome::Rejected(format!(
            "tuple lengths differ: {} vs {}",
            cert.i.len(),
            cert.j.len()
        ));
    }
    if cert.i.len() < 2 {
        return VerifyOutcome::Rejected("tuples must have length at least 2".into());
    }
    if let Some(&p) = cert.i.iter().chain(cert.j.iter()).find(|&&p| (p as usize) >= n) {
        return VerifyOutcome::Rejected(format!("point {p} out of range for degree {n}"));
    }
    let len = cert.i.len() as u32;
    for u in 0..len {
        for v in (u + 1)..len {
            let Some(t) = cert.pair_transporters.get(&(u, v)) else {
                return VerifyOutcome::Rejected(format!("pair ({u},{v}) unproven"));
            };
            if t.degree() != n {
                return VerifyOutcome::Rejected(format!(
                    "pair ({u},{v}) transporter has degree {} ≠ {n}",
                    t.degree()
                ));
            }
            match g.is_member(t) {
                Ok(true) => {}
                Ok(false) => {
                    return VerifyOutcome::Rejected(format!(
                        "pair ({u},{v}) transporter is not an element of the group"
                    ))
                }
                Err(e) => return VerifyOutcome::Rejected(format!("pair ({u},{v}): {e}")),
            }
            let (iu, iv) = (cert.i[u as usize], cert.i[v as usize]);
            let (ju, jv) = (cert.j[u as usize], cert.j[v as usize]);
            if t.image(iu) != ju || t.image(iv) != jv {
                return VerifyOutcome::Rejected(format!(
                    "pair ({u},{v}) transporter does not map ({iu},{iv}) to ({ju},{jv})"
                ));
            }
        }
    }
    match g.transporter(&cert.i, &cert.j) {
        Ok(None) => {}
        Ok(Some(_)) => {
            return VerifyOutcome::Rejected("tuples are conjugate: a full transporter exists".into())
        }
        Err(e) => return VerifyOutcome::Rejected(format!("transporter search failed: {e}")),
    }
    if cert.kind == WitnessKind::Strong {
        let mut seen = vec![false; n];
        for &p in &cert.i {
            seen[p as usize] = true;
        }
        if seen.iter().any(|&s| !s) {
            return VerifyOutcome::Rejected("strong witness must exhaust all points".into());
        }
    }
    VerifyOutcome::Verified
}

/// Builds the pair-transporter table for `I → J`, reusing per-point orbit
/// and stabilizer computations. Fails if some pair is not transportable
/// (the pair of tuples would not be 2-subtuple complete).
pub fn pair_transporter_table(
    g: &PermGroup,
    i: &[Point],
    j: &[Point],
) -> Result<BTreeMap<(u32, u32), Permutation>> {
    if i.len() != j.len() {
        return Err(Error::TupleLengthMismatch {
            left: i.len(),
            right: j.len(),
        });
    }
    let mut orbit_cache: HashMap<Point, OrbitReps> = HashMap::new();
    let mut stab_cache: HashMap<Point, PermGroup> = HashMap::new();
    let mut table = BTreeMap::new();
    for u in 0..i.len() {
        let iu = i[u];
        let ju = j[u];
        let orbit = match orbit_cache.entry(iu) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(g.orbit_reps(iu)?),
        };
        let Some(t0) = orbit.rep_to(ju).cloned() else {
            return Err(Error::Inapplicable(format!(
                "points {iu} and {ju} lie in different orbits"
            )));
        };
        let stab = match stab_cache.entry(ju) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(g.point_stabilizer(ju)?),
        };
        for v in (u + 1)..i.len() {
            let (iv, jv) = (i[v], j[v]);
            let w = t0.image(iv);
            let stab_orbit = stab.orbit_reps(w)?;
            let Some(s) = stab_orbit.rep_to(jv) else {
                return Err(Error::Inapplicable(format!(
                    "pair ({iu},{iv}) cannot be mapped to ({ju},{jv})"
                )));
            };
            let t = t0.then(s);
            debug_assert_eq!(t.image(iu), ju);
            debug_assert_eq!(t.image(iv), jv);
            table.insert((u as u32, v as u32), t);
        }
    }
    Ok(table)
}

/// Checks `r`-subtuple completeness of `(I, J)`: every length-`r` subsequence
/// of `I` can be mapped to the corresponding subsequence of `J` by some
/// element of `G`. On success returns the transporter per index subset
/// (subsets in lexicographic order); `None` means some subtuple has no
/// transporter.
pub fn is_subtuple_complete(
    g: &PermGroup,
    i: &[Point],
    j: &[Point],
    r: u32,
) -> Result<Option<Vec<(Vec<usize>, Permutation)>>> {
    if i.len() != j.len() {
        return Err(Error::TupleLengthMismatch {
            left: i.len(),
            right: j.len(),
        });
    }
    if (r as usize) > i.len() {
        return Ok(Some(Vec::new()));
    }
    let mut table = Vec::new();
    let mut complete = true;
    for_each_combination(i.len(), r as usize, &mut |subset| {
        if !complete {
            return;
        }
        let sub_i: Vec<Point> = subset.iter().map(|&idx| i[idx]).collect();
        let sub_j: Vec<Point> = subset.iter().map(|&idx| j[idx]).collect();
        match g.transporter(&sub_i, &sub_j) {
            Ok(Some(t)) => table.push((subset.to_vec(), t)),
            Ok(None) | Err(_) => complete = false,
        }
    });
    Ok(if complete { Some(table) } else { None })
}

/// Calls `f` with each `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for jj in (i + 1)..k {
            idx[jj] = idx[jj - 1] + 1;
        }
    }
}

/// Outcome of Test 2 (the 2-closure test).
#[derive(Debug)]
pub enum Test2Outcome {
    /// Not 2-closed, hence non-binary. The certificate is present when the
    /// degree is small enough for the pair table to be built.
    NonBinary {
        closure_order: BigUint,
        group_order: BigUint,
        witness_element: Permutation,
        certificate: Option<WitnessCertificate>,
    },
    /// 2-closed: the test says nothing about binarity.
    Inconclusive {
        closure_order: BigUint,
    },
    Skipped {
        reason: String,
    },
}

/// Test 2: compute the 2-closure; if `G ⊊ G^(2)`, any `σ ∈ G^(2) ∖ G` yields
/// a Strong witness `(Ω, Ω^σ)` — 2-subtuple complete because σ preserves
/// orbitals, not conjugate because `I^g = J` entrywise would force `g = σ`.
pub fn witness_from_closure(
    g: &PermGroup,
    group_name: &str,
    budgets: &Budgets,
) -> Result<Test2Outcome> {
    let closure = match two_closure(g, budgets) {
        Ok(c) => c,
        Err(Error::Budget { what, limit }) => {
            return Ok(Test2Outcome::Skipped {
                reason: format!("budget exceeded: {what} (limit {limit})"),
            })
        }
        Err(e) => return Err(e),
    };
    if closure.is_two_closed {
        return Ok(Test2Outcome::Inconclusive {
            closure_order: closure.closure_order,
        });
    }
    let sigma = closure
        .witness_element
        .clone()
        .expect("non-closed result carries a witness element");
    let certificate = if g.degree() <= budgets.witness_degree_cap {
        let i: Vec<Point> = (0..g.degree() as Point).collect();
        let j: Vec<Point> = i.iter().map(|&p| sigma.image(p)).collect();
        let table = pair_transporter_table(g, &i, &j)?;
        Some(WitnessCertificate {
            group_name: group_name.to_string(),
            group: g.clone(),
            i,
            j,
            pair_transporters: table,
            kind: WitnessKind::Strong,
        })
    } else {
        None
    };
    Ok(Test2Outcome::NonBinary {
        closure_order: closure.closure_order,
        group_order: closure.group_order,
        witness_element: sigma,
        certificate,
    })
}

/// Outcome of Test 3 (the triple scan).
#[derive(Debug)]
pub enum Test3Outcome {
    NonBinary(Box<WitnessCertificate>),
    Inconclusive { triples_checked: u64 },
    Skipped { reason: String },
}

/// Test 3: scan triples `(α, β, γ)` vs `(α, β, γ′)` where
/// `γ′ ∈ γ^{G_α} ∩ γ^{G_β}`. Such a pair is automatically 2-subtuple
/// complete; if the triples are not conjugate (`γ′ ∉ γ^{G_αβ}`), it is a
/// witness. Deterministic scan order: `α = 0`, then ascending orbit
/// representatives.
pub fn test3_scan(g: &PermGroup, group_name: &str, budgets: &Budgets) -> Result<Test3Outcome> {
    if !g.is_transitive() {
        return Ok(Test3Outcome::Skipped {
            reason: "action is not transitive".into(),
        });
    }
    let n = g.degree();
    if n < 3 {
        return Ok(Test3Outcome::Inconclusive { triples_checked: 0 });
    }
    let alpha: Point = 0;
    let g_alpha = g.point_stabilizer(alpha)?;
    let alpha_reps = g.orbit_reps(alpha)?;
    let mut triples_checked = 0u64;

    // β ranges over representatives of the G_α-orbits on Ω ∖ {α}.
    for beta_orbit in g_alpha.orbits() {
        let beta = beta_orbit[0];
        if beta == alpha {
            continue;
        }
        let t = alpha_reps
            .rep_to(beta)
            .expect("transitive: β is in the α-orbit");
        // G_β = (G_α)^t with t: α ↦ β.
        let g_beta_gens: Vec<Permutation> = g_alpha
            .generators()
            .iter()
            .map(|s| s.conjugate_by(t))
            .collect();
        let g_beta = PermGroup::new(n, g_beta_gens)?;
        let g_alphabeta = g_alpha.point_stabilizer(beta)?;

        // γ ranges over representatives of the G_αβ-orbits on Ω ∖ {α, β}.
        for gamma_orbit in g_alphabeta.orbits() {
            let gamma = gamma_orbit[0];
            if gamma == alpha || gamma == beta {
                continue;
            }
            let orbit_a = g_alpha.orbit_reps(gamma)?;
            let orbit_b = g_beta.orbit_reps(gamma)?;
            let conj_orbit = g_alphabeta.orbit_of(gamma)?;
            let mut candidates: Vec<Point> = orbit_a
                .points
                .iter()
                .copied()
                .filter(|&p| p != gamma && orbit_b.contains(p))
                .collect();
            candidates.sort_unstable();
            for gamma_prime in candidates {
                triples_checked += 1;
                if triples_checked > budgets.node_budget {
                    return Ok(Test3Outcome::Skipped {
                        reason: format!(
                            "triple scan exceeded the node budget ({})",
                            budgets.node_budget
                        ),
                    });
                }
                if conj_orbit.contains(&gamma_prime) {
                    continue;
                }
                // Witness: (α, β, γ) and (α, β, γ′) are 2-subtuple complete
                // but not conjugate.
                let i = vec![alpha, beta, gamma];
                let j = vec![alpha, beta, gamma_prime];
                let mut table = BTreeMap::new();
                table.insert((0u32, 1u32), Permutation::identity(n));
                table.insert(
                    (0u32, 2u32),
                    orbit_a
                        .rep_to(gamma_prime)
                        .expect("γ′ lies in the G_α-orbit of γ")
                        .clone(),
                );
                table.insert(
                    (1u32, 2u32),
                    orbit_b
                        .rep_to(gamma_prime)
                        .expect("γ′ lies in the G_β-orbit of γ")
                        .clone(),
                );
                let cert = WitnessCertificate {
                    group_name: group_name.to_string(),
                    group: g.clone(),
                    i,
                    j,
                    pair_transporters: table,
                    kind: WitnessKind::Plain,
                };
                debug_assert_eq!(verify_witness(&cert), VerifyOutcome::Verified);
                return Ok(Test3Outcome::NonBinary(Box::new(cert)));
            }
        }
    }
    Ok(Test3Outcome::Inconclusive { triples_checked })
}

/// Result of the brute-force arity oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArityResult {
    Exact(u32),
    /// The budget was hit; the arity is at least this value.
    LowerBound(u32),
}

/// Brute-force relational complexity of the action on injective tuples.
///
/// For every tuple length `m`, orbits of injective `m`-tuples are labeled by
/// BFS in lexicographic order. Distinct orbits whose representatives share
/// the orbit-label vector over all `r`-subsets of positions violate arity
/// `r`; the arity is the least `r ≥ 2` admitting no violation at any length.
/// Intended for degree ≤ 8.
pub fn exact_arity(g: &PermGroup, budgets: &Budgets) -> Result<ArityResult> {
    let n = g.degree();
    if n > 8 {
        return Err(Error::Unsupported(
            "exact arity oracle is limited to degree ≤ 8".into(),
        ));
    }
    if n < 3 {
        return Ok(ArityResult::Exact(2));
    }
    // Orbit tables per length: tuple → orbit id, plus one representative
    // (the lexicographically first tuple) per orbit.
    let mut tables: Vec<HashMap<Vec<Point>, u32>> = Vec::new();
    let mut reps: Vec<Vec<Vec<Point>>> = Vec::new();
    let mut total_tuples: u64 = 0;
    let mut max_len = n;
    for m in 1..=n {
        let tuples_at_m = injective_tuple_count(n, m as u32)
            .to_u64()
            .unwrap_or(u64::MAX);
        if total_tuples.saturating_add(tuples_at_m) > budgets.tuple_budget {
            max_len = m - 1;
            break;
        }
        total_tuples += tuples_at_m;
        let mut table: HashMap<Vec<Point>, u32> = HashMap::new();
        let mut m_reps: Vec<Vec<Point>> = Vec::new();
        let mut tuple: Vec<Point> = Vec::with_capacity(m);
        scan_injective_tuples(n, m, &mut tuple, &mut |t: &[Point]| {
            if table.contains_key(t) {
                return;
            }
            let id = m_reps.len() as u32;
            m_reps.push(t.to_vec());
            let mut queue = vec![t.to_vec()];
            table.insert(t.to_vec(), id);
            let mut head = 0;
            while head < queue.len() {
                let cur = queue[head].clone();
                head += 1;
                for gen in g.generators() {
                    let img: Vec<Point> = cur.iter().map(|&p| gen.image(p)).collect();
                    if !table.contains_key(&img) {
                        table.insert(img.clone(), id);
                        queue.push(img);
                    }
                }
            }
        });
        tables.push(table);
        reps.push(m_reps);
    }
    if max_len < 3 {
        // Could not even examine triples: nothing beyond arity ≥ 2 is known.
        return Ok(ArityResult::LowerBound(2));
    }
    // A violation at (r, m): two distinct m-tuple orbits with equal orbit-id
    // vectors over all r-subsets of positions (in lexicographic order).
    let mut max_violated_r = 1u32;
    for m in 3..=max_len {
        let m_reps = &reps[m - 1];
        for r in 2..m {
            if (r as u32) <= max_violated_r {
                // A violation at r implies one at every smaller r, so only
                // larger r can add information.
                continue;
            }
            let mut signatures: HashMap<Vec<u32>, u32> = HashMap::new();
            for (orbit_id, rep) in m_reps.iter().enumerate() {
                let mut sig: Vec<u32> = Vec::new();
                for_each_combination(m, r, &mut |subset| {
                    let sub: Vec<Point> = subset.iter().map(|&idx| rep[idx]).collect();
                    sig.push(tables[r - 1][&sub]);
                });
                match signatures.get(&sig) {
                    Some(_) => {
                        // Two distinct orbits share all r-subset orbit labels.
                        if (r as u32) > max_violated_r {
                            max_violated_r = r as u32;
                        }
                        break;
                    }
                    None => {
                        signatures.insert(sig, orbit_id as u32);
                    }
                }
            }
        }
    }
    let arity = (max_violated_r + 1).max(2);
    if max_len < n {
        Ok(ArityResult::LowerBound(arity))
    } else {
        Ok(ArityResult::Exact(arity))
    }
}

/// Convenience: true when the oracle proves the action binary.
pub fn is_binary_by_oracle(g: &PermGroup, budgets: &Budgets) -> Result<Option<bool>> {
    match exact_arity(g, budgets)? {
        ArityResult::Exact(a) => Ok(Some(a == 2)),
        ArityResult::LowerBound(a) if a > 2 => Ok(Some(false)),
        ArityResult::LowerBound(_) => Ok(None),
    }
}

/// Which tests the battery runs, and whether it stops at the first
/// non-binary verdict.
#[derive(Debug, Clone)]
pub struct TestSelection {
    pub test1: bool,
    pub test2: bool,
    pub test3: bool,
    /// Run the brute-force oracle when the degree is within its regime.
    pub oracle: bool,
    pub stop_at_first_nonbinary: bool,
}

impl Default for TestSelection {
    fn default() -> Self {
        TestSelection {
            test1: true,
            test2: true,
            test3: true,
            oracle: true,
            stop_at_first_nonbinary: false,
        }
    }
}

impl TestSelection {
    /// Configuration for inner reductions: stop as soon as any test decides.
    pub fn quick() -> Self {
        TestSelection {
            stop_at_first_nonbinary: true,
            ..TestSelection::default()
        }
    }
}

/// Overall verdict for one action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NonBinary,
    /// Proven binary by the exhaustive oracle (only possible at tiny degree).
    Binary,
    Inconclusive,
}

/// Results of running the selected tests on one action.
pub struct BatteryOutcome {
    pub verdict: Verdict,
    /// Which test decided the verdict ("test1", "test2", "test3", "oracle").
    pub verdict_source: Option<&'static str>,
    pub test1: Option<Test1Outcome>,
    pub test2: Option<Test2Outcome>,
    pub test3: Option<Test3Outcome>,
    pub oracle: Option<ArityResult>,
}

impl BatteryOutcome {
    /// All certificates produced by the tests that ran.
    pub fn certificates(&self) -> Vec<&WitnessCertificate> {
        let mut certs = Vec::new();
        if let Some(Test2Outcome::NonBinary {
            certificate: Some(c),
            ..
        }) = &self.test2
        {
            certs.push(c);
        }
        if let Some(Test3Outcome::NonBinary(c)) = &self.test3 {
            certs.push(c.as_ref());
        }
        certs
    }
}

/// Runs the selected tests in a fixed order (1, 2, 3, oracle) and merges
/// their outcomes into a single verdict. Tests never report `Binary`; only
/// the oracle can. A test failing with a budget error is recorded as skipped
/// rather than aborting the battery.
pub fn run_battery(
    g: &PermGroup,
    name: &str,
    selection: &TestSelection,
    budgets: &Budgets,
) -> Result<BatteryOutcome> {
    let mut out = BatteryOutcome {
        verdict: Verdict::Inconclusive,
        verdict_source: None,
        test1: None,
        test2: None,
        test3: None,
        oracle: None,
    };
    if selection.test1 {
        let t1 = test1_character_bound(g, budgets)?;
        if matches!(t1, Test1Outcome::NonBinary(_)) && out.verdict == Verdict::Inconclusive {
            out.verdict = Verdict::NonBinary;
            out.verdict_source = Some("test1");
        }
        out.test1 = Some(t1);
    }
    if selection.test2 && !(out.verdict == Verdict::NonBinary && selection.stop_at_first_nonbinary)
    {
        let t2 = witness_from_closure(g, name, budgets)?;
        if matches!(t2, Test2Outcome::NonBinary { .. }) && out.verdict == Verdict::Inconclusive {
            out.verdict = Verdict::NonBinary;
            out.verdict_source = Some("test2");
        }
        out.test2 = Some(t2);
    }
    if selection.test3 && !(out.verdict == Verdict::NonBinary && selection.stop_at_first_nonbinary)
    {
        let t3 = test3_scan(g, name, budgets)?;
        if matches!(t3, Test3Outcome::NonBinary(_)) && out.verdict == Verdict::Inconclusive {
            out.verdict = Verdict::NonBinary;
            out.verdict_source = Some("test3");
        }
        out.test3 = Some(t3);
    }
    if selection.oracle
        && g.degree() <= 8
        && !(out.verdict == Verdict::NonBinary && selection.stop_at_first_nonbinary)
    {
        let arity = exact_arity(g, budgets)?;
        match &arity {
            ArityResult::Exact(2) => {
                if out.verdict == Verdict::Inconclusive {
                    out.verdict = Verdict::Binary;
                    out.verdict_source = Some("oracle");
                }
            }
            ArityResult::Exact(_) => {
                if out.verdict == Verdict::Inconclusive {
                    out.verdict = Verdict::NonBinary;
                    out.verdict_source = Some("oracle");
                }
            }
            ArityResult::LowerBound(k) if *k > 2 => {
                if out.verdict == Verdict::Inconclusive {
                    out.verdict = Verdict::NonBinary;
                    out.verdict_source = Some("oracle");
                }
            }
            ArityResult::LowerBound(_) => {}
        }
        out.oracle = Some(arity);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(degree: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_generator_strings(degree, gens).unwrap()
    }

    fn a4() -> PermGroup {
        group(4, &["(0 1 2)", "(1 2 3)"])
    }

    #[test]
    fn r_ell_of_a4_both_methods() {
        let budgets = Budgets::default();
        for method in [CountMethod::CharacterSum, CountMethod::DirectOrbit] {
            let r2 = r_ell(&a4(), 2, method, &budgets).unwrap();
            assert_eq!(r2.count, BigUint::from(1u32), "{method:?}");
            let r3 = r_ell(&a4(), 3, method, &budgets).unwrap();
            assert_eq!(r3.count, BigUint::from(2u32), "{method:?}");
        }
    }

    #[test]
    fn character_sum_matches_direct_orbit_on_samples() {
        let budgets = Budgets::default();
        let cases = [
            group(5, &["(0 1 2 3 4)"]),
            group(5, &["(0 1 2 3 4)", "(1 4)(2 3)"]),
            group(6, &["(0 1 2 3 4 5)", "(1 5)(2 4)"]),
            group(4, &["(0 1)", "(0 1 2 3)"]),
        ];
        for g in &cases {
            for ell in 2..=4u32 {
                let a = r_ell(g, ell, CountMethod::CharacterSum, &budgets).unwrap();
                let b = r_ell(g, ell, CountMethod::DirectOrbit, &budgets).unwrap();
                assert_eq!(a.count, b.count, "ℓ = {ell}");
            }
        }
    }

    #[test]
    fn test1_fires_on_a4_at_ell_3() {
        let budgets = Budgets::default();
        match test1_character_bound(&a4(), &budgets).unwrap() {
            Test1Outcome::NonBinary(e) => {
                assert_eq!(e.ell, 3);
                assert_eq!(e.r2, BigUint::from(1u32));
                assert_eq!(e.bound, BigUint::from(1u32));
                assert_eq!(e.r_ell, BigUint::from(2u32));
            }
            other => panic!("expected NonBinary, got {other:?}"),
        }
    }

    #[test]
    fn test1_inconclusive_on_symmetric_group() {
        let budgets = Budgets::default();
        let s5 = group(5, &["(0 1)", "(0 1 2 3 4)"]);
        match test1_character_bound(&s5, &budgets).unwrap() {
            Test1Outcome::Inconclusive { probed } => {
                assert!(!probed.is_empty());
            }
            _ => panic!("S5 should not fire Test 1"),
        }
    }

    #[test]
    fn test3_on_a4_yields_the_expected_witness() {
        let budgets = Budgets::default();
        match test3_scan(&a4(), "A4", &budgets).unwrap() {
            Test3Outcome::NonBinary(cert) => {
                assert_eq!(cert.i, vec![0, 1, 2]);
                assert_eq!(cert.j, vec![0, 1, 3]);
                assert_eq!(verify_witness(&cert), VerifyOutcome::Verified);
            }
            _ => panic!("A4 must produce a Test 3 witness"),
        }
    }

    #[test]
    fn test3_inconclusive_on_c5() {
        let budgets = Budgets::default();
        let c5 = group(5, &["(0 1 2 3 4)"]);
        match test3_scan(&c5, "C5", &budgets).unwrap() {
            Test3Outcome::Inconclusive { .. } => {}
            _ => panic!("C5 regular is binary; the scan must be inconclusive"),
        }
    }

    #[test]
    fn test2_witness_on_a4_is_strong_and_verified() {
        let budgets = Budgets::default();
        match witness_from_closure(&a4(), "A4", &budgets).unwrap() {
            Test2Outcome::NonBinary {
                certificate: Some(cert),
                closure_order,
                ..
            } => {
                assert_eq!(closure_order, BigUint::from(24u32));
                assert_eq!(cert.kind, WitnessKind::Strong);
                assert_eq!(verify_witness(&cert), VerifyOutcome::Verified);
            }
            _ => panic!("A4 is not 2-closed"),
        }
    }

    #[test]
    fn test2_inconclusive_on_two_closed_group() {
        let budgets = Budgets::default();
        let c5 = group(5, &["(0 1 2 3 4)"]);
        match witness_from_closure(&c5, "C5", &budgets).unwrap() {
            Test2Outcome::Inconclusive { closure_order } => {
                assert_eq!(closure_order, BigUint::from(5u32));
            }
            _ => panic!("C5 regular is 2-closed"),
        }
    }

    #[test]
    fn verifier_rejects_tampered_certificates() {
        let budgets = Budgets::default();
        let Test3Outcome::NonBinary(cert) = test3_scan(&a4(), "A4", &budgets).unwrap() else {
            panic!("expected witness");
        };
        // Remove one pair.
        let mut broken = (*cert).clone();
        broken.pair_transporters.remove(&(0, 1));
        assert!(matches!(verify_witness(&broken), VerifyOutcome::Rejected(r) if r.contains("unproven")));
        // Replace a transporter with a non-member.
        let mut broken = (*cert).clone();
        broken
            .pair_transporters
            .insert((0, 1), Permutation::parse("(0 1)", 4).unwrap());
        assert!(matches!(verify_witness(&broken), VerifyOutcome::Rejected(_)));
        // Conjugate tuples are rejected: in S4 the same tuples are conjugate.
        let s4 = group(4, &["(0 1)", "(0 1 2 3)"]);
        let conjugate_cert = WitnessCertificate {
            group_name: "S4".into(),
            group: s4.clone(),
            i: vec![0, 1, 2],
            j: vec![0, 1, 3],
            pair_transporters: pair_transporter_table(&s4, &[0, 1, 2], &[0, 1, 3]).unwrap(),
            kind: WitnessKind::Plain,
        };
        assert!(matches!(verify_witness(&conjugate_cert), VerifyOutcome::Rejected(r) if r.contains("conjugate")));
        // Strong kind without exhausting Ω is rejected.
        let mut broken = (*cert).clone();
        broken.kind = WitnessKind::Strong;
        assert!(matches!(verify_witness(&broken), VerifyOutcome::Rejected(r) if r.contains("exhaust")));
    }

    #[test]
    fn subtuple_completeness_checks() {
        let g = a4();
        let table = is_subtuple_complete(&g, &[0, 1, 2], &[0, 1, 3], 2)
            .unwrap()
            .expect("2-subtuple complete");
        assert_eq!(table.len(), 3);
        for (subset, t) in &table {
            for &idx in subset {
                assert_eq!(t.image([0, 1, 2][idx]), [0, 1, 3][idx]);
            }
        }
        assert!(is_subtuple_complete(&g, &[0, 1, 2], &[0, 1, 3], 3)
            .unwrap()
            .is_none());
        // I = J is r-subtuple complete for every r.
        assert!(is_subtuple_complete(&g, &[0, 1, 2], &[0, 1, 2], 3)
            .unwrap()
            .is_some());
    }

    #[test]
    fn arity_oracle_on_known_groups() {
        let budgets = Budgets::default();
        // Symmetric groups in their natural action are binary.
        assert_eq!(
            exact_arity(&group(4, &["(0 1)", "(0 1 2 3)"]), &budgets).unwrap(),
            ArityResult::Exact(2)
        );
        assert_eq!(
            exact_arity(&group(5, &["(0 1)", "(0 1 2 3 4)"]), &budgets).unwrap(),
            ArityResult::Exact(2)
        );
        // Cyclic regular actions are binary.
        assert_eq!(
            exact_arity(&group(5, &["(0 1 2 3 4)"]), &budgets).unwrap(),
            ArityResult::Exact(2)
        );
        // A4 natural is not binary (witness (0,1,2) vs (0,1,3)).
        match exact_arity(&a4(), &budgets).unwrap() {
            ArityResult::Exact(a) => assert!(a > 2, "A4 arity {a}"),
            _ => panic!("degree 4 fits the budget"),
        }
    }

    #[test]
    fn combination_enumeration_is_lexicographic() {
        let mut out = Vec::new();
        for_each_combination(4, 2, &mut |c| out.push(c.to_vec()));
        assert_eq!(
            out,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }
}
