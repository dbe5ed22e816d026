//! Scale-independent reductions.
//!
//! These criteria avoid constructing the (possibly enormous) action being
//! analyzed: exact fixed-point formulas, two lemma-based witness
//! constructions (`lemma_m2_witness`, `lemma_added_witness`), suborbit
//! reduction (Test 4), and the divisibility criterion (Test 5), which needs
//! only the abstract point stabilizer and the size of the big domain.

use crate::action::{coset_action, induced_action};
use crate::binarity::{
    pair_transporter_table, run_battery, verify_witness, BatteryOutcome, TestSelection, Verdict,
    VerifyOutcome, WitnessCertificate, WitnessKind,
};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{Permutation, Point};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

// ---------------------------------------------------------------------------
// Fixed-point counts
// ---------------------------------------------------------------------------

/// How a fixed-point count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixSource {
    DirectCount,
    ClassFormula,
}

/// A fixed-point count together with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixData {
    pub fix_count: BigUint,
    pub source: FixSource,
}

/// Counts the points fixed by `x`, verifying that `x` lies in `g`.
pub fn fix_count_direct(g: &PermGroup, x: &Permutation) -> Result<FixData> {
    if !g.is_member(x)? {
        return Err(Error::NotAMember);
    }
    Ok(FixData {
        fix_count: BigUint::from(x.fixed_point_count() as u64),
        source: FixSource::DirectCount,
    })
}

fn exact_div(numerator: BigUint, denominator: &BigUint) -> Result<BigUint> {
    if denominator.is_zero() {
        return Err(Error::NotIntegral {
            numerator: numerator.to_string(),
            denominator: denominator.to_string(),
        });
    }
    let (q, r) = numerator.div_rem(denominator);
    if !r.is_zero() {
        return Err(Error::NotIntegral {
            numerator: numerator.to_string(),
            denominator: denominator.to_string(),
        });
    }
    Ok(q)
}

/// Fixed points of `g` on the cosets of `M` from class data:
/// `|Ω| · |M ∩ g^G| / |g^G|`. The same formula computes `|Fix(V)|` for a
/// subgroup `V` with `class_in_m = |{V^g ≤ M}|` and `class_in_g = |V^G|`.
/// Exact integer arithmetic; a non-integral quotient signals inconsistent
/// inputs.
pub fn fix_count_formula(
    omega_size: &BigUint,
    class_in_m: &BigUint,
    class_in_g: &BigUint,
) -> Result<FixData> {
    if omega_size.is_zero() || class_in_g.is_zero() {
        return Err(Error::Inapplicable(
            "formula inputs |Ω| and |g^G| must be positive".into(),
        ));
    }
    let fix_count = exact_div(omega_size * class_in_m, class_in_g)?;
    Ok(FixData {
        fix_count,
        source: FixSource::ClassFormula,
    })
}

/// The centralizer form of the same count: `|C_G(g)| / |C_M(g)|`
/// (equivalently `|N_G(V)| / |N_M(V)|` for the subgroup variant).
pub fn fix_count_centralizer(cent_g: &BigUint, cent_m: &BigUint) -> Result<FixData> {
    let fix_count = exact_div(cent_g.clone(), cent_m)?;
    Ok(FixData {
        fix_count,
        source: FixSource::ClassFormula,
    })
}

// ---------------------------------------------------------------------------
// Conjugacy helpers
// ---------------------------------------------------------------------------

/// The conjugacy class of `x` in `g`, in BFS order (conjugating by the
/// generators of `g` in order).
pub fn conjugacy_class(g: &PermGroup, x: &Permutation, budgets: &Budgets) -> Result<Vec<Permutation>> {
    if !g.is_member(x)? {
        return Err(Error::NotAMember);
    }
    let mut seen: HashSet<Vec<Point>> = HashSet::new();
    let mut class = vec![x.clone()];
    seen.insert(x.images().to_vec());
    let mut head = 0;
    while head < class.len() {
        let cur = class[head].clone();
        head += 1;
        for gen in g.generators() {
            let conj = cur.conjugate_by(gen);
            if seen.insert(conj.images().to_vec()) {
                if class.len() as u64 >= budgets.element_cap {
                    return Err(Error::Budget {
                        what: "conjugacy class enumeration",
                        limit: budgets.element_cap,
                    });
                }
                class.push(conj);
            }
        }
    }
    Ok(class)
}

/// Finds some `t` in `g` with `from^t = to` (conjugation), or `None`.
/// BFS over the conjugacy class of `from`, tracking the conjugating word.
pub fn conjugating_element(
    g: &PermGroup,
    from: &Permutation,
    to: &Permutation,
    budgets: &Budgets,
) -> Result<Option<Permutation>> {
    if !g.is_member(from)? || !g.is_member(to)? {
        return Err(Error::NotAMember);
    }
    if from == to {
        return Ok(Some(Permutation::identity(g.degree())));
    }
    let mut seen: HashMap<Vec<Point>, ()> = HashMap::new();
    let mut queue: VecDeque<(Permutation, Permutation)> = VecDeque::new();
    seen.insert(from.images().to_vec(), ());
    queue.push_back((from.clone(), Permutation::identity(g.degree())));
    while let Some((cur, word)) = queue.pop_front() {
        for gen in g.generators() {
            let conj = cur.conjugate_by(gen);
            if !seen.contains_key(conj.images()) {
                let next_word = word.then(gen);
                if &conj == to {
                    debug_assert_eq!(&from.conjugate_by(&next_word), to);
                    return Ok(Some(next_word));
                }
                seen.insert(conj.images().to_vec(), ());
                if seen.len() as u64 >= budgets.element_cap {
                    return Err(Error::Budget {
                        what: "conjugacy search",
                        limit: budgets.element_cap,
                    });
                }
                queue.push_back((conj, next_word));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Lemma-based witness constructions
// ---------------------------------------------------------------------------

/// Result of a lemma-based construction: a certificate, or the reason the
/// hypotheses do not hold.
pub enum LemmaOutcome<T> {
    Applicable(T),
    NotApplicable(String),
}

/// Witness produced by `lemma_m2_witness`, with the constructed Λ in
/// construction order `α_0, …, α_{3p−1}` for shape inspection.
pub struct LemmaM2Witness {
    pub certificate: WitnessCertificate,
    pub lambda: Vec<Point>,
    pub p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn divisible(n: &BigUint, by: u64) -> bool {
    (n % BigUint::from(by)).is_zero()
}

/// True when `h` is a power of `g` (with `g` of small order `p`).
fn is_power_of(h: &Permutation, g: &Permutation, p: u64) -> bool {
    let mut cur = Permutation::identity(g.degree());
    for _ in 0..p {
        if &cur == h {
            return true;
        }
        cur = cur.then(g);
    }
    false
}

/// Checks the three cycle shapes of `g`, `h`, `gh` on the constructed
/// `lambda` (in construction order): `g` fixes the first block and cycles
/// the second and third; `h` cycles the first, fixes the second, and cycles
/// the third inversely to `g`; `gh` cycles the first and second and fixes
/// the third.
pub fn lemma_m2_shapes(lambda: &[Point], g: &Permutation, h: &Permutation, p: u64) -> bool {
    let p = p as usize;
    if lambda.len() != 3 * p {
        return false;
    }
    let gh = g.then(h);
    let a = lambda;
    for i in 0..p {
        let next = (i + 1) % p;
        let prev = (i + p - 1) % p;
        // First block.
        if g.image(a[i]) != a[i] || h.image(a[i]) != a[next] || gh.image(a[i]) != a[next] {
            return false;
        }
        // Second block.
        if g.image(a[p + i]) != a[p + next]
            || h.image(a[p + i]) != a[p + i]
            || gh.image(a[p + i]) != a[p + next]
        {
            return false;
        }
        // Third block.
        if g.image(a[2 * p + i]) != a[2 * p + next]
            || h.image(a[2 * p + i]) != a[2 * p + prev]
            || gh.image(a[2 * p + i]) != a[2 * p + i]
        {
            return false;
        }
    }
    true
}

/// The M2 construction: for transitive `G` with `p | |Ω|`, `p | |G_α|`,
/// `p² ∤ |G_α|`, and an elementary abelian `V = ⟨g,h⟩` of order `p²` with
/// `g ∈ G_α` and `h`, `gh` conjugate to `g`, builds the 3p-point set
/// `Λ = {α_0,…,α_{3p−1}}` (`α_i = α_0^{h^i}`, `α_{p+i} = α_p^{g^i}`,
/// `α_{2p+i} = α_{2p}^{g^i}`) and the non-binarity witness `(Λ, Λ^τ)` where
/// `τ` is the p-cycle on the middle block. The pair transporters are
/// `identity`, `g`, and `gh` — no search is needed.
pub fn lemma_m2_witness(
    g_group: &PermGroup,
    group_name: &str,
    alpha: Point,
    p: u64,
    g: &Permutation,
    h: &Permutation,
    budgets: &Budgets,
) -> Result<LemmaOutcome<LemmaM2Witness>> {
    let na = |reason: String| Ok(LemmaOutcome::NotApplicable(reason));
    if !is_prime(p) {
        return na(format!("p = {p} is not prime"));
    }
    if !g_group.is_transitive() {
        return na("the action is not transitive".into());
    }
    if !g_group.is_member(g)? || !g_group.is_member(h)? {
        return na("g and h must be elements of the group".into());
    }
    if g.image(alpha) != alpha {
        return na(format!("g does not fix α = {alpha}"));
    }
    if !g.has_order(p) || !h.has_order(p) {
        return na(format!("g and h must have order exactly {p}"));
    }
    if g.then(h) != h.then(g) {
        return na("g and h do not commute".into());
    }
    if is_power_of(h, g, p) {
        return na("⟨g,h⟩ is not of order p² (h is a power of g)".into());
    }
    let degree = g_group.degree() as u64;
    if degree % p != 0 {
        return na(format!("p = {p} does not divide |Ω| = {degree}"));
    }
    let g_alpha = g_group.point_stabilizer(alpha)?;
    let stab_order = g_alpha.order();
    if !divisible(&stab_order, p) {
        return na(format!("p = {p} does not divide |G_α| = {stab_order}"));
    }
    if divisible(&stab_order, p * p) {
        return na(format!("p² = {} divides |G_α| = {stab_order}", p * p));
    }
    let Some(x) = conjugating_element(g_group, g, h, budgets)? else {
        return na("h is not conjugate to g".into());
    };
    let gh = g.then(h);
    let Some(y) = conjugating_element(g_group, g, &gh, budgets)? else {
        return na("gh is not conjugate to g".into());
    };

    // Λ in construction order.
    let p_us = p as usize;
    let mut lambda: Vec<Point> = Vec::with_capacity(3 * p_us);
    let alpha_p = x.image(alpha);
    let alpha_2p = y.image(alpha);
    let mut cur = alpha;
    for _ in 0..p_us {
        lambda.push(cur);
        cur = h.image(cur);
    }
    cur = alpha_p;
    for _ in 0..p_us {
        lambda.push(cur);
        cur = g.image(cur);
    }
    cur = alpha_2p;
    for _ in 0..p_us {
        lambda.push(cur);
        cur = g.image(cur);
    }
    let distinct: HashSet<Point> = lambda.iter().copied().collect();
    if distinct.len() != 3 * p_us {
        return na("the constructed Λ is degenerate (hypotheses inconsistent)".into());
    }
    if !lemma_m2_shapes(&lambda, g, h, p) {
        return na("the induced cycle shapes on Λ do not hold (hypotheses inconsistent)".into());
    }

    // Witness: I = sorted Λ, J = I^τ with τ the p-cycle on the middle block.
    let second: Vec<Point> = lambda[p_us..2 * p_us].to_vec();
    let third: HashSet<Point> = lambda[2 * p_us..].iter().copied().collect();
    let second_set: HashSet<Point> = second.iter().copied().collect();
    let tau_image = |w: Point| -> Point {
        match second.iter().position(|&s| s == w) {
            Some(i) => second[(i + 1) % p_us],
            None => w,
        }
    };
    let mut i_tuple: Vec<Point> = lambda.clone();
    i_tuple.sort_unstable();
    let j_tuple: Vec<Point> = i_tuple.iter().map(|&w| tau_image(w)).collect();
    let mut table = BTreeMap::new();
    let len = i_tuple.len();
    for u in 0..len {
        for v in (u + 1)..len {
            let (a, b) = (i_tuple[u], i_tuple[v]);
            let t = if !second_set.contains(&a) && !second_set.contains(&b) {
                Permutation::identity(g_group.degree())
            } else if third.contains(&a) || third.contains(&b) {
                gh.clone()
            } else {
                g.clone()
            };
            debug_assert_eq!(t.image(a), tau_image(a));
            debug_assert_eq!(t.image(b), tau_image(b));
            table.insert((u as u32, v as u32), t);
        }
    }
    let kind = if i_tuple.len() == g_group.degree() {
        WitnessKind::Strong
    } else {
        WitnessKind::Plain
    };
    let certificate = WitnessCertificate {
        group_name: group_name.to_string(),
        group: g_group.clone(),
        i: i_tuple,
        j: j_tuple,
        pair_transporters: table,
        kind,
    };
    match verify_witness(&certificate) {
        VerifyOutcome::Verified => Ok(LemmaOutcome::Applicable(LemmaM2Witness {
            certificate,
            lambda,
            p,
        })),
        VerifyOutcome::Rejected(reason) => na(format!(
            "hypotheses inconsistent (the middle cycle is induced by the group): {reason}"
        )),
    }
}

/// Witness produced by `lemma_added_witness`, with the three disjoint
/// permutations of the construction.
pub struct LemmaAddedWitness {
    pub certificate: WitnessCertificate,
    pub lambda: Vec<Point>,
    pub tau1: Permutation,
    pub tau2: Permutation,
    pub tau3: Permutation,
}

/// `x` restricted to `fixed` (a set it preserves), extended by the identity.
fn restriction_to_set(x: &Permutation, fixed: &[Point], degree: usize) -> Result<Permutation> {
    let set: HashSet<Point> = fixed.iter().copied().collect();
    let mut images: Vec<Point> = (0..degree as Point).collect();
    for &w in fixed {
        let img = x.image(w);
        if !set.contains(&img) {
            return Err(Error::Inapplicable(
                "set is not invariant under the element".into(),
            ));
        }
        images[w as usize] = img;
    }
    Permutation::from_images(images)
}

/// The fixed-set construction: if `g`, `h`, `gh⁻¹` are order-`p`,
/// `G`-conjugate, generate an elementary abelian `p²`, no order-`p` element
/// fixes more points than `g`, and `|Fix(V)| < |Fix(g)|`, then
/// `Λ = Fix(g) ∪ Fix(h) ∪ Fix(gh⁻¹)` carries the witness `(Λ, Λ^{τ₁})`
/// where `τ₁` is `g` restricted to `Fix(gh⁻¹)`. Pair transporters are
/// `identity`, `g`, and `h`.
pub fn lemma_added_witness(
    g_group: &PermGroup,
    group_name: &str,
    g: &Permutation,
    h: &Permutation,
    p: u64,
    budgets: &Budgets,
) -> Result<LemmaOutcome<LemmaAddedWitness>> {
    let na = |reason: String| Ok(LemmaOutcome::NotApplicable(reason));
    if !is_prime(p) {
        return na(format!("p = {p} is not prime"));
    }
    if !g_group.is_member(g)? || !g_group.is_member(h)? {
        return na("g and h must be elements of the group".into());
    }
    if !g.has_order(p) || !h.has_order(p) {
        return na(format!("g and h must have order exactly {p}"));
    }
    if g.then(h) != h.then(g) {
        return na("g and h do not commute".into());
    }
    if is_power_of(h, g, p) {
        return na("⟨g,h⟩ is not of order p² (h is a power of g)".into());
    }
    let ghinv = g.then(&h.inverse());
    if conjugating_element(g_group, g, h, budgets)?.is_none() {
        return na("h is not conjugate to g".into());
    }
    if conjugating_element(g_group, g, &ghinv, budgets)?.is_none() {
        return na("gh⁻¹ is not conjugate to g".into());
    }
    // Maximal fixity of g among order-p elements, by full enumeration.
    if g_group.order() > BigUint::from(budgets.element_cap) {
        return na("group too large to scan its order-p elements".into());
    }
    let fix_g_count = g.fixed_point_count();
    for e in g_group.chain().elements() {
        if e.has_order(p) && e.fixed_point_count() > fix_g_count {
            return na(format!(
                "an order-{p} element fixes {} > {fix_g_count} points",
                e.fixed_point_count()
            ));
        }
    }
    let fix_g = g.fixed_points();
    let fix_h = h.fixed_points();
    let fix_ghinv = ghinv.fixed_points();
    let fix_h_set: HashSet<Point> = fix_h.iter().copied().collect();
    let fix_v: Vec<Point> = fix_g.iter().copied().filter(|w| fix_h_set.contains(w)).collect();
    if fix_v.len() >= fix_g.len() {
        return na(format!(
            "|Fix(V)| = {} is not smaller than |Fix(g)| = {}",
            fix_v.len(),
            fix_g.len()
        ));
    }
    let degree = g_group.degree();
    let mut lambda: Vec<Point> = fix_g
        .iter()
        .chain(fix_h.iter())
        .chain(fix_ghinv.iter())
        .copied()
        .collect();
    lambda.sort_unstable();
    lambda.dedup();

    let tau1 = restriction_to_set(g, &fix_ghinv, degree)?;
    let tau2 = restriction_to_set(g, &fix_h, degree)?;
    let tau3 = restriction_to_set(h, &fix_g, degree)?;
    if tau1.is_identity() || tau2.is_identity() || tau3.is_identity() {
        return na("a restricted permutation is trivial (hypotheses inconsistent)".into());
    }
    let supp1: HashSet<Point> = tau1.support().into_iter().collect();
    let supp2: HashSet<Point> = tau2.support().into_iter().collect();
    let supp3: HashSet<Point> = tau3.support().into_iter().collect();
    if !supp1.is_disjoint(&supp2) || !supp1.is_disjoint(&supp3) || !supp2.is_disjoint(&supp3) {
        return na("the three restricted permutations are not disjoint".into());
    }
    // g acts on Λ as τ₁τ₂ and h as τ₁τ₃ — verify pointwise.
    for &w in &lambda {
        if g.image(w) != tau1.image(tau2.image(w)) || h.image(w) != tau1.image(tau3.image(w)) {
            return na("induced permutations on Λ do not decompose as expected".into());
        }
    }

    let i_tuple = lambda.clone();
    let j_tuple: Vec<Point> = i_tuple.iter().map(|&w| tau1.image(w)).collect();
    let mut table = BTreeMap::new();
    let len = i_tuple.len();
    for u in 0..len {
        for v in (u + 1)..len {
            let (a, b) = (i_tuple[u], i_tuple[v]);
            let t = if !supp1.contains(&a) && !supp1.contains(&b) {
                Permutation::identity(degree)
            } else if supp2.contains(&a) || supp2.contains(&b) {
                h.clone()
            } else {
                g.clone()
            };
            debug_assert_eq!(t.image(a), tau1.image(a));
            debug_assert_eq!(t.image(b), tau1.image(b));
            table.insert((u as u32, v as u32), t);
        }
    }
    let kind = if i_tuple.len() == degree {
        WitnessKind::Strong
    } else {
        WitnessKind::Plain
    };
    let certificate = WitnessCertificate {
        group_name: group_name.to_string(),
        group: g_group.clone(),
        i: i_tuple,
        j: j_tuple,
        pair_transporters: table,
        kind,
    };
    match verify_witness(&certificate) {
        VerifyOutcome::Verified => Ok(LemmaOutcome::Applicable(LemmaAddedWitness {
            certificate,
            lambda,
            tau1,
            tau2,
            tau3,
        })),
        VerifyOutcome::Rejected(reason) => na(format!(
            "hypotheses inconsistent (τ₁ is induced by the group): {reason}"
        )),
    }
}

/// Re-expresses a certificate for an induced action on `lambda` (sorted
/// parent points) in parent coordinates, rebuilding the pair transporters
/// inside the parent group. Sound because any parent element mapping the
/// lifted `I` to `J` would stabilize `lambda` setwise and contradict the
/// original certificate.
pub fn lift_witness(
    parent: &PermGroup,
    lambda: &[Point],
    cert: &WitnessCertificate,
) -> Result<WitnessCertificate> {
    if cert.group.degree() != lambda.len() {
        return Err(Error::DegreeMismatch {
            left: cert.group.degree(),
            right: lambda.len(),
        });
    }
    if lambda.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parse("lambda must be strictly ascending".into()));
    }
    if let Some(&p) = lambda.iter().find(|&&p| p as usize >= parent.degree()) {
        return Err(Error::PointOutOfRange {
            point: p,
            degree: parent.degree(),
        });
    }
    let lift = |idx: Point| lambda[idx as usize];
    let i_parent: Vec<Point> = cert.i.iter().map(|&w| lift(w)).collect();
    let j_parent: Vec<Point> = cert.j.iter().map(|&w| lift(w)).collect();
    let table = pair_transporter_table(parent, &i_parent, &j_parent)?;
    let kind = if cert.kind == WitnessKind::Strong && lambda.len() == parent.degree() {
        WitnessKind::Strong
    } else {
        WitnessKind::Plain
    };
    let lifted = WitnessCertificate {
        group_name: cert.group_name.clone(),
        group: parent.clone(),
        i: i_parent,
        j: j_parent,
        pair_transporters: table,
        kind,
    };
    match verify_witness(&lifted) {
        VerifyOutcome::Verified => Ok(lifted),
        VerifyOutcome::Rejected(reason) => Err(Error::Inapplicable(format!(
            "lifted certificate failed verification: {reason}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Test 4: suborbit reduction
// ---------------------------------------------------------------------------

/// Verdict for one suborbit.
pub struct SuborbitReport {
    pub representative: Point,
    pub size: usize,
    pub verdict: Verdict,
    pub verdict_source: Option<&'static str>,
}

/// Outcome of the suborbit reduction.
pub struct SuborbitOutcome {
    pub verdict: Verdict,
    /// The suborbit whose induced action was non-binary, if any.
    pub firing_suborbit: Option<Vec<Point>>,
    /// Battery results on the firing suborbit (certificates are expressed
    /// against the induced action).
    pub firing_battery: Option<BatteryOutcome>,
    pub per_suborbit: Vec<SuborbitReport>,
}

/// Test 4: for each `G_α`-orbit `Λ` on `Ω ∖ {α}` (ascending by size, then by
/// smallest point), run the battery on the action of `G_α` restricted to
/// `Λ`; the first non-binary suborbit action proves `G` non-binary.
pub fn suborbit_reduction(
    g: &PermGroup,
    name: &str,
    alpha: Point,
    budgets: &Budgets,
) -> Result<SuborbitOutcome> {
    if !g.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let g_alpha = g.point_stabilizer(alpha)?;
    let mut suborbits: Vec<Vec<Point>> = g_alpha
        .orbits()
        .into_iter()
        .filter(|orbit| !orbit.contains(&alpha))
        .collect();
    suborbits.sort_by_key(|orbit| (orbit.len(), orbit.iter().min().copied()));
    let mut out = SuborbitOutcome {
        verdict: Verdict::Inconclusive,
        firing_suborbit: None,
        firing_battery: None,
        per_suborbit: Vec::new(),
    };
    for orbit in suborbits {
        let induced = induced_action(&g_alpha, &orbit, budgets)?;
        let sub_name = format!("{name} | suborbit of size {}", orbit.len());
        let battery = run_battery(&induced.group, &sub_name, &TestSelection::quick(), budgets)?;
        let rep = *orbit.iter().min().expect("orbits are nonempty");
        out.per_suborbit.push(SuborbitReport {
            representative: rep,
            size: orbit.len(),
            verdict: battery.verdict,
            verdict_source: battery.verdict_source,
        });
        if battery.verdict == Verdict::NonBinary {
            out.verdict = Verdict::NonBinary;
            out.firing_suborbit = Some(induced.lambda.clone());
            out.firing_battery = Some(battery);
            break;
        }
    }
    Ok(out)
}

/// The abstract form of Test 4: given the point stabilizer `M` and an
/// explicit subgroup `H = M ∩ M^g`, analyze the coset action of `M` on `H`
/// without ever constructing the big action. Returns the battery outcome
/// and the realized degree.
pub fn suborbit_reduction_abstract(
    m: &PermGroup,
    h: &PermGroup,
    name: &str,
    selection: &TestSelection,
    budgets: &Budgets,
) -> Result<(BatteryOutcome, u64)> {
    let action = coset_action(m, h, budgets)?;
    let degree = action.index;
    let battery = run_battery(
        &action.group,
        &format!("{name} | cosets of index {degree}"),
        selection,
        budgets,
    )?;
    Ok((battery, degree))
}

// ---------------------------------------------------------------------------
// Subgroup machinery for Test 5
// ---------------------------------------------------------------------------

/// Hard cap on enumerated subgroups, independent of element budgets.
const SUBGROUP_CAP: usize = 20_000;

/// True when `a^x = b` for some `x` in `m` (subgroup conjugacy), checked by
/// scanning the elements of `m`.
pub fn subgroups_conjugate(
    m: &PermGroup,
    a: &PermGroup,
    b: &PermGroup,
    budgets: &Budgets,
) -> Result<bool> {
    if a.order() != b.order() {
        return Ok(false);
    }
    if a.same_group_as(b) {
        return Ok(true);
    }
    if m.order() > BigUint::from(budgets.element_cap) {
        return Err(Error::Budget {
            what: "subgroup conjugacy scan",
            limit: budgets.element_cap,
        });
    }
    for x in m.chain().elements() {
        if a.generators()
            .iter()
            .all(|g| b.chain().contains(&g.conjugate_by(&x)))
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The smallest block of imprimitivity of `g` (transitive on `0..n`)
/// containing both `0` and `a`, as a sorted point list. Union-find with a
/// merge worklist.
fn minimal_block_with(g: &PermGroup, a: Point) -> Vec<Point> {
    let n = g.degree();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut worklist: Vec<(usize, usize)> = vec![(0, a as usize)];
    parent[a as usize] = 0;
    while let Some((u, v)) = worklist.pop() {
        for gen in g.generators() {
            let (gu, gv) = (gen.image(u as Point) as usize, gen.image(v as Point) as usize);
            let (ru, rv) = (find(&mut parent, gu), find(&mut parent, gv));
            if ru != rv {
                let (hi, lo) = if ru > rv { (ru, rv) } else { (rv, ru) };
                parent[hi] = lo;
                worklist.push((hi, lo));
            }
        }
    }
    let root0 = find(&mut parent, 0);
    (0..n)
        .filter(|&x| find(&mut parent, x) == root0)
        .map(|x| x as Point)
        .collect()
}

/// The minimal subgroups strictly between `seed` and `m`, read off from the
/// minimal block systems of the action of `m` on the cosets of `seed`: a
/// block containing the trivial coset is exactly the coset set of an
/// overgroup, generated by `seed` and the reps of the cosets in the block.
fn minimal_overgroups(m: &PermGroup, seed: &PermGroup, budgets: &Budgets) -> Result<Vec<PermGroup>> {
    if seed.order() == m.order() {
        return Ok(Vec::new());
    }
    let action = coset_action(m, seed, budgets)?;
    let n = action.group.degree();
    let mut seen_blocks: HashSet<Vec<Point>> = HashSet::new();
    let mut out = Vec::new();
    let mut found_full = false;
    for a in 1..n as Point {
        let block = minimal_block_with(&action.group, a);
        if block.len() == n {
            found_full = true;
            continue;
        }
        if !seen_blocks.insert(block.clone()) {
            continue;
        }
        let mut gens = seed.generators().to_vec();
        for &c in &block {
            if c != 0 {
                gens.push(action.reps[c as usize].clone());
            }
        }
        out.push(PermGroup::new(m.degree(), gens)?);
    }
    if found_full {
        out.push(m.clone());
    }
    Ok(out)
}

/// All subgroups of `m` containing `seed`, found by repeatedly adjoining
/// minimal overgroups. Returns every such subgroup exactly once (as a set,
/// not up to conjugacy), in a deterministic discovery order.
fn overgroups_of(m: &PermGroup, seed: &PermGroup, budgets: &Budgets) -> Result<Vec<PermGroup>> {
    let mut found: Vec<PermGroup> = vec![seed.clone()];
    let mut head = 0;
    while head < found.len() {
        let h = found[head].clone();
        head += 1;
        for joined in minimal_overgroups(m, &h, budgets)? {
            if !found.iter().any(|k| k.same_group_as(&joined)) {
                if found.len() >= SUBGROUP_CAP {
                    return Err(Error::Budget {
                        what: "overgroup enumeration",
                        limit: SUBGROUP_CAP as u64,
                    });
                }
                found.push(joined);
            }
        }
    }
    Ok(found)
}

/// Every subgroup of `m` (each exactly once as a set). Feasible only for
/// small groups; used as the validation oracle for `sylow_overgroups` and
/// for the `p ∤ |M|` degenerate case.
pub fn all_subgroups(m: &PermGroup, budgets: &Budgets) -> Result<Vec<PermGroup>> {
    overgroups_of(m, &PermGroup::trivial(m.degree()), budgets)
}

/// Deduplicates a list of subgroups of `m` up to `m`-conjugacy, keeping the
/// first representative of each class.
pub fn dedupe_up_to_conjugacy(
    m: &PermGroup,
    subgroups: Vec<PermGroup>,
    budgets: &Budgets,
) -> Result<Vec<PermGroup>> {
    let mut classes: Vec<PermGroup> = Vec::new();
    for h in subgroups {
        let mut fresh = true;
        for rep in &classes {
            if subgroups_conjugate(m, rep, &h, budgets)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            classes.push(h);
        }
    }
    Ok(classes)
}

fn p_part(order: &BigUint, p: u64) -> BigUint {
    let p_big = BigUint::from(p);
    let mut part = BigUint::one();
    let mut rest = order.clone();
    loop {
        let (q, r) = rest.div_rem(&p_big);
        if !r.is_zero() {
            return part;
        }
        part *= &p_big;
        rest = q;
    }
}

fn is_p_power(n: &BigUint, p: u64) -> bool {
    let p_big = BigUint::from(p);
    let mut rest = n.clone();
    while rest > BigUint::one() {
        let (q, r) = rest.div_rem(&p_big);
        if !r.is_zero() {
            return false;
        }
        rest = q;
    }
    true
}

/// A Sylow `p`-subgroup of `m`, grown greedily: repeatedly adjoin the first
/// `p`-element whose join with the current `p`-subgroup is again a
/// `p`-group. Such an element always exists while the subgroup is not yet
/// Sylow (any Sylow overgroup normalizes a strictly larger intermediate
/// `p`-subgroup), so the loop never stalls.
pub fn sylow_subgroup(m: &PermGroup, p: u64, budgets: &Budgets) -> Result<PermGroup> {
    if !is_prime(p) {
        return Err(Error::Unsupported(format!("p = {p} is not prime")));
    }
    if m.order() > BigUint::from(budgets.element_cap) {
        return Err(Error::Budget {
            what: "element enumeration for Sylow search",
            limit: budgets.element_cap,
        });
    }
    let target = p_part(&m.order(), p);
    let mut current = PermGroup::trivial(m.degree());
    while current.order() < target {
        let mut grown = false;
        for x in m.chain().elements() {
            if !is_p_power(&x.element_order(), p) || current.chain().contains(&x) {
                continue;
            }
            let mut gens = current.generators().to_vec();
            gens.push(x.clone());
            let joined = PermGroup::new(m.degree(), gens)?;
            if is_p_power(&joined.order(), p) && joined.order() > current.order() {
                current = joined;
                grown = true;
                break;
            }
        }
        if !grown {
            return Err(Error::Unsupported(
                "internal error: Sylow growth stalled".into(),
            ));
        }
    }
    Ok(current)
}

/// All subgroups `H` with `P ≤ H ≤ M` for a fixed Sylow `p`-subgroup `P`,
/// up to `M`-conjugacy, sorted by index in `M` (these are exactly the point
/// stabilizers of the transitive actions of `M` of degree coprime to `p`).
/// When `p ∤ |M|` every subgroup qualifies and the full lattice is
/// enumerated instead.
pub fn sylow_overgroups(m: &PermGroup, p: u64, budgets: &Budgets) -> Result<Vec<PermGroup>> {
    let all = if divisible(&m.order(), p) {
        let sylow = sylow_subgroup(m, p, budgets)?;
        overgroups_of(m, &sylow, budgets)?
    } else {
        all_subgroups(m, budgets)?
    };
    let mut classes = dedupe_up_to_conjugacy(m, all, budgets)?;
    classes.sort_by_key(|h| (m.order() / h.order(), h.order()));
    Ok(classes)
}

// ---------------------------------------------------------------------------
// Test 5: the divisibility criterion
// ---------------------------------------------------------------------------

/// Input to Test 5: the abstract point stabilizer `M`, the size of the big
/// domain, and the divisor `d` (prime or prime power in this version). The
/// conclusion requires `d ∤ |Ω| − 1`. Conditions (2) and (3) of the
/// underlying lemma are relaxed by default, which is sound: it only widens
/// the set of actions that must be proven non-binary.
pub struct Test5Config {
    pub m: PermGroup,
    pub m_name: String,
    pub omega_size: BigUint,
    pub d: u64,
    pub relax_condition2: bool,
    pub relax_condition3: bool,
}

impl Test5Config {
    pub fn new(m: PermGroup, m_name: impl Into<String>, omega_size: BigUint, d: u64) -> Self {
        Test5Config {
            m,
            m_name: m_name.into(),
            omega_size,
            d,
            relax_condition2: true,
            relax_condition3: true,
        }
    }
}

/// Per-action record in a Test 5 run.
pub struct Test5ActionReport {
    pub degree: u64,
    pub subgroup_order: BigUint,
    pub verdict: Verdict,
    pub verdict_source: Option<&'static str>,
    /// Set when the exact condition checks excluded this action from the
    /// must-prove set.
    pub excluded_by: Option<&'static str>,
}

/// Outcome of Test 5.
pub enum Test5Outcome {
    /// Every candidate action is non-binary, so the big action is
    /// non-binary.
    NonBinary { actions: Vec<Test5ActionReport> },
    Inconclusive {
        reason: String,
        actions: Vec<Test5ActionReport>,
    },
}

fn prime_power(d: u64) -> Option<(u64, u32)> {
    if d < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= d {
        if d % p == 0 {
            let mut rest = d;
            let mut k = 0u32;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            return if rest == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((d, 1))
}

/// Exact check of condition (3) for a candidate coset action of `m` on `h`:
/// the kernel `M_{(Λ)}` is trivial, or the point stabilizer `M_λ = H` has a
/// normal subgroup of the same order and element-order histogram distinct
/// from the kernel. The histogram comparison can only over-approximate
/// isomorphism, which errs on the side of keeping the action — the sound
/// direction.
fn condition3_holds(h: &PermGroup, kernel: &PermGroup, budgets: &Budgets) -> Result<bool> {
    if kernel.order() == BigUint::one() {
        return Ok(true);
    }
    let histogram = |g: &PermGroup| -> Result<BTreeMap<BigUint, u64>> {
        if g.order() > BigUint::from(budgets.element_cap) {
            return Err(Error::Budget {
                what: "element-order histogram",
                limit: budgets.element_cap,
            });
        }
        let mut hist = BTreeMap::new();
        for e in g.chain().elements() {
            *hist.entry(e.element_order()).or_insert(0u64) += 1;
        }
        Ok(hist)
    };
    let kernel_hist = histogram(kernel)?;
    for n in all_subgroups(h, budgets)? {
        if n.order() != kernel.order() || n.same_group_as(kernel) {
            continue;
        }
        let normal = n.generators().iter().all(|ngen| {
            h.generators()
                .iter()
                .all(|hgen| n.chain().contains(&ngen.conjugate_by(hgen)))
        });
        if !normal {
            continue;
        }
        if histogram(&n)? == kernel_hist {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Test 5: if `d ∤ |Ω| − 1` and every transitive action of `M` of degree
/// greater than 1 and not divisible by `d` (subject to the condition
/// filters) is non-binary, the big action is non-binary. Candidate point
/// stabilizers are the overgroups of an index-`p^{k−1}` subgroup of a Sylow
/// `p`-subgroup, `d = p^k`. Candidate actions run as independent work
/// items; all must complete and all must be non-binary.
pub fn test5_alot(cfg: &Test5Config, budgets: &Budgets) -> Result<Test5Outcome> {
    let Some((p, k)) = prime_power(cfg.d) else {
        return Err(Error::Unsupported(format!(
            "d = {} is not a prime power (composite d is not supported in this version)",
            cfg.d
        )));
    };
    if cfg.m.order() == BigUint::one() {
        return Err(Error::Inapplicable("M must be nontrivial".into()));
    }
    if cfg.omega_size < BigUint::from(2u32) {
        return Err(Error::Inapplicable("|Ω| must be at least 2".into()));
    }
    if ((&cfg.omega_size - BigUint::one()) % BigUint::from(cfg.d)).is_zero() {
        return Ok(Test5Outcome::Inconclusive {
            reason: format!("d = {} divides |Ω| − 1; the criterion does not apply", cfg.d),
            actions: Vec::new(),
        });
    }

    // Seeds: subgroups of a Sylow p-subgroup of index p^(k−1); a candidate
    // stabilizer H yields degree not divisible by p^k exactly when it
    // contains a conjugate of a seed.
    let m = &cfg.m;
    let seeds: Vec<PermGroup> = if divisible(&m.order(), p) {
        let sylow = sylow_subgroup(m, p, budgets)?;
        if k == 1 {
            vec![sylow]
        } else {
            let quota = p_part(&sylow.order(), p) / BigUint::from(p).pow(k - 1);
            let subs = all_subgroups(&sylow, budgets)?;
            subs.into_iter().filter(|q| q.order() == quota).collect()
        }
    } else {
        vec![PermGroup::trivial(m.degree())]
    };
    let mut candidates: Vec<PermGroup> = Vec::new();
    for seed in &seeds {
        for h in overgroups_of(m, seed, budgets)? {
            if h.order() == m.order() {
                continue; // degree 1
            }
            if !candidates.iter().any(|k2| k2.same_group_as(&h)) {
                candidates.push(h);
            }
        }
    }
    let mut candidates = dedupe_up_to_conjugacy(m, candidates, budgets)?;
    candidates.sort_by_key(|h| (m.order() / h.order(), h.order()));

    if !cfg.relax_condition2 {
        return Err(Error::Unsupported(
            "exact checking of the composition-factor condition is not implemented; \
             the relaxed (sound) mode must be used"
                .into(),
        ));
    }

    // Evaluate candidates as independent work items.
    let reports: Vec<Result<Test5ActionReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = candidates
            .iter()
            .map(|h| {
                scope.spawn(move || -> Result<Test5ActionReport> {
                    let action = coset_action(m, h, budgets)?;
                    let degree = action.index;
                    debug_assert!(!BigUint::from(degree).is_zero());
                    let mut report = Test5ActionReport {
                        degree,
                        subgroup_order: h.order(),
                        verdict: Verdict::Inconclusive,
                        verdict_source: None,
                        excluded_by: None,
                    };
                    if !cfg.relax_condition3 {
                        let kernel = action.kernel()?;
                        if !condition3_holds(h, &kernel, budgets)? {
                            report.excluded_by = Some("condition3");
                            return Ok(report);
                        }
                    }
                    let battery = run_battery(
                        &action.group,
                        &format!("{} | degree {degree}", cfg.m_name),
                        &TestSelection::quick(),
                        budgets,
                    )?;
                    report.verdict = battery.verdict;
                    report.verdict_source = battery.verdict_source;
                    Ok(report)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker thread panicked"))
            .collect()
    });
    let mut actions = Vec::new();
    for r in reports {
        actions.push(r?);
    }
    let survivors: Vec<&Test5ActionReport> = actions
        .iter()
        .filter(|a| a.excluded_by.is_none() && a.verdict != Verdict::NonBinary)
        .collect();
    if survivors.is_empty() {
        Ok(Test5Outcome::NonBinary { actions })
    } else {
        let reason = format!(
            "{} candidate action(s) not proven non-binary (degrees {:?})",
            survivors.len(),
            survivors.iter().map(|a| a.degree).collect::<Vec<_>>()
        );
        Ok(Test5Outcome::Inconclusive { reason, actions })
    }
}
