//! Permutation groups backed by deterministic stabilizer chains.
//!
//! The chain construction is a non-randomized Schreier–Sims: all orbits are
//! grown in generator order, base points are either prescribed by the caller
//! or chosen as the smallest non-fixed point, and Schreier generators are
//! processed shallowest level first. The same input always yields the same
//! chain, which keeps every derived object (stabilizer generators, transversal
//! elements, transporters, element enumeration order) reproducible.

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::perm::{Permutation, Point};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use std::collections::HashSet;
use std::sync::OnceLock;

const NO_POSITION: u32 = u32::MAX;

/// One level of a stabilizer chain: the orbit of `base_point` under the
/// group generated by `gens` (which fix all shallower base points), plus a
/// Schreier vector for recovering transversal representatives.
#[derive(Clone)]
struct ChainLevel {
    base_point: Point,
    gens: Vec<Permutation>,
    /// Orbit points in discovery order; `orbit[0] == base_point`.
    orbit: Vec<Point>,
    /// `position[p]` = index of `p` in `orbit`, or `NO_POSITION`.
    position: Vec<u32>,
    /// Parallel to `orbit`: `(predecessor point, generator index)` edges of
    /// the Schreier tree; the root carries itself with a sentinel index.
    schreier: Vec<(Point, u32)>,
    /// Per orbit position: how many generators have been applied when growing
    /// the orbit (monotone watermark; new generators reset pending work).
    orbit_scanned: Vec<u32>,
    /// Per orbit position: how many generators have had their Schreier
    /// generator formed and sifted.
    schreier_done: Vec<u32>,
    /// Scan cursor for `take_schreier_pair`, reset when generators arrive.
    cursor: usize,
}

impl ChainLevel {
    fn new(base_point: Point, degree: usize) -> Self {
        let mut position = vec![NO_POSITION; degree];
        position[base_point as usize] = 0;
        ChainLevel {
            base_point,
            gens: Vec::new(),
            orbit: vec![base_point],
            position,
            schreier: vec![(base_point, u32::MAX)],
            orbit_scanned: vec![0],
            schreier_done: vec![0],
            cursor: 0,
        }
    }

    fn add_gen(&mut self, g: Permutation) {
        self.gens.push(g);
        self.cursor = 0;
    }

    fn in_orbit(&self, p: Point) -> bool {
        self.position[p as usize] != NO_POSITION
    }

    /// Closes the orbit under all current generators. Discovery order is the
    /// deterministic incremental BFS order (positions in order, pending
    /// generators in order).
    fn extend_orbit(&mut self) {
        let mut pos = 0;
        while pos < self.orbit.len() {
            while (self.orbit_scanned[pos] as usize) < self.gens.len() {
                let gi = self.orbit_scanned[pos];
                self.orbit_scanned[pos] += 1;
                let p = self.orbit[pos];
                let q = self.gens[gi as usize].image(p);
                if self.position[q as usize] == NO_POSITION {
                    self.position[q as usize] = self.orbit.len() as u32;
                    self.orbit.push(q);
                    self.schreier.push((p, gi));
                    self.orbit_scanned.push(0);
                    self.schreier_done.push(0);
                }
            }
            pos += 1;
        }
    }

    /// Next unprocessed (orbit position, generator index) pair, if any.
    fn take_schreier_pair(&mut self) -> Option<(usize, usize)> {
        while self.cursor < self.orbit.len() {
            let done = self.schreier_done[self.cursor] as usize;
            if done < self.gens.len() {
                self.schreier_done[self.cursor] += 1;
                return Some((self.cursor, done));
            }
            self.cursor += 1;
        }
        None
    }

    /// Transversal representative `u` with `base_point^u = p`.
    fn representative(&self, p: Point, degree: usize) -> Option<Permutation> {
        if !self.in_orbit(p) {
            return None;
        }
        // Collect the generator indices along the Schreier tree path from the
        // base to p, then compose them left to right.
        let mut edges = Vec::new();
        let mut cur = p;
        while cur != self.base_point {
            let (prev, gi) = self.schreier[self.position[cur as usize] as usize];
            edges.push(gi);
            cur = prev;
        }
        let mut rep = Permutation::identity(degree);
        for &gi in edges.iter().rev() {
            rep = rep.then(&self.gens[gi as usize]);
        }
        Some(rep)
    }
}

/// A complete stabilizer chain for a permutation group.
#[derive(Clone)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<ChainLevel>,
    order: BigUint,
}

impl StabilizerChain {
    /// Builds a chain for `⟨gens⟩` of the given degree. The base starts with
    /// `prescribed` (duplicates removed, order kept; levels are created even
    /// for points with trivial orbits so that descent over the prescribed
    /// prefix is uniform) and continues with smallest-moved-point choices.
    pub fn build(degree: usize, gens: &[Permutation], prescribed: &[Point]) -> Self {
        let mut builder = StabilizerChain {
            degree,
            levels: Vec::new(),
            order: BigUint::one(),
        };
        let mut seen = vec![false; degree];
        for &p in prescribed {
            if !seen[p as usize] {
                seen[p as usize] = true;
                builder.levels.push(ChainLevel::new(p, degree));
            }
        }
        let nontrivial: Vec<&Permutation> = gens.iter().filter(|g| !g.is_identity()).collect();
        if builder.levels.is_empty() {
            if let Some(first) = nontrivial
                .iter()
                .filter_map(|g| g.support().first().copied())
                .min()
            {
                builder.levels.push(ChainLevel::new(first, degree));
            }
        }
        for g in nontrivial {
            builder.insert_generator(g.clone(), 0);
        }
        builder.run();
        builder.order = builder
            .levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len()))
            .product();
        #[cfg(debug_assertions)]
        for g in gens {
            debug_assert!(
                builder.sift_from(0, g.clone()).0.is_identity(),
                "chain incomplete: input generator does not sift"
            );
        }
        builder
    }

    /// Inserts `g` as a generator of every level from `from` down to the
    /// first level whose base point it moves, creating that level if `g`
    /// fixes the entire current base.
    fn insert_generator(&mut self, g: Permutation, from: usize) {
        debug_assert!(!g.is_identity());
        let mut l = from;
        loop {
            if l == self.levels.len() {
                let base = g.support()[0];
                self.levels.push(ChainLevel::new(base, self.degree));
            }
            let moves_base = g.image(self.levels[l].base_point) != self.levels[l].base_point;
            self.levels[l].add_gen(g.clone());
            if moves_base {
                break;
            }
            l += 1;
        }
    }

    /// Worklist loop: keep all orbits closed and process Schreier generators
    /// shallowest level first until nothing is pending.
    fn run(&mut self) {
        loop {
            for l in 0..self.levels.len() {
                self.levels[l].extend_orbit();
            }
            let mut progressed = false;
            for l in 0..self.levels.len() {
                if let Some((pos, gi)) = self.levels[l].take_schreier_pair() {
                    let p = self.levels[l].orbit[pos];
                    let s = self.levels[l].gens[gi].clone();
                    let u_p = self.levels[l].representative(p, self.degree).unwrap();
                    let q = s.image(p);
                    let u_q = self.levels[l].representative(q, self.degree).unwrap();
                    let schreier_gen = u_p.then(&s).then(&u_q.inverse());
                    if !schreier_gen.is_identity() {
                        let (residue, _) = self.sift_from(l + 1, schreier_gen);
                        if !residue.is_identity() {
                            self.insert_generator(residue, l + 1);
                        }
                    }
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                return;
            }
        }
    }

    /// Sifts `g` through levels `from..`, returning the residue and the level
    /// at which sifting stopped. A residue equal to the identity means `g`
    /// belongs to the group of level `from`.
    fn sift_from(&self, from: usize, g: Permutation) -> (Permutation, usize) {
        let mut cur = g;
        for l in from..self.levels.len() {
            let p = cur.image(self.levels[l].base_point);
            if p == self.levels[l].base_point {
                continue;
            }
            match self.levels[l].representative(p, self.degree) {
                None => return (cur, l),
                Some(rep) => cur = cur.then(&rep.inverse()),
            }
        }
        let l = self.levels.len();
        (cur, l)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Base points, shallowest first.
    pub fn base(&self) -> Vec<Point> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Orbit of the level's base point, in discovery order.
    pub fn level_orbit(&self, level: usize) -> &[Point] {
        &self.levels[level].orbit
    }

    /// Generators of the level's group (they fix all shallower base points).
    /// Levels at or beyond the chain length have the trivial group.
    pub fn level_gens(&self, level: usize) -> &[Permutation] {
        if level < self.levels.len() {
            &self.levels[level].gens
        } else {
            &[]
        }
    }

    /// Transversal representative `u` with `base(level)^u = p`.
    pub fn transversal_element(&self, level: usize, p: Point) -> Option<Permutation> {
        self.levels.get(level)?.representative(p, self.degree)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        self.sift_from(0, g.clone()).0.is_identity()
    }

    /// All elements in deterministic order. The iterator is lazy; callers
    /// are responsible for capping by `order()` beforehand.
    pub fn elements(&self) -> ElementIter {
        ElementIter::new(self)
    }
}

/// Lazy enumeration of all chain elements: an odometer over the transversals,
/// shallowest level varying fastest, with cached partial products.
pub struct ElementIter {
    /// Per level: transversal representatives in orbit discovery order.
    transversals: Vec<Vec<Permutation>>,
    idx: Vec<usize>,
    /// `suffix[l]` = composition of the chosen representatives of levels
    /// `≥ l` (deepest applied first); `suffix[levels]` = identity.
    suffix: Vec<Permutation>,
    started: bool,
    done: bool,
}

impl ElementIter {
    fn new(chain: &StabilizerChain) -> Self {
        let transversals: Vec<Vec<Permutation>> = chain
            .levels
            .iter()
            .map(|lvl| {
                lvl.orbit
                    .iter()
                    .map(|&p| lvl.representative(p, chain.degree).unwrap())
                    .collect()
            })
            .collect();
        let k = chain.levels.len();
        ElementIter {
            transversals,
            idx: vec![0; k],
            suffix: vec![Permutation::identity(chain.degree); k + 1],
            started: false,
            done: false,
        }
    }

    fn recompute_suffixes(&mut self, from: usize) {
        // suffix[l] = suffix[l+1] · u_l  (apply deeper levels first).
        for l in (0..=from).rev() {
            self.suffix[l] = self.suffix[l + 1].then(&self.transversals[l][self.idx[l]]);
        }
    }
}

impl Iterator for ElementIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let k = self.idx.len();
        if !self.started {
            self.started = true;
            if k > 0 {
                self.recompute_suffixes(k - 1);
            }
            return Some(self.suffix[0].clone());
        }
        // Bump the odometer, shallowest level fastest.
        let mut l = 0;
        loop {
            if l == k {
                self.done = true;
                return None;
            }
            self.idx[l] += 1;
            if self.idx[l] < self.transversals[l].len() {
                break;
            }
            self.idx[l] = 0;
            l += 1;
        }
        self.recompute_suffixes(l);
        Some(self.suffix[0].clone())
    }
}

/// A finite permutation group of fixed degree, given by generators.
///
/// The stabilizer chain is built lazily and shared; the group itself is
/// immutable, so it can be used from multiple threads.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabilizerChain>,
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "⟨")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g:?}")?;
        }
        write!(f, "⟩ ≤ Sym({})", self.degree)
    }
}

impl PermGroup {
    /// Builds a group from generators, which must all have degree `degree`.
    /// An empty generator list yields the trivial group.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Parse("degree must be at least 1".into()));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    /// Convenience constructor from cycle strings or image lists.
    pub fn from_generator_strings(degree: usize, gens: &[&str]) -> Result<Self> {
        let parsed: Vec<Permutation> = gens
            .iter()
            .map(|s| Permutation::parse(s, degree))
            .collect::<Result<_>>()?;
        PermGroup::new(degree, parsed)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// The default stabilizer chain (smallest-moved-point base), built once.
    pub fn chain(&self) -> &StabilizerChain {
        self.chain
            .get_or_init(|| StabilizerChain::build(self.degree, &self.generators, &[]))
    }

    /// A chain whose base starts with the given points.
    pub fn chain_with_base(&self, prescribed: &[Point]) -> Result<StabilizerChain> {
        for &p in prescribed {
            self.check_point(p)?;
        }
        Ok(StabilizerChain::build(
            self.degree,
            &self.generators,
            prescribed,
        ))
    }

    fn check_point(&self, p: Point) -> Result<()> {
        if (p as usize) >= self.degree {
            return Err(Error::PointOutOfRange {
                point: p,
                degree: self.degree,
            });
        }
        Ok(())
    }

    pub fn order(&self) -> BigUint {
        self.chain().order().clone()
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    /// Membership by sifting through the stabilizer chain.
    pub fn is_member(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: g.degree(),
            });
        }
        Ok(self.chain().contains(g))
    }

    /// Orbit of a point: plain BFS from `omega`, generators applied in the
    /// given order, returned in discovery order.
    pub fn orbit_of(&self, omega: Point) -> Result<Vec<Point>> {
        self.check_point(omega)?;
        let mut orbit = vec![omega];
        let mut in_orbit = vec![false; self.degree];
        in_orbit[omega as usize] = true;
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            head += 1;
            for g in &self.generators {
                let q = g.image(p);
                if !in_orbit[q as usize] {
                    in_orbit[q as usize] = true;
                    orbit.push(q);
                }
            }
        }
        Ok(orbit)
    }

    /// All orbits, each in BFS discovery order, sorted by smallest point.
    pub fn orbits(&self) -> Vec<Vec<Point>> {
        let mut seen = vec![false; self.degree];
        let mut orbits = Vec::new();
        for start in 0..self.degree as Point {
            if seen[start as usize] {
                continue;
            }
            let orbit = self.orbit_of(start).expect("point in range");
            for &p in &orbit {
                seen[p as usize] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn is_transitive(&self) -> bool {
        self.degree > 0 && self.orbit_of(0).expect("point 0").len() == self.degree
    }

    /// Stabilizer of a point, generated by the strong generators of the
    /// corresponding chain level.
    pub fn point_stabilizer(&self, omega: Point) -> Result<PermGroup> {
        self.check_point(omega)?;
        let chain = self.chain_with_base(&[omega])?;
        let gens = dedup_generators(chain.level_gens(1));
        PermGroup::new(self.degree, gens)
    }

    /// Pointwise stabilizer of a set of points.
    pub fn pointwise_stabilizer(&self, lambda: &[Point]) -> Result<PermGroup> {
        let mut sorted: Vec<Point> = lambda.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &p in &sorted {
            self.check_point(p)?;
        }
        let chain = self.chain_with_base(&sorted)?;
        let gens = dedup_generators(chain.level_gens(sorted.len()));
        PermGroup::new(self.degree, gens)
    }

    /// Transporter: some `g ∈ G` with `I^g = J` (entrywise), or `None` if no
    /// such element exists. Tuples may repeat points; both sides must repeat
    /// in the same pattern for a transporter to exist.
    ///
    /// The search is a deterministic descent through a stabilizer chain whose
    /// base is prescribed to start with the (deduplicated) points of `I`; no
    /// backtracking is required because failure at any level is conclusive.
    pub fn transporter(&self, i: &[Point], j: &[Point]) -> Result<Option<Permutation>> {
        if i.len() != j.len() {
            return Err(Error::TupleLengthMismatch {
                left: i.len(),
                right: j.len(),
            });
        }
        for &p in i.iter().chain(j.iter()) {
            self.check_point(p)?;
        }
        // Deduplicate while checking the repeat patterns agree.
        let mut i_dedup: Vec<Point> = Vec::new();
        let mut j_dedup: Vec<Point> = Vec::new();
        for (idx, (&iu, &ju)) in i.iter().zip(j.iter()).enumerate() {
            match i[..idx].iter().position(|&x| x == iu) {
                Some(prev) => {
                    if j[prev] != ju {
                        return Ok(None);
                    }
                }
                None => {
                    if j[..idx].contains(&ju) {
                        return Ok(None);
                    }
                    i_dedup.push(iu);
                    j_dedup.push(ju);
                }
            }
        }
        let chain = self.chain_with_base(&i_dedup)?;
        let mut tail = Permutation::identity(self.degree);
        let mut tail_inv = Permutation::identity(self.degree);
        for (l, &target) in j_dedup.iter().enumerate() {
            debug_assert_eq!(chain.base()[l], i_dedup[l]);
            let q = tail_inv.image(target);
            match chain.transversal_element(l, q) {
                None => return Ok(None),
                Some(u) => {
                    tail = u.then(&tail);
                    tail_inv = tail.inverse();
                }
            }
        }
        // Verify by direct application before returning.
        for (&iu, &ju) in i.iter().zip(j.iter()) {
            debug_assert_eq!(tail.image(iu), ju);
            if tail.image(iu) != ju {
                return Ok(None);
            }
        }
        Ok(Some(tail))
    }

    /// Setwise stabilizer `G_Λ = {g : Λ^g = Λ}` via backtracking over a chain
    /// with the points of `Λ` placed first in the base. Candidate images are
    /// tried in ascending order; the node budget guards the search.
    pub fn setwise_stabilizer(&self, lambda: &[Point], budgets: &Budgets) -> Result<PermGroup> {
        let mut sorted: Vec<Point> = lambda.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &p in &sorted {
            self.check_point(p)?;
        }
        if sorted.is_empty() || sorted.len() == self.degree {
            return PermGroup::new(self.degree, self.generators.clone());
        }
        // Fast path: Λ already invariant under every generator.
        let mut in_lambda = vec![false; self.degree];
        for &p in &sorted {
            in_lambda[p as usize] = true;
        }
        if self
            .generators
            .iter()
            .all(|g| sorted.iter().all(|&p| in_lambda[g.image(p) as usize]))
        {
            return PermGroup::new(self.degree, self.generators.clone());
        }

        let chain = self.chain_with_base(&sorted)?;
        // Seed the result with the pointwise stabilizer.
        let mut found_gens = dedup_generators(chain.level_gens(sorted.len()));
        let mut found =
            StabilizerChain::build(self.degree, &found_gens, &[]);
        // Candidate images per level, ascending.
        let per_level_orbits: Vec<Vec<Point>> = (0..sorted.len())
            .map(|l| {
                let mut o = chain.level_orbit(l).to_vec();
                o.sort_unstable();
                o
            })
            .collect();
        struct Search<'s> {
            chain: &'s StabilizerChain,
            orbits: &'s [Vec<Point>],
            in_lambda: &'s [bool],
            k: usize,
            nodes: u64,
            budget: u64,
        }
        impl Search<'_> {
            fn rec(
                &mut self,
                l: usize,
                tail: &Permutation,
                used: &mut Vec<bool>,
                found_gens: &mut Vec<Permutation>,
                found: &mut StabilizerChain,
            ) -> Result<()> {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::Budget {
                        what: "setwise stabilizer backtrack nodes",
                        limit: self.budget,
                    });
                }
                if l == self.k {
                    if !found.contains(tail) {
                        found_gens.push(tail.clone());
                        *found =
                            StabilizerChain::build(tail.degree(), found_gens, &[]);
                    }
                    return Ok(());
                }
                for &p in &self.orbits[l] {
                    let img = tail.image(p);
                    if self.in_lambda[img as usize] && !used[img as usize] {
                        used[img as usize] = true;
                        let u = self
                            .chain
                            .transversal_element(l, p)
                            .expect("orbit point has a representative");
                        let next_tail = u.then(tail);
                        self.rec(l + 1, &next_tail, used, found_gens, found)?;
                        used[img as usize] = false;
                    }
                }
                Ok(())
            }
        }
        let mut search = Search {
            chain: &chain,
            orbits: &per_level_orbits,
            in_lambda: &in_lambda,
            k: sorted.len(),
            nodes: 0,
            budget: budgets.node_budget,
        };
        let mut used = vec![false; self.degree];
        let tail = Permutation::identity(self.degree);
        search.rec(0, &tail, &mut used, &mut found_gens, &mut found)?;
        #[cfg(debug_assertions)]
        for g in &found_gens {
            debug_assert!(sorted.iter().all(|&p| in_lambda[g.image(p) as usize]));
        }
        PermGroup::new(self.degree, found_gens)
    }

    /// All elements via the stabilizer chain, failing if the order exceeds
    /// the cap. Deterministic order.
    pub fn elements_capped(&self, cap: u64) -> Result<Vec<Permutation>> {
        let chain = self.chain();
        if chain.order() > &BigUint::from(cap) {
            return Err(Error::Budget {
                what: "element enumeration",
                limit: cap,
            });
        }
        Ok(chain.elements().collect())
    }

    /// Independent enumeration by closure: repeated multiplication of the
    /// generating set, no stabilizer chain involved. Used as an oracle to
    /// cross-check chain orders.
    pub fn enumerate_by_closure(&self, cap: u64) -> Result<Vec<Permutation>> {
        let mut seen: HashSet<Permutation> = HashSet::new();
        let id = Permutation::identity(self.degree);
        seen.insert(id.clone());
        let mut queue = vec![id];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            head += 1;
            for g in &self.generators {
                let y = x.then(g);
                if !seen.contains(&y) {
                    if seen.len() as u64 >= cap {
                        return Err(Error::Budget {
                            what: "closure enumeration",
                            limit: cap,
                        });
                    }
                    seen.insert(y.clone());
                    queue.push(y);
                }
            }
        }
        Ok(queue)
    }

    /// True if the two groups are equal as sets (same degree, same order,
    /// mutual membership of generators).
    pub fn same_group_as(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && other
                .generators
                .iter()
                .all(|g| self.chain().contains(g))
    }

    /// True if `other` is contained in `self`.
    pub fn contains_group(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && other.generators.iter().all(|g| self.chain().contains(g))
    }

    /// Orbit of `from` together with transversal elements: for each orbit
    /// point `p`, an element `u` with `from^u = p`. BFS in generator order.
    pub fn orbit_reps(&self, from: Point) -> Result<OrbitReps> {
        self.check_point(from)?;
        let mut points = vec![from];
        let mut position = vec![NO_POSITION; self.degree];
        position[from as usize] = 0;
        let mut reps = vec![Permutation::identity(self.degree)];
        let mut head = 0;
        while head < points.len() {
            let p = points[head];
            let rep = reps[head].clone();
            head += 1;
            for g in &self.generators {
                let q = g.image(p);
                if position[q as usize] == NO_POSITION {
                    position[q as usize] = points.len() as u32;
                    points.push(q);
                    reps.push(rep.then(g));
                }
            }
        }
        Ok(OrbitReps {
            points,
            position,
            reps,
        })
    }
}

/// An orbit with transversal elements, produced by [`PermGroup::orbit_reps`].
pub struct OrbitReps {
    /// Orbit points in BFS discovery order.
    pub points: Vec<Point>,
    position: Vec<u32>,
    reps: Vec<Permutation>,
}

impl OrbitReps {
    pub fn contains(&self, p: Point) -> bool {
        (p as usize) < self.position.len() && self.position[p as usize] != NO_POSITION
    }

    /// An element mapping the orbit's root to `p`, if `p` is in the orbit.
    pub fn rep_to(&self, p: Point) -> Option<&Permutation> {
        if !self.contains(p) {
            return None;
        }
        Some(&self.reps[self.position[p as usize] as usize])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Removes exact duplicates and identities, preserving first-seen order.
fn dedup_generators(gens: &[Permutation]) -> Vec<Permutation> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in gens {
        if !g.is_identity() && seen.insert(g.clone()) {
            out.push(g.clone());
        }
    }
    out
}
