//! Orbital partitions and 2-closures.
//!
//! The 2-closure `G^(2)` of a permutation group `G` is the largest group with
//! the same orbits on ordered pairs of points. This module computes the
//! partition of `Ω × Ω` into orbitals, and the 2-closure itself — by the
//! symbolic shortcut for 2-transitive groups (the closure is the full
//! symmetric group) and by a deterministic color-preserving backtrack in
//! general.

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::group::{PermGroup, StabilizerChain};
use crate::perm::{Permutation, Point};
use num_bigint::BigUint;
use num_traits::One;

/// The partition of `Ω × Ω` into orbits of `G` (orbitals), stored as a color
/// per ordered pair. Color ids are assigned in lexicographic discovery order.
pub struct OrbitalPartition {
    degree: usize,
    colors: Vec<u32>,
    num_colors: u32,
    num_diagonal_colors: u32,
}

impl OrbitalPartition {
    /// Computes the orbital partition. Memory is `degree²` u32 cells, so the
    /// degree is capped by `budgets.closure_degree_cap`.
    pub fn compute(g: &PermGroup, budgets: &Budgets) -> Result<OrbitalPartition> {
        let n = g.degree();
        if (n as u64) > budgets.closure_degree_cap {
            return Err(Error::Budget {
                what: "orbital partition degree",
                limit: budgets.closure_degree_cap,
            });
        }
        let mut colors = vec![u32::MAX; n * n];
        let mut num_colors = 0u32;
        let mut num_diagonal_colors = 0u32;
        let mut queue: Vec<(Point, Point)> = Vec::new();
        for u in 0..n as Point {
            for v in 0..n as Point {
                if colors[u as usize * n + v as usize] != u32::MAX {
                    continue;
                }
                let color = num_colors;
                num_colors += 1;
                if u == v {
                    num_diagonal_colors += 1;
                }
                colors[u as usize * n + v as usize] = color;
                queue.clear();
                queue.push((u, v));
                let mut head = 0;
                while head < queue.len() {
                    let (a, b) = queue[head];
                    head += 1;
                    for gen in g.generators() {
                        let (c, d) = (gen.image(a), gen.image(b));
                        let cell = c as usize * n + d as usize;
                        if colors[cell] == u32::MAX {
                            colors[cell] = color;
                            queue.push((c, d));
                        }
                    }
                }
            }
        }
        Ok(OrbitalPartition {
            degree: n,
            colors,
            num_colors,
            num_diagonal_colors,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn color(&self, u: Point, v: Point) -> u32 {
        self.colors[u as usize * self.degree + v as usize]
    }

    /// Total number of orbitals, diagonal ones included.
    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    /// Number of orbitals on the diagonal (= number of orbits of `G`).
    pub fn num_diagonal_colors(&self) -> u32 {
        self.num_diagonal_colors
    }

    /// The rank of a transitive group: orbitals counted off the diagonal.
    pub fn num_off_diagonal_colors(&self) -> u32 {
        self.num_colors - self.num_diagonal_colors
    }

    /// True if `sigma` maps every pair to a pair of the same color.
    pub fn is_preserved_by(&self, sigma: &Permutation) -> bool {
        if sigma.degree() != self.degree {
            return false;
        }
        for u in 0..self.degree as Point {
            for v in 0..self.degree as Point {
                if self.color(u, v) != self.color(sigma.image(u), sigma.image(v)) {
                    return false;
                }
            }
        }
        true
    }
}

/// The 2-closure, either as an explicit group or symbolically when it is the
/// full symmetric group (the 2-transitive case, where materializing `Sym(Ω)`
/// generators is trivial but its order may be astronomical).
pub enum ClosureGroup {
    Group(PermGroup),
    FullSymmetric { degree: usize },
}

impl ClosureGroup {
    pub fn order(&self) -> BigUint {
        match self {
            ClosureGroup::Group(g) => g.order(),
            ClosureGroup::FullSymmetric { degree } => factorial(*degree),
        }
    }

    /// Materializes the closure as a permutation group.
    pub fn to_group(&self) -> PermGroup {
        match self {
            ClosureGroup::Group(g) => g.clone(),
            ClosureGroup::FullSymmetric { degree } => symmetric_group(*degree),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            ClosureGroup::Group(g) => g.degree(),
            ClosureGroup::FullSymmetric { degree } => *degree,
        }
    }
}

/// Result of a 2-closure computation.
pub struct ClosureResult {
    pub closure: ClosureGroup,
    pub closure_order: BigUint,
    pub group_order: BigUint,
    pub is_two_closed: bool,
    /// A deterministic element of `G^(2) ∖ G` when `G` is not 2-closed: the
    /// least transposition outside `G` in the 2-transitive case, otherwise
    /// the first element found by the backtrack that lies outside `G`.
    pub witness_element: Option<Permutation>,
    /// True if the 2-transitive shortcut applied.
    pub two_transitive_shortcut: bool,
    /// Backtrack nodes visited (0 for the shortcut); part of the report, and
    /// deterministic.
    pub nodes_visited: u64,
}

/// Computes the 2-closure of `g`.
pub fn two_closure(g: &PermGroup, budgets: &Budgets) -> Result<ClosureResult> {
    let n = g.degree();
    let group_order = g.order();
    if n >= 2 && g.is_transitive() {
        let partition = OrbitalPartition::compute(g, budgets)?;
        if partition.num_off_diagonal_colors() == 1 {
            // 2-transitive: every permutation preserves the two orbitals, so
            // the closure is all of Sym(Ω).
            let closure_order = factorial(n);
            let is_two_closed = group_order == closure_order;
            let witness_element = if is_two_closed {
                None
            } else {
                Some(least_transposition_outside(g)?)
            };
            return Ok(ClosureResult {
                closure: ClosureGroup::FullSymmetric { degree: n },
                closure_order,
                group_order,
                is_two_closed,
                witness_element,
                two_transitive_shortcut: true,
                nodes_visited: 0,
            });
        }
        return general_closure(g, &partition, group_order, budgets);
    }
    let partition = OrbitalPartition::compute(g, budgets)?;
    general_closure(g, &partition, group_order, budgets)
}

/// The least transposition `(i j)` (lexicographic) not in `g`. Exists for
/// every proper subgroup of `Sym(Ω)` that is 2-transitive, since such a group
/// contains no transposition at all; scanning keeps this robust.
fn least_transposition_outside(g: &PermGroup) -> Result<Permutation> {
    let n = g.degree();
    for i in 0..n as Point {
        for j in (i + 1)..n as Point {
            let mut images: Vec<Point> = (0..n as Point).collect();
            images.swap(i as usize, j as usize);
            let t = Permutation::from_images(images)?;
            if !g.is_member(&t)? {
                return Ok(t);
            }
        }
    }
    Err(Error::Inapplicable(
        "group is the full symmetric group; no transposition lies outside".into(),
    ))
}

/// Color-preserving backtrack over `Sym(Ω)`.
///
/// Phase A enumerates the full point-0 stabilizer of the closure; phase B
/// finds one coset representative per remaining image of point 0, skipping
/// images already in the orbit of 0 under the group found so far. That
/// collection generates the closure.
fn general_closure(
    g: &PermGroup,
    partition: &OrbitalPartition,
    group_order: BigUint,
    budgets: &Budgets,
) -> Result<ClosureResult> {
    let n = g.degree();
    if n == 0 {
        return Err(Error::Parse("degree must be at least 1".into()));
    }
    let mut search = ClosureSearch {
        n,
        partition,
        sigma: vec![0; n],
        used: vec![false; n],
        nodes: 0,
        budget: budgets.node_budget,
        leaves: Vec::new(),
        stop_after_first: false,
    };

    let mut found_gens: Vec<Permutation> = Vec::new();
    let mut found_chain = StabilizerChain::build(n, &found_gens, &[]);
    let mut witness_element: Option<Permutation> = None;

    let absorb = |leaves: &mut Vec<Permutation>,
                      found_gens: &mut Vec<Permutation>,
                      found_chain: &mut StabilizerChain,
                      witness: &mut Option<Permutation>|
     -> Result<()> {
        for leaf in leaves.drain(..) {
            if witness.is_none() && !g.is_member(&leaf)? {
                *witness = Some(leaf.clone());
            }
            if !found_chain.contains(&leaf) {
                found_gens.push(leaf);
                *found_chain = StabilizerChain::build(n, found_gens, &[]);
            }
        }
        Ok(())
    };

    // Phase A: all closure elements fixing point 0.
    search.stop_after_first = false;
    search.used[0] = true;
    search.sigma[0] = 0;
    search.descend(1)?;
    search.used[0] = false;
    absorb(
        &mut search.leaves,
        &mut found_gens,
        &mut found_chain,
        &mut witness_element,
    )?;

    // Phase B: one representative per new image of point 0.
    for c in 1..n as Point {
        let orbit_of_zero = PermGroup::new(n, found_gens.clone())?.orbit_of(0)?;
        if orbit_of_zero.contains(&c) {
            continue;
        }
        search.stop_after_first = true;
        search.used[c as usize] = true;
        search.sigma[0] = c;
        if partition.color(0, 0) == partition.color(c, c) {
            search.descend(1)?;
        }
        search.used[c as usize] = false;
        absorb(
            &mut search.leaves,
            &mut found_gens,
            &mut found_chain,
            &mut witness_element,
        )?;
    }

    let closure_order = found_chain.order().clone();
    debug_assert!(&closure_order >= &group_order);
    let is_two_closed = closure_order == group_order;
    let closure = PermGroup::new(n, found_gens)?;
    Ok(ClosureResult {
        closure: ClosureGroup::Group(closure),
        closure_order,
        group_order,
        is_two_closed,
        witness_element: if is_two_closed { None } else { witness_element },
        two_transitive_shortcut: false,
        nodes_visited: search.nodes,
    })
}

struct ClosureSearch<'a> {
    n: usize,
    partition: &'a OrbitalPartition,
    sigma: Vec<Point>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
    leaves: Vec<Permutation>,
    stop_after_first: bool,
}

impl ClosureSearch<'_> {
    /// Extends the partial map `sigma[0..level]` to all color-consistent
    /// completions; candidates are tried in ascending order.
    fn descend(&mut self, level: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "2-closure backtrack nodes",
                limit: self.budget,
            });
        }
        if level == self.n {
            let sigma = Permutation::from_images(self.sigma.clone())
                .expect("complete assignment is a bijection");
            self.leaves.push(sigma);
            return Ok(self.stop_after_first);
        }
        let v = level as Point;
        for w in 0..self.n as Point {
            if self.used[w as usize] {
                continue;
            }
            if self.partition.color(v, v) != self.partition.color(w, w) {
                continue;
            }
            let consistent = (0..level as Point).all(|u| {
                let su = self.sigma[u as usize];
                self.partition.color(u, v) == self.partition.color(su, w)
                    && self.partition.color(v, u) == self.partition.color(w, su)
            });
            if !consistent {
                continue;
            }
            self.sigma[level] = w;
            self.used[w as usize] = true;
            let stop = self.descend(level + 1)?;
            self.used[w as usize] = false;
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Independent 2-closure oracle: enumerate all of `Sym(Ω)` and keep the
/// permutations preserving every orbital. Exponential; degree ≤ 8 intended.
pub fn two_closure_by_enumeration(g: &PermGroup, budgets: &Budgets) -> Result<PermGroup> {
    let n = g.degree();
    if n > 8 {
        return Err(Error::Unsupported(
            "closure-by-enumeration oracle is limited to degree ≤ 8".into(),
        ));
    }
    let partition = OrbitalPartition::compute(g, budgets)?;
    let mut elements = Vec::new();
    let mut images: Vec<Point> = (0..n as Point).collect();
    permute_lex(&mut images, 0, &mut |perm: &[Point]| {
        let sigma = Permutation::from_images(perm.to_vec()).expect("bijection");
        if partition.is_preserved_by(&sigma) {
            elements.push(sigma);
        }
    });
    PermGroup::new(n, elements)
}

fn permute_lex(points: &mut Vec<Point>, from: usize, f: &mut impl FnMut(&[Point])) {
    if from == points.len() {
        f(points);
        return;
    }
    // Lexicographic enumeration: at each slot, try remaining values ascending.
    let mut rest: Vec<Point> = points[from..].to_vec();
    rest.sort_unstable();
    for &choice in &rest {
        let pos = points[from..].iter().position(|&x| x == choice).unwrap() + from;
        points.swap(from, pos);
        permute_lex(points, from + 1, f);
        // Restore order for determinism of subsequent swaps.
        let pos = points[from..].iter().position(|&x| x == choice).unwrap() + from;
        points.swap(from, pos);
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}

pub(crate) fn symmetric_group(n: usize) -> PermGroup {
    if n <= 1 {
        return PermGroup::trivial(n.max(1));
    }
    let mut gens = Vec::new();
    let mut swap: Vec<Point> = (0..n as Point).collect();
    swap.swap(0, 1);
    gens.push(Permutation::from_images(swap).unwrap());
    if n > 2 {
        let cycle: Vec<Point> = (0..n as Point).map(|i| (i + 1) % n as Point).collect();
        gens.push(Permutation::from_images(cycle).unwrap());
    }
    PermGroup::new(n, gens).unwrap()
}
