//! Constructions of new actions from a group: the action on the cosets of a
//! subgroup, and the action induced on an invariant subset of points.

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::group::{PermGroup, StabilizerChain};
use crate::perm::{Permutation, Point};
use num_traits::ToPrimitive;

/// How an analyzed action came to be; carried for reporting only.
#[derive(Debug, Clone)]
pub enum Provenance {
    /// Given directly by generators.
    Explicit,
    /// Coset action of a parent group on a subgroup of the given index.
    Cosets { index: u64 },
    /// Action induced on an invariant set of points of a parent action.
    Induced { lambda: Vec<Point> },
}

/// A permutation action ready for analysis: a realized permutation group on
/// `0..degree` plus presentation metadata.
#[derive(Clone)]
pub struct Action {
    pub name: String,
    pub group: PermGroup,
    /// Optional human-readable labels, one per point.
    pub labels: Option<Vec<String>>,
    pub provenance: Provenance,
}

impl Action {
    pub fn explicit(name: impl Into<String>, group: PermGroup) -> Self {
        Action {
            name: name.into(),
            group,
            labels: None,
            provenance: Provenance::Explicit,
        }
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }
}

/// The action of `G` on the right cosets of `H`, with point `0` the coset `H`
/// itself. Cosets are discovered by a breadth-first walk multiplying by the
/// generators of `G` in order, so the numbering is deterministic.
pub struct CosetAction {
    /// The realized image of `G` in `Sym(index)`. Generators correspond 1:1
    /// to the generators of `G` (identities and duplicates are kept so the
    /// correspondence is positional).
    pub group: PermGroup,
    /// Coset representatives; `reps[i]` represents the coset `H·reps[i]`.
    pub reps: Vec<Permutation>,
    /// `|G : H|`.
    pub index: u64,
    parent_gens: Vec<Permutation>,
    subgroup_chain: StabilizerChain,
    parent_degree: usize,
}

/// Builds the coset action of `G` on `H`.
///
/// Verifies `H ≤ G` by sifting, fails with [`Error::DegreeCap`] if the index
/// exceeds `budgets.degree_cap`. The point stabilizer of `0` in the image is
/// exactly the image of `H`.
pub fn coset_action(g: &PermGroup, h: &PermGroup, budgets: &Budgets) -> Result<CosetAction> {
    if g.degree() != h.degree() {
        return Err(Error::DegreeMismatch {
            left: g.degree(),
            right: h.degree(),
        });
    }
    for (i, gen) in h.generators().iter().enumerate() {
        if !g.is_member(gen)? {
            return Err(Error::NotASubgroup { generator: i });
        }
    }
    let index_big = g.order() / h.order();
    let index = match index_big.to_u64() {
        Some(i) if i <= budgets.degree_cap => i,
        _ => {
            return Err(Error::DegreeCap {
                degree: index_big.to_string(),
                cap: budgets.degree_cap,
            })
        }
    };
    let h_chain = h.chain().clone();
    let degree = g.degree();

    // Identify cosets by bucketing on a cheap invariant: the minimum image of
    // the H-orbit of a fixed anchor point. Equal cosets share the invariant,
    // so only a small bucket needs the exact sift test Hx = Hy ⟺ xy⁻¹ ∈ H.
    let anchor = h_chain.base().first().copied().unwrap_or(0);
    let anchor_orbit: Vec<Point> = {
        let mut o = h.orbit_of(anchor)?;
        o.sort_unstable();
        o
    };
    let invariant = |x: &Permutation| -> Point {
        anchor_orbit.iter().map(|&p| x.image(p)).min().unwrap()
    };
    let mut buckets: std::collections::HashMap<Point, Vec<usize>> =
        std::collections::HashMap::new();
    let mut reps: Vec<Permutation> = vec![Permutation::identity(degree)];
    let mut rep_invs: Vec<Permutation> = vec![Permutation::identity(degree)];
    buckets.insert(invariant(&reps[0]), vec![0]);
    let mut images: Vec<Vec<Point>> = vec![Vec::new(); g.generators().len()];
    let mut head = 0;
    while head < reps.len() {
        let x = reps[head].clone();
        head += 1;
        for (gi, gen) in g.generators().iter().enumerate() {
            let y = x.then(gen);
            let key = invariant(&y);
            let mut found = None;
            if let Some(bucket) = buckets.get(&key) {
                for &j in bucket {
                    // H·y = H·reps[j] ⟺ y · reps[j]⁻¹ ∈ H.
                    if h_chain.contains(&y.then(&rep_invs[j])) {
                        found = Some(j);
                        break;
                    }
                }
            }
            let j = match found {
                Some(j) => j,
                None => {
                    let j = reps.len();
                    rep_invs.push(y.inverse());
                    reps.push(y);
                    buckets.entry(key).or_default().push(j);
                    j
                }
            };
            images[gi].push(j as Point);
        }
    }
    debug_assert_eq!(reps.len() as u64, index);
    let realized_gens: Vec<Permutation> = images
        .into_iter()
        .map(|im| Permutation::from_images(im).expect("coset images form a permutation"))
        .collect();
    // Every generator of H must fix the coset H itself.
    #[cfg(debug_assertions)]
    for (gen, img) in g.generators().iter().zip(&realized_gens) {
        if h_chain.contains(gen) {
            debug_assert_eq!(img.image(0), 0);
        }
    }
    let group = PermGroup::new(index as usize, realized_gens)?;
    Ok(CosetAction {
        group,
        reps,
        index,
        parent_gens: g.generators().to_vec(),
        subgroup_chain: h_chain,
        parent_degree: degree,
    })
}

impl CosetAction {
    /// The permutation induced on cosets by an arbitrary element of `G`.
    pub fn permutation_of(&self, g: &Permutation) -> Result<Permutation> {
        if g.degree() != self.parent_degree {
            return Err(Error::DegreeMismatch {
                left: self.parent_degree,
                right: g.degree(),
            });
        }
        let mut images = Vec::with_capacity(self.reps.len());
        for rep in &self.reps {
            let y = rep.then(g);
            let mut target = None;
            for (j, other) in self.reps.iter().enumerate() {
                if self.subgroup_chain.contains(&y.then(&other.inverse())) {
                    target = Some(j as Point);
                    break;
                }
            }
            images.push(target.ok_or(Error::NotAMember)?);
        }
        Permutation::from_images(images)
    }

    /// Generators of the kernel of the coset action (the core of `H`), as a
    /// subgroup of the parent group.
    ///
    /// Computed from a combined action on `parent points ⊔ cosets` by taking
    /// the pointwise stabilizer of all coset points.
    pub fn kernel(&self) -> Result<PermGroup> {
        let n = self.parent_degree;
        let m = self.index as usize;
        let combined_gens: Vec<Permutation> = self
            .parent_gens
            .iter()
            .zip(self.group.generators())
            .map(|(g, phi)| {
                let mut images: Vec<Point> = g.images().to_vec();
                images.extend(phi.images().iter().map(|&p| p + n as Point));
                Permutation::from_images(images).expect("combined images form a permutation")
            })
            .collect();
        let coset_points: Vec<Point> = (n as Point..(n + m) as Point).collect();
        let chain = StabilizerChain::build(n + m, &combined_gens, &coset_points);
        let kernel_gens: Vec<Permutation> = chain
            .level_gens(m)
            .iter()
            .map(|g| {
                Permutation::from_images(g.images()[..n].to_vec())
                    .expect("kernel generators restrict to the parent points")
            })
            .collect();
        let mut dedup = Vec::new();
        for g in kernel_gens {
            if !g.is_identity() && !dedup.contains(&g) {
                dedup.push(g);
            }
        }
        PermGroup::new(n, dedup)
    }

    /// Labels the points by their coset representatives.
    pub fn labels(&self) -> Vec<String> {
        self.reps.iter().map(|r| r.to_cycle_string()).collect()
    }

    pub fn into_action(self, name: impl Into<String>) -> Action {
        Action {
            name: name.into(),
            labels: Some(self.labels()),
            provenance: Provenance::Cosets { index: self.index },
            group: self.group,
        }
    }
}

/// The action induced on an invariant subset by the setwise stabilizer.
pub struct InducedAction {
    /// The points of Λ, ascending; point `i` of the induced action is
    /// `lambda[i]` of the parent.
    pub lambda: Vec<Point>,
    /// The realized group on `0..lambda.len()` (the image of the setwise
    /// stabilizer under restriction).
    pub group: PermGroup,
    /// The setwise stabilizer `G_Λ` inside the parent group.
    pub setwise_stabilizer: PermGroup,
}

/// Restricts `g` to the sorted point set `lambda`, relabeling to
/// `0..lambda.len()`. Fails if `g` does not preserve the set.
pub fn restrict_to(g: &Permutation, lambda: &[Point]) -> Result<Permutation> {
    let mut images = Vec::with_capacity(lambda.len());
    for &p in lambda {
        let q = g.image(p);
        match lambda.binary_search(&q) {
            Ok(idx) => images.push(idx as Point),
            Err(_) => {
                return Err(Error::Inapplicable(format!(
                    "point {p} leaves the set under the permutation"
                )))
            }
        }
    }
    Permutation::from_images(images)
}

/// Computes `G_Λ` and its faithful image on Λ.
///
/// The restriction map is a homomorphism with kernel the pointwise
/// stabilizer of Λ, so `|G_Λ| = |image| · |G_(Λ)|`.
pub fn induced_action(g: &PermGroup, lambda: &[Point], budgets: &Budgets) -> Result<InducedAction> {
    let mut sorted: Vec<Point> = lambda.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let stab = g.setwise_stabilizer(&sorted, budgets)?;
    let restricted: Vec<Permutation> = stab
        .generators()
        .iter()
        .map(|gen| restrict_to(gen, &sorted))
        .collect::<Result<_>>()?;
    let group = PermGroup::new(sorted.len().max(1), restricted)?;
    Ok(InducedAction {
        lambda: sorted,
        group,
        setwise_stabilizer: stab,
    })
}

impl InducedAction {
    pub fn into_action(self, name: impl Into<String>) -> Action {
        Action {
            name: name.into(),
            labels: Some(self.lambda.iter().map(|p| p.to_string()).collect()),
            provenance: Provenance::Induced {
                lambda: self.lambda.clone(),
            },
            group: self.group,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn group(degree: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_generator_strings(degree, gens).unwrap()
    }

    #[test]
    fn coset_action_of_s4_on_s3() {
        let budgets = Budgets::default();
        let s4 = group(4, &["(0 1)", "(0 1 2 3)"]);
        let s3 = group(4, &["(1 2)", "(1 2 3)"]); // stabilizer of 0
        let act = coset_action(&s4, &s3, &budgets).unwrap();
        assert_eq!(act.index, 4);
        assert_eq!(act.group.degree(), 4);
        assert_eq!(act.group.order_u64(), Some(24));
        assert!(act.group.is_transitive());
        // Kernel of a faithful action is trivial.
        assert_eq!(act.kernel().unwrap().order_u64(), Some(1));
    }

    #[test]
    fn coset_action_with_kernel() {
        let budgets = Budgets::default();
        // C6 = ⟨(0 1 2 3 4 5)⟩ acting on cosets of its subgroup C2 = ⟨g³⟩:
        // the image is C3 and the kernel is C2.
        let c6 = group(6, &["(0 1 2 3 4 5)"]);
        let c2 = group(6, &["(0 3)(1 4)(2 5)"]);
        let act = coset_action(&c6, &c2, &budgets).unwrap();
        assert_eq!(act.index, 3);
        assert_eq!(act.group.order_u64(), Some(3));
        let kernel = act.kernel().unwrap();
        assert_eq!(kernel.order_u64(), Some(2));
        assert!(kernel.is_member(&Permutation::parse("(0 3)(1 4)(2 5)", 6).unwrap()).unwrap());
    }

    #[test]
    fn coset_action_rejects_non_subgroup() {
        let budgets = Budgets::default();
        let a4 = group(4, &["(0 1 2)", "(1 2 3)"]);
        let c2 = group(4, &["(0 1)"]);
        assert!(matches!(
            coset_action(&a4, &c2, &budgets),
            Err(Error::NotASubgroup { .. })
        ));
    }

    #[test]
    fn coset_degree_cap_is_enforced() {
        let mut budgets = Budgets::default();
        budgets.degree_cap = 3;
        let s4 = group(4, &["(0 1)", "(0 1 2 3)"]);
        let c2 = group(4, &["(0 1)"]);
        assert!(matches!(
            coset_action(&s4, &c2, &budgets),
            Err(Error::DegreeCap { .. })
        ));
    }

    #[test]
    fn permutation_of_arbitrary_element() {
        let budgets = Budgets::default();
        let s4 = group(4, &["(0 1)", "(0 1 2 3)"]);
        let s3 = group(4, &["(1 2)", "(1 2 3)"]);
        let act = coset_action(&s4, &s3, &budgets).unwrap();
        let g = Permutation::parse("(0 1 2 3)", 4).unwrap();
        let img = act.permutation_of(&g).unwrap();
        assert!(act.group.is_member(&img).unwrap());
        assert!(!img.is_identity());
        // The identity maps to the identity.
        assert!(act
            .permutation_of(&Permutation::identity(4))
            .unwrap()
            .is_identity());
    }

    #[test]
    fn induced_action_on_a4_triple() {
        let budgets = Budgets::default();
        let a4 = group(4, &["(0 1 2)", "(1 2 3)"]);
        let ind = induced_action(&a4, &[0, 1, 2], &budgets).unwrap();
        assert_eq!(ind.group.degree(), 3);
        assert_eq!(ind.group.order_u64(), Some(3));
        // Homomorphism bookkeeping: |G_Λ| = |image| · |kernel|.
        let kernel = a4.pointwise_stabilizer(&[0, 1, 2]).unwrap();
        assert_eq!(
            ind.setwise_stabilizer.order(),
            ind.group.order() * kernel.order()
        );
        assert!(kernel.order().is_one());
    }

    #[test]
    fn restrict_rejects_non_invariant() {
        let g = Permutation::parse("(0 3)", 4).unwrap();
        assert!(restrict_to(&g, &[0, 1]).is_err());
        let h = Permutation::parse("(0 1)", 4).unwrap();
        assert_eq!(restrict_to(&h, &[0, 1]).unwrap().to_cycle_string(), "(0 1)");
    }
}
