//! Built-in example groups: generic families, the complete list of
//! transitive groups of degree ≤ 7 (up to conjugacy), and the named
//! fixtures used throughout the test suite.
//!
//! Every constructor is deterministic; orders are asserted in tests rather
//! than trusted.

use crate::action::{coset_action, CosetAction};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{Permutation, Point};

fn group(degree: usize, gens: &[&str]) -> PermGroup {
    PermGroup::from_generator_strings(degree, gens).expect("built-in generators are valid")
}

fn perm(text: &str, degree: usize) -> Permutation {
    Permutation::parse(text, degree).expect("built-in permutation is valid")
}

// ---------------------------------------------------------------------------
// Generic families
// ---------------------------------------------------------------------------

/// Cyclic group of order `n` acting regularly, `n ≥ 1`.
pub fn cyclic(n: usize) -> PermGroup {
    assert!(n >= 1);
    if n == 1 {
        return PermGroup::trivial(1);
    }
    let images: Vec<Point> = (0..n).map(|i| ((i + 1) % n) as Point).collect();
    PermGroup::new(n, vec![Permutation::from_images(images).unwrap()]).unwrap()
}

/// Dihedral group of order `2n` on the vertices of an `n`-gon, `n ≥ 3`.
pub fn dihedral(n: usize) -> PermGroup {
    assert!(n >= 3);
    let rot: Vec<Point> = (0..n).map(|i| ((i + 1) % n) as Point).collect();
    let flip: Vec<Point> = (0..n).map(|i| ((n - i) % n) as Point).collect();
    PermGroup::new(
        n,
        vec![
            Permutation::from_images(rot).unwrap(),
            Permutation::from_images(flip).unwrap(),
        ],
    )
    .unwrap()
}

/// Symmetric group in its natural action, `n ≥ 1`.
pub fn symmetric(n: usize) -> PermGroup {
    assert!(n >= 1);
    if n == 1 {
        return PermGroup::trivial(1);
    }
    let cycle: Vec<Point> = (0..n).map(|i| ((i + 1) % n) as Point).collect();
    let mut swap: Vec<Point> = (0..n as Point).collect();
    swap.swap(0, 1);
    PermGroup::new(
        n,
        vec![
            Permutation::from_images(cycle).unwrap(),
            Permutation::from_images(swap).unwrap(),
        ],
    )
    .unwrap()
}

/// Alternating group in its natural action, `n ≥ 3`.
pub fn alternating(n: usize) -> PermGroup {
    assert!(n >= 3);
    let three: Vec<Point> = (0..n)
        .map(|i| if i < 3 { ((i + 1) % 3) as Point } else { i as Point })
        .collect();
    if n == 3 {
        return PermGroup::new(3, vec![Permutation::from_images(three).unwrap()]).unwrap();
    }
    // (0 1 2) together with an n-cycle (n odd) or an (n-1)-cycle on
    // 1..n (n even) generates Alt(n).
    let big: Vec<Point> = if n % 2 == 1 {
        (0..n).map(|i| ((i + 1) % n) as Point).collect()
    } else {
        (0..n)
            .map(|i| {
                if i == 0 {
                    0
                } else {
                    (1 + (i % (n - 1))) as Point
                }
            })
            .collect()
    };
    PermGroup::new(
        n,
        vec![
            Permutation::from_images(three).unwrap(),
            Permutation::from_images(big).unwrap(),
        ],
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// The transitive groups of degree ≤ 7
// ---------------------------------------------------------------------------

/// One corpus entry: a named group with its expected order.
#[derive(Clone)]
pub struct CorpusEntry {
    /// Human-readable name.
    pub name: String,
    /// File-name-safe identifier.
    pub slug: String,
    pub group: PermGroup,
    pub order: u64,
}

fn entry(name: &str, slug: &str, group: PermGroup, order: u64) -> CorpusEntry {
    CorpusEntry {
        name: name.to_string(),
        slug: slug.to_string(),
        group,
        order,
    }
}

/// Sym(4) on the six edges of K4, edges ordered 01, 02, 03, 12, 13, 23.
pub fn s4_on_edges() -> PermGroup {
    group(6, &["[0,3,4,1,2,5]", "[3,4,0,5,1,2]"])
}

/// Alt(4) on the six edges of K4 (equivalently, on the cosets of a C2).
pub fn a4_on_edges() -> PermGroup {
    group(6, &["[3,0,4,1,5,2]", "[1,2,0,5,3,4]"])
}

/// Every transitive group of degree ≤ 7, one representative per conjugacy
/// class (37 in total), with asserted orders.
pub fn transitive_small() -> Vec<CorpusEntry> {
    let budgets = Budgets::default();
    let s4_over_c4 = coset_action(
        &symmetric(4),
        &group(4, &["(0 1 2 3)"]),
        &budgets,
    )
    .expect("index-6 coset action")
    .group;
    vec![
        entry("C1", "t1_01_c1", PermGroup::trivial(1), 1),
        entry("C2", "t2_01_c2", cyclic(2), 2),
        entry("C3", "t3_01_c3", cyclic(3), 3),
        entry("S3", "t3_02_s3", symmetric(3), 6),
        entry("C4", "t4_01_c4", cyclic(4), 4),
        entry("V4", "t4_02_v4", group(4, &["(0 1)(2 3)", "(0 2)(1 3)"]), 4),
        entry("D8", "t4_03_d8", dihedral(4), 8),
        entry("A4", "t4_04_a4", alternating(4), 12),
        entry("S4", "t4_05_s4", symmetric(4), 24),
        entry("C5", "t5_01_c5", cyclic(5), 5),
        entry("D10", "t5_02_d10", dihedral(5), 10),
        entry("F20", "t5_03_f20", group(5, &["(0 1 2 3 4)", "(1 2 4 3)"]), 20),
        entry("A5", "t5_04_a5", alternating(5), 60),
        entry("S5", "t5_05_s5", symmetric(5), 120),
        entry("C6", "t6_01_c6", cyclic(6), 6),
        entry(
            "S3 (regular)",
            "t6_02_s3reg",
            group(6, &["(0 1 2)(3 5 4)", "(0 3)(1 4)(2 5)"]),
            6,
        ),
        entry("D12", "t6_03_d12", dihedral(6), 12),
        entry("A4 on K4 edges", "t6_04_a4edges", a4_on_edges(), 12),
        entry(
            "C3 wr C2",
            "t6_05_c3wrc2",
            group(6, &["(0 1 2)", "(3 4 5)", "(0 3)(1 4)(2 5)"]),
            18,
        ),
        entry(
            "C2 x A4",
            "t6_06_c2xa4",
            group(6, &["[3,0,4,1,5,2]", "[1,2,0,5,3,4]", "(0 5)(1 4)(2 3)"]),
            24,
        ),
        entry("S4 on K4 edges", "t6_07_s4edges", s4_on_edges(), 24),
        entry("S4 on cosets of C4", "t6_08_s4overc4", s4_over_c4, 24),
        entry(
            "F36 (3^2:4)",
            "t6_09_f36",
            group(6, &["(0 1 2)", "(0 3)(1 4 2 5)"]),
            36,
        ),
        entry(
            "half wr (S3 x S3 same sign):2",
            "t6_10_halfwr",
            group(6, &["(0 1 2)", "(0 1)(3 4)", "(0 3)(1 4)(2 5)"]),
            36,
        ),
        entry(
            "C2 x S4",
            "t6_11_c2xs4",
            group(6, &["[0,3,4,1,2,5]", "[3,4,0,5,1,2]", "(0 5)(1 4)(2 3)"]),
            48,
        ),
        entry(
            "PSL(2,5)",
            "t6_12_psl25",
            group(6, &["(0 1 2 3 4)", "(0 5)(1 4)"]),
            60,
        ),
        entry(
            "S3 wr C2",
            "t6_13_s3wrc2",
            group(6, &["(0 1 2)", "(0 1)", "(0 3)(1 4)(2 5)"]),
            72,
        ),
        entry(
            "PGL(2,5)",
            "t6_14_pgl25",
            group(6, &["(0 1 2 3 4)", "(1 2 4 3)", "(0 5)(1 4)"]),
            120,
        ),
        entry("A6", "t6_15_a6", alternating(6), 360),
        entry("S6", "t6_16_s6", symmetric(6), 720),
        entry("C7", "t7_01_c7", cyclic(7), 7),
        entry("D14", "t7_02_d14", dihedral(7), 14),
        entry(
            "F21 (7:3)",
            "t7_03_f21",
            group(7, &["(0 1 2 3 4 5 6)", "(1 2 4)(3 6 5)"]),
            21,
        ),
        entry(
            "F42 (7:6)",
            "t7_04_f42",
            group(7, &["(0 1 2 3 4 5 6)", "(1 3 2 6 4 5)"]),
            42,
        ),
        entry(
            "PSL(3,2)",
            "t7_05_psl32",
            group(7, &["(0 1 2 3 4 5 6)", "(1 2)(3 6)"]),
            168,
        ),
        entry("A7", "t7_06_a7", alternating(7), 2520),
        entry("S7", "t7_07_s7", symmetric(7), 5040),
    ]
}

// ---------------------------------------------------------------------------
// Named fixtures
// ---------------------------------------------------------------------------

/// The Mathieu group M11 in its natural degree-11 action.
pub fn m11_11() -> PermGroup {
    group(11, &["(0 1 2 3 4 5 6 7 8 9 10)", "(2 6 10 7)(3 9 4 5)"])
}

/// M11 in its 3-transitive degree-12 action, realized as the coset action
/// on an L2(11) subgroup. The subgroup is found deterministically: the
/// first involution (in element-enumeration order) that together with the
/// 11-cycle generates a group of order 660.
pub fn m11_12(budgets: &Budgets) -> Result<PermGroup> {
    let m11 = m11_11();
    let x = m11.generators()[0].clone();
    let mut l2_11 = None;
    for e in m11.chain().elements() {
        if !e.has_order(2) {
            continue;
        }
        let candidate = PermGroup::new(11, vec![x.clone(), e])?;
        if candidate.order_u64() == Some(660) {
            l2_11 = Some(candidate);
            break;
        }
    }
    let l2_11 = l2_11.ok_or_else(|| {
        Error::Unsupported("internal error: no L2(11) subgroup found in M11".into())
    })?;
    let action = coset_action(&m11, &l2_11, budgets)?;
    Ok(action.group)
}

// --- L3(3) on the 13 points of PG(2,3) -------------------------------------

type Mat3 = [[u8; 3]; 3];

fn normalize_f3(mut v: [u8; 3]) -> [u8; 3] {
    for i in 0..3 {
        if v[i] != 0 {
            if v[i] == 2 {
                for x in v.iter_mut() {
                    *x = (*x * 2) % 3;
                }
            }
            return v;
        }
    }
    v
}

fn projective_points_f3() -> Vec<[u8; 3]> {
    let mut points = Vec::new();
    for a in 0..3u8 {
        for b in 0..3u8 {
            for c in 0..3u8 {
                let v = [a, b, c];
                if v == [0, 0, 0] {
                    continue;
                }
                let n = normalize_f3(v);
                if !points.contains(&n) {
                    points.push(n);
                }
            }
        }
    }
    debug_assert_eq!(points.len(), 13);
    points
}

fn mat_to_perm(m: &Mat3, points: &[[u8; 3]]) -> Permutation {
    let images: Vec<Point> = points
        .iter()
        .map(|v| {
            let mut w = [0u8; 3];
            for (j, wj) in w.iter_mut().enumerate() {
                let mut s = 0u8;
                for i in 0..3 {
                    s = (s + v[i] * m[i][j]) % 3;
                }
                *wj = s;
            }
            let w = normalize_f3(w);
            points.iter().position(|p| *p == w).expect("projective point") as Point
        })
        .collect();
    Permutation::from_images(images).expect("matrix acts bijectively")
}

/// L3(3) = PSL(3,3) acting on the 13 points of the projective plane over
/// F3, generated by a transvection and the coordinate 3-cycle.
pub fn l3_3_13() -> PermGroup {
    let points = projective_points_f3();
    let transvection: Mat3 = [[1, 1, 0], [0, 1, 0], [0, 0, 1]];
    let rotation: Mat3 = [[0, 1, 0], [0, 0, 1], [1, 0, 0]];
    PermGroup::new(
        13,
        vec![
            mat_to_perm(&transvection, &points),
            mat_to_perm(&rotation, &points),
        ],
    )
    .unwrap()
}

/// The elementary abelian order-9 subgroup of [`l3_3_13`] formed by the
/// transvections with center `[1:0:0]`, and its normalizer, realized as the
/// degree-13 coset action of L3(3) on that normalizer.
pub fn l3_3_normalizer_action(budgets: &Budgets) -> Result<CosetAction> {
    let g = l3_3_13();
    let points = projective_points_f3();
    let u1: Mat3 = [[1, 0, 0], [1, 1, 0], [0, 0, 1]];
    let u2: Mat3 = [[1, 0, 0], [0, 1, 0], [1, 0, 1]];
    let e9 = PermGroup::new(
        13,
        vec![mat_to_perm(&u1, &points), mat_to_perm(&u2, &points)],
    )?;
    debug_assert_eq!(e9.order_u64(), Some(9));
    // Normalizer by element enumeration.
    let mut norm_gens = Vec::new();
    for x in g.chain().elements() {
        if e9
            .generators()
            .iter()
            .all(|t| e9.chain().contains(&t.conjugate_by(&x)))
        {
            norm_gens.push(x);
        }
    }
    let normalizer = PermGroup::new(13, norm_gens)?;
    coset_action(&g, &normalizer, budgets)
}

/// The sharply 2-transitive Frobenius group AGL(1,32) = 2^5:31 on the 32
/// elements of F32 = F2[x]/(x^5 + x^2 + 1), generated by z ↦ z + 1 and
/// z ↦ xz.
pub fn frobenius_32() -> PermGroup {
    let add_one: Vec<Point> = (0..32).map(|z| (z ^ 1) as Point).collect();
    let mul_x: Vec<Point> = (0..32u32)
        .map(|z| {
            let s = z << 1;
            let s = if s & 32 != 0 { (s ^ 32) ^ 0b101 } else { s };
            s as Point
        })
        .collect();
    PermGroup::new(
        32,
        vec![
            Permutation::from_images(add_one).unwrap(),
            Permutation::from_images(mul_x).unwrap(),
        ],
    )
    .unwrap()
}

/// The exponent-3 extraspecial group of order 27 acting faithfully and
/// transitively on 9 points (the affine plane over F3): generated by
/// (x,y) ↦ (x+1, y) and (x,y) ↦ (x, y+x).
pub fn heisenberg_27() -> PermGroup {
    let idx = |x: u32, y: u32| (3 * (x % 3) + (y % 3)) as Point;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for x in 0..3 {
        for y in 0..3 {
            a.push(idx(x + 1, y));
            b.push(idx(x, y + x));
        }
    }
    PermGroup::new(
        9,
        vec![
            Permutation::from_images(a).unwrap(),
            Permutation::from_images(b).unwrap(),
        ],
    )
    .unwrap()
}

/// A4 × S5 on 4 + 5 = 9 points (intransitive; used as an abstract point
/// stabilizer).
pub fn a4_x_s5() -> PermGroup {
    group(9, &["(0 1 2)", "(1 2 3)", "(4 5)", "(4 5 6 7 8)"])
}

/// The order-32 subgroup of shape 2 × 2 × D4 inside [`a4_x_s5`]: the Klein
/// four-group on the A4 side times a dihedral group of order 8 on the S5
/// side.
pub fn a4_x_s5_subgroup_32() -> PermGroup {
    group(9, &["(0 1)(2 3)", "(0 2)(1 3)", "(4 5 6 7)", "(4 6)"])
}

/// PGL(2,19) on the 20 points of the projective line over F19 (points
/// 0..18 are the field, 19 is ∞), generated by x ↦ x+1, x ↦ 2x, and
/// x ↦ −1/x.
pub fn pgl2_19() -> PermGroup {
    const P: u32 = 19;
    const INF: u32 = 19;
    let inv = |x: u32| -> u32 {
        (1..P).find(|&y| (x * y) % P == 1).expect("unit inverse")
    };
    let mut t = Vec::new();
    let mut m = Vec::new();
    let mut w = Vec::new();
    for z in 0..=INF {
        if z == INF {
            t.push(INF as Point);
            m.push(INF as Point);
            w.push(0 as Point);
        } else {
            t.push(((z + 1) % P) as Point);
            m.push(((2 * z) % P) as Point);
            w.push(if z == 0 {
                INF as Point
            } else {
                ((P - inv(z)) % P) as Point
            });
        }
    }
    PermGroup::new(
        20,
        vec![
            Permutation::from_images(t).unwrap(),
            Permutation::from_images(m).unwrap(),
            Permutation::from_images(w).unwrap(),
        ],
    )
    .unwrap()
}

/// The configuration for the M2 construction on A6: the degree-180 coset
/// action of A6 on ⟨(0 1)(2 3)⟩, together with the images of
/// g = (0 1)(2 3) and h = (0 2)(1 3) in it. The image of g stabilizes
/// point 0 (the trivial coset).
pub struct A6On180 {
    pub action: CosetAction,
    pub g: Permutation,
    pub h: Permutation,
}

pub fn a6_on_180(budgets: &Budgets) -> Result<A6On180> {
    let a6 = group(6, &["(0 1 2 3 4)", "(3 4 5)"]);
    let c2 = group(6, &["(0 1)(2 3)"]);
    let action = coset_action(&a6, &c2, budgets)?;
    let g = action.permutation_of(&perm("(0 1)(2 3)", 6))?;
    let h = action.permutation_of(&perm("(0 2)(1 3)", 6))?;
    Ok(A6On180 { action, g, h })
}

/// The full built-in corpus: the 37 transitive groups of degree ≤ 7 plus
/// the explicit named fixtures (groups that need no coset construction).
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    let mut all = transitive_small();
    all.push(entry(
        "extraspecial 3^(1+2) on 9 points",
        "fx_heisenberg27",
        heisenberg_27(),
        27,
    ));
    all.push(entry("A4 x S5 on 9 points", "fx_a4xs5", a4_x_s5(), 1440));
    all.push(entry(
        "AGL(1,32) = 2^5:31",
        "fx_frobenius32",
        frobenius_32(),
        992,
    ));
    all.push(entry("PGL(2,19) on 20 points", "fx_pgl2_19", pgl2_19(), 6840));
    all.push(entry("L3(3) on 13 points", "fx_l3_3", l3_3_13(), 5616));
    all.push(entry("M11 on 11 points", "fx_m11_11", m11_11(), 7920));
    all
}
