//! Permutations of `{0, 1, .., n-1}` stored as image tables.
//!
//! A permutation `g` acts on the right: the image of `ω` under `g` is written
//! `ω^g`. Composition is left-to-right: `ω^(gh) = (ω^g)^h`, so `compose(g, h)`
//! is "apply `g`, then `h`".

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use std::fmt;

/// A point of the set being acted on. Points are 0-based everywhere in the
/// library; 1-based input is converted at the CLI boundary.
pub type Point = u32;

/// A permutation of `{0, .., degree-1}` as a full image table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<Point>,
}

impl Permutation {
    /// The identity permutation of the given degree.
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as Point).collect(),
        }
    }

    /// Builds a permutation from an image table, validating that it is a
    /// bijection on `0..images.len()`.
    pub fn from_images(images: Vec<Point>) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &p in &images {
            if (p as usize) >= degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
            if seen[p as usize] {
                return Err(Error::Parse(format!("image {p} repeated: not a bijection")));
            }
            seen[p as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Number of points acted on.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// The raw image table.
    pub fn images(&self) -> &[Point] {
        &self.images
    }

    /// `ω^g` without bounds checking beyond the usual slice panic.
    #[inline]
    pub fn image(&self, p: Point) -> Point {
        self.images[p as usize]
    }

    /// `ω^g`, rejecting out-of-range points.
    pub fn act(&self, p: Point) -> Result<Point> {
        if (p as usize) >= self.degree() {
            return Err(Error::PointOutOfRange {
                point: p,
                degree: self.degree(),
            });
        }
        Ok(self.image(p))
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as Point == p)
    }

    /// Left-to-right composition: `ω^(self · other) = (ω^self)^other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        let images = self.images.iter().map(|&p| other.image(p)).collect();
        Ok(Permutation { images })
    }

    /// `compose` for contexts where equal degrees are a structural invariant.
    pub(crate) fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        let images = self.images.iter().map(|&p| other.image(p)).collect();
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p as usize] = i as Point;
        }
        Permutation { images }
    }

    /// The conjugate `self^x = x⁻¹ · self · x`.
    pub fn conjugate_by(&self, x: &Permutation) -> Permutation {
        x.inverse().then(self).then(x)
    }

    /// Points moved by the permutation, ascending.
    pub fn support(&self) -> Vec<Point> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i as Point != p)
            .map(|(i, _)| i as Point)
            .collect()
    }

    /// Number of fixed points.
    pub fn fixed_point_count(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i as Point == p)
            .count()
    }

    /// Fixed points, ascending.
    pub fn fixed_points(&self) -> Vec<Point> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i as Point == p)
            .map(|(i, _)| i as Point)
            .collect()
    }

    /// Order of the element (lcm of cycle lengths).
    pub fn element_order(&self) -> BigUint {
        let mut order = BigUint::one();
        for cycle in self.cycles() {
            order = order.lcm(&BigUint::from(cycle.len()));
        }
        order
    }

    /// True if the element has order exactly `n`.
    pub fn has_order(&self, n: u64) -> bool {
        n > 0 && self.element_order() == BigUint::from(n)
    }

    /// Nontrivial cycles in canonical order: each cycle starts at its smallest
    /// point, cycles sorted by that starting point.
    pub fn cycles(&self) -> Vec<Vec<Point>> {
        let degree = self.degree();
        let mut seen = vec![false; degree];
        let mut cycles = Vec::new();
        for start in 0..degree {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start as Point];
            seen[start] = true;
            let mut p = self.images[start];
            while p as usize != start {
                seen[p as usize] = true;
                cycle.push(p);
                p = self.images[p as usize];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Parses either disjoint cycle notation `"(0 1 2)(3 4)"` (separators may
    /// be spaces or commas, `"()"` is the identity) or an image table
    /// `"[1, 2, 0]"`. Points are 0-based.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        Self::parse_with_offset(text, degree, 0)
    }

    /// Like [`Permutation::parse`] but with points numbered from `offset`
    /// (pass 1 for classical 1-based notation).
    pub fn parse_with_offset(text: &str, degree: usize, offset: u32) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.starts_with('[') {
            Self::parse_image_list(trimmed, degree, offset)
        } else if trimmed.starts_with('(') {
            Self::parse_cycles(trimmed, degree, offset)
        } else {
            Err(Error::Parse(format!(
                "expected cycle notation \"(..)\" or image list \"[..]\", got {trimmed:?}"
            )))
        }
    }

    fn parse_point(token: &str, degree: usize, offset: u32) -> Result<Point> {
        let raw: u32 = token
            .parse()
            .map_err(|_| Error::Parse(format!("invalid point {token:?}")))?;
        if raw < offset {
            return Err(Error::Parse(format!(
                "point {raw} below numbering offset {offset}"
            )));
        }
        let p = raw - offset;
        if (p as usize) >= degree {
            return Err(Error::PointOutOfRange { point: p, degree });
        }
        Ok(p)
    }

    fn parse_image_list(text: &str, degree: usize, offset: u32) -> Result<Self> {
        let inner = text
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("unbalanced brackets in {text:?}")))?;
        let mut images = Vec::with_capacity(degree);
        for token in inner.split(',') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            images.push(Self::parse_point(token, degree, offset)?);
        }
        if images.len() != degree {
            return Err(Error::Parse(format!(
                "image list has {} entries, expected degree {degree}",
                images.len()
            )));
        }
        Self::from_images(images)
    }

    fn parse_cycles(text: &str, degree: usize, offset: u32) -> Result<Self> {
        let mut images: Vec<Point> = (0..degree as Point).collect();
        let mut used = vec![false; degree];
        let mut rest = text.trim();
        let mut any = false;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' at {rest:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("missing ')' in {text:?}")))?;
            let body = &open[..close];
            rest = open[close + 1..].trim_start();
            any = true;
            let points: Vec<Point> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| Self::parse_point(t, degree, offset))
                .collect::<Result<_>>()?;
            if points.is_empty() {
                continue; // "()" — identity factor
            }
            if points.len() == 1 {
                return Err(Error::Parse(format!(
                    "cycle ({}) of length 1 is not allowed; omit fixed points",
                    points[0]
                )));
            }
            for &p in &points {
                if used[p as usize] {
                    return Err(Error::Parse(format!(
                        "point {p} repeated across cycles in {text:?}"
                    )));
                }
                used[p as usize] = true;
            }
            for w in points.windows(2) {
                images[w[0] as usize] = w[1];
            }
            images[*points.last().unwrap() as usize] = points[0];
        }
        if !any {
            return Err(Error::Parse(format!("no cycles found in {text:?}")));
        }
        Self::from_images(images)
    }

    /// Canonical disjoint-cycle form: cycles sorted by smallest point, each
    /// cycle starting at its smallest point, fixed points omitted, identity
    /// printed as `"()"`.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut out = String::new();
        for cycle in cycles {
            out.push('(');
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(&p.to_string());
            }
            out.push(')');
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.to_cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, degree: usize) -> Permutation {
        Permutation::parse(text, degree).unwrap()
    }

    #[test]
    fn compose_is_left_to_right() {
        // ω^(gh) = (ω^g)^h: with g = (0 1 2), h = (0 1), gh = (1 2).
        let g = parse("(0 1 2)", 3);
        let h = parse("(0 1)", 3);
        let gh = g.compose(&h).unwrap();
        assert_eq!(gh.to_cycle_string(), "(1 2)");
    }

    #[test]
    fn parse_image_list_roundtrip() {
        let g = parse("[1, 2, 0]", 3);
        assert_eq!(g.to_cycle_string(), "(0 1 2)");
    }

    #[test]
    fn parse_rejects_repeated_point() {
        assert!(Permutation::parse("(0 1)(1 2)", 3).is_err());
    }

    #[test]
    fn parse_rejects_out_of_range() {
        assert!(Permutation::parse("(0 5)", 3).is_err());
        assert!(Permutation::parse("[0, 1, 3]", 3).is_err());
    }

    #[test]
    fn parse_rejects_non_bijection_image_list() {
        assert!(Permutation::parse("[0, 0, 1]", 3).is_err());
        assert!(Permutation::parse("[0, 1]", 3).is_err());
    }

    #[test]
    fn identity_prints_as_unit() {
        assert_eq!(Permutation::identity(5).to_cycle_string(), "()");
        assert_eq!(parse("()", 4).to_cycle_string(), "()");
    }

    #[test]
    fn canonical_cycle_order() {
        let g = parse("(4 3)(2 0 1)", 5);
        assert_eq!(g.to_cycle_string(), "(0 1 2)(3 4)");
    }

    #[test]
    fn one_based_offset() {
        let g = Permutation::parse_with_offset("(1 2 3)", 3, 1).unwrap();
        assert_eq!(g.to_cycle_string(), "(0 1 2)");
    }

    #[test]
    fn inverse_and_conjugate() {
        let g = parse("(0 1 2 3)", 4);
        assert!(g.compose(&g.inverse()).unwrap().is_identity());
        let x = parse("(0 3)", 4);
        // g^x maps ω^x ↦ (ω^g)^x, so the cycle (0 1 2 3) relabels to
        // (3 1 2 0) = (0 3 1 2).
        let c = g.conjugate_by(&x);
        assert_eq!(c.to_cycle_string(), "(0 3 1 2)".to_string());
    }

    #[test]
    fn element_order_and_support() {
        let g = parse("(0 1)(2 3 4)", 6);
        assert_eq!(g.element_order(), BigUint::from(6u32));
        assert!(g.has_order(6));
        assert!(!g.has_order(3));
        assert_eq!(g.support(), vec![0, 1, 2, 3, 4]);
        assert_eq!(g.fixed_points(), vec![5]);
        assert_eq!(g.fixed_point_count(), 1);
    }
}
