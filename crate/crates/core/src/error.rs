use thiserror::Error;

/// Errors shared across the library.
///
/// Invalid input (parse failures, degree mismatches, out-of-range points) is
/// kept distinct from resource exhaustion (`Budget`) so that callers can map
/// them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// A permutation, group, or tuple failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// Two objects of different degrees were combined.
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    /// A point outside `0..degree` was used.
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: u32, degree: usize },

    /// Tuples that were required to have equal length do not.
    #[error("tuple length mismatch: {left} vs {right}")]
    TupleLengthMismatch { left: usize, right: usize },

    /// A permutation expected to lie in a group does not.
    #[error("permutation is not a member of the group")]
    NotAMember,

    /// A claimed subgroup is not contained in its parent.
    #[error("not a subgroup: generator {generator} does not sift to the identity")]
    NotASubgroup { generator: usize },

    /// The operation only applies to transitive actions.
    #[error("action is not transitive")]
    NotTransitive,

    /// A search or enumeration exceeded its configured budget.
    #[error("budget exceeded: {what} (limit {limit})")]
    Budget { what: &'static str, limit: u64 },

    /// A coset action would have degree beyond the configured cap.
    #[error("coset action degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: String, cap: u64 },

    /// An exact division failed, i.e. the formula inputs are inconsistent.
    #[error("quotient {numerator}/{denominator} is not an integer")]
    NotIntegral {
        numerator: String,
        denominator: String,
    },

    /// Input outside the supported fragment (documented v1 restrictions).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Hypotheses of a lemma or test are not satisfied by the input.
    #[error("inapplicable: {0}")]
    Inapplicable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
