//! Resource budgets for searches and enumerations.
//!
//! Every potentially super-polynomial routine takes an explicit budget and
//! fails with [`crate::Error::Budget`] instead of running away. Budgets are
//! plain data so callers (CLI flags, environment variables, tests) can tune
//! them; the defaults are sized for the shipped corpus and fixtures.

/// Budgets and caps shared across the library.
#[derive(Debug, Clone)]
pub struct Budgets {
    /// Backtrack node budget (setwise stabilizer, 2-closure search).
    pub node_budget: u64,
    /// Maximum degree of a constructed coset action.
    pub degree_cap: u64,
    /// Maximum degree for the general 2-closure backtrack (the 2-transitive
    /// shortcut is much cheaper and has its own, larger cap).
    pub closure_degree_cap: u64,
    /// Cap on full element enumeration (character sums, conjugacy scans).
    pub element_cap: u64,
    /// Cap on visited tuples in direct orbit counting and the arity oracle.
    pub tuple_budget: u64,
    /// Largest ℓ probed by Test 1.
    pub max_ell: u32,
    /// Largest degree for which full pair-transporter tables are built when
    /// turning a 2-closure witness element into a certificate (the table is
    /// quadratic in the degree).
    pub witness_degree_cap: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            node_budget: 100_000_000,
            degree_cap: 1_000_000,
            closure_degree_cap: 10_000,
            element_cap: 10_000_000,
            tuple_budget: 10_000_000,
            max_ell: 6,
            witness_degree_cap: 128,
        }
    }
}
