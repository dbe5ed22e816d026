//! Decision procedures, evidence gathering, and independently verifiable
//! certificates for *binarity* (relational complexity 2) of finite
//! permutation group actions.
//!
//! The library is organized bottom-up:
//!
//! - [`perm`]: permutations as image tables, cycle notation.
//! - [`group`]: deterministic stabilizer chains; membership, orbits,
//!   stabilizers, transporters, setwise stabilizers, element enumeration.
//! - [`action`]: coset actions and induced actions on invariant sets.
//! - [`closure`]: orbital partitions and 2-closure computation.
//! - [`binarity`]: orbit counts on ℓ-tuples, the character-sum bound
//!   (Test 1), the closure test (Test 2), the triple scan (Test 3),
//!   witness certificates and their verifier, and a brute-force arity
//!   oracle for small degrees.
//! - [`reduction`]: fixed-point counting formulas, the two witness-building
//!   lemmas, the suborbit battery (Test 4), Sylow overgroup enumeration and
//!   the odd-degree-actions argument (Test 5).
//! - [`report`]: deterministic analysis reports.
//! - [`format`]: JSON file formats for groups, actions, and witnesses.
//! - [`corpus`]: built-in example groups and the shipped corpus builders.
//!
//! Everything is deterministic: identical inputs produce byte-identical
//! reports, witnesses, and enumeration orders.

pub mod action;
pub mod binarity;
pub mod closure;
pub mod config;
pub mod corpus;
pub mod error;
pub mod format;
pub mod group;
pub mod perm;
pub mod reduction;
pub mod report;

pub use config::Budgets;
pub use error::{Error, Result};
pub use group::{PermGroup, StabilizerChain};
pub use perm::{Permutation, Point};
