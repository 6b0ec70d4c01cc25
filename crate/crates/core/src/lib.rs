//! Tools for families of subsets of `[n]` that avoid partitions of the ground
//! set into `k` members.
//!
//! The crate decides the partition-free and dependence properties (with
//! witnesses), builds the cyclic-permutation arc systems and their
//! certificates, evaluates the weighted layer inequalities in exact rational
//! arithmetic, and computes the largest `k`-partition-free family by an exact
//! hitting-set search.
//!
//! Distinctness convention: inside one family, `k` pairwise disjoint members
//! are `k` distinct sets, so `∅` can be used at most once. Across a tuple of
//! families the chosen sets may coincide only when the common set is `∅`.

pub mod cyclic;
pub mod extremal;
pub mod inequalities;
pub mod predicates;
pub mod random;
pub mod setcore;

pub use setcore::{binom, parse_family, serialize_family, ElementSet, Family, GroundSet, Profile, Rational};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set size {0} outside 1..=24")]
    GroundSize(usize),
    #[error("element {element} outside 1..={n}")]
    ElementOutOfRange { element: i64, n: usize },
    #[error("duplicate set {set} at record {record}")]
    DuplicateSet { record: usize, set: String },
    #[error("families over different ground sets: [{expected}] vs [{found}]")]
    MismatchedGround { expected: usize, found: usize },
    #[error("parse error{}: {message}", .record.map(|r| format!(" at set #{r}")).unwrap_or_default())]
    Parse { record: Option<usize>, message: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis violated ({hypothesis}): witness {}", fmt_sets(.witness))]
    HypothesisViolated { hypothesis: String, witness: Vec<ElementSet> },
    #[error("n = {n} too large for exhaustive mode (limit {limit}); use sampled mode")]
    ExhaustiveTooLarge { n: usize, limit: usize },
    /// A checked claim failed on an input that satisfies its hypotheses.
    #[error("violation of {claim}: {detail}")]
    Violation { claim: String, detail: String },
}

fn fmt_sets(sets: &[ElementSet]) -> String {
    let parts: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    num_integer::gcd(a, b)
}
