//! Exact `p(n, k)`: the largest `k`-partition-free family on `[n]`, computed
//! as the complement of a minimum hitting set of the `k`-partition hypergraph.

mod instance;
mod search;

pub use instance::{set_partitions, EdgeConvention, HittingInstance, PARTITION_LIMIT};
pub use search::{
    greedy_hitting_set, min_hitting_set, p_exact, randomized_greedy, HittingResult, SearchOptions, SearchResult,
    SearchStats, Uniqueness,
};

use num_bigint::BigUint;
use serde::Serialize;

use crate::inequalities::up_set_bound;
use crate::predicates::partition_witness;
use crate::setcore::{ser_biguint, Family, GroundSet};
use crate::Result;

/// Largest `n` on which [`verify_extremal_family`] also runs the generic predicate.
pub const GENERIC_CHECK_LIMIT: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct ExtremalCheck {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub size: u64,
    #[serde(serialize_with = "ser_biguint")]
    pub bound: BigUint,
    /// `k` blocks of size `>= m` need `km > n` points.
    pub size_argument: bool,
    /// `None` above [`GENERIC_CHECK_LIMIT`].
    pub predicate_check: Option<bool>,
    pub ok: bool,
}

/// Checks that `{G : |G| >= m}` on `[km - 1]` is `k`-partition-free and has
/// exactly `sum_{j >= m} C(km - 1, j)` members.
pub fn verify_extremal_family(k: usize, m: usize) -> Result<ExtremalCheck> {
    let n = k * m - 1;
    let ground = GroundSet::new(n)?;
    let size: u64 = (m..=n).map(|j| crate::setcore::binom_u64(n, j)).sum();
    let bound = up_set_bound(k, m);
    let size_argument = k * m > n;
    let predicate_check =
        (n <= GENERIC_CHECK_LIMIT).then(|| partition_witness(&Family::up_set(ground, m), k).is_none());
    let ok = size_argument && predicate_check != Some(false) && BigUint::from(size) == bound;
    Ok(ExtremalCheck { k, m, n, size, bound, size_argument, predicate_check, ok })
}
