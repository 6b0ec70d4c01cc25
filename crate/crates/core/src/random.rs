//! Seeded generators of random partition-free families and family tuples.
//!
//! Candidates are visited in a random order and a candidate is kept iff the
//! family (or tuple) stays partition-free. Half of the draws run through all
//! candidates, which yields maximal families; the other half stop after a
//! uniformly random number of candidates.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::setcore::{Family, GroundSet, SetIndex};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic child seed, so sub-runs do not depend on how many draws
/// earlier runs consumed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn candidate_masks(ground: GroundSet, layers: Option<&[usize]>) -> Vec<u32> {
    match layers {
        None => (0..=ground.full_mask()).collect(),
        Some(sizes) => (0..=ground.full_mask())
            .filter(|m| sizes.contains(&(m.count_ones() as usize)))
            .collect(),
    }
}

fn stop_after<R: Rng>(len: usize, rng: &mut R) -> usize {
    if rng.random_bool(0.5) {
        len
    } else {
        rng.random_range(0..=len)
    }
}

/// Can `rest` be split into exactly `parts` distinct nonempty members of `index`?
fn split_into(index: &SetIndex, rest: u32, parts: usize) -> bool {
    if parts == 0 {
        return rest == 0;
    }
    if rest == 0 {
        return false;
    }
    if parts == 1 {
        return index.contains(rest);
    }
    // the block holding the lowest remaining element is chosen first
    let low = rest & rest.wrapping_neg();
    let others = rest & !low;
    let mut sub = others;
    loop {
        let block = low | sub;
        if block != rest && index.contains(block) && split_into(index, rest & !block, parts - 1) {
            return true;
        }
        if sub == 0 {
            return false;
        }
        sub = (sub - 1) & others;
    }
}

/// Would adding `s` create `k` distinct members partitioning `[n]`?
pub(crate) fn completes_partition(index: &SetIndex, full: u32, s: u32, k: usize) -> bool {
    let rest = full & !s;
    split_into(index, rest, k - 1) || (s != 0 && index.contains(0) && split_into(index, rest, k - 2))
}

/// A random `k`-partition-free family, drawn from `layers` (all sizes if `None`).
pub fn random_partition_free<R: Rng>(ground: GroundSet, k: usize, layers: Option<&[usize]>, rng: &mut R) -> Family {
    assert!(k >= 2);
    let mut candidates = candidate_masks(ground, layers);
    candidates.shuffle(rng);
    let stop = stop_after(candidates.len(), rng);
    let full = ground.full_mask();
    let mut index = SetIndex::new(ground.n());
    for &s in &candidates[..stop] {
        if !completes_partition(&index, full, s, k) {
            index.insert(s);
        }
    }
    Family::from_masks(ground, index.masks().iter().copied()).expect("masks within ground")
}

struct CrossIndex {
    indexes: Vec<SetIndex>,
}

impl CrossIndex {
    /// Would putting `s` into family `target` complete a cross partition?
    fn completes(&self, full: u32, target: usize, s: u32) -> bool {
        let others: Vec<usize> = (0..self.indexes.len()).filter(|&j| j != target).collect();
        self.dfs(&others, 0, full, s)
    }

    fn dfs(&self, others: &[usize], i: usize, full: u32, used: u32) -> bool {
        let idx = &self.indexes[others[i]];
        if i + 1 == others.len() {
            return idx.contains(full & !used);
        }
        idx.masks()
            .iter()
            .any(|&m| m & used == 0 && self.dfs(others, i + 1, full, used | m))
    }
}

/// A random cross-partition-free tuple of `k` families inside `layers`.
pub fn random_cross_partition_free<R: Rng>(ground: GroundSet, k: usize, layers: &[usize], rng: &mut R) -> Vec<Family> {
    assert!(k >= 2);
    let masks = candidate_masks(ground, Some(layers));
    let mut candidates: Vec<(usize, u32)> = (0..k).flat_map(|i| masks.iter().map(move |&m| (i, m))).collect();
    candidates.shuffle(rng);
    let stop = stop_after(candidates.len(), rng);
    let full = ground.full_mask();
    let mut cross = CrossIndex { indexes: (0..k).map(|_| SetIndex::new(ground.n())).collect() };
    for &(i, s) in &candidates[..stop] {
        if !cross.completes(full, i, s) {
            cross.indexes[i].insert(s);
        }
    }
    cross
        .indexes
        .iter()
        .map(|idx| Family::from_masks(ground, idx.masks().iter().copied()).expect("masks within ground"))
        .collect()
}

/// A uniformly random family where each subset is kept with probability `density`.
pub fn random_family<R: Rng>(ground: GroundSet, density: f64, rng: &mut R) -> Family {
    let masks: Vec<u32> = (0..=ground.full_mask()).filter(|_| rng.random_bool(density)).collect();
    Family::from_masks(ground, masks).expect("masks within ground")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicates::{is_cross_partition_free, is_k_partition_free};

    #[test]
    fn generated_families_are_partition_free() {
        let mut rng = rng_from_seed(7);
        for n in 3..=7 {
            let ground = GroundSet::new(n).unwrap();
            for k in 2..=4 {
                for _ in 0..20 {
                    let f = random_partition_free(ground, k, None, &mut rng);
                    assert!(is_k_partition_free(&f, k), "n={n} k={k}: {f:?}");
                }
            }
        }
    }

    #[test]
    fn saturated_draws_are_maximal() {
        let ground = GroundSet::new(5).unwrap();
        let mut rng = rng_from_seed(11);
        let mut maximal_seen = 0;
        for _ in 0..40 {
            let f = random_partition_free(ground, 3, None, &mut rng);
            let extendable = ground
                .subsets()
                .into_iter()
                .filter(|s| !f.contains(*s))
                .any(|s| is_k_partition_free(&f.with_set(s).unwrap(), 3));
            if !extendable {
                maximal_seen += 1;
            }
        }
        assert!(maximal_seen > 0);
    }

    #[test]
    fn generated_tuples_are_cross_partition_free() {
        let mut rng = rng_from_seed(3);
        for (k, m) in [(3usize, 2usize), (4, 2)] {
            let ground = GroundSet::new(k * m - 1).unwrap();
            for _ in 0..30 {
                let fams = random_cross_partition_free(ground, k, &[m - 1, m, m + 1], &mut rng);
                let refs: Vec<&Family> = fams.iter().collect();
                assert!(is_cross_partition_free(&refs).unwrap());
            }
        }
    }

    #[test]
    fn same_seed_same_family() {
        let ground = GroundSet::new(6).unwrap();
        let a = random_partition_free(ground, 3, None, &mut rng_from_seed(42));
        let b = random_partition_free(ground, 3, None, &mut rng_from_seed(42));
        assert_eq!(a, b);
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
    }
}
