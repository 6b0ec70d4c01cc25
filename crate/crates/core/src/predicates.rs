//! k-dependence and k-partition-freeness, single-family and cross versions.
//!
//! Every negative answer comes with a [`DisjointWitness`]. Searches are
//! depth-first over families in index order and candidates in canonical
//! order, so the witness returned is always the first one in that order.
//!
//! The k members must be distinct. Since families hold each set once, ∅ can
//! fill at most one block; across a cross tuple two picks may coincide only
//! if both are ∅ (the only set disjoint from itself).

use serde::Serialize;

use crate::setcore::{ElementSet, Family, GroundSet};
use crate::{Error, Result};

/// `k` pairwise disjoint sets, optionally covering `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisjointWitness {
    pub tuple: Vec<ElementSet>,
    pub is_partition: bool,
    /// Index of the family each set was drawn from.
    pub sources: Vec<usize>,
}

impl DisjointWitness {
    /// Independent re-check of disjointness and, if claimed, coverage.
    pub fn validate(&self, ground: GroundSet) -> bool {
        let mut used = 0u32;
        for s in &self.tuple {
            if s.ground() != ground || s.mask() & used != 0 {
                return false;
            }
            used |= s.mask();
        }
        !self.is_partition || used == ground.full_mask()
    }
}

/// How repeated picks are treated when several families are searched together.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distinctness {
    /// Different families may contribute the same set only if it is `∅`.
    Cross,
    /// All picks must be distinct sets, so `∅` appears at most once.
    Distinct,
}

fn common_ground(families: &[&Family]) -> Result<GroundSet> {
    let ground = families
        .first()
        .ok_or_else(|| Error::InvalidParameter("need at least two families".into()))?
        .ground();
    for f in families {
        if f.ground() != ground {
            return Err(Error::MismatchedGround { expected: ground.n(), found: f.ground().n() });
        }
    }
    if families.len() < 2 {
        return Err(Error::InvalidParameter(format!("k = {} < 2", families.len())));
    }
    Ok(ground)
}

struct CrossSearch<'a> {
    families: &'a [&'a Family],
    full: u32,
    require_partition: bool,
    distinct: bool,
    chosen: Vec<u32>,
}

impl CrossSearch<'_> {
    fn dfs(&mut self, i: usize, used: u32, empty_used: bool) -> bool {
        let k = self.families.len();
        if i == k {
            return !self.require_partition || used == self.full;
        }
        let fam = self.families[i];
        if self.require_partition && i == k - 1 {
            let target = self.full & !used;
            if fam.contains_mask(target) && !(self.distinct && target == 0 && empty_used) {
                self.chosen.push(target);
                return true;
            }
            return false;
        }
        for &m in fam.masks() {
            if m & used != 0 || (m == 0 && self.distinct && empty_used) {
                continue;
            }
            self.chosen.push(m);
            if self.dfs(i + 1, used | m, empty_used || m == 0) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

/// Finds `F_i ∈ families[i]` that are pairwise disjoint (and partition `[n]`
/// when `require_partition`), using the cross convention for repeated `∅`.
pub fn find_disjoint_tuple(families: &[&Family], require_partition: bool) -> Result<Option<DisjointWitness>> {
    find_disjoint_tuple_with(families, require_partition, Distinctness::Cross)
}

pub fn find_disjoint_tuple_with(
    families: &[&Family],
    require_partition: bool,
    distinctness: Distinctness,
) -> Result<Option<DisjointWitness>> {
    let ground = common_ground(families)?;
    let mut search = CrossSearch {
        families,
        full: ground.full_mask(),
        require_partition,
        distinct: distinctness == Distinctness::Distinct,
        chosen: Vec::with_capacity(families.len()),
    };
    if !search.dfs(0, 0, false) {
        return Ok(None);
    }
    let tuple = search
        .chosen
        .iter()
        .map(|&m| ground.set_from_mask(m).expect("member of ground"))
        .collect();
    let used = search.chosen.iter().fold(0, |a, &m| a | m);
    Ok(Some(DisjointWitness {
        tuple,
        is_partition: used == ground.full_mask(),
        sources: (0..families.len()).collect(),
    }))
}

struct MemberSearch<'a> {
    fam: &'a Family,
    n: u32,
    full: u32,
    require_partition: bool,
    chosen: Vec<usize>,
}

impl MemberSearch<'_> {
    fn dfs(&mut self, start: usize, left: usize, used: u32) -> bool {
        if left == 0 {
            return !self.require_partition || used == self.full;
        }
        let remaining = self.n - used.count_ones();
        if self.require_partition && left == 1 {
            let target = self.full & !used;
            return match self.fam.position(target) {
                Some(pos) if pos >= start => {
                    self.chosen.push(pos);
                    true
                }
                _ => false,
            };
        }
        let masks = self.fam.masks();
        for idx in start..masks.len() {
            if masks.len() - idx < left {
                break;
            }
            let m = masks[idx];
            let size = m.count_ones();
            // later picks are at least as large (canonical order is by size)
            if size * left as u32 > remaining {
                break;
            }
            if m & used != 0 {
                continue;
            }
            self.chosen.push(idx);
            if self.dfs(idx + 1, left - 1, used | m) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

fn member_witness(fam: &Family, k: usize, require_partition: bool) -> Option<DisjointWitness> {
    assert!(k >= 2, "k must be at least 2");
    let ground = fam.ground();
    let mut search = MemberSearch {
        fam,
        n: ground.n() as u32,
        full: ground.full_mask(),
        require_partition,
        chosen: Vec::with_capacity(k),
    };
    if !search.dfs(0, k, 0) {
        return None;
    }
    let masks = fam.masks();
    let tuple: Vec<ElementSet> = search
        .chosen
        .iter()
        .map(|&i| ground.set_from_mask(masks[i]).expect("member of ground"))
        .collect();
    let used = tuple.iter().fold(0, |a, s| a | s.mask());
    Some(DisjointWitness { tuple, is_partition: used == ground.full_mask(), sources: vec![0; k] })
}

/// `k` distinct pairwise disjoint members covering `[n]`, if any. Panics if `k < 2`.
pub fn partition_witness(fam: &Family, k: usize) -> Option<DisjointWitness> {
    member_witness(fam, k, true)
}

/// `k` distinct pairwise disjoint members, if any. Panics if `k < 2`.
pub fn disjoint_witness(fam: &Family, k: usize) -> Option<DisjointWitness> {
    member_witness(fam, k, false)
}

pub fn is_k_partition_free(fam: &Family, k: usize) -> bool {
    partition_witness(fam, k).is_none()
}

pub fn is_k_dependent(fam: &Family, k: usize) -> bool {
    disjoint_witness(fam, k).is_none()
}

pub fn is_cross_partition_free(families: &[&Family]) -> Result<bool> {
    Ok(find_disjoint_tuple(families, true)?.is_none())
}

pub fn is_cross_dependent(families: &[&Family]) -> Result<bool> {
    Ok(find_disjoint_tuple(families, false)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn fam(n: usize, sets: &[&[usize]]) -> Family {
        let ground = g(n);
        Family::new(ground, sets.iter().map(|s| ground.set_from_elements(s.iter().copied()).unwrap())).unwrap()
    }

    #[test]
    fn explicit_cross_partition() {
        let f1 = fam(5, &[&[1]]);
        let f2 = fam(5, &[&[2, 3]]);
        let f3 = fam(5, &[&[4, 5]]);
        let w = find_disjoint_tuple(&[&f1, &f2, &f3], true).unwrap().unwrap();
        assert!(w.is_partition);
        assert_eq!(w.tuple.iter().map(|s| s.to_vec()).collect::<Vec<_>>(), vec![vec![1], vec![2, 3], vec![4, 5]]);
        assert_eq!(w.sources, vec![0, 1, 2]);
        assert!(w.validate(g(5)));
    }

    #[test]
    fn two_and_three_sets_never_split_seven_into_four() {
        let f = Family::layers(g(7), &[2, 3]);
        assert!(find_disjoint_tuple(&[&f, &f, &f, &f], true).unwrap().is_none());
    }

    #[test]
    fn empty_set_may_repeat_across_families() {
        let e = fam(5, &[&[]]);
        let top = fam(5, &[&[1, 2, 3, 4, 5]]);
        let w = find_disjoint_tuple(&[&e, &e, &top], true).unwrap().unwrap();
        assert!(w.tuple[0].is_empty() && w.tuple[1].is_empty());
        assert_eq!(w.tuple[2], g(5).full());
        assert!(find_disjoint_tuple_with(&[&e, &e, &top], true, Distinctness::Distinct).unwrap().is_none());
    }

    #[test]
    fn cross_errors() {
        let a = fam(4, &[&[1]]);
        let b = fam(5, &[&[1]]);
        assert!(matches!(find_disjoint_tuple(&[&a, &b], false), Err(Error::MismatchedGround { .. })));
        assert!(find_disjoint_tuple(&[&a], false).is_err());
    }

    #[test]
    fn singletons() {
        let f = Family::layers(g(5), &[1]);
        assert!(is_k_partition_free(&f, 3));
        let w = disjoint_witness(&f, 3).unwrap();
        assert_eq!(w.tuple.iter().map(|s| s.to_vec()).collect::<Vec<_>>(), vec![vec![1], vec![2], vec![3]]);
        assert!(!w.is_partition);
    }

    #[test]
    fn up_set_is_partition_free() {
        assert!(is_k_partition_free(&Family::up_set(g(5), 2), 3));
        assert!(is_k_partition_free(&Family::up_set(g(7), 2), 4));
        assert!(!is_k_partition_free(&Family::up_set(g(6), 2), 3));
    }

    #[test]
    fn explicit_partition_in_one_family() {
        let f = fam(5, &[&[1], &[2, 3], &[4, 5]]);
        let w = partition_witness(&f, 3).unwrap();
        assert_eq!(w.tuple.len(), 3);
        assert!(w.is_partition && w.validate(g(5)));
    }

    #[test]
    fn pairs_and_triples_are_three_dependent_on_five() {
        assert!(is_k_dependent(&Family::layers(g(5), &[2, 3]), 3));
        assert!(!is_k_dependent(&fam(5, &[&[1], &[2]]), 2));
    }

    #[test]
    fn empty_set_used_once_within_a_family() {
        // {∅, [3]} only has two distinct members
        let f = fam(3, &[&[], &[1, 2, 3]]);
        assert!(is_k_partition_free(&f, 3));
        assert!(!is_k_partition_free(&f, 2));
    }
}
