use std::collections::HashSet;

use num_bigint::BigUint;
use serde::Serialize;

use super::rational::binom;
use super::set::{canonical_cmp, ElementSet, GroundSet};
use crate::{Error, Result};

/// Membership bitmap over all `2^n` characteristic vectors plus the member list.
#[derive(Clone, Debug)]
pub(crate) struct SetIndex {
    masks: Vec<u32>,
    bits: Vec<u64>,
}

impl SetIndex {
    pub(crate) fn new(n: usize) -> Self {
        let words = (1usize << n).div_ceil(64);
        SetIndex { masks: Vec::new(), bits: vec![0; words] }
    }

    #[inline]
    pub(crate) fn contains(&self, mask: u32) -> bool {
        let m = mask as usize;
        self.bits[m >> 6] & (1 << (m & 63)) != 0
    }

    /// Returns false if the mask was already present.
    #[inline]
    pub(crate) fn insert(&mut self, mask: u32) -> bool {
        let m = mask as usize;
        let word = &mut self.bits[m >> 6];
        let bit = 1u64 << (m & 63);
        if *word & bit != 0 {
            return false;
        }
        *word |= bit;
        self.masks.push(mask);
        true
    }

    #[inline]
    pub(crate) fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub(crate) fn len(&self) -> usize {
        self.masks.len()
    }
}

/// A set of subsets of `[n]`, stored in canonical order.
#[derive(Clone, Debug)]
pub struct Family {
    ground: GroundSet,
    index: SetIndex,
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.index.masks == other.index.masks
    }
}

impl Eq for Family {}

/// Same shape as the JSON file format: `{"n": .., "sets": [[..], ..]}`.
impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let sets: Vec<ElementSet> = self.sets().collect();
        let mut st = s.serialize_struct("Family", 2)?;
        st.serialize_field("n", &self.ground.n())?;
        st.serialize_field("sets", &sets)?;
        st.end()
    }
}

impl Family {
    /// Builds a family, rejecting duplicates and sets from a different ground.
    pub fn new<I>(ground: GroundSet, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = ElementSet>,
    {
        let mut index = SetIndex::new(ground.n());
        for (record, s) in sets.into_iter().enumerate() {
            if s.ground() != ground {
                return Err(Error::MismatchedGround { expected: ground.n(), found: s.ground().n() });
            }
            if !index.insert(s.mask()) {
                return Err(Error::DuplicateSet { record, set: s.to_string() });
            }
        }
        index.masks.sort_by(|a, b| canonical_cmp(*a, *b));
        Ok(Family { ground, index })
    }

    /// Builds a family from characteristic vectors, silently merging repeats.
    pub fn from_masks<I>(ground: GroundSet, masks: I) -> Result<Self>
    where
        I: IntoIterator<Item = u32>,
    {
        let full = ground.full_mask();
        let mut index = SetIndex::new(ground.n());
        for m in masks {
            if m & !full != 0 {
                ground.set_from_mask(m)?;
            }
            index.insert(m);
        }
        index.masks.sort_by(|a, b| canonical_cmp(*a, *b));
        Ok(Family { ground, index })
    }

    pub fn empty(ground: GroundSet) -> Self {
        Family { ground, index: SetIndex::new(ground.n()) }
    }

    pub fn power_set(ground: GroundSet) -> Self {
        Self::from_masks(ground, 0..=ground.full_mask()).expect("masks within ground")
    }

    /// Union of the given layers `binom([n], j)`.
    pub fn layers(ground: GroundSet, sizes: &[usize]) -> Self {
        let sets = sizes
            .iter()
            .collect::<HashSet<_>>()
            .into_iter()
            .flat_map(|&j| ground.layer(j));
        Self::new(ground, sets).expect("distinct layers")
    }

    /// The up-set `{G : |G| >= m}`.
    pub fn up_set(ground: GroundSet, m: usize) -> Self {
        let sizes: Vec<usize> = (m..=ground.n()).collect();
        Self::layers(ground, &sizes)
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.len() == 0
    }

    #[inline]
    pub fn contains(&self, s: ElementSet) -> bool {
        s.ground() == self.ground && self.index.contains(s.mask())
    }

    #[inline]
    pub fn contains_mask(&self, mask: u32) -> bool {
        mask <= self.ground.full_mask() && self.index.contains(mask)
    }

    /// Members in canonical order.
    pub fn sets(&self) -> impl ExactSizeIterator<Item = ElementSet> + '_ {
        let n = self.ground.n() as u8;
        self.index.masks.iter().map(move |&m| ElementSet::from_parts(n, m))
    }

    pub(crate) fn masks(&self) -> &[u32] {
        self.index.masks()
    }

    /// Position of `mask` in canonical order, if present.
    pub(crate) fn position(&self, mask: u32) -> Option<usize> {
        if !self.contains_mask(mask) {
            return None;
        }
        self.index.masks.binary_search_by(|m| canonical_cmp(*m, mask)).ok()
    }

    /// `F^(j)`, the members of size `j`.
    pub fn layer(&self, j: usize) -> Family {
        Family::from_masks(self.ground, self.masks().iter().copied().filter(|m| m.count_ones() as usize == j))
            .expect("same ground")
    }

    /// Members whose size lies in `sizes`.
    pub fn restrict_to_layers(&self, sizes: &[usize]) -> Family {
        Family::from_masks(
            self.ground,
            self.masks().iter().copied().filter(|m| sizes.contains(&(m.count_ones() as usize))),
        )
        .expect("same ground")
    }

    /// `2^[n] \ F`.
    pub fn complement(&self) -> Family {
        Family::from_masks(self.ground, (0..=self.ground.full_mask()).filter(|&m| !self.index.contains(m)))
            .expect("same ground")
    }

    pub fn with_set(&self, s: ElementSet) -> Result<Family> {
        let mut sets: Vec<ElementSet> = self.sets().collect();
        sets.push(s);
        Family::new(self.ground, sets)
    }

    pub fn profile(&self) -> Profile {
        let mut counts = vec![0u64; self.ground.n() + 1];
        for &m in self.masks() {
            counts[m.count_ones() as usize] += 1;
        }
        Profile { ground: self.ground, counts }
    }
}

/// Layer counts `f^(j) = |F^(j)|` for `j = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    #[serde(serialize_with = "ser_ground")]
    ground: GroundSet,
    counts: Vec<u64>,
}

fn ser_ground<S: serde::Serializer>(g: &GroundSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(g.n() as u64)
}

impl Profile {
    pub fn new(ground: GroundSet, counts: Vec<u64>) -> Result<Self> {
        let n = ground.n();
        if counts.len() != n + 1 {
            return Err(Error::InvalidParameter(format!(
                "profile over [{n}] needs {} counts, got {}",
                n + 1,
                counts.len()
            )));
        }
        for (j, &c) in counts.iter().enumerate() {
            let cap = binom(n as u64, j as i64);
            if BigUint::from(c) > cap {
                return Err(Error::InvalidParameter(format!("f^({j}) = {c} exceeds C({n},{j}) = {cap}")));
            }
        }
        Ok(Profile { ground, counts })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    /// `f^(j)`; zero outside `0..=n`.
    pub fn get(&self, j: i64) -> u64 {
        if j < 0 {
            return 0;
        }
        self.counts.get(j as usize).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Number of `j`-sets missing, `C(n, j) - f^(j)`.
    pub fn missing(&self, j: usize) -> u64 {
        super::binom_u64(self.ground.n(), j) - self.get(j as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    #[test]
    fn profile_counts_each_layer() {
        let n5 = g(5);
        let fam = Family::new(
            n5,
            [vec![1, 2], vec![3, 4, 5], vec![1]].into_iter().map(|v| n5.set_from_elements(v).unwrap()),
        )
        .unwrap();
        assert_eq!(fam.profile().counts(), &[0, 1, 1, 1, 0, 0]);

        let pairs = Family::layers(n5, &[2]);
        assert_eq!(pairs.profile().counts(), &[0, 0, 10, 0, 0, 0]);

        assert_eq!(Family::empty(n5).profile().counts(), &[0; 6]);
    }

    #[test]
    fn duplicates_rejected() {
        let n3 = g(3);
        let a = n3.set_from_elements([1, 2]).unwrap();
        let err = Family::new(n3, [a, a]).unwrap_err();
        assert!(matches!(err, Error::DuplicateSet { record: 1, .. }));
    }

    #[test]
    fn canonical_storage_and_lookup() {
        let n4 = g(4);
        let fam = Family::from_masks(n4, [0b1100, 0b0001, 0b0011, 0]).unwrap();
        let order: Vec<u32> = fam.sets().map(|s| s.mask()).collect();
        assert_eq!(order, vec![0, 0b0001, 0b0011, 0b1100]);
        assert!(fam.contains_mask(0b0011));
        assert!(!fam.contains_mask(0b0101));
        assert!(!fam.contains_mask(1 << 20));
        assert_eq!(fam.position(0b1100), Some(3));
        assert_eq!(fam.position(0b0111), None);
        assert_eq!(fam.complement().len(), 12);
    }

    #[test]
    fn up_set_size() {
        assert_eq!(Family::up_set(g(5), 2).len(), 26);
        assert_eq!(Family::up_set(g(8), 3).len(), 219);
    }

    #[test]
    fn profile_bounds_enforced() {
        assert!(Profile::new(g(3), vec![1, 3, 3, 1]).is_ok());
        assert!(Profile::new(g(3), vec![2, 0, 0, 0]).is_err());
        assert!(Profile::new(g(3), vec![0, 0, 0]).is_err());
    }
}
