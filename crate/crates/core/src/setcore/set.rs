use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// Largest supported ground set; characteristic vectors live in one `u32`.
pub const MAX_N: usize = 24;

/// The ground set `[n] = {1, ..., n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet(u8);

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::GroundSize(n));
        }
        Ok(GroundSet(n as u8))
    }

    #[inline]
    pub fn n(self) -> usize {
        self.0 as usize
    }

    /// Characteristic vector of `[n]` itself.
    #[inline]
    pub fn full_mask(self) -> u32 {
        (1u32 << self.0) - 1
    }

    pub fn full(self) -> ElementSet {
        ElementSet { n: self.0, bits: self.full_mask() }
    }

    pub fn empty(self) -> ElementSet {
        ElementSet { n: self.0, bits: 0 }
    }

    /// Number of subsets of `[n]`.
    pub fn power_set_len(self) -> usize {
        1usize << self.0
    }

    /// Every subset of `[n]`, in canonical order.
    pub fn subsets(self) -> Vec<ElementSet> {
        let mut all: Vec<ElementSet> = (0..=self.full_mask())
            .map(|bits| ElementSet { n: self.0, bits })
            .collect();
        all.sort();
        all
    }

    /// All `j`-subsets of `[n]` in canonical order.
    pub fn layer(self, j: usize) -> Vec<ElementSet> {
        let n = self.n();
        if j > n {
            return Vec::new();
        }
        let mut out = Vec::new();
        if j == 0 {
            out.push(ElementSet { n: self.0, bits: 0 });
            return out;
        }
        // Gosper's hack walks all j-bit masks below 2^n
        let limit = 1u64 << n;
        let mut v: u64 = (1u64 << j) - 1;
        while v < limit {
            out.push(ElementSet { n: self.0, bits: v as u32 });
            let c = v & v.wrapping_neg();
            let r = v + c;
            v = (((r ^ v) >> 2) / c) | r;
        }
        out.sort();
        out
    }

    pub fn set_from_mask(self, bits: u32) -> Result<ElementSet> {
        if bits & !self.full_mask() != 0 {
            let bad = (bits & !self.full_mask()).trailing_zeros() as usize + 1;
            return Err(Error::ElementOutOfRange { element: bad as i64, n: self.n() });
        }
        Ok(ElementSet { n: self.0, bits })
    }

    /// Builds a set from 1-based element labels. Repeats are tolerated.
    pub fn set_from_elements<I>(self, elements: I) -> Result<ElementSet>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut bits = 0u32;
        for e in elements {
            if e == 0 || e > self.n() {
                return Err(Error::ElementOutOfRange { element: e as i64, n: self.n() });
            }
            bits |= 1 << (e - 1);
        }
        Ok(ElementSet { n: self.0, bits })
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

/// A subset of `[n]` stored as a characteristic vector (bit `i` is element `i + 1`).
///
/// Sets are ordered canonically: by size first, then lexicographically on the
/// increasing list of their elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElementSet {
    n: u8,
    bits: u32,
}

impl ElementSet {
    #[inline]
    pub(crate) fn from_parts(n: u8, bits: u32) -> Self {
        ElementSet { n, bits }
    }

    #[inline]
    pub fn ground(self) -> GroundSet {
        GroundSet(self.n)
    }

    #[inline]
    pub fn mask(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= self.n as usize && self.bits & (1 << (element - 1)) != 0
    }

    #[inline]
    pub fn is_disjoint(self, other: ElementSet) -> bool {
        self.bits & other.bits == 0
    }

    #[inline]
    pub fn is_subset(self, other: ElementSet) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn union(self, other: ElementSet) -> ElementSet {
        ElementSet { n: self.n, bits: self.bits | other.bits }
    }

    #[inline]
    pub fn intersection(self, other: ElementSet) -> ElementSet {
        ElementSet { n: self.n, bits: self.bits & other.bits }
    }

    #[inline]
    pub fn difference(self, other: ElementSet) -> ElementSet {
        ElementSet { n: self.n, bits: self.bits & !other.bits }
    }

    #[inline]
    pub fn complement(self) -> ElementSet {
        ElementSet { n: self.n, bits: !self.bits & GroundSet(self.n).full_mask() }
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i + 1)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.elements().collect()
    }
}

/// Canonical comparison of two characteristic vectors over the same ground.
#[inline]
pub(crate) fn canonical_cmp(a: u32, b: u32) -> Ordering {
    match a.count_ones().cmp(&b.count_ones()) {
        Ordering::Equal => {
            let diff = a ^ b;
            if diff == 0 {
                Ordering::Equal
            } else {
                // the smallest differing element decides: whoever owns it comes first
                let low = diff & diff.wrapping_neg();
                if a & low != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
        other => other,
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| canonical_cmp(self.bits, other.bits))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl serde::Serialize for ElementSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.elements())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_limits() {
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(25).is_err());
        assert_eq!(GroundSet::new(24).unwrap().full_mask(), (1 << 24) - 1);
    }

    #[test]
    fn layer_sizes_match_binomials() {
        let g = GroundSet::new(6).unwrap();
        let sizes: Vec<usize> = (0..=6).map(|j| g.layer(j).len()).collect();
        assert_eq!(sizes, vec![1, 6, 15, 20, 15, 6, 1]);
        assert!(g.layer(7).is_empty());
        let l2 = g.layer(2);
        assert!(l2.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(l2[0].to_vec(), vec![1, 2]);
        assert_eq!(l2[1].to_vec(), vec![1, 3]);
    }

    #[test]
    fn canonical_order() {
        let g = GroundSet::new(4).unwrap();
        let s = |v: &[usize]| g.set_from_elements(v.iter().copied()).unwrap();
        assert!(s(&[]) < s(&[4]));
        assert!(s(&[4]) < s(&[1, 2]));
        assert!(s(&[1, 4]) < s(&[2, 3]));
        assert!(s(&[1, 2, 4]) < s(&[1, 3, 4]));
        let all = g.subsets();
        assert_eq!(all.len(), 16);
        assert_eq!(all[1], s(&[1]));
        assert_eq!(all[15], s(&[1, 2, 3, 4]));
    }

    #[test]
    fn set_algebra() {
        let g = GroundSet::new(5).unwrap();
        let a = g.set_from_elements([1, 2]).unwrap();
        let b = g.set_from_elements([3, 4, 5]).unwrap();
        assert!(a.is_disjoint(b));
        assert_eq!(a.union(b), g.full());
        assert_eq!(a.complement(), b);
        assert!(a.contains(2) && !a.contains(3) && !a.contains(0));
        assert_eq!(a.to_string(), "{1,2}");
        assert_eq!(g.empty().to_string(), "∅");
        assert!(g.set_from_elements([6]).is_err());
        assert!(g.set_from_mask(1 << 5).is_err());
    }
}
