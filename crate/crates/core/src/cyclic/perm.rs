use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::setcore::{ElementSet, GroundSet};
use crate::{Error, Result};

/// A cyclic order `x_1, ..., x_n` of `[n]`; the element after `x_n` is `x_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicPerm {
    #[serde(skip)]
    ground: GroundSet,
    order: Vec<u8>,
}

impl CyclicPerm {
    pub fn identity(ground: GroundSet) -> Self {
        CyclicPerm { ground, order: (1..=ground.n() as u8).collect() }
    }

    /// `order` must list every element of `[n]` exactly once.
    pub fn from_order(ground: GroundSet, order: &[usize]) -> Result<Self> {
        if order.len() != ground.n() {
            return Err(Error::InvalidParameter(format!(
                "permutation has {} entries, expected {}",
                order.len(),
                ground.n()
            )));
        }
        let mut seen = 0u32;
        for &x in order {
            if x == 0 || x > ground.n() {
                return Err(Error::ElementOutOfRange { element: x as i64, n: ground.n() });
            }
            if seen & (1 << (x - 1)) != 0 {
                return Err(Error::InvalidParameter(format!("element {x} repeated in permutation")));
            }
            seen |= 1 << (x - 1);
        }
        Ok(CyclicPerm { ground, order: order.iter().map(|&x| x as u8).collect() })
    }

    /// A uniformly random cyclic order, normalized to start at 1.
    pub fn random<R: Rng>(ground: GroundSet, rng: &mut R) -> Self {
        let mut rest: Vec<u8> = (2..=ground.n() as u8).collect();
        rest.shuffle(rng);
        let mut order = vec![1u8];
        order.extend(rest);
        CyclicPerm { ground, order }
    }

    /// All `(n-1)!` cyclic orders with `x_1 = 1`, in lexicographic order.
    pub fn all_rooted(ground: GroundSet) -> RootedPerms {
        RootedPerms { ground, next: Some((1..=ground.n() as u8).collect()) }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    /// `x_q` for any integer position `q`, read cyclically (1-based).
    #[inline]
    pub fn at(&self, q: i64) -> usize {
        let n = self.order.len() as i64;
        self.order[(q - 1).rem_euclid(n) as usize] as usize
    }

    pub fn order(&self) -> Vec<usize> {
        self.order.iter().map(|&x| x as usize).collect()
    }

    /// `{x_q : lo < q <= hi}` with positions taken cyclically.
    pub fn arc(&self, lo: i64, hi: i64) -> ElementSet {
        let bits = (lo + 1..=hi).fold(0u32, |acc, q| acc | 1 << (self.at(q) - 1));
        self.ground.set_from_mask(bits).expect("elements of ground")
    }

    /// The same cyclic order started at position `shift + 1`.
    pub fn rotated(&self, shift: usize) -> CyclicPerm {
        let n = self.order.len();
        let order = (0..n).map(|i| self.order[(i + shift) % n]).collect();
        CyclicPerm { ground: self.ground, order }
    }
}

pub struct RootedPerms {
    ground: GroundSet,
    next: Option<Vec<u8>>,
}

impl Iterator for RootedPerms {
    type Item = CyclicPerm;

    fn next(&mut self) -> Option<CyclicPerm> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // next lexicographic permutation of positions 2..n
        let tail = &mut succ[1..];
        let len = tail.len();
        let mut i = len;
        while i > 1 && tail[i - 2] >= tail[i - 1] {
            i -= 1;
        }
        if i > 1 {
            let pivot = i - 2;
            let mut j = len - 1;
            while tail[j] <= tail[pivot] {
                j -= 1;
            }
            tail.swap(pivot, j);
            tail[pivot + 1..].reverse();
            self.next = Some(succ);
        }
        Some(CyclicPerm { ground: self.ground, order: current })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng_from_seed;

    #[test]
    fn rooted_enumeration_counts() {
        for (n, count) in [(1, 1), (2, 1), (3, 2), (5, 24), (6, 120)] {
            let g = GroundSet::new(n).unwrap();
            let perms: Vec<CyclicPerm> = CyclicPerm::all_rooted(g).collect();
            assert_eq!(perms.len(), count);
            assert!(perms.iter().all(|p| p.at(1) == 1));
            let mut orders: Vec<Vec<usize>> = perms.iter().map(|p| p.order()).collect();
            orders.dedup();
            assert_eq!(orders.len(), count);
        }
    }

    #[test]
    fn cyclic_positions_wrap() {
        let g = GroundSet::new(5).unwrap();
        let p = CyclicPerm::from_order(g, &[1, 3, 5, 2, 4]).unwrap();
        assert_eq!(p.at(6), 1);
        assert_eq!(p.at(0), 4);
        assert_eq!(p.arc(4, 7).to_vec(), vec![1, 3, 4]);
        assert_eq!(p.rotated(2).order(), vec![5, 2, 4, 1, 3]);
    }

    #[test]
    fn invalid_orders() {
        let g = GroundSet::new(3).unwrap();
        assert!(CyclicPerm::from_order(g, &[1, 2]).is_err());
        assert!(CyclicPerm::from_order(g, &[1, 2, 2]).is_err());
        assert!(CyclicPerm::from_order(g, &[1, 2, 4]).is_err());
    }

    #[test]
    fn random_is_rooted_bijection() {
        let g = GroundSet::new(8).unwrap();
        let mut rng = rng_from_seed(5);
        for _ in 0..10 {
            let p = CyclicPerm::random(g, &mut rng);
            assert_eq!(p.at(1), 1);
            let mut o = p.order();
            o.sort();
            assert_eq!(o, (1..=8).collect::<Vec<_>>());
        }
    }
}
