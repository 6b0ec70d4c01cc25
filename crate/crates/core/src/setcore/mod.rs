//! Ground sets, families, layer profiles, exact arithmetic and the family file format.

mod family;
mod format;
mod rational;
mod set;

pub use family::{Family, Profile};
pub(crate) use family::SetIndex;
pub use format::{parse_family, serialize_family, serialize_family_text};
pub use rational::{binom, ser_biguint, Rational};
pub use set::{ElementSet, GroundSet, MAX_N};
pub(crate) use set::canonical_cmp;

/// `C(n, j)` as a `u64`; only for `n <= 24`.
#[inline]
pub(crate) fn binom_u64(n: usize, j: usize) -> u64 {
    if j > n {
        return 0;
    }
    let j = j.min(n - j) as u64;
    let n = n as u64;
    (0..j).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
