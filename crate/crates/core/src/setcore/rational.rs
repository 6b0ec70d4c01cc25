use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Binomial coefficient `C(n, j)`, zero when `j < 0` or `j > n`.
pub fn binom(n: u64, j: i64) -> BigUint {
    if j < 0 || j as u64 > n {
        return BigUint::zero();
    }
    let j = (j as u64).min(n - j as u64);
    let mut acc = BigUint::one();
    for i in 0..j {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Exact rational number kept in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num.into(), den))
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `num / den` for unsigned big integers; panics on a zero denominator.
    pub fn ratio(num: &BigUint, den: &BigUint) -> Self {
        Self::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn pow(&self, e: i32) -> Rational {
        Rational(num_traits::Pow::pow(&self.0, e))
    }

    /// Lossy conversion for display only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl From<u64> for Rational {
    fn from(v: u64) -> Self {
        Rational::from_int(v)
    }
}

impl From<&BigUint> for Rational {
    fn from(v: &BigUint) -> Self {
        Rational::from_int(BigInt::from(v.clone()))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// Integers that fit `i128` serialize as JSON numbers, larger ones as decimal strings.
fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i128() {
        Some(x) => s.serialize_i128(x),
        None => s.serialize_str(&v.to_string()),
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        struct Int<'a>(&'a BigInt);
        impl serde::Serialize for Int<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                ser_bigint(self.0, s)
            }
        }
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&Int(self.numer()))?;
        t.serialize_element(&Int(self.denom()))?;
        t.end()
    }
}

/// Serializes a `BigUint` as a JSON integer when it fits `u128`.
pub fn ser_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match v.to_u128() {
        Some(x) => s.serialize_u128(x),
        None => s.serialize_str(&v.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binom(5, 2), BigUint::from(10u32));
        assert_eq!(binom(8, 3), BigUint::from(56u32));
        assert_eq!(binom(5, 7), BigUint::zero());
        assert_eq!(binom(5, -1), BigUint::zero());
        assert_eq!(binom(0, 0), BigUint::one());
    }

    #[test]
    fn binomial_rows_sum_to_powers_of_two() {
        for n in 0..=24u64 {
            let row: BigUint = (0..=n as i64).map(|j| binom(n, j)).sum();
            assert_eq!(row, BigUint::one() << n as usize, "n = {n}");
        }
    }

    #[test]
    fn lowest_terms_and_display() {
        let r = Rational::new(6, -8);
        assert_eq!(r.to_string(), "-3/4");
        assert_eq!(Rational::from_int(12).to_string(), "12/1");
        assert_eq!(Rational::new(1, 2) + Rational::new(1, 4), Rational::new(3, 4));
        assert!(Rational::new(7, 2) > Rational::from_int(2));
    }

    #[test]
    fn json_pairs() {
        let r = Rational::new(7, 2);
        assert_eq!(serde_json::to_string(&r).unwrap(), "[7,2]");
    }
}
