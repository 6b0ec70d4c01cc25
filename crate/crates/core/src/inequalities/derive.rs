use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::{DeficitVector, IneqReport};
use crate::setcore::{binom, ser_biguint, Rational};
use crate::{Error, Result};

/// `sum_{j >= m} C(km - 1, j)`, the size of the up-set `{G : |G| >= m}`.
pub fn up_set_bound(k: usize, m: usize) -> BigUint {
    let n = (k * m) as u64 - 1;
    (m as i64..=n as i64).map(|j| binom(n, j)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioIdentity {
    /// `C(km-1, m-j+1) / C(km-1, m-j)`.
    pub lhs: Rational,
    /// `((k-1)m + j - 1) / (m - j + 1)`.
    pub rhs: Rational,
    /// `lhs > k - 1`; expected exactly when `j >= 2`.
    pub exceeds: bool,
}

/// Checks the consecutive binomial ratio on `n = km - 1` against its closed form.
pub fn ratio_identity(k: usize, m: usize, j: usize) -> Result<RatioIdentity> {
    if k < 3 || m < 2 || !(1..=m).contains(&j) {
        return Err(Error::InvalidParameter(format!("need k >= 3, m >= 2, 1 <= j <= m; got k={k} m={m} j={j}")));
    }
    let n = (k * m - 1) as u64;
    let lhs = Rational::ratio(&binom(n, (m - j + 1) as i64), &binom(n, (m - j) as i64));
    let rhs = Rational::new(((k - 1) * m + j - 1) as u64, (m - j + 1) as u64);
    let km1 = Rational::from_int(k as u64 - 1);
    let exceeds = lhs > km1;
    if lhs != rhs || exceeds != (j >= 2) || (j == 1 && lhs != km1) {
        return Err(Error::Violation {
            claim: "binomial ratio identity".into(),
            detail: format!("k={k} m={m} j={j}: ratio {lhs}, closed form {rhs}"),
        });
    }
    Ok(RatioIdentity { lhs, rhs, exceeds })
}

/// One coefficient of a source inequality, normalised so that the constant
/// side is an integer.
#[derive(Clone, Debug, Serialize)]
pub struct Term {
    pub j: usize,
    /// Coefficient used in the combination.
    pub stated: Rational,
    /// Coefficient that follows directly from the underlying inequality.
    pub exact: Rational,
    /// `stated >= exact`: raising the coefficient of a non-negative `y(j)` keeps the inequality valid.
    pub sound: bool,
}

/// `sum stated * y(j) >= rhs`.
#[derive(Clone, Debug, Serialize)]
pub struct SourceIneq {
    pub label: String,
    pub terms: Vec<Term>,
    #[serde(serialize_with = "ser_biguint")]
    pub rhs: BigUint,
}

/// `C(n, upper) >= C(n, m)`, used to replace a larger binomial by a smaller one.
#[derive(Clone, Debug, Serialize)]
pub struct BinomialComparison {
    pub upper: usize,
    pub lower: usize,
    pub holds: bool,
    pub strict: bool,
}

/// What happens when the three-layer step is replaced by the plain profile
/// inequality with sizes `(m-1, m, ..., m)`: `y(m-1) + y(m) >= C(n, m-1)`.
#[derive(Clone, Debug, Serialize)]
pub struct Alternative {
    pub source: SourceIneq,
    pub coeff_m: Rational,
    pub exceeds_one: bool,
}

/// `y(0) + ... + y(m-1) + c_m y(m) + ... + c_2m y(2m) >= sum_{j<m} C(n, j)`.
#[derive(Clone, Debug, Serialize)]
pub struct CombinedIneq {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    /// `c_0 ..= c_n`.
    pub coeffs: Vec<Rational>,
    /// Same combination with the unweakened coefficients.
    pub exact_coeffs: Vec<Rational>,
    #[serde(serialize_with = "ser_biguint")]
    pub rhs: BigUint,
    #[serde(serialize_with = "ser_biguint")]
    pub implied_bound: BigUint,
    pub sources: Vec<SourceIneq>,
    pub comparisons: Vec<BinomialComparison>,
    pub alternative: Option<Alternative>,
}

impl CombinedIneq {
    /// Evaluates the combination on a deficit vector, as `rhs <= sum c_j y(j)`.
    pub fn evaluate(&self, y: &DeficitVector) -> Result<IneqReport> {
        if y.n != self.n {
            return Err(Error::MismatchedGround { expected: self.n, found: y.n });
        }
        let achieved = self.coeffs.iter().enumerate().map(|(j, c)| c * &y.get(j)).sum();
        Ok(IneqReport::new(Rational::from(&self.rhs), achieved, true))
    }
}

fn b(n: usize, j: usize) -> Rational {
    Rational::from(&binom(n as u64, j as i64))
}

fn term(j: usize, stated: Rational, exact: Rational) -> Term {
    Term { j, sound: stated >= exact, stated, exact }
}

fn compare(n: usize, upper: usize, lower: usize) -> BinomialComparison {
    let (u, l) = (binom(n as u64, upper as i64), binom(n as u64, lower as i64));
    BinomialComparison { upper, lower, holds: u >= l, strict: u > l }
}

/// Builds the combination for `n = km - 1`, certifying each weakening.
pub fn derive_combined(k: usize, m: usize) -> Result<CombinedIneq> {
    derive_combined_with(k, m, false)
}

/// As [`derive_combined`]; `alternative` also reports the failed variant that
/// starts from the plain profile inequality instead of the three-layer one.
pub fn derive_combined_with(k: usize, m: usize, alternative: bool) -> Result<CombinedIneq> {
    if k < 3 || m < 2 {
        return Err(Error::InvalidParameter(format!("need k >= 3 and m >= 2, got k={k} m={m}")));
    }
    let n = k * m - 1;
    let km1 = Rational::from_int(k as u64 - 1);
    let km2 = Rational::from_int(k as u64 - 2);
    let mut sources = Vec::new();
    let mut comparisons = Vec::new();

    // three-layer inequality on (m-1, m, m+1), times C(n, m-1)
    let base = b(n, m - 1);
    sources.push(SourceIneq {
        label: "three-layer, l = 1".into(),
        terms: vec![
            term(m - 1, Rational::one(), Rational::one()),
            term(m, Rational::one() / &km1, &base / &b(n, m)),
            term(m + 1, &km2 / &km1, &km2 * &base / b(n, m + 1)),
        ],
        rhs: binom(n as u64, (m - 1) as i64),
    });
    comparisons.push(compare(n, m + 1, m));

    // profile inequality on (m-l, m, ..., m, m+l-1), times C(n, m-l)
    for l in 2..=m {
        let base = b(n, m - l);
        let scale = km1.pow(l as i32);
        sources.push(SourceIneq {
            label: format!("profile, l = {l}"),
            terms: vec![
                term(m - l, Rational::one(), Rational::one()),
                term(m, &km2 / &scale, &km2 * &base / b(n, m)),
                term(m + l - 1, Rational::one() / &scale, &base / &b(n, m + l - 1)),
            ],
            rhs: binom(n as u64, (m - l) as i64),
        });
        comparisons.push(compare(n, m + l - 1, m));
    }

    let sum_terms = |pick: &dyn Fn(&Term) -> Rational, sources: &[SourceIneq]| {
        let mut c = vec![Rational::zero(); n + 1];
        for t in sources.iter().flat_map(|s| &s.terms) {
            c[t.j] = &c[t.j] + &pick(t);
        }
        c
    };
    let coeffs = sum_terms(&|t: &Term| t.stated.clone(), &sources);
    let exact_coeffs = sum_terms(&|t: &Term| t.exact.clone(), &sources);
    let rhs: BigUint = sources.iter().map(|s| s.rhs.clone()).sum();
    let implied_bound = (BigUint::one() << n) - &rhs;

    let fail = |detail: String| Error::Violation { claim: format!("combined inequality for k={k} m={m}"), detail };
    for s in &sources {
        if let Some(t) = s.terms.iter().find(|t| !t.sound) {
            return Err(fail(format!("{}: y({}) stated {} below exact {}", s.label, t.j, t.stated, t.exact)));
        }
    }
    if let Some(c) = comparisons.iter().find(|c| !c.holds) {
        return Err(fail(format!("C({n},{}) < C({n},{})", c.upper, c.lower)));
    }
    for (j, c) in coeffs.iter().enumerate() {
        let ok = match j {
            j if j < m => c == &Rational::one(),
            j if j <= 2 * m => c < &Rational::one(),
            _ => c.is_zero(),
        };
        if !ok {
            return Err(fail(format!("coefficient c_{j} = {c}")));
        }
    }
    let expected: BigUint = (0..m as i64).map(|j| binom(n as u64, j)).sum();
    if rhs != expected || implied_bound != up_set_bound(k, m) {
        return Err(fail(format!("rhs {rhs}, implied bound {implied_bound}")));
    }

    let alternative = alternative.then(|| {
        let source = SourceIneq {
            label: "profile, sizes (m-1, m, ..., m)".into(),
            terms: vec![
                term(m - 1, Rational::one(), Rational::one()),
                term(m, Rational::one(), &km1 * &b(n, m - 1) / b(n, m)),
            ],
            rhs: binom(n as u64, (m - 1) as i64),
        };
        let coeff_m = sources[1..]
            .iter()
            .flat_map(|s| &s.terms)
            .filter(|t| t.j == m)
            .fold(Rational::one(), |acc, t| acc + &t.stated);
        Alternative { exceeds_one: coeff_m > Rational::one(), source, coeff_m }
    });

    Ok(CombinedIneq { k, m, n, coeffs, exact_coeffs, rhs, implied_bound, sources, comparisons, alternative })
}
