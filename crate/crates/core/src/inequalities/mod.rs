//! Weighted layer inequalities in exact rational arithmetic, and the
//! derivation that combines them into the bound for `n = km - 1`.
//!
//! Every report carries `hypothesis_checked`; the `check = false` variants
//! evaluate the bare expression on whatever input they are given.

mod derive;

pub use derive::{
    derive_combined, derive_combined_with, ratio_identity, up_set_bound, Alternative, BinomialComparison,
    CombinedIneq, RatioIdentity, SourceIneq, Term,
};

use num_bigint::BigUint;
use serde::Serialize;

use crate::predicates::{find_disjoint_tuple, partition_witness};
use crate::setcore::{binom, ElementSet, Family, GroundSet, Profile, Rational};
use crate::{Error, Result};

/// `lhs <= rhs` with both sides exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IneqReport {
    pub lhs: Rational,
    pub rhs: Rational,
    pub satisfied: bool,
    /// `rhs - lhs`.
    pub slack: Rational,
    pub hypothesis_checked: bool,
}

impl IneqReport {
    pub fn new(lhs: Rational, rhs: Rational, hypothesis_checked: bool) -> Self {
        let slack = &rhs - &lhs;
        IneqReport { satisfied: lhs <= rhs, lhs, rhs, slack, hypothesis_checked }
    }
}

/// `y(j) = C(n, j) - f^(j)`, the number of missing `j`-sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeficitVector {
    pub n: usize,
    pub y: Vec<Rational>,
}

impl DeficitVector {
    pub fn from_profile(profile: &Profile) -> Self {
        let n = profile.ground().n();
        let y = (0..=n).map(|j| Rational::from_int(profile.missing(j))).collect();
        DeficitVector { n, y }
    }

    pub fn get(&self, j: usize) -> Rational {
        self.y.get(j).cloned().unwrap_or_else(Rational::zero)
    }
}

fn layer_ratio(count: u64, n: usize, j: usize) -> Rational {
    Rational::from_int(count) / Rational::from(&binom(n as u64, j as i64))
}

/// `sum_i f^(j_i) / C(n, j_i)`; the `j_i` must add up to `n`.
pub fn layer_ratio_sum(profile: &Profile, jvec: &[usize]) -> Result<Rational> {
    let n = profile.ground().n();
    let total: usize = jvec.iter().sum();
    if total != n {
        return Err(Error::InvalidParameter(format!("layer sizes {jvec:?} sum to {total}, not n = {n}")));
    }
    Ok(jvec.iter().map(|&j| layer_ratio(profile.get(j as i64), n, j)).sum())
}

fn check_jvec(n: usize, jvec: &[usize]) -> Result<()> {
    if jvec.len() < 2 {
        return Err(Error::InvalidParameter(format!("need k >= 2 layer sizes, got {}", jvec.len())));
    }
    let total: usize = jvec.iter().sum();
    if total != n {
        return Err(Error::InvalidParameter(format!("layer sizes {jvec:?} sum to {total}, not n = {n}")));
    }
    // two empty blocks would be the same member twice
    if jvec.iter().filter(|&&j| j == 0).count() > 1 {
        return Err(Error::InvalidParameter(format!(
            "layer sizes {jvec:?} use the empty set twice; members of a partition are distinct"
        )));
    }
    Ok(())
}

/// `sum_i f^(j_i) / C(n, j_i) <= k - 1` for a `k`-partition-free family.
pub fn profile_report(fam: &Family, jvec: &[usize], check: bool) -> Result<IneqReport> {
    check_jvec(fam.ground().n(), jvec)?;
    let k = jvec.len();
    if check {
        if let Some(w) = partition_witness(fam, k) {
            return Err(Error::HypothesisViolated { hypothesis: format!("{k}-partition-free"), witness: w.tuple });
        }
    }
    let lhs = layer_ratio_sum(&fam.profile(), jvec)?;
    Ok(IneqReport::new(lhs, Rational::from_int(k as u64 - 1), check))
}

/// Result of [`kleitman_tuple_audit`].
#[derive(Clone, Debug, Serialize)]
pub struct TupleAudit {
    /// Number of ordered tuples `(G_1, ..., G_k)` partitioning `[n]` with `|G_i| = j_i`.
    pub tuples: u64,
    /// Largest number of tuple members lying in the family.
    pub max_present: usize,
    /// Average number of present members over all tuples.
    pub average: Rational,
    pub report: IneqReport,
}

/// Largest `n` accepted by [`kleitman_tuple_audit`].
pub const AUDIT_LIMIT: usize = 8;

/// Enumerates all ordered partitions of `[n]` into blocks of sizes `jvec`,
/// counts how many blocks lie in `fam`, and checks that the average equals
/// [`layer_ratio_sum`] and that no tuple is fully present.
pub fn kleitman_tuple_audit(fam: &Family, jvec: &[usize]) -> Result<TupleAudit> {
    let ground = fam.ground();
    if ground.n() > AUDIT_LIMIT {
        return Err(Error::ExhaustiveTooLarge { n: ground.n(), limit: AUDIT_LIMIT });
    }
    check_jvec(ground.n(), jvec)?;
    let k = jvec.len();
    let mut audit = Audit { fam, jvec, tuples: 0, present_sum: 0, max_present: 0, full: None, stack: Vec::new() };
    audit.walk(ground, ground.full_mask(), 0, 0);
    if let Some(witness) = audit.full {
        return Err(Error::HypothesisViolated { hypothesis: format!("{k}-partition-free"), witness });
    }
    let average = Rational::new(audit.present_sum, audit.tuples);
    let lhs = layer_ratio_sum(&fam.profile(), jvec)?;
    if average != lhs {
        return Err(Error::Violation {
            claim: "tuple average equals the layer ratio sum".into(),
            detail: format!("average {average}, layer sum {lhs}"),
        });
    }
    Ok(TupleAudit {
        tuples: audit.tuples,
        max_present: audit.max_present,
        average,
        report: IneqReport::new(lhs, Rational::from_int(k as u64 - 1), true),
    })
}

struct Audit<'a> {
    fam: &'a Family,
    jvec: &'a [usize],
    tuples: u64,
    present_sum: u64,
    max_present: usize,
    full: Option<Vec<ElementSet>>,
    stack: Vec<ElementSet>,
}

impl Audit<'_> {
    fn walk(&mut self, ground: GroundSet, rest: u32, i: usize, present: usize) {
        if i == self.jvec.len() {
            self.tuples += 1;
            self.present_sum += present as u64;
            self.max_present = self.max_present.max(present);
            if present == self.jvec.len() && self.full.is_none() {
                self.full = Some(self.stack.clone());
            }
            return;
        }
        let want = self.jvec[i];
        // submasks of `rest` with `want` bits, including the empty one
        let mut sub = rest;
        loop {
            if sub.count_ones() as usize == want {
                let s = ground.set_from_mask(sub).expect("submask of the ground");
                let hit = self.fam.contains(s) as usize;
                self.stack.push(s);
                self.walk(ground, rest & !sub, i + 1, present + hit);
                self.stack.pop();
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
}

fn check_three_layer(n: usize, k: usize, m: usize, l: usize) -> Result<()> {
    if !(0 < l && l < m) || k * m != n + l {
        return Err(Error::InvalidParameter(format!("need m > l > 0 and n = {k}m - l, got n={n} m={m} l={l}")));
    }
    Ok(())
}

/// `f^(m-l)/C + f^(m)/C + f^(m+l)/C <= 2` for a 3-partition-free family on `n = 3m - l`.
pub fn three_layer_report(fam: &Family, m: usize, l: usize, check: bool) -> Result<IneqReport> {
    let n = fam.ground().n();
    check_three_layer(n, 3, m, l)?;
    if check {
        if let Some(w) = partition_witness(fam, 3) {
            return Err(Error::HypothesisViolated { hypothesis: "3-partition-free".into(), witness: w.tuple });
        }
    }
    let p = fam.profile();
    let lhs = [m - l, m, m + l].iter().map(|&j| layer_ratio(p.get(j as i64), n, j)).sum();
    Ok(IneqReport::new(lhs, Rational::from_int(2), check))
}

/// `sum_i f_i^(m-l)/C + f_i^(m)/C + (k-2) f_i^(m+l)/C <= (k-1)k` for a
/// cross-partition-free tuple living on the three layers, `n = km - l`.
pub fn cross_layer_report(families: &[&Family], m: usize, l: usize, check: bool) -> Result<IneqReport> {
    let k = families.len();
    if k < 3 {
        return Err(Error::InvalidParameter(format!("need k >= 3 families, got {k}")));
    }
    let ground = families[0].ground();
    if let Some(f) = families.iter().find(|f| f.ground() != ground) {
        return Err(Error::MismatchedGround { expected: ground.n(), found: f.ground().n() });
    }
    let n = ground.n();
    check_three_layer(n, k, m, l)?;
    let allowed = [m - l, m, m + l];
    for (i, f) in families.iter().enumerate() {
        if let Some(s) = f.sets().find(|s| !allowed.contains(&s.len())) {
            return Err(Error::InvalidParameter(format!(
                "family {} contains {s} of size {}, outside layers {allowed:?}",
                i + 1,
                s.len()
            )));
        }
    }
    if check {
        if let Some(w) = find_disjoint_tuple(families, true)? {
            return Err(Error::HypothesisViolated { hypothesis: "cross-partition-free".into(), witness: w.tuple });
        }
    }
    let weight = Rational::from_int(k as u64 - 2);
    let lhs = families
        .iter()
        .map(|f| {
            let p = f.profile();
            layer_ratio(p.get((m - l) as i64), n, m - l)
                + layer_ratio(p.get(m as i64), n, m)
                + &weight * &layer_ratio(p.get((m + l) as i64), n, m + l)
        })
        .sum();
    Ok(IneqReport::new(lhs, Rational::from_int((k * (k - 1)) as u64), check))
}

/// `|F_1| + ... + |F_k| <= k * sum_{j >= m} C(n, j)` for a cross-partition-free
/// tuple on `n = km - 1`.
pub fn cross_sum_bound_check(families: &[&Family], check: bool) -> Result<IneqReport> {
    let k = families.len();
    if k < 2 {
        return Err(Error::InvalidParameter(format!("need k >= 2 families, got {k}")));
    }
    let ground = families[0].ground();
    if let Some(f) = families.iter().find(|f| f.ground() != ground) {
        return Err(Error::MismatchedGround { expected: ground.n(), found: f.ground().n() });
    }
    let n = ground.n();
    if !(n + 1).is_multiple_of(k) {
        return Err(Error::InvalidParameter(format!("n = {n} is not of the form {k}m - 1")));
    }
    let m = (n + 1) / k;
    if check {
        if let Some(w) = find_disjoint_tuple(families, true)? {
            return Err(Error::HypothesisViolated { hypothesis: "cross-partition-free".into(), witness: w.tuple });
        }
    }
    let lhs: u64 = families.iter().map(|f| f.len() as u64).sum();
    let rhs = BigUint::from(k) * up_set_bound(k, m);
    Ok(IneqReport::new(Rational::from_int(lhs), Rational::from(&rhs), check))
}
