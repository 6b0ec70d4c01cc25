use rand::Rng;
use serde::Serialize;

use super::arcs::ArcLayout;
use super::perm::CyclicPerm;
use crate::setcore::{binom, Family, Rational};
use crate::{Error, Result};

/// Largest `n` for which all `(n-1)!` cyclic orders are enumerated.
pub const EXHAUSTIVE_LIMIT: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationRow {
    pub label: String,
    pub size: usize,
    /// Average of `|F ∩ X|` over the cyclic orders visited.
    pub average: Rational,
    /// `nbar * f^(size) / C(n, size)`.
    pub formula: Rational,
    /// `None` in sampled mode, which never issues a verdict.
    pub equal: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationTable {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub nbar: usize,
    pub exhaustive: bool,
    /// Cyclic orders visited (rooted representatives times rotations).
    pub permutations: u64,
    /// Rotations applied to each rooted order, `gcd(n, m)` in exhaustive mode.
    pub rotations: usize,
    pub rows: Vec<ExpectationRow>,
}

impl ExpectationTable {
    /// True only for an exhaustive table where every row matched.
    pub fn all_equal(&self) -> bool {
        self.exhaustive && self.rows.iter().all(|r| r.equal == Some(true))
    }
}

struct Accumulator {
    shifts: usize,
    sums: Vec<u64>,
    perms: u64,
}

impl Accumulator {
    fn new(shifts: usize) -> Self {
        Accumulator { shifts, sums: vec![0; 2 + shifts], perms: 0 }
    }

    fn add(&mut self, fam: &Family, layout: &ArcLayout) {
        for r in 1..=layout.nbar() as i64 {
            self.sums[0] += fam.contains(layout.a(r)) as u64;
            self.sums[1] += fam.contains(layout.b(r)) as u64;
            for j in 1..=self.shifts {
                self.sums[1 + j] += fam.contains(layout.c(r, j as i64)) as u64;
            }
        }
        self.perms += 1;
    }

    fn finish(self, fam: &Family, m: usize, l: usize, nbar: usize, exhaustive: bool) -> ExpectationTable {
        let n = fam.ground().n();
        let profile = fam.profile();
        let mut labels = vec![("A".to_string(), m - l), ("B".to_string(), m)];
        labels.extend((1..=self.shifts).map(|j| {
            let label = if self.shifts == 1 { "C".to_string() } else { format!("C({j})") };
            (label, m + l)
        }));
        let rows = labels
            .into_iter()
            .zip(&self.sums)
            .map(|((label, size), &sum)| {
                let average = Rational::new(sum, self.perms);
                let formula = Rational::from_int(nbar as u64 * profile.get(size as i64))
                    / Rational::from(&binom(n as u64, size as i64));
                let equal = exhaustive.then(|| average == formula);
                ExpectationRow { label, size, average, formula, equal }
            })
            .collect();
        ExpectationTable { n, m, l, nbar, exhaustive, permutations: self.perms, rotations: 1, rows }
    }
}

fn validate(fam: &Family, k: usize, m: usize, l: usize) -> Result<()> {
    let n = fam.ground().n();
    if k < 3 || !(0 < l && l < m) || k * m != n + l {
        return Err(Error::InvalidParameter(format!(
            "need k >= 3, m > l > 0 and n = km - l, got n={n} k={k} m={m} l={l}"
        )));
    }
    Ok(())
}

/// Exact averages of `|F ∩ A|`, `|F ∩ B|`, `|F ∩ C(j)|` over all cyclic
/// orders with `x_1 = 1`, for `n = km - l`.
///
/// When `d = gcd(n, m) > 1` the arcs only start at every `d`-th position, so
/// each rooted order is also visited in its `d` rotations.
pub fn expectation_check(fam: &Family, k: usize, m: usize, l: usize) -> Result<ExpectationTable> {
    validate(fam, k, m, l)?;
    expectation_table(fam, m, l, k - 2)
}

/// Same as [`expectation_check`] for an arbitrary arc layout on `[n]` with
/// `shifts` kinds of `C` sets. Any `n` with `m + l <= n` is accepted.
pub fn expectation_table(fam: &Family, m: usize, l: usize, shifts: usize) -> Result<ExpectationTable> {
    let ground = fam.ground();
    if ground.n() > EXHAUSTIVE_LIMIT {
        return Err(Error::ExhaustiveTooLarge { n: ground.n(), limit: EXHAUSTIVE_LIMIT });
    }
    let mut acc = Accumulator::new(shifts);
    let rotations = crate::gcd(ground.n(), m);
    let mut nbar = 0;
    for perm in CyclicPerm::all_rooted(ground) {
        // arcs start at multiples of d, so the d rotations restore uniformity
        for shift in 0..rotations {
            let layout = ArcLayout::new(perm.rotated(shift), m, l)?;
            check_c_sizes(&layout, shifts)?;
            nbar = layout.nbar();
            acc.add(fam, &layout);
        }
    }
    let mut table = acc.finish(fam, m, l, nbar, true);
    table.rotations = rotations;
    Ok(table)
}

fn check_c_sizes(layout: &ArcLayout, shifts: usize) -> Result<()> {
    let want = layout.m() + layout.l();
    if (1..=shifts as i64).any(|j| layout.c(1, j).len() != want) {
        return Err(Error::InvalidParameter("C sets overlap for this layout".into()));
    }
    Ok(())
}

/// Sampled estimate for larger `n`; reports averages but no verdicts.
pub fn expectation_estimate<R: Rng>(
    fam: &Family,
    k: usize,
    m: usize,
    l: usize,
    samples: u64,
    rng: &mut R,
) -> Result<ExpectationTable> {
    validate(fam, k, m, l)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let mut acc = Accumulator::new(k - 2);
    let mut nbar = 0;
    for _ in 0..samples {
        let layout = ArcLayout::new(CyclicPerm::random(fam.ground(), rng), m, l)?;
        nbar = layout.nbar();
        acc.add(fam, &layout);
    }
    Ok(acc.finish(fam, m, l, nbar, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng_from_seed;
    use crate::setcore::GroundSet;

    fn g5() -> GroundSet {
        GroundSet::new(5).unwrap()
    }

    #[test]
    fn full_pair_layer() {
        let t = expectation_check(&Family::layers(g5(), &[2]), 3, 2, 1).unwrap();
        assert_eq!(t.permutations, 24);
        assert_eq!(t.rows[1].average, Rational::from_int(5));
        assert!(t.all_equal());
    }

    #[test]
    fn single_pair() {
        let fam = Family::new(g5(), [g5().set_from_elements([1, 2]).unwrap()]).unwrap();
        let t = expectation_check(&fam, 3, 2, 1).unwrap();
        assert_eq!(t.rows[1].label, "B");
        assert_eq!(t.rows[1].average, Rational::new(1, 2));
        assert!(t.all_equal());
    }

    #[test]
    fn single_point() {
        let fam = Family::new(g5(), [g5().set_from_elements([3]).unwrap()]).unwrap();
        let t = expectation_check(&fam, 3, 2, 1).unwrap();
        assert_eq!(t.rows[0].average, Rational::one());
        assert!(t.all_equal());
    }

    #[test]
    fn too_large_for_exhaustive() {
        let g = GroundSet::new(8).unwrap();
        let fam = Family::layers(g, &[3]);
        assert!(matches!(expectation_check(&fam, 3, 3, 1), Err(Error::ExhaustiveTooLarge { .. })));
        let est = expectation_estimate(&fam, 3, 3, 1, 50, &mut rng_from_seed(1)).unwrap();
        assert!(!est.exhaustive);
        assert!(est.rows.iter().all(|r| r.equal.is_none()));
        // every B arc is a 3-set, so the estimate is exact here anyway
        assert_eq!(est.rows[1].average, Rational::from_int(8));
    }

    #[test]
    fn six_points_generic_layout() {
        let g = GroundSet::new(6).unwrap();
        let fam = Family::new(g, [g.set_from_elements([1, 4]).unwrap(), g.set_from_elements([2]).unwrap()]).unwrap();
        let t = expectation_table(&fam, 2, 1, 1).unwrap();
        assert_eq!(t.permutations, 240);
        assert_eq!((t.nbar, t.rotations), (3, 2));
        assert!(t.all_equal());
    }
}
