use std::collections::HashMap;

use serde::Serialize;

use super::arcs::{ArcCircle, ArcKind};
use super::groups::{deficiency_t, GroupSystem};
use crate::predicates::find_disjoint_tuple;
use crate::setcore::{ElementSet, Family};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PresenceCount {
    pub present: usize,
    pub missing: usize,
    /// `(k - 1) * b * nbar`.
    pub bound: usize,
}

fn check_families(families: &[&Family], circle: &ArcCircle) -> Result<()> {
    if families.len() != circle.k() {
        return Err(Error::InvalidParameter(format!(
            "circle has k = {} but {} families were given",
            circle.k(),
            families.len()
        )));
    }
    let ground = circle.layout().perm().ground();
    if let Some(f) = families.iter().find(|f| f.ground() != ground) {
        return Err(Error::MismatchedGround { expected: ground.n(), found: f.ground().n() });
    }
    Ok(())
}

/// Tests every `A`, `B` and `C(j)` copy on the circle against family `p(q)`.
pub fn circle_presence_count(families: &[&Family], circle: &ArcCircle) -> Result<PresenceCount> {
    check_families(families, circle)?;
    let mut present = 0;
    let mut total = 0;
    for q in 1..=circle.len() as i64 {
        let fam = families[circle.position(q).1 - 1];
        for kind in circle.kinds() {
            total += 1;
            if fam.contains(circle.set_at(q, kind)) {
                present += 1;
            }
        }
    }
    Ok(PresenceCount { present, missing: total - present, bound: (circle.k() - 1) * circle.len() })
}

/// A set copy on the circle that is absent from its family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Incidence {
    pub position: usize,
    pub kind: ArcKind,
    pub family: usize,
    pub set: ElementSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkGroup {
    pub anchor: usize,
    pub t: usize,
    pub missing: Vec<Incidence>,
}

/// Groups found while stepping backwards around the circle, restricted to the
/// cycle between the first repeated starting position.
#[derive(Clone, Debug, Serialize)]
pub struct WalkCertificate {
    pub circle_len: usize,
    pub start: usize,
    pub cycle_start: usize,
    pub groups: Vec<WalkGroup>,
    /// Number of full rounds the cycle makes: `sum t = c * circle_len`.
    pub rounds: usize,
    /// Exhibited incidences counted with multiplicity.
    pub exhibited: usize,
    pub distinct_missing: usize,
    pub max_multiplicity: usize,
}

impl WalkCertificate {
    pub fn certifies(&self) -> bool {
        self.max_multiplicity <= self.rounds
            && self.exhibited >= self.rounds * self.circle_len
            && self.distinct_missing >= self.circle_len
    }
}

/// Checks cross-partition-freeness, then walks the circle.
pub fn circle_walk_certificate(families: &[&Family], circle: &ArcCircle) -> Result<WalkCertificate> {
    check_families(families, circle)?;
    if let Some(w) = find_disjoint_tuple(families, true)? {
        return Err(Error::HypothesisViolated { hypothesis: "cross-partition-free".into(), witness: w.tuple });
    }
    circle_walk_unchecked(families, circle, 1)
}

/// Walks from `start`: at anchor `q` the smallest deficient `t` is found and
/// the walk continues at `q - t`, until a starting position repeats.
pub fn circle_walk_unchecked(families: &[&Family], circle: &ArcCircle, start: usize) -> Result<WalkCertificate> {
    check_families(families, circle)?;
    let len = circle.len();
    let k = circle.k();
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut steps: Vec<WalkGroup> = Vec::new();
    let mut q = circle.wrap(start as i64);
    while !seen.contains_key(&q) {
        seen.insert(q, steps.len());
        let (r, _) = circle.position(q as i64);
        let gs = GroupSystem::new(circle.layout(), k, r as i64)?;
        let h: Vec<u32> = gs
            .groups
            .iter()
            .map(|g| {
                g.iter().enumerate().fold(0u32, |bits, (i, member)| {
                    let pos = q as i64 + member.offset;
                    let fam = families[circle.position(pos).1 - 1];
                    if fam.contains(member.set) {
                        bits | (1 << i)
                    } else {
                        bits
                    }
                })
            })
            .collect();
        let res = deficiency_t(&gs, &h)?;
        let missing = res
            .missing
            .iter()
            .map(|(_, m)| {
                let pos = q as i64 + m.offset;
                Incidence { position: circle.wrap(pos), kind: m.kind, family: circle.position(pos).1, set: m.set }
            })
            .collect();
        steps.push(WalkGroup { anchor: q, t: res.t, missing });
        q = circle.wrap(q as i64 - res.t as i64);
    }
    let cycle_start = q;
    let groups = steps.split_off(seen[&q]);
    let advanced: usize = groups.iter().map(|g| g.t).sum();
    if !advanced.is_multiple_of(len) {
        return Err(Error::Violation {
            claim: "circle walk closes up".into(),
            detail: format!("cycle advanced {advanced} positions on a circle of {len}"),
        });
    }
    let rounds = advanced / len;
    let mut multiplicity: HashMap<Incidence, usize> = HashMap::new();
    for inc in groups.iter().flat_map(|g| &g.missing) {
        *multiplicity.entry(*inc).or_default() += 1;
    }
    let cert = WalkCertificate {
        circle_len: len,
        start,
        cycle_start,
        exhibited: multiplicity.values().sum(),
        distinct_missing: multiplicity.len(),
        max_multiplicity: multiplicity.values().copied().max().unwrap_or(0),
        rounds,
        groups,
    };
    if !cert.certifies() {
        return Err(Error::Violation {
            claim: "circle accounting (at least b * nbar missing)".into(),
            detail: format!(
                "distinct={} exhibited={} rounds={} max multiplicity={}",
                cert.distinct_missing, cert.exhibited, cert.rounds, cert.max_multiplicity
            ),
        });
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::{build_arc_circle, CyclicPerm};
    use crate::random::rng_from_seed;
    use crate::setcore::GroundSet;

    fn circle(k: usize, m: usize, l: usize) -> (GroundSet, ArcCircle) {
        let g = GroundSet::new(k * m - l).unwrap();
        (g, build_arc_circle(&CyclicPerm::identity(g), k, m, l).unwrap())
    }

    #[test]
    fn extremal_families_k4() {
        let (g, c) = circle(4, 2, 1);
        let f = Family::layers(g, &[2, 3]);
        let fams = [&f, &f, &f, &f];
        let pc = circle_presence_count(&fams, &c).unwrap();
        assert_eq!(pc, PresenceCount { present: 84, missing: 28, bound: 84 });
        let w = circle_walk_certificate(&fams, &c).unwrap();
        assert!(w.distinct_missing >= 28);
    }

    #[test]
    fn tightness_families_k3() {
        let (g, c) = circle(3, 2, 1);
        let f = Family::layers(g, &[2, 3]);
        let fams = [&f, &f, &f];
        let pc = circle_presence_count(&fams, &c).unwrap();
        assert_eq!(pc.present, 30);
        assert_eq!(pc.bound, 30);
        let w = circle_walk_certificate(&fams, &c).unwrap();
        assert!(w.exhibited >= 15 * w.rounds);
        assert!(w.distinct_missing >= 15);
    }

    #[test]
    fn empty_families_step_by_one() {
        let (g, c) = circle(3, 2, 1);
        let e = Family::empty(g);
        let fams = [&e, &e, &e];
        assert_eq!(circle_presence_count(&fams, &c).unwrap().present, 0);
        let w = circle_walk_certificate(&fams, &c).unwrap();
        assert!(w.groups.iter().all(|g| g.t == 1));
        assert!(w.distinct_missing >= c.len());
    }

    #[test]
    fn random_tuples_and_perms() {
        let mut rng = rng_from_seed(9);
        for (k, m, l) in [(3, 2, 1), (4, 2, 1), (3, 3, 1), (3, 3, 2)] {
            let g = GroundSet::new(k * m - l).unwrap();
            for _ in 0..10 {
                let fams = crate::random::random_cross_partition_free(g, k, &[m - l, m, m + l], &mut rng);
                let refs: Vec<&Family> = fams.iter().collect();
                let c = build_arc_circle(&CyclicPerm::random(g, &mut rng), k, m, l).unwrap();
                let pc = circle_presence_count(&refs, &c).unwrap();
                assert!(pc.present <= pc.bound);
                circle_walk_certificate(&refs, &c).unwrap();
            }
        }
    }

    #[test]
    fn violation_reported() {
        let (g, c) = circle(3, 2, 1);
        let all = Family::layers(g, &[1, 2, 3]);
        assert!(matches!(
            circle_walk_certificate(&[&all, &all, &all], &c),
            Err(Error::HypothesisViolated { .. })
        ));
        assert!(circle_presence_count(&[&all, &all], &c).is_err());
    }
}
