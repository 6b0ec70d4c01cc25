use std::collections::HashSet;

use serde::Serialize;

use super::arcs::ArcSystem3;
use crate::predicates::partition_witness;
use crate::setcore::Family;
use crate::{Error, Result};

/// Image of `phi`, tagged with the index set it lands in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Tag {
    S(usize),
    T(usize),
}

/// Injection `phi: R -> S ⊎ T` where `R = {r : A_r ∈ F}`,
/// `S = {s : B_s ∉ F}` and `T = {t : C_t ∉ F}`.
#[derive(Clone, Debug, Serialize)]
pub struct InjectionCert {
    pub count: usize,
    pub r: Vec<usize>,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    /// `(rho, phi(rho))` for every `rho` in `R`, in increasing `rho`.
    pub phi: Vec<(usize, Tag)>,
    /// `|F ∩ A| + |F ∩ B| + |F ∩ C|`.
    pub hits: usize,
    /// `2 n / d`.
    pub bound: usize,
}

impl InjectionCert {
    /// Re-checks the certificate without trusting how it was built.
    pub fn validate(&self) -> bool {
        let r: HashSet<usize> = self.r.iter().copied().collect();
        let s: HashSet<usize> = self.s.iter().copied().collect();
        let t: HashSet<usize> = self.t.iter().copied().collect();
        let domain: HashSet<usize> = self.phi.iter().map(|&(rho, _)| rho).collect();
        let images: HashSet<Tag> = self.phi.iter().map(|&(_, img)| img).collect();
        let in_range = self.phi.iter().all(|&(_, img)| match img {
            Tag::S(x) => s.contains(&x),
            Tag::T(x) => t.contains(&x),
        });
        let counted = self.r.len() + (self.count - self.s.len()) + (self.count - self.t.len());
        domain == r
            && images.len() == self.phi.len()
            && in_range
            && self.r.len() <= self.s.len() + self.t.len()
            && counted == self.hits
            && self.hits <= self.bound
    }
}

/// Builds the certificate after checking that `fam` is 3-partition-free.
pub fn injection_certificate(fam: &Family, arcs: &ArcSystem3) -> Result<InjectionCert> {
    if let Some(w) = partition_witness(fam, 3) {
        return Err(Error::HypothesisViolated { hypothesis: "3-partition-free".into(), witness: w.tuple });
    }
    injection_certificate_unchecked(fam, arcs)
}

/// Builds the certificate assuming the caller has established partition-freeness.
///
/// For `rho = r + 2 ∈ R` the image is `S:(r+1)` when `B_{r+1} ∉ F`, otherwise
/// `S:r`, moved to `T:r` when `r + 1 ∈ R` already claims `S:r`. A family that
/// is not partition-free surfaces here as a hypothesis error.
pub fn injection_certificate_unchecked(fam: &Family, arcs: &ArcSystem3) -> Result<InjectionCert> {
    let count = arcs.count();
    let wrap = |x: i64| ((x - 1).rem_euclid(count as i64) + 1) as usize;
    let in_r: Vec<bool> = (1..=count as i64).map(|r| fam.contains(arcs.a(r))).collect();
    let in_s: Vec<bool> = (1..=count as i64).map(|s| !fam.contains(arcs.b(s))).collect();
    let in_t: Vec<bool> = (1..=count as i64).map(|t| !fam.contains(arcs.c(t))).collect();
    let member = |v: &Vec<bool>, x: i64| v[wrap(x) - 1];

    let mut phi = Vec::new();
    for rho in 1..=count as i64 {
        if !member(&in_r, rho) {
            continue;
        }
        let r = rho - 2;
        let image = if member(&in_s, r + 1) {
            Tag::S(wrap(r + 1))
        } else if !member(&in_s, r) {
            // B_r, B_{r+1}, A_{r+2} all in F
            return Err(Error::HypothesisViolated {
                hypothesis: "3-partition-free".into(),
                witness: vec![arcs.b(r), arcs.b(r + 1), arcs.a(r + 2)],
            });
        } else if member(&in_r, r + 1) {
            // r + 1 already maps to S:r, so C_r, A_{r+1}, A_{r+2} forces r ∈ T
            if !member(&in_t, r) {
                return Err(Error::HypothesisViolated {
                    hypothesis: "3-partition-free".into(),
                    witness: vec![arcs.c(r), arcs.a(r + 1), arcs.a(r + 2)],
                });
            }
            Tag::T(wrap(r))
        } else {
            Tag::S(wrap(r))
        };
        phi.push((rho as usize, image));
    }

    let pick = |v: &Vec<bool>| -> Vec<usize> { (1..=count).filter(|&x| v[x - 1]).collect() };
    let (r, s, t) = (pick(&in_r), pick(&in_s), pick(&in_t));
    let hits = r.len() + (count - s.len()) + (count - t.len());
    let cert = InjectionCert { count, r, s, t, phi, hits, bound: 2 * count };
    if !cert.validate() {
        return Err(Error::Violation { claim: "injection certificate".into(), detail: format!("{cert:?}") });
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::{build_arcs3, CyclicPerm};
    use crate::setcore::GroundSet;

    fn setup() -> (GroundSet, ArcSystem3) {
        let g = GroundSet::new(5).unwrap();
        (g, build_arcs3(&CyclicPerm::identity(g), 2, 1).unwrap())
    }

    #[test]
    fn tightness_family_hits_bound() {
        let (g, arcs) = setup();
        let fam = Family::layers(g, &[2, 3]);
        let cert = injection_certificate(&fam, &arcs).unwrap();
        assert!(cert.r.is_empty());
        assert_eq!(cert.hits, 10);
        assert_eq!(cert.bound, 10);
    }

    #[test]
    fn hand_run_of_the_rule() {
        let (g, arcs) = setup();
        let fam = Family::new(g, [arcs.a(3), arcs.b(1)]).unwrap();
        assert_eq!(arcs.a(3).to_vec(), vec![5]);
        let cert = injection_certificate(&fam, &arcs).unwrap();
        assert_eq!(cert.r, vec![3]);
        assert!(cert.s.contains(&2));
        assert_eq!(cert.phi, vec![(3, Tag::S(2))]);
        assert!(cert.r.len() <= cert.s.len() + cert.t.len());
    }

    #[test]
    fn redirect_to_t() {
        // A_2, A_3, B_2 present, B_1 absent: rho=3 provisionally maps to S:1, already taken by rho=2
        let (g, arcs) = setup();
        let fam = Family::new(g, [arcs.a(2), arcs.a(3), arcs.b(2)]).unwrap();
        let cert = injection_certificate(&fam, &arcs).unwrap();
        assert!(cert.phi.contains(&(2, Tag::S(1))));
        assert!(cert.phi.contains(&(3, Tag::T(1))));
        assert!(cert.validate());
    }

    #[test]
    fn hypothesis_violation_carries_witness() {
        let (g, arcs) = setup();
        let fam = Family::new(g, [arcs.a(3), arcs.b(1), arcs.b(2)]).unwrap();
        match injection_certificate(&fam, &arcs) {
            Err(Error::HypothesisViolated { witness, .. }) => assert_eq!(witness.len(), 3),
            other => panic!("expected violation, got {other:?}"),
        }
        assert!(injection_certificate_unchecked(&fam, &arcs).is_err());
    }
}
