use serde::Serialize;

use super::arcs::{ArcKind, ArcLayout};
use crate::setcore::ElementSet;
use crate::{Error, Result};

/// One set of a group, with its arc index and its circle offset from the anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupMember {
    pub kind: ArcKind,
    /// Arc index `r'` of `A_{r'}`, `B_{r'}` or `C_{r'}(j)`, relative numbering kept 1-based.
    pub arc: i64,
    /// Circle position relative to the anchor position.
    pub offset: i64,
    pub set: ElementSet,
}

/// Groups `G_1, ..., G_{k-1}` anchored at arc `r`:
/// `G_s = {A_{r-s+1}, B_{r-s}, C_{r-s}(1), ..., C_{r-s}(s-1)}`.
#[derive(Clone, Debug, Serialize)]
pub struct GroupSystem {
    pub k: usize,
    pub anchor: i64,
    pub groups: Vec<Vec<GroupMember>>,
    /// `A_r ∪ B_{r-1} ∪ ... ∪ B_{r-k+1}`.
    pub region: ElementSet,
}

impl GroupSystem {
    pub fn new(layout: &ArcLayout, k: usize, r: i64) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidParameter(format!("k = {k} < 3")));
        }
        let mut groups = Vec::with_capacity(k - 1);
        for s in 1..k as i64 {
            let mut g = vec![
                GroupMember { kind: ArcKind::A, arc: r - s + 1, offset: -(s - 1), set: layout.a(r - s + 1) },
                GroupMember { kind: ArcKind::B, arc: r - s, offset: -s, set: layout.b(r - s) },
            ];
            for j in 1..s {
                g.push(GroupMember { kind: ArcKind::C(j as usize), arc: r - s, offset: -s, set: layout.c(r - s, j) });
            }
            groups.push(g);
        }
        let region = (1..k as i64).fold(layout.a(r), |acc, s| acc.union(layout.b(r - s)));
        Ok(GroupSystem { k, anchor: r, groups, region })
    }

    /// Total number of sets, `sum_s |G_s|`.
    pub fn total_members(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    /// `A_r ∪ B_{r-1} ∪ ... ∪ B_{r-t}`.
    pub fn region_upto(&self, t: usize) -> ElementSet {
        (1..=t).fold(self.groups[0][0].set, |acc, s| acc.union(self.groups[s - 1][1].set))
    }

    fn chosen(&self, h: &[u32], upto: usize) -> Vec<ElementSet> {
        self.groups[..upto]
            .iter()
            .zip(h)
            .flat_map(|(g, &bits)| g.iter().enumerate().filter(move |(i, _)| bits & (1 << i) != 0).map(|(_, m)| m.set))
            .collect()
    }
}

/// Exact cover of `region` by exactly `parts` of the `candidates`, if one exists.
pub fn exact_cover(candidates: &[ElementSet], region: ElementSet, parts: usize) -> Option<Vec<ElementSet>> {
    let usable: Vec<ElementSet> = candidates
        .iter()
        .copied()
        .filter(|c| !c.is_empty() && c.is_subset(region))
        .collect();
    let mut chosen = Vec::with_capacity(parts);
    if cover_dfs(&usable, region.mask(), parts, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn cover_dfs(cands: &[ElementSet], rest: u32, parts: usize, chosen: &mut Vec<ElementSet>) -> bool {
    if rest == 0 {
        return parts == 0;
    }
    if parts == 0 {
        return false;
    }
    let low = rest & rest.wrapping_neg();
    for &c in cands {
        if c.mask() & low != 0 && c.mask() & !rest == 0 {
            chosen.push(c);
            if cover_dfs(cands, rest & !c.mask(), parts - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeficiencyResult {
    pub t: usize,
    /// `sum_{s <= t} |G_s \ H_s|`.
    pub deficit: usize,
    /// `(s, member)` for every member of `G_s \ H_s`, `s <= t`.
    pub missing: Vec<(usize, GroupMember)>,
}

/// `h[s-1]` selects `H_s ⊆ G_s` bitwise, bit `i` meaning the `i`-th member of `G_s`.
///
/// Fails with the partition if `k` members of `H_1 ∪ ... ∪ H_{k-1}` partition
/// the region. Otherwise returns the smallest `t` for which
/// `A_r ∪ B_{r-1} ∪ ... ∪ B_{r-t}` has no exact cover by `t + 1` members of
/// `H_1 ∪ ... ∪ H_t`, and checks `deficit >= t`.
pub fn deficiency_t(gs: &GroupSystem, h: &[u32]) -> Result<DeficiencyResult> {
    let k = gs.k;
    if h.len() != k - 1 {
        return Err(Error::InvalidParameter(format!("expected {} subfamilies, got {}", k - 1, h.len())));
    }
    for (s, (&bits, g)) in h.iter().zip(&gs.groups).enumerate() {
        if bits >> g.len() != 0 {
            return Err(Error::InvalidParameter(format!("H_{} selects outside G_{}", s + 1, s + 1)));
        }
    }
    if let Some(witness) = exact_cover(&gs.chosen(h, k - 1), gs.region, k) {
        return Err(Error::HypothesisViolated {
            hypothesis: format!("no {k} members of the H_s partition the region"),
            witness,
        });
    }
    for t in 1..k {
        if exact_cover(&gs.chosen(h, t), gs.region_upto(t), t + 1).is_some() {
            continue;
        }
        let missing: Vec<(usize, GroupMember)> = gs.groups[..t]
            .iter()
            .zip(h)
            .enumerate()
            .flat_map(|(s, (g, &bits))| {
                g.iter().enumerate().filter(move |(i, _)| bits & (1 << i) == 0).map(move |(_, m)| (s + 1, *m))
            })
            .collect();
        let deficit = missing.len();
        if deficit < t {
            return Err(Error::Violation {
                claim: "group deficiency (sum_{s<=t} |G_s \\ H_s| >= t)".into(),
                detail: format!("anchor {} t={t} deficit={deficit} H={h:?}", gs.anchor),
            });
        }
        return Ok(DeficiencyResult { t, deficit, missing });
    }
    // unreachable when the hypothesis holds: t = k-1 is the whole region
    Err(Error::Violation {
        claim: "group deficiency".into(),
        detail: format!("no t in 1..{k} at anchor {} H={h:?}", gs.anchor),
    })
}

/// Outcome of running [`deficiency_t`] on every `H`-configuration.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ExhaustiveSummary {
    pub k: usize,
    pub configurations: u64,
    pub hypothesis_violations: u64,
    pub satisfied: u64,
    /// Number of configurations whose minimal `t` equals `index + 1`.
    pub t_histogram: Vec<u64>,
    pub counterexamples: Vec<String>,
}

/// Runs all `2^(sum |G_s|)` choices of `H_1, ..., H_{k-1}`.
pub fn deficiency_exhaustive(gs: &GroupSystem) -> ExhaustiveSummary {
    let k = gs.k;
    let widths: Vec<usize> = gs.groups.iter().map(Vec::len).collect();
    let total: usize = widths.iter().sum();
    let mut summary = ExhaustiveSummary { k, t_histogram: vec![0; k - 1], ..Default::default() };
    let mut h = vec![0u32; k - 1];
    for code in 0u64..(1u64 << total) {
        let mut shift = 0;
        for (slot, &w) in h.iter_mut().zip(&widths) {
            *slot = ((code >> shift) & ((1 << w) - 1)) as u32;
            shift += w;
        }
        summary.configurations += 1;
        match deficiency_t(gs, &h) {
            Ok(res) => {
                summary.satisfied += 1;
                summary.t_histogram[res.t - 1] += 1;
            }
            Err(Error::HypothesisViolated { .. }) => summary.hypothesis_violations += 1,
            Err(e) => summary.counterexamples.push(e.to_string()),
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::CyclicPerm;
    use crate::setcore::GroundSet;

    fn system(k: usize) -> GroupSystem {
        let (m, l) = (2, 1);
        let g = GroundSet::new(k * m - l).unwrap();
        let layout = ArcLayout::new(CyclicPerm::identity(g), m, l).unwrap();
        GroupSystem::new(&layout, k, 1).unwrap()
    }

    #[test]
    fn group_shapes() {
        for k in 3..=6 {
            let gs = system(k);
            let sizes: Vec<usize> = gs.groups.iter().map(Vec::len).collect();
            assert_eq!(sizes, (2..=k).collect::<Vec<_>>());
            assert_eq!(gs.region.len(), 2 * k - 1);
        }
        assert_eq!(system(3).total_members(), 5);
        assert_eq!(system(4).total_members(), 9);
        assert_eq!(system(5).total_members(), 14);
    }

    #[test]
    fn proper_first_group_gives_t_one() {
        let gs = system(3);
        for h1 in [0b00, 0b01, 0b10] {
            let res = deficiency_t(&gs, &[h1, 0b001]).unwrap();
            assert_eq!(res.t, 1);
            assert!(res.deficit >= 1);
        }
    }

    #[test]
    fn c_and_two_a_sets_partition_the_region() {
        let gs = system(3);
        assert!(matches!(deficiency_t(&gs, &[0b01, 0b111]), Err(Error::HypothesisViolated { .. })));
    }

    #[test]
    fn full_groups_violate_hypothesis() {
        let gs = system(3);
        match deficiency_t(&gs, &[0b11, 0b111]) {
            Err(Error::HypothesisViolated { witness, .. }) => {
                assert_eq!(witness.len(), 3);
                let union = witness.iter().fold(0, |a, s| a | s.mask());
                assert_eq!(union, gs.region.mask());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn only_a_in_second_group() {
        let gs = system(3);
        // H_1 = G_1, H_2 = {A_{r-1}}
        let res = deficiency_t(&gs, &[0b11, 0b001]).unwrap();
        assert_eq!(res.t, 2);
        assert_eq!(res.deficit, 2);
        let kinds: Vec<ArcKind> = res.missing.iter().map(|(_, m)| m.kind).collect();
        assert_eq!(kinds, vec![ArcKind::B, ArcKind::C(1)]);
    }

    #[test]
    fn exact_cover_counts_parts() {
        let g = GroundSet::new(4).unwrap();
        let s = |v: &[usize]| g.set_from_elements(v.iter().copied()).unwrap();
        let c = [s(&[1, 2]), s(&[3, 4]), s(&[1]), s(&[2])];
        assert!(exact_cover(&c, g.full(), 2).is_some());
        assert!(exact_cover(&c, g.full(), 3).is_some());
        assert!(exact_cover(&c, g.full(), 4).is_none());
    }
}
