use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use super::instance::{EdgeConvention, HittingInstance};
use crate::predicates::partition_witness;
use crate::setcore::{canonical_cmp, Family};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Uniqueness {
    Yes,
    No,
    NotDetermined,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub greedy_size: usize,
    pub completed: bool,
    /// Wall time; left out of serialized reports so they stay reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Minimum hitting sets of an instance.
#[derive(Clone, Debug, Serialize)]
pub struct HittingResult {
    /// Smallest size found; proven minimal when `stats.completed`.
    pub size: usize,
    /// Hitters of that size as vertex masks in canonical order; all of them
    /// when enumeration was requested and the search completed.
    pub hitters: Vec<Vec<u32>>,
    pub stats: SearchStats,
}

struct Solver<'a> {
    edges: &'a [Vec<u32>],
    incidence: Vec<Vec<u32>>,
    hit: Vec<u32>,
    excluded: Vec<bool>,
    chosen: Vec<u32>,
    best: usize,
    optima: Vec<Vec<u32>>,
    enumerate_all: bool,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
    // scratch for the packing bound
    mark: Vec<u64>,
    stamp: u64,
}

impl Solver<'_> {
    fn choose(&mut self, v: u32) {
        self.chosen.push(v);
        for &e in &self.incidence[v as usize] {
            self.hit[e as usize] += 1;
        }
    }

    fn unchoose(&mut self) {
        let v = self.chosen.pop().expect("chosen vertex");
        for &e in &self.incidence[v as usize] {
            self.hit[e as usize] -= 1;
        }
    }

    /// Returns (lower bound on extra vertices, edge to branch on); `None` when infeasible.
    fn bound(&mut self) -> Option<(usize, Option<usize>)> {
        self.stamp += 1;
        let stamp = self.stamp;
        let mut packed = 0;
        let mut branch: Option<(usize, usize)> = None;
        for (i, e) in self.edges.iter().enumerate() {
            if self.hit[i] != 0 {
                continue;
            }
            let avail = e.iter().filter(|&&v| !self.excluded[v as usize]).count();
            if avail == 0 {
                return None;
            }
            if branch.is_none_or(|(_, a)| avail < a) {
                branch = Some((i, avail));
            }
            // greedy packing of pairwise vertex-disjoint uncovered edges
            if e.iter().all(|&v| self.excluded[v as usize] || self.mark[v as usize] != stamp) {
                packed += 1;
                for &v in e {
                    self.mark[v as usize] = stamp;
                }
            }
        }
        Some((packed, branch.map(|(i, _)| i)))
    }

    fn record(&mut self) {
        let size = self.chosen.len();
        if size < self.best || (self.enumerate_all && size == self.best) {
            if size < self.best {
                self.optima.clear();
                self.best = size;
            }
            let mut h = self.chosen.clone();
            h.sort_by(|a, b| canonical_cmp(*a, *b));
            self.optima.push(h);
        }
    }

    fn dfs(&mut self) {
        if self.timed_out {
            return;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
            return;
        }
        let Some((lb, branch)) = self.bound() else { return };
        let Some(edge) = branch else {
            self.record();
            return;
        };
        let floor = self.chosen.len() + lb;
        if floor > self.best || (!self.enumerate_all && floor >= self.best) {
            return;
        }
        // branch i takes block i and excludes blocks 0..i
        let mut newly_excluded = Vec::new();
        for &v in &self.edges[edge] {
            if self.excluded[v as usize] {
                continue;
            }
            self.choose(v);
            self.dfs();
            self.unchoose();
            self.excluded[v as usize] = true;
            newly_excluded.push(v);
            if self.timed_out {
                break;
            }
        }
        for v in newly_excluded {
            self.excluded[v as usize] = false;
        }
    }
}

fn vertex_edges(inst: &HittingInstance) -> Vec<Vec<u32>> {
    inst.edges.iter().map(|e| e.iter().map(|s| s.mask()).collect()).collect()
}

fn incidence(n_vertices: usize, edges: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut inc = vec![Vec::new(); n_vertices];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            inc[v as usize].push(i as u32);
        }
    }
    inc
}

/// Repeatedly takes the vertex on most unhit edges; `tie` breaks ties among
/// the candidates, which arrive in canonical order.
fn greedy_with(
    n_vertices: usize,
    edges: &[Vec<u32>],
    inc: &[Vec<u32>],
    mut tie: impl FnMut(&[u32]) -> u32,
) -> Vec<u32> {
    let mut order: Vec<u32> = (0..n_vertices as u32).collect();
    order.sort_by(|a, b| canonical_cmp(*a, *b));
    let mut hit = vec![false; edges.len()];
    let mut left = edges.len();
    let mut picked = Vec::new();
    while left > 0 {
        let gain = |v: u32| inc[v as usize].iter().filter(|&&e| !hit[e as usize]).count();
        let best = order.iter().map(|&v| gain(v)).max().unwrap_or(0);
        let ties: Vec<u32> = order.iter().copied().filter(|&v| gain(v) == best).collect();
        let v = tie(&ties);
        picked.push(v);
        for &e in &inc[v as usize] {
            if !hit[e as usize] {
                hit[e as usize] = true;
                left -= 1;
            }
        }
    }
    picked
}

/// Greedy hitting set with ties broken by canonical order.
pub fn greedy_hitting_set(inst: &HittingInstance) -> Vec<u32> {
    let edges = vertex_edges(inst);
    let inc = incidence(inst.ground.power_set_len(), &edges);
    greedy_with(inst.ground.power_set_len(), &edges, &inc, |t| t[0])
}

/// Greedy hitting set with uniformly random tie breaking.
pub fn randomized_greedy<R: Rng>(inst: &HittingInstance, rng: &mut R) -> Vec<u32> {
    let edges = vertex_edges(inst);
    let inc = incidence(inst.ground.power_set_len(), &edges);
    greedy_with(inst.ground.power_set_len(), &edges, &inc, |t| *t.choose(rng).expect("nonempty ties"))
}

/// Exact minimum hitting set by branch and bound. With `enumerate_all` every
/// optimum is collected; `budget` bounds wall time, after which the result is
/// flagged incomplete.
pub fn min_hitting_set(inst: &HittingInstance, enumerate_all: bool, budget: Option<Duration>) -> HittingResult {
    let start = Instant::now();
    let nv = inst.ground.power_set_len();
    let edges = vertex_edges(inst);
    let inc = incidence(nv, &edges);
    let greedy = greedy_with(nv, &edges, &inc, |t| t[0]);
    let mut solver = Solver {
        edges: &edges,
        incidence: inc,
        hit: vec![0; edges.len()],
        excluded: vec![false; nv],
        chosen: Vec::new(),
        best: greedy.len(),
        optima: Vec::new(),
        enumerate_all,
        nodes: 0,
        deadline: budget.map(|b| start + b),
        timed_out: false,
        mark: vec![0; nv],
        stamp: 0,
    };
    if !enumerate_all {
        let mut g = greedy.clone();
        g.sort_by(|a, b| canonical_cmp(*a, *b));
        solver.optima.push(g);
    }
    solver.dfs();
    if solver.optima.is_empty() {
        // enumeration stopped before reaching the incumbent's size
        let mut g = greedy.clone();
        g.sort_by(|a, b| canonical_cmp(*a, *b));
        solver.optima.push(g);
    }
    let mut hitters = solver.optima;
    hitters.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| canonical_cmp(*x, *y))
            .find(|o| o.is_ne())
            .unwrap_or(a.len().cmp(&b.len()))
    });
    HittingResult {
        size: solver.best,
        hitters,
        stats: SearchStats {
            nodes: solver.nodes,
            greedy_size: greedy.len(),
            completed: !solver.timed_out,
            elapsed: start.elapsed(),
        },
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub prove_unique: bool,
    pub budget: Option<Duration>,
    pub convention: EdgeConvention,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prove_unique: false,
            budget: Some(Duration::from_secs(300)),
            convention: EdgeConvention::WithEmptyBlock,
        }
    }
}

/// Largest `k`-partition-free family on `[n]`.
#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub k: usize,
    pub convention: EdgeConvention,
    /// Largest family size found; exact when `proven`.
    pub p: u64,
    pub proven: bool,
    pub optimal_families: Vec<Family>,
    pub unique: Uniqueness,
    pub edges: usize,
    pub stats: SearchStats,
}

/// `p(n, k) = 2^n - (minimum hitting set)`, with every reported optimum
/// re-verified against the predicates.
pub fn p_exact(n: usize, k: usize, opts: SearchOptions) -> Result<SearchResult> {
    let inst = HittingInstance::enumerate(n, k, opts.convention)?;
    let res = min_hitting_set(&inst, opts.prove_unique, opts.budget);
    let ground = inst.ground;
    let mut families = Vec::with_capacity(res.hitters.len());
    for h in &res.hitters {
        let hitter = Family::from_masks(ground, h.iter().copied())?;
        let fam = hitter.complement();
        verify_optimum(&inst, &fam, opts.convention)?;
        families.push(fam);
    }
    let proven = res.stats.completed;
    let unique = match (opts.prove_unique, proven) {
        (true, true) if families.len() == 1 => Uniqueness::Yes,
        (true, true) => Uniqueness::No,
        _ => Uniqueness::NotDetermined,
    };
    Ok(SearchResult {
        n,
        k,
        convention: opts.convention,
        p: ground.power_set_len() as u64 - res.size as u64,
        proven,
        optimal_families: families,
        unique,
        edges: inst.edges.len(),
        stats: res.stats,
    })
}

fn verify_optimum(inst: &HittingInstance, fam: &Family, convention: EdgeConvention) -> Result<()> {
    if let Some(edge) = inst.first_unhit(&fam.complement()) {
        return Err(Error::Violation { claim: "optimum avoids every edge".into(), detail: format!("{edge:?}") });
    }
    let checked = match convention {
        EdgeConvention::WithEmptyBlock => partition_witness(fam, inst.k),
        EdgeConvention::NonEmptyOnly => {
            let nonempty = Family::from_masks(fam.ground(), fam.sets().filter(|s| !s.is_empty()).map(|s| s.mask()))?;
            partition_witness(&nonempty, inst.k)
        }
    };
    if let Some(w) = checked {
        return Err(Error::Violation { claim: "optimum is partition-free".into(), detail: format!("{:?}", w.tuple) });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng_from_seed;
    use crate::setcore::{ElementSet, GroundSet};

    fn tiny(edges: Vec<Vec<u32>>) -> HittingInstance {
        let g = GroundSet::new(3).unwrap();
        let edges = edges
            .into_iter()
            .map(|e| e.into_iter().map(|m| g.set_from_mask(m).unwrap()).collect::<Vec<ElementSet>>())
            .collect();
        HittingInstance { ground: g, k: 1, edges }
    }

    #[test]
    fn trivial_instances() {
        assert_eq!(min_hitting_set(&tiny(vec![vec![1], vec![2]]), true, None).size, 2);
        let one = min_hitting_set(&tiny(vec![vec![1, 2, 4]]), true, None);
        assert_eq!(one.size, 1);
        assert_eq!(one.hitters.len(), 3);
        assert_eq!(min_hitting_set(&tiny(vec![]), true, None).size, 0);
    }

    #[test]
    fn five_three() {
        let inst = HittingInstance::enumerate(5, 3, EdgeConvention::WithEmptyBlock).unwrap();
        let res = min_hitting_set(&inst, true, None);
        assert_eq!(res.size, 6);
        assert!(res.stats.completed);
        assert_eq!(res.hitters.len(), 1);
    }

    #[test]
    fn greedy_never_beats_search() {
        let inst = HittingInstance::enumerate(5, 3, EdgeConvention::WithEmptyBlock).unwrap();
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            assert!(randomized_greedy(&inst, &mut rng).len() >= 6);
        }
        assert!(greedy_hitting_set(&inst).len() >= 6);
    }

    #[test]
    fn p_five_three_unique() {
        let r = p_exact(5, 3, SearchOptions { prove_unique: true, ..Default::default() }).unwrap();
        assert_eq!(r.p, 26);
        assert_eq!(r.unique, Uniqueness::Yes);
        assert_eq!(r.optimal_families[0], Family::up_set(GroundSet::new(5).unwrap(), 2));
    }

    #[test]
    fn p_three_three() {
        let with = p_exact(3, 3, SearchOptions { prove_unique: true, ..Default::default() }).unwrap();
        assert_eq!((with.p, with.unique, with.optimal_families.len()), (6, Uniqueness::No, 3));
        let without = p_exact(
            3,
            3,
            SearchOptions { prove_unique: true, convention: EdgeConvention::NonEmptyOnly, ..Default::default() },
        )
        .unwrap();
        assert_eq!((without.p, without.unique, without.optimal_families.len()), (7, Uniqueness::No, 3));
    }

    #[test]
    fn zero_budget_is_not_determined() {
        let r = p_exact(9, 3, SearchOptions { prove_unique: true, budget: Some(Duration::ZERO), ..Default::default() });
        let r = r.unwrap();
        assert!(!r.proven);
        assert_eq!(r.unique, Uniqueness::NotDetermined);
        assert!(r.stats.nodes >= 1024);
    }
}
