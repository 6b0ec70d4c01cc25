//! The acceptance battery: one function per criterion, all driven by one seed.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use pfl_core::cyclic::{
    build_arc_circle, build_arcs3, circle_presence_count, circle_walk_unchecked, deficiency_exhaustive,
    expectation_check, expectation_table, injection_certificate_unchecked, ArcLayout, CyclicPerm, GroupSystem,
};
use pfl_core::extremal::{p_exact, EdgeConvention, SearchOptions, SearchResult, Uniqueness};
use pfl_core::inequalities::{
    cross_layer_report, cross_sum_bound_check, derive_combined, kleitman_tuple_audit, layer_ratio_sum,
    ratio_identity, three_layer_report, up_set_bound,
};
use pfl_core::predicates::{find_disjoint_tuple, partition_witness};
use pfl_core::random::{derive_seed, random_cross_partition_free, random_family, random_partition_free, rng_from_seed};
use pfl_core::{Family, GroundSet, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// The stated expectation cannot hold; the independent checks behind it
    /// still ran and agreed. Explained in `detail`.
    Deviation,
}

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub status: Status,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub target: Duration,
}

impl Criterion {
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Deviation => "DEVIATION",
        };
        format!(
            "[{tag}] {:>2}. {} ({:.2?} / target {:?}): {}",
            self.id, self.title, self.elapsed, self.target, self.detail
        )
    }
}

pub const IDS: std::ops::RangeInclusive<u8> = 1..=13;

type Check = Result<(Status, String), String>;

fn pass(detail: String) -> Check {
    Ok((Status::Pass, detail))
}

fn ensure(cond: bool, detail: String) -> Check {
    if cond {
        pass(detail)
    } else {
        Err(detail)
    }
}

fn timed(id: u8, title: &'static str, target_secs: u64, f: impl FnOnce() -> Check) -> Criterion {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let target = Duration::from_secs(target_secs);
    let (mut status, mut detail) = match outcome {
        Ok(r) => r,
        Err(d) => (Status::Fail, d),
    };
    if elapsed > target && status != Status::Fail {
        status = Status::Fail;
        detail = format!("over time target; {detail}");
    }
    Criterion { id, title, status, detail, elapsed, target }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ground(n: usize) -> GroundSet {
    GroundSet::new(n).expect("small ground set")
}

/// Runs one criterion by number.
pub fn criterion(id: u8, seed: u64) -> Criterion {
    let s = |stream: u64| derive_seed(seed, 1000 * id as u64 + stream);
    match id {
        1 => timed(1, "exact extremal value p(5,3) with uniqueness", 1, c1),
        2 => timed(2, "trivial case p(3,3)", 1, c2),
        3 => timed(3, "exact extremal value p(7,4)", 300, c3),
        4 => timed(4, "three-layer inequality tightness", 1, c4),
        5 => timed(5, "cross three-layer equality, k=4", 1, c5),
        6 => timed(6, "injection certificates", 60, || c6(s(0))),
        7 => timed(7, "averaging identity over cyclic orders", 120, || c7(s(0))),
        8 => timed(8, "group deficiency, exhaustive", 60, c8),
        9 => timed(9, "circle accounting", 120, || c9(s(0))),
        10 => timed(10, "combined inequality derivation", 5, c10),
        11 => timed(11, "binomial ratio identity", 1, c11),
        12 => timed(12, "cross sum bound", 30, || c12(s(0))),
        13 => timed(13, "profile tuple audit", 1, c13),
        _ => Criterion {
            id,
            title: "unknown",
            status: Status::Fail,
            detail: format!("no criterion {id}"),
            elapsed: Duration::ZERO,
            target: Duration::ZERO,
        },
    }
}

pub fn run_all(seed: u64) -> Vec<Criterion> {
    IDS.map(|id| criterion(id, seed)).collect()
}

fn unique_search(n: usize, k: usize, convention: EdgeConvention) -> Result<SearchResult, String> {
    p_exact(n, k, SearchOptions { prove_unique: true, convention, ..Default::default() }).map_err(err)
}

fn c1() -> Check {
    let r = unique_search(5, 3, EdgeConvention::WithEmptyBlock)?;
    let bound = up_set_bound(3, 2);
    let up = Family::up_set(ground(5), 2);
    ensure(
        r.proven
            && BigUint::from(r.p) == bound
            && r.unique == Uniqueness::Yes
            && r.optimal_families.len() == 1
            && r.optimal_families[0] == up,
        format!("p = {} (formula {bound}), unique = {:?}, optimum is the up-set: {}", r.p, r.unique, r.optimal_families.first() == Some(&up)),
    )
}

/// Brute force over all 2^8 families on [3], under both edge conventions.
fn p33_oracle(allow_empty: bool) -> (usize, Vec<Family>) {
    let g = ground(3);
    let mut best = 0;
    let mut optima = Vec::new();
    for code in 0u32..256 {
        let fam = Family::from_masks(g, (0..8u32).filter(|m| code >> m & 1 == 1)).expect("masks in ground");
        let probe = if allow_empty {
            fam.clone()
        } else {
            Family::from_masks(g, fam.sets().filter(|s| !s.is_empty()).map(|s| s.mask())).expect("masks in ground")
        };
        if partition_witness(&probe, 3).is_some() {
            continue;
        }
        if fam.len() > best {
            best = fam.len();
            optima.clear();
        }
        if fam.len() == best {
            optima.push(fam);
        }
    }
    (best, optima)
}

fn c2() -> Check {
    let mut parts = Vec::new();
    let mut agree = true;
    for (convention, allow) in [(EdgeConvention::WithEmptyBlock, true), (EdgeConvention::NonEmptyOnly, false)] {
        let (best, optima) = p33_oracle(allow);
        let r = unique_search(3, 3, convention)?;
        let same = r.proven
            && r.p as usize == best
            && r.optimal_families.len() == optima.len()
            && r.optimal_families.iter().all(|f| optima.contains(f));
        agree &= same;
        parts.push(format!(
            "{}: search p = {} with {} optima, brute force p = {best} with {} optima",
            if allow { "with empty block" } else { "nonempty blocks" },
            r.p,
            r.optimal_families.len(),
            optima.len()
        ));
    }
    if !agree {
        return Err(format!("search and brute force disagree; {}", parts.join("; ")));
    }
    let nonempty = Family::from_masks(ground(3), 1..8u32).expect("masks in ground");
    let expected_holds = partition_witness(&nonempty, 3).is_none();
    let r = unique_search(3, 3, EdgeConvention::WithEmptyBlock)?;
    if r.p == 7 && r.unique == Uniqueness::Yes && expected_holds {
        return pass(parts.join("; "));
    }
    Ok((
        Status::Deviation,
        format!(
            "expected p = 7 with the nonempty subsets as unique optimum, but {{1}},{{2}},{{3}} partition [3], \
             so that family is not 3-partition-free; {}",
            parts.join("; ")
        ),
    ))
}

fn c3() -> Check {
    let r = p_exact(7, 4, SearchOptions::default()).map_err(err)?;
    ensure(
        r.proven && BigUint::from(r.p) == up_set_bound(4, 2) && r.p == 120,
        format!("p = {}, proven = {}, {} nodes", r.p, r.proven, r.stats.nodes),
    )
}

fn c4() -> Check {
    let a = three_layer_report(&Family::layers(ground(5), &[2, 3]), 2, 1, true).map_err(err)?;
    let b = three_layer_report(&Family::layers(ground(8), &[3, 4]), 3, 1, true).map_err(err)?;
    let two = Rational::from_int(2);
    ensure(
        a.lhs == two && a.rhs == two && b.lhs == two && b.rhs == two,
        format!("n=5: lhs {} rhs {}; n=8: lhs {} rhs {}", a.lhs, a.rhs, b.lhs, b.rhs),
    )
}

fn c5() -> Check {
    let f = Family::layers(ground(7), &[2, 3]);
    let r = cross_layer_report(&[&f, &f, &f, &f], 2, 1, true).map_err(err)?;
    let twelve = Rational::from_int(12);
    ensure(r.lhs == twelve && r.rhs == twelve, format!("lhs {} rhs {}", r.lhs, r.rhs))
}

fn c6(seed: u64) -> Check {
    let mut total = 0usize;
    let mut details = Vec::new();
    for (stream, (n, m, l, perms)) in [(5usize, 2usize, 1usize, None), (8, 3, 1, Some(200usize))].into_iter().enumerate() {
        let g = ground(n);
        let stream_seed = derive_seed(seed, stream as u64);
        let orders: Vec<CyclicPerm> = match perms {
            None => CyclicPerm::all_rooted(g).collect(),
            Some(count) => {
                let mut rng = rng_from_seed(derive_seed(stream_seed, u64::MAX));
                (0..count).map(|_| CyclicPerm::random(g, &mut rng)).collect()
            }
        };
        let systems = orders.iter().map(|p| build_arcs3(p, m, l)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        let bound = 2 * systems[0].count();
        let outcomes: Vec<Result<usize, String>> = (0..1000u64)
            .into_par_iter()
            .map(|i| {
                let f = random_partition_free(g, 3, Some(&[m - l, m, m + l]), &mut rng_from_seed(derive_seed(stream_seed, i)));
                if let Some(w) = partition_witness(&f, 3) {
                    return Err(format!("generator produced a 3-partition {:?}", w.tuple));
                }
                let mut worst = 0;
                for arcs in &systems {
                    let cert = injection_certificate_unchecked(&f, arcs).map_err(err)?;
                    if !cert.validate() || cert.hits > cert.bound {
                        return Err(format!("n={n} family #{i}: invalid certificate {cert:?}"));
                    }
                    worst = worst.max(cert.hits);
                }
                Ok(worst)
            })
            .collect();
        let mut worst = 0;
        for o in outcomes {
            worst = worst.max(o?);
        }
        total += 1000 * systems.len();
        details.push(format!("n={n}: {} orders x 1000 families, max hits {worst} <= {bound}", systems.len()));
    }
    pass(format!("{total} certificates valid; {}", details.join("; ")))
}

fn c7(seed: u64) -> Check {
    let mut details = Vec::new();
    for (stream, n) in [5usize, 6].into_iter().enumerate() {
        let g = ground(n);
        let tables: Vec<Result<bool, String>> = (0..50u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_from_seed(derive_seed(seed, 100 * stream as u64 + i));
                let f = random_family(g, 0.5, &mut rng);
                let t = if n == 5 { expectation_check(&f, 3, 2, 1) } else { expectation_table(&f, 2, 1, 1) };
                t.map(|t| t.all_equal()).map_err(err)
            })
            .collect();
        let mut equal = 0;
        for t in tables {
            if t? {
                equal += 1;
            }
        }
        if equal != 50 {
            return Err(format!("n={n}: only {equal}/50 families matched the formula"));
        }
        let orders = if n == 5 { "24 orders" } else { "120 orders x 2 rotations, layout m=2 l=1" };
        details.push(format!("n={n}: 50/50 exact ({orders})"));
    }
    pass(details.join("; "))
}

fn c8() -> Check {
    let mut details = Vec::new();
    for (k, configs) in [(3usize, 32u64), (4, 512), (5, 16384)] {
        let layout = ArcLayout::new(CyclicPerm::identity(ground(2 * k - 1)), 2, 1).map_err(err)?;
        let gs = GroupSystem::new(&layout, k, 1).map_err(err)?;
        let s = deficiency_exhaustive(&gs);
        if s.configurations != configs || !s.counterexamples.is_empty() {
            return Err(format!("k={k}: {} configurations, counterexamples {:?}", s.configurations, s.counterexamples));
        }
        details.push(format!(
            "k={k}: {} configs, {} partition the region, t histogram {:?}",
            s.configurations, s.hypothesis_violations, s.t_histogram
        ));
    }
    pass(details.join("; "))
}

fn c9(seed: u64) -> Check {
    let mut details = Vec::new();
    for (stream, (k, m, l)) in [(3usize, 2usize, 1usize), (4, 2, 1)].into_iter().enumerate() {
        let g = ground(k * m - l);
        let stream_seed = derive_seed(seed, stream as u64);
        let mut prng = rng_from_seed(derive_seed(stream_seed, u64::MAX));
        let circles = (0..20)
            .map(|_| build_arc_circle(&CyclicPerm::random(g, &mut prng), k, m, l))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let outcomes: Vec<Result<(usize, usize), String>> = (0..500u64)
            .into_par_iter()
            .map(|i| {
                let fams = random_cross_partition_free(g, k, &[m - l, m, m + l], &mut rng_from_seed(derive_seed(stream_seed, i)));
                let refs: Vec<&Family> = fams.iter().collect();
                if let Some(w) = find_disjoint_tuple(&refs, true).map_err(err)? {
                    return Err(format!("generator produced a cross partition {:?}", w.tuple));
                }
                let (mut present, mut rounds) = (0, 0);
                for c in &circles {
                    let pc = circle_presence_count(&refs, c).map_err(err)?;
                    if pc.present > pc.bound {
                        return Err(format!("tuple #{i}: present {} > {}", pc.present, pc.bound));
                    }
                    let w = circle_walk_unchecked(&refs, c, 1).map_err(err)?;
                    if !w.certifies() {
                        return Err(format!("tuple #{i}: walk does not certify: {w:?}"));
                    }
                    present = present.max(pc.present);
                    rounds = rounds.max(w.rounds);
                }
                Ok((present, rounds))
            })
            .collect();
        let (mut present, mut rounds) = (0, 0);
        for o in outcomes {
            let (p, r) = o?;
            present = present.max(p);
            rounds = rounds.max(r);
        }
        let c = &circles[0];
        details.push(format!(
            "(k,m,l)=({k},{m},{l}): 500 tuples x 20 orders, circle {} = {}x{}, max present {present} <= {}, max rounds {rounds}",
            c.len(),
            c.b(),
            c.nbar(),
            (k - 1) * c.len()
        ));
    }
    pass(details.join("; "))
}

fn c10() -> Check {
    let mut count = 0;
    for k in 3..=6 {
        for m in 2..=6 {
            let c = derive_combined(k, m).map_err(err)?;
            if c.implied_bound != up_set_bound(k, m) {
                return Err(format!("k={k} m={m}: implied {} vs {}", c.implied_bound, up_set_bound(k, m)));
            }
            count += 1;
        }
    }
    let named: Vec<String> = [(3, 2), (4, 2), (3, 3)]
        .iter()
        .map(|&(k, m)| derive_combined(k, m).map(|c| c.implied_bound.to_string()).map_err(err))
        .collect::<Result<_, _>>()?;
    ensure(named == ["26", "120", "219"], format!("{count} (k,m) pairs certified; bounds {}", named.join(", ")))
}

fn c11() -> Check {
    let mut count = 0;
    for k in 3..=6 {
        for m in 2..=8 {
            for j in 1..=m {
                ratio_identity(k, m, j).map_err(err)?;
                count += 1;
            }
        }
    }
    pass(format!("{count} (k,m,j) triples exact"))
}

fn c12(seed: u64) -> Check {
    let f = Family::up_set(ground(5), 2);
    let eq = cross_sum_bound_check(&[&f, &f, &f], true).map_err(err)?;
    if eq.lhs != Rational::from_int(78) || eq.rhs != Rational::from_int(78) {
        return Err(format!("equality case: lhs {} rhs {}", eq.lhs, eq.rhs));
    }
    let g = ground(5);
    let layers: Vec<usize> = (0..=5).collect();
    let reports: Vec<Result<Rational, String>> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let fams = random_cross_partition_free(g, 3, &layers, &mut rng_from_seed(derive_seed(seed, i)));
            let refs: Vec<&Family> = fams.iter().collect();
            let r = cross_sum_bound_check(&refs, true).map_err(err)?;
            if r.satisfied {
                Ok(r.lhs)
            } else {
                Err(format!("triple #{i}: {} > {}", r.lhs, r.rhs))
            }
        })
        .collect();
    let mut max = Rational::zero();
    for r in reports {
        max = max.max(r?);
    }
    pass(format!("equality 78 = 3 x 26; 200 random triples, largest sum {max}"))
}

fn c13() -> Check {
    let f = Family::up_set(ground(5), 2);
    let jvec = [1, 2, 2];
    let a = kleitman_tuple_audit(&f, &jvec).map_err(err)?;
    let lhs = layer_ratio_sum(&f.profile(), &jvec).map_err(err)?;
    ensure(
        a.max_present <= 2 && a.average == lhs,
        format!("{} ordered partitions, max present {}, average {} = {}", a.tuples, a.max_present, a.average, lhs),
    )
}
