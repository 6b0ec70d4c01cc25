//! Command-line front end for `pfl_core`.

pub mod suite;

use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use pfl_core::cyclic::{
    build_arc_circle, build_arcs3, circle_presence_count, circle_walk_certificate, circle_walk_unchecked,
    deficiency_exhaustive, deficiency_t, expectation_check, expectation_estimate, expectation_table,
    injection_certificate, injection_certificate_unchecked, ArcLayout, CyclicPerm, GroupSystem,
};
use pfl_core::extremal::{p_exact, EdgeConvention, HittingInstance, SearchOptions, Uniqueness};
use pfl_core::inequalities::{
    cross_layer_report, cross_sum_bound_check, derive_combined_with, kleitman_tuple_audit, profile_report,
    three_layer_report, up_set_bound, DeficitVector,
};
use pfl_core::predicates::{disjoint_witness, find_disjoint_tuple, partition_witness};
use pfl_core::random::rng_from_seed;
use pfl_core::{parse_family, Family, GroundSet};

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pfl", version, about = "Families without k pairwise disjoint members: checks, bounds, exact search")]
pub struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true, env = "PFL_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Time budget for exact searches.
    #[arg(long, global = true, default_value_t = 300)]
    pub budget_seconds: u64,
    /// Emit JSON on stdout instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Whether a k-partition may use the empty set as one block.
    #[arg(long, global = true, value_enum, default_value_t = Switch::On)]
    pub allow_empty_block_convention: Switch,
    /// Skip the partition-free / dependence precondition checks.
    #[arg(long, global = true)]
    pub no_hypothesis_check: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Is a family k-partition-free (or k-dependent)? Several families: the cross version.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(short, long, default_value_t = 3)]
        k: usize,
        /// Test for k pairwise disjoint members instead of k-partitions.
        #[arg(long)]
        dependent: bool,
    },
    /// Evaluate one of the layer inequalities on a family.
    Ineq {
        #[arg(long, value_enum)]
        eq: Ineq,
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        m: Option<usize>,
        #[arg(short, long, default_value_t = 1)]
        l: usize,
        /// Layer sizes j_1,...,j_k summing to n (profile inequality).
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Also enumerate every ordered partition with these block sizes.
        #[arg(long)]
        audit: bool,
    },
    /// Cyclic-order machinery.
    Cyclic {
        #[command(subcommand)]
        cmd: CyclicCmd,
    },
    /// Derive the combined inequality for (k, m) and the bound it implies.
    Derive {
        #[arg(short, long)]
        k: usize,
        #[arg(short, long)]
        m: usize,
        /// Use the alternative source inequality to show it gives a weaker result.
        #[arg(long)]
        alternative: bool,
        /// Evaluate the derived inequality on this family.
        #[arg(long)]
        family: Option<PathBuf>,
    },
    /// Exact maximum size of a k-partition-free family on [n].
    Pmax {
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        k: usize,
        #[arg(long)]
        prove_unique: bool,
    },
    /// Write the k-partition hypergraph on [n], or validate a hitting set against one.
    ExportHitting {
        #[arg(short, long, required_unless_present = "instance")]
        n: Option<usize>,
        #[arg(short, long, required_unless_present = "instance")]
        k: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, requires = "hitter")]
        instance: Option<PathBuf>,
        #[arg(long)]
        hitter: Option<PathBuf>,
    },
    /// Run the built-in acceptance battery.
    Suite {
        /// Only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    /// A family file (JSON or text).
    #[arg(long, conflicts_with = "families")]
    pub family: Option<PathBuf>,
    /// Several family files, one per member of a cross tuple.
    #[arg(long, num_args = 1..)]
    pub families: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Ineq {
    #[value(name = "1", alias = "profile")]
    Profile,
    #[value(name = "2", alias = "three-layer")]
    ThreeLayer,
    #[value(name = "3", alias = "cross")]
    Cross,
    #[value(name = "4.6", alias = "cross-sum")]
    CrossSum,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    /// Cyclic order as a comma-separated permutation of 1..n (default: identity).
    #[arg(long, value_delimiter = ',')]
    pub order: Vec<usize>,
    /// Use a random order drawn from the seed.
    #[arg(long, conflicts_with = "order")]
    pub random_order: bool,
}

#[derive(Debug, Subcommand)]
pub enum CyclicCmd {
    /// List the arcs of a layout.
    Arcs {
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        m: usize,
        #[arg(short, long, default_value_t = 1)]
        l: usize,
        /// Also build the k-circle (requires n = km - l).
        #[arg(short, long)]
        k: Option<usize>,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Injection certificate for a 3-partition-free family on layers m-l, m, m+l.
    Injection {
        #[arg(long)]
        family: PathBuf,
        #[arg(short, long)]
        m: usize,
        #[arg(short, long, default_value_t = 1)]
        l: usize,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Group deficiency: one choice vector, or all of them.
    Deficiency {
        #[arg(short, long)]
        k: usize,
        #[arg(short, long, default_value_t = 2)]
        m: usize,
        #[arg(short, long, default_value_t = 1)]
        l: usize,
        /// Anchor arc.
        #[arg(long, default_value_t = 1)]
        anchor: i64,
        /// Per group, a bitmask of chosen members; omitted means exhaustive.
        #[arg(long, value_delimiter = ',')]
        choice: Vec<u32>,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Presence count and walk certificate around the circle for a cross tuple.
    Walk {
        #[arg(long, num_args = 1.., required = true)]
        families: Vec<PathBuf>,
        #[arg(short, long)]
        m: usize,
        #[arg(short, long, default_value_t = 1)]
        l: usize,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Averages of the arc indicators over cyclic orders versus the closed forms.
    Expect {
        #[arg(long)]
        family: PathBuf,
        /// With k, n must equal km - l.
        #[arg(short, long)]
        k: Option<usize>,
        #[arg(short, long)]
        m: usize,
        #[arg(short, long, default_value_t = 1)]
        l: usize,
        /// Number of C shifts without k.
        #[arg(long, default_value_t = 1)]
        shifts: usize,
        /// Sample this many random orders instead of all of them.
        #[arg(long)]
        samples: Option<u64>,
    },
}

/// What a command produced: exit code plus a JSON value and a text rendering.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub json: Value,
    pub text: String,
}

impl Outcome {
    fn new(code: i32, json: Value, text: impl Into<String>) -> Self {
        Outcome { code, json, text: text.into() }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn read_family(path: &Path) -> anyhow::Result<Family> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_family(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_families(paths: &[PathBuf]) -> anyhow::Result<Vec<Family>> {
    paths.iter().map(|p| read_family(p)).collect()
}

impl Input {
    fn load(&self) -> anyhow::Result<Vec<Family>> {
        match &self.family {
            Some(p) => Ok(vec![read_family(p)?]),
            None if self.families.is_empty() => bail!(pfl_core::Error::InvalidParameter(
                "give --family or --families".into()
            )),
            None => read_families(&self.families),
        }
    }
}

impl OrderArgs {
    fn perm(&self, ground: GroundSet, seed: u64) -> anyhow::Result<CyclicPerm> {
        if self.random_order {
            Ok(CyclicPerm::random(ground, &mut rng_from_seed(seed)))
        } else if self.order.is_empty() {
            Ok(CyclicPerm::identity(ground))
        } else {
            Ok(CyclicPerm::from_order(ground, &self.order)?)
        }
    }
}

fn ground(n: usize) -> anyhow::Result<GroundSet> {
    Ok(GroundSet::new(n)?)
}

fn refs(fams: &[Family]) -> Vec<&Family> {
    fams.iter().collect()
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let check = !cli.no_hypothesis_check;
    let convention = match cli.allow_empty_block_convention {
        Switch::On => EdgeConvention::WithEmptyBlock,
        Switch::Off => EdgeConvention::NonEmptyOnly,
    };
    match &cli.command {
        Command::Check { input, k, dependent } => {
            let fams = input.load()?;
            let witness = if fams.len() == 1 {
                if *dependent {
                    disjoint_witness(&fams[0], *k)
                } else {
                    partition_witness(&fams[0], *k)
                }
            } else {
                find_disjoint_tuple(&refs(&fams), !dependent)?
            };
            let what = match (fams.len() == 1, dependent) {
                (true, false) => format!("{k}-partition-free"),
                (true, true) => format!("free of {k} pairwise disjoint members"),
                (false, false) => "cross-partition-free".to_string(),
                (false, true) => "cross-dependent".to_string(),
            };
            let text = match &witness {
                None => format!("{what}: yes"),
                Some(w) => {
                    let sets: Vec<String> = w.tuple.iter().map(|s| s.to_string()).collect();
                    format!("{what}: no; witness {}", sets.join(" | "))
                }
            };
            Ok(Outcome::new(
                verdict(witness.is_none()),
                json!({ "property": what, "holds": witness.is_none(), "witness": witness }),
                text,
            ))
        }
        Command::Ineq { eq, input, m, l, sizes, audit } => {
            let fams = input.load()?;
            let need_m = || m.ok_or_else(|| pfl_core::Error::InvalidParameter("-m is required".into()));
            let mut extra = Value::Null;
            let report = match eq {
                Ineq::Profile => {
                    if fams.len() != 1 {
                        bail!(pfl_core::Error::InvalidParameter("the profile inequality takes one family".into()));
                    }
                    if *audit {
                        let a = kleitman_tuple_audit(&fams[0], sizes)?;
                        extra = to_json(&a);
                    }
                    profile_report(&fams[0], sizes, check)?
                }
                Ineq::ThreeLayer => {
                    if fams.len() != 1 {
                        bail!(pfl_core::Error::InvalidParameter("the three-layer inequality takes one family".into()));
                    }
                    three_layer_report(&fams[0], need_m()?, *l, check)?
                }
                Ineq::Cross => cross_layer_report(&refs(&fams), need_m()?, *l, check)?,
                Ineq::CrossSum => cross_sum_bound_check(&refs(&fams), check)?,
            };
            let text = format!(
                "lhs = {}  rhs = {}  slack = {}  {}",
                report.lhs,
                report.rhs,
                report.slack,
                if report.satisfied { "holds" } else { "VIOLATED" }
            );
            let mut out = json!({ "inequality": format!("{eq:?}"), "report": report });
            if !extra.is_null() {
                out["audit"] = extra;
            }
            if !report.satisfied {
                out["counterexample"] = json!(fams);
            }
            Ok(Outcome::new(verdict(report.satisfied), out, text))
        }
        Command::Cyclic { cmd } => run_cyclic(cmd, cli.seed, check),
        Command::Derive { k, m, alternative, family } => {
            let c = derive_combined_with(*k, *m, *alternative)?;
            let coeffs: Vec<String> = c.coeffs.iter().enumerate().map(|(j, v)| format!("{v}·y({j})")).collect();
            let mut text = format!(
                "n = {}: {} >= {}  =>  |F| <= {}",
                c.n,
                coeffs.join(" + "),
                c.rhs,
                c.implied_bound
            );
            if let Some(alt) = &c.alternative {
                text.push_str(&format!(
                    "\nalternative ({}): coefficient of y({m}) = {}{}",
                    alt.source.label,
                    alt.coeff_m,
                    if alt.exceeds_one { " > 1, no bound follows" } else { "" }
                ));
            }
            let mut out = json!({ "derivation": c });
            let mut code = EXIT_OK;
            if let Some(p) = family {
                let f = read_family(p)?;
                if f.ground().n() != c.n {
                    bail!(pfl_core::Error::MismatchedGround { expected: c.n, found: f.ground().n() });
                }
                if check {
                    if let Some(w) = partition_witness(&f, *k) {
                        bail!(pfl_core::Error::HypothesisViolated {
                            hypothesis: format!("{k}-partition-free"),
                            witness: w.tuple
                        });
                    }
                }
                let r = c.evaluate(&DeficitVector::from_profile(&f.profile()))?;
                text.push_str(&format!("\non family: {} <= {}  {}", r.lhs, r.rhs, if r.satisfied { "holds" } else { "VIOLATED" }));
                code = verdict(r.satisfied);
                out["evaluation"] = to_json(&r);
                if !r.satisfied {
                    out["counterexample"] = to_json(&f);
                }
            }
            Ok(Outcome::new(code, out, text))
        }
        Command::Pmax { n, k, prove_unique } => {
            let opts = SearchOptions {
                prove_unique: *prove_unique,
                budget: Some(Duration::from_secs(cli.budget_seconds)),
                convention,
            };
            let r = p_exact(*n, *k, opts)?;
            let formula = (convention == EdgeConvention::WithEmptyBlock && (n + 1) % k == 0 && (n + 1) / k >= 2)
                .then(|| up_set_bound(*k, (n + 1) / k));
            let mut code = EXIT_OK;
            if !r.proven || (*prove_unique && r.unique == Uniqueness::NotDetermined) {
                code = EXIT_BUDGET;
            } else if let Some(b) = &formula {
                if BigUint::from(r.p) != *b {
                    code = EXIT_VIOLATION;
                }
            }
            let mut text = format!(
                "p({n},{k}) = {}{}  [{} nodes]",
                r.p,
                if r.proven { "" } else { " (not proven: budget exhausted)" },
                r.stats.nodes
            );
            if let Some(b) = &formula {
                text.push_str(&format!("\nformula: {b}"));
            }
            if *prove_unique {
                text.push_str(&format!("\nunique: {:?} ({} optimal families)", r.unique, r.optimal_families.len()));
            }
            let mut out = to_json(&r);
            out["formula"] = json!(formula.map(|b| b.to_string()));
            Ok(Outcome::new(code, out, text))
        }
        Command::ExportHitting { n, k, output, instance, hitter } => {
            if let (Some(inst), Some(hit)) = (instance, hitter) {
                let text = std::fs::read_to_string(inst).with_context(|| format!("reading {}", inst.display()))?;
                let inst = HittingInstance::from_text(&text)?;
                let h = read_family(hit)?;
                let ok = inst.validate_hitter(&h)?;
                let unhit = inst.first_unhit(&h).map(|e| e.to_vec());
                let text = if ok { "valid hitting set".to_string() } else { "not a hitting set".to_string() };
                return Ok(Outcome::new(verdict(ok), json!({ "valid": ok, "unhit_edge": unhit }), text));
            }
            let (n, k) = (n.expect("required by clap"), k.expect("required by clap"));
            let inst = HittingInstance::enumerate(n, k, convention)?;
            let body = inst.to_text();
            let summary = json!({ "n": n, "k": k, "edges": inst.edges.len(), "convention": convention });
            match output {
                Some(p) => {
                    std::fs::write(p, &body).with_context(|| format!("writing {}", p.display()))?;
                    Ok(Outcome::new(EXIT_OK, summary, format!("{} edges written to {}", inst.edges.len(), p.display())))
                }
                None => Ok(Outcome::new(EXIT_OK, summary, body.trim_end().to_string())),
            }
        }
        Command::Suite { only } => {
            let ids: Vec<u8> = if only.is_empty() { suite::IDS.collect() } else { only.clone() };
            let results: Vec<suite::Criterion> = ids.iter().map(|&id| suite::criterion(id, cli.seed)).collect();
            let failed = results.iter().any(|c| c.status == suite::Status::Fail);
            let text = results.iter().map(suite::Criterion::line).collect::<Vec<_>>().join("\n");
            Ok(Outcome::new(verdict(!failed), to_json(&results), text))
        }
    }
}

fn run_cyclic(cmd: &CyclicCmd, seed: u64, check: bool) -> anyhow::Result<Outcome> {
    match cmd {
        CyclicCmd::Arcs { n, m, l, k, order } => {
            let perm = order.perm(ground(*n)?, seed)?;
            let layout = ArcLayout::new(perm.clone(), *m, *l)?;
            let nbar = layout.nbar() as i64;
            let mut lines = vec![format!("order {:?}, n̄ = {nbar}", perm.order())];
            let mut arcs = Vec::new();
            for r in 1..=nbar {
                let (a, b, d) = (layout.a(r), layout.b(r), layout.d(r));
                let c: Vec<_> = (1..=*l as i64).map(|j| layout.c(r, j)).collect();
                lines.push(format!("r={r}: A={a} B={b} D={d}"));
                arcs.push(json!({ "r": r, "a": a, "b": b, "d": d, "c": c }));
            }
            let mut out = json!({ "order": perm.order(), "m": m, "l": l, "nbar": nbar, "arcs": arcs });
            if let Some(k) = k {
                let circle = build_arc_circle(&perm, *k, *m, *l)?;
                circle.check_invariants()?;
                lines.push(format!("circle: {} positions ({} arcs x {})", circle.len(), circle.b(), circle.nbar()));
                out["circle_len"] = json!(circle.len());
            }
            Ok(Outcome::new(EXIT_OK, out, lines.join("\n")))
        }
        CyclicCmd::Injection { family, m, l, order } => {
            let f = read_family(family)?;
            let perm = order.perm(f.ground(), seed)?;
            let arcs = build_arcs3(&perm, *m, *l)?;
            let cert =
                if check { injection_certificate(&f, &arcs)? } else { injection_certificate_unchecked(&f, &arcs)? };
            let ok = cert.validate() && cert.hits <= cert.bound;
            let text = format!("{} of {} arc sets present (bound {}); certificate {}", cert.hits, 3 * cert.count, cert.bound, if ok { "valid" } else { "INVALID" });
            let mut out = json!({ "certificate": cert, "valid": ok });
            if !ok {
                out["counterexample"] = to_json(&f);
            }
            Ok(Outcome::new(verdict(ok), out, text))
        }
        CyclicCmd::Deficiency { k, m, l, anchor, choice, order } => {
            let perm = order.perm(ground(k * m - l)?, seed)?;
            let layout = ArcLayout::new(perm, *m, *l)?;
            let gs = GroupSystem::new(&layout, *k, *anchor)?;
            if choice.is_empty() {
                let s = deficiency_exhaustive(&gs);
                let ok = s.counterexamples.is_empty();
                let text = format!(
                    "{} configurations, {} violate the hypothesis, t histogram {:?}, counterexamples {}",
                    s.configurations,
                    s.hypothesis_violations,
                    s.t_histogram,
                    s.counterexamples.len()
                );
                Ok(Outcome::new(verdict(ok), to_json(&s), text))
            } else {
                let r = deficiency_t(&gs, choice)?;
                Ok(Outcome::new(EXIT_OK, to_json(&r), format!("{r:?}")))
            }
        }
        CyclicCmd::Walk { families, m, l, order } => {
            let fams = read_families(families)?;
            let k = fams.len();
            let perm = order.perm(fams[0].ground(), seed)?;
            let circle = build_arc_circle(&perm, k, *m, *l)?;
            let refs = refs(&fams);
            let pc = circle_presence_count(&refs, &circle)?;
            let walk =
                if check { circle_walk_certificate(&refs, &circle)? } else { circle_walk_unchecked(&refs, &circle, 1)? };
            let ok = pc.present <= pc.bound && walk.certifies();
            let text = format!(
                "present {} <= {}; walk: {} rounds, {} missing incidences exhibited, {} distinct; {}",
                pc.present,
                pc.bound,
                walk.rounds,
                walk.exhibited,
                walk.distinct_missing,
                if ok { "certified" } else { "NOT certified" }
            );
            let mut out = json!({ "presence": pc, "walk": walk, "certified": ok });
            if !ok {
                out["counterexample"] = json!(fams);
            }
            Ok(Outcome::new(verdict(ok), out, text))
        }
        CyclicCmd::Expect { family, k, m, l, shifts, samples } => {
            let f = read_family(family)?;
            let table = match (k, samples) {
                (Some(k), Some(s)) => expectation_estimate(&f, *k, *m, *l, *s, &mut rng_from_seed(seed))?,
                (Some(k), None) => expectation_check(&f, *k, *m, *l)?,
                (None, None) => expectation_table(&f, *m, *l, *shifts)?,
                (None, Some(_)) => bail!(pfl_core::Error::InvalidParameter("sampling needs -k".into())),
            };
            let ok = table.rows.iter().all(|r| r.equal != Some(false));
            let mut lines = Vec::new();
            for r in &table.rows {
                lines.push(format!(
                    "{:<10} average {}  formula {}{}",
                    r.label,
                    r.average,
                    r.formula,
                    match r.equal {
                        Some(true) => "  =",
                        Some(false) => "  MISMATCH",
                        None => "",
                    }
                ));
            }
            let mut out = to_json(&table);
            if !ok {
                out["counterexample"] = to_json(&f);
            }
            Ok(Outcome::new(verdict(ok), out, lines.join("\n")))
        }
    }
}

/// Exit code for an error escaping [`run`].
pub fn error_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<pfl_core::Error>() {
        Some(pfl_core::Error::Violation { .. }) => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}
