//! The `itlab` command line: generate / solve / verify / bounds / experiment.
//!
//! Exit codes: 0 success, 1 solver failure or failed verification (a report
//! is still produced), 2 usage, parameter or I/O errors. All randomness is
//! seeded; two runs with the same configuration and seed produce identical
//! output except for `*wall_ms` fields.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{
    bound_report, check_lll_condition, matching_census, run_experiment, success_curve_csv,
    trajectory_report, ExperimentParams, SolverKind, SHRINK_TOLERANCE,
};
use crate::constructions::{
    assemble_upper_bound_instance, neighbourhood_incidence_graph, norm_graph_host,
    projective_plane_host, random_bipartite_host, random_nkrs,
    verify_no_transversal_by_pigeonhole,
};
use crate::hypergraph::{PartitionedHypergraph, Transversal};
use crate::io::{read_instance_auto, write_instance, write_instance_json};
use crate::solvers::{
    count_transversals, exact_find, greedy_find, kt_free_transversal, lll_sample, nibble_solve,
    ExactOutcome, NibbleConfig,
};

/// Parsed invocation: subcommand, flags, master seed, output toggles.
#[derive(Debug, Parser)]
#[command(name = "itlab", version, about = "independent transversal laboratory")]
pub struct RunConfig {
    /// master seed for every randomized operation
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// machine-readable JSON on stdout instead of a table
    #[arg(long, global = true)]
    pub json: bool,
    /// suppress progress chatter
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file (with a .meta.json provenance sidecar)
    Generate(GenerateArgs),
    /// Run a solver on an instance file
    Solve(SolveArgs),
    /// Check transversals, censuses and LLL conditions on an instance
    Verify(VerifyArgs),
    /// Closed-form bound report for (k, r, s)
    Bounds(BoundsArgs),
    /// Seeded Monte-Carlo sweep over n for fixed (k, r, s)
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenerateKind {
    RandomNkrs,
    Incidence,
    Projective,
    Norm,
    UpperBound,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: GenerateKind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    /// prime order for the geometric hosts
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// output path; `.json` writes the JSON mirror, anything else the text format
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CliSolver {
    Exact,
    Greedy,
    Lll,
    Nibble,
    Ktfree,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub solver: CliSolver,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// write the JSON report here as well as stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// nibble activation probability override
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// node budget (exact) or resampling-round budget (lll)
    #[arg(long)]
    pub budget: Option<u64>,
    /// colour count for the ktfree solver
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    /// also count all transversals (exact solver only)
    #[arg(long)]
    pub count: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// JSON file with [[part, vertex], ...] pairs to check
    #[arg(long)]
    pub transversal: Option<PathBuf>,
    /// run the per-r-set matching census
    #[arg(long)]
    pub matching_census: bool,
    /// with --matching-census: require exactly s matching edges per r-set
    #[arg(long)]
    pub expect_s: Option<usize>,
    /// census budget (number of r-sets)
    #[arg(long, default_value_t = 1_000_000)]
    pub census_budget: u64,
    /// check the Lemma-style LLL condition on the instance
    #[arg(long)]
    pub lll_condition: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub s: u64,
    /// also evaluate the first moment at this n
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// sweep specification `n=A..B[:STEP]` (inclusive, default step 1)
    #[arg(long)]
    pub sweep: String,
    #[arg(long, default_value = "nibble")]
    pub solver: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// write the success-vs-first-moment curve as CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1_000_000)]
    pub exact_budget: u64,
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    match RunConfig::try_parse() {
        Ok(cfg) => match dispatch(&cfg) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

fn dispatch(cfg: &RunConfig) -> CliResult<i32> {
    match &cfg.command {
        Command::Generate(args) => generate(cfg, args),
        Command::Solve(args) => solve(cfg, args),
        Command::Verify(args) => verify(cfg, args),
        Command::Bounds(args) => bounds(cfg, args),
        Command::Experiment(args) => experiment(cfg, args),
    }
}

fn need(name: &str, v: Option<usize>) -> CliResult<usize> {
    v.ok_or_else(|| format!("missing required parameter --{name} for this kind").into())
}

fn write_instance_file(g: &PartitionedHypergraph, path: &Path) -> CliResult<()> {
    let body = if path.extension().is_some_and(|e| e == "json") {
        write_instance_json(g)
    } else {
        write_instance(g)
    };
    fs::write(path, body)?;
    Ok(())
}

fn write_meta(path: &Path, meta: &serde_json::Value) -> CliResult<PathBuf> {
    let mut meta_path = path.as_os_str().to_owned();
    meta_path.push(".meta.json");
    let meta_path = PathBuf::from(meta_path);
    fs::write(&meta_path, format!("{}\n", serde_json::to_string_pretty(meta)?))?;
    Ok(meta_path)
}

fn generate(cfg: &RunConfig, args: &GenerateArgs) -> CliResult<i32> {
    let seed = cfg.seed;
    let (g, meta): (PartitionedHypergraph, serde_json::Value) = match args.kind {
        GenerateKind::RandomNkrs => {
            let (n, k, r, s) = (
                need("n", args.n)?,
                need("k", args.k)?,
                need("r", args.r)?,
                need("s", args.s)?,
            );
            let g = random_nkrs(n, k, r, s, seed)?;
            let meta = json!({
                "kind": "random-nkrs",
                "n": n, "k": k, "r": r, "s": s, "seed": seed,
                "edges": g.num_edges(),
            });
            (g, meta)
        }
        GenerateKind::Incidence => {
            let (n, m, r, s) = (
                need("n", args.n)?,
                need("m", args.m)?,
                need("r", args.r)?,
                need("s", args.s)?,
            );
            let eps = args.eps.unwrap_or(0.25);
            let (host, cert, prov) = random_bipartite_host(n, m, r, s, eps, seed)?;
            let g = neighbourhood_incidence_graph(&host, r)?;
            let meta = json!({
                "kind": "incidence",
                "seed": seed,
                "host": prov,
                "certificate": cert,
                "pigeonhole_certified": verify_no_transversal_by_pigeonhole(&host, r),
            });
            (g, meta)
        }
        GenerateKind::Projective => {
            let q = args.q.ok_or("missing required parameter --q")?;
            let (host, cert) = projective_plane_host(q)?;
            let g = neighbourhood_incidence_graph(&host, 2)?;
            let meta = json!({
                "kind": "projective",
                "q": q, "seed": seed,
                "host_n": host.n(), "host_m": host.m(),
                "certificate": cert,
                "pigeonhole_certified": verify_no_transversal_by_pigeonhole(&host, 2),
            });
            (g, meta)
        }
        GenerateKind::Norm => {
            let q = args.q.ok_or("missing required parameter --q")?;
            let (host, cert, prov) = norm_graph_host(q, seed)?;
            let g = neighbourhood_incidence_graph(&host, 3)?;
            let meta = json!({
                "kind": "norm",
                "q": q, "seed": seed,
                "host": prov,
                "certificate": cert,
                "pigeonhole_certified": verify_no_transversal_by_pigeonhole(&host, 3),
            });
            (g, meta)
        }
        GenerateKind::UpperBound => {
            let (k, r, s) = (need("k", args.k)?, need("r", args.r)?, need("s", args.s)?);
            let (g, prov) = assemble_upper_bound_instance(k, r, s, seed)?;
            let meta = serde_json::to_value(&prov)?;
            (g, meta)
        }
    };
    write_instance_file(&g, &args.out)?;
    let meta_path = write_meta(&args.out, &meta)?;
    if cfg.json {
        println!(
            "{}",
            json!({
                "out": args.out,
                "meta": meta_path,
                "parts": g.num_parts(),
                "vertices": g.num_vertices(),
                "edges": g.num_edges(),
                "seed": seed,
            })
        );
    } else if !cfg.quiet {
        println!(
            "wrote {} ({} parts, {} vertices, {} edges); provenance in {}",
            args.out.display(),
            g.num_parts(),
            g.num_vertices(),
            g.num_edges(),
            meta_path.display()
        );
    }
    Ok(0)
}

#[derive(Serialize)]
struct SolveReport {
    status: String,
    solver: String,
    seed: u64,
    transversal: Option<Vec<(usize, u32)>>,
    steps: usize,
    resamples: u64,
    nodes: Option<u64>,
    rounds: Option<u64>,
    count: Option<u64>,
    count_saturated: Option<bool>,
    failure: Option<String>,
    trajectory: Option<serde_json::Value>,
    trajectory_diagnostics: Option<serde_json::Value>,
    wall_ms: f64,
}

fn solve(cfg: &RunConfig, args: &SolveArgs) -> CliResult<i32> {
    let text = fs::read_to_string(&args.input)?;
    let g = read_instance_auto(&text)?;
    let start = Instant::now();
    let mut report = SolveReport {
        status: "failure".into(),
        solver: format!("{:?}", args.solver).to_lowercase(),
        seed: cfg.seed,
        transversal: None,
        steps: 0,
        resamples: 0,
        nodes: None,
        rounds: None,
        count: None,
        count_saturated: None,
        failure: None,
        trajectory: None,
        trajectory_diagnostics: None,
        wall_ms: 0.0,
    };
    match args.solver {
        CliSolver::Exact => {
            let budget = args.budget.unwrap_or(50_000_000);
            match exact_find(&g, budget) {
                ExactOutcome::Found { transversal, nodes } => {
                    report.status = "found".into();
                    report.transversal = Some(pairs(&transversal));
                    report.nodes = Some(nodes);
                }
                ExactOutcome::NoTransversal { nodes } => {
                    report.status = "none".into();
                    report.nodes = Some(nodes);
                }
                ExactOutcome::BudgetExhausted { nodes } => {
                    report.status = "budget-exhausted".into();
                    report.nodes = Some(nodes);
                }
            }
            if args.count {
                let res = count_transversals(&g, args.budget.unwrap_or(1_000_000));
                report.count = Some(res.count);
                report.count_saturated = Some(res.saturated);
            }
        }
        CliSolver::Greedy => match greedy_find(&g)? {
            Some(t) => {
                report.status = "found".into();
                report.transversal = Some(pairs(&t));
            }
            None => report.status = "failure".into(),
        },
        CliSolver::Lll => {
            let rounds = args.budget.unwrap_or(50 * g.num_edges().max(1) as u64);
            let run = lll_sample(&g, rounds, cfg.seed)?;
            report.rounds = Some(run.rounds);
            match run.transversal {
                Some(t) => {
                    report.status = "found".into();
                    report.transversal = Some(pairs(&t));
                }
                None => report.status = "failure".into(),
            }
        }
        CliSolver::Nibble | CliSolver::Ktfree => {
            let ncfg = NibbleConfig {
                eps: args.eps,
                p: args.p,
                t_star: args.max_steps,
                seed: cfg.seed,
                ..NibbleConfig::default()
            };
            let run = if args.solver == CliSolver::Nibble {
                nibble_solve(&g, &ncfg)?
            } else {
                kt_free_transversal(&g, args.t, &ncfg)?.inner
            };
            report.steps = run.steps;
            report.resamples = run.resamples;
            report.failure = run.failure.clone();
            report.trajectory = Some(serde_json::to_value(&run.trajectory)?);
            report.trajectory_diagnostics = Some(serde_json::to_value(trajectory_report(
                &run.trajectory,
                SHRINK_TOLERANCE,
            ))?);
            match run.transversal {
                Some(t) => {
                    report.status = "found".into();
                    report.transversal = Some(pairs(&t));
                }
                None => report.status = "failure".into(),
            }
        }
    }
    report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let body = serde_json::to_string_pretty(&report)?;
    if let Some(out) = &args.out {
        fs::write(out, format!("{body}\n"))?;
    }
    if cfg.json || !cfg.quiet {
        println!("{body}");
    }
    Ok(if report.status == "found" { 0 } else { 1 })
}

fn pairs(t: &Transversal) -> Vec<(usize, u32)> {
    t.to_pairs()
}

fn verify(cfg: &RunConfig, args: &VerifyArgs) -> CliResult<i32> {
    let text = fs::read_to_string(&args.input)?;
    let g = read_instance_auto(&text)?;
    let mut checks = Vec::new();
    if let Some(tpath) = &args.transversal {
        let tjson: Vec<(usize, u32)> = serde_json::from_str(&fs::read_to_string(tpath)?)?;
        let t = Transversal::from_pairs(tjson);
        let ok = g.is_independent_transversal(&t);
        checks.push(json!({
            "check": "independent-transversal",
            "ok": ok,
        }));
    }
    if args.matching_census {
        let census = matching_census(&g, args.census_budget);
        let ok = match args.expect_s {
            Some(s) => !census.partial && census.all_matchings && census.uniform_s == Some(s),
            None => census.all_matchings,
        };
        checks.push(json!({
            "check": "matching-census",
            "ok": ok,
            "partial": census.partial,
            "uniform_s": census.uniform_s,
            "all_matchings": census.all_matchings,
            "max_edges": census.max_edges,
            "r_sets": census.per_set.len(),
        }));
    }
    if args.lll_condition {
        let rep = check_lll_condition(&g)?;
        checks.push(json!({
            "check": "lll-condition",
            "ok": rep.ok,
            "part_size": rep.part_size,
            "max_dependency_bound": rep.max_dependency_bound,
            "witness_edge": rep.witness_edge,
            "value": rep.value,
        }));
    }
    if checks.is_empty() {
        return Err("nothing to verify: pass --transversal, --matching-census or --lll-condition".into());
    }
    let all_ok = checks.iter().all(|c| c["ok"].as_bool() == Some(true));
    let body = serde_json::to_string_pretty(&json!({"checks": checks, "ok": all_ok}))?;
    if cfg.json || !cfg.quiet {
        println!("{body}");
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn bounds(cfg: &RunConfig, args: &BoundsArgs) -> CliResult<i32> {
    let report = bound_report(args.k, args.r, args.s, args.n)?;
    if cfg.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("k = {}, r = {}, s = {}", report.k, report.r, report.s);
        println!("LLL guarantee up to n     = {}", report.lll_lower);
        println!("first moment < 1 from n   = {}", report.first_moment_upper);
        println!(
            "conjectured order (r-1)(k^r/s)^(1/(r-1)) = {:.2}",
            report.conjectured_asymptotic
        );
        if let Some(n) = report.n {
            println!(
                "at n = {n}: ln E[#transversals] = {:.4}, LLL ok: {}",
                report.first_moment_log_at_n.unwrap(),
                report.lll_condition_ok_at_n.unwrap()
            );
        }
    }
    Ok(0)
}

fn parse_sweep(spec: &str) -> CliResult<Vec<usize>> {
    // n=A..B[:STEP]
    let rest = spec
        .strip_prefix("n=")
        .ok_or("sweep must look like n=A..B[:STEP]")?;
    let (range, step) = match rest.split_once(':') {
        Some((r, s)) => (r, s.parse::<usize>().map_err(|_| "bad sweep step")?),
        None => (rest, 1),
    };
    let (a, b) = range.split_once("..").ok_or("sweep must look like n=A..B[:STEP]")?;
    let a: usize = a.parse().map_err(|_| "bad sweep start")?;
    let b: usize = b.parse().map_err(|_| "bad sweep end")?;
    if step == 0 || b < a {
        return Err("empty sweep".into());
    }
    Ok((a..=b).step_by(step).collect())
}

fn experiment(cfg: &RunConfig, args: &ExperimentArgs) -> CliResult<i32> {
    let n_values = parse_sweep(&args.sweep)?;
    let solver: SolverKind = args.solver.parse()?;
    let params = ExperimentParams {
        k: args.k,
        r: args.r,
        s: args.s,
        n_values,
        trials: args.trials,
        solver,
        master_seed: cfg.seed,
        exact_budget: args.exact_budget,
        lll_rounds_factor: 50,
    };
    let threads = std::env::var("ITLAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    let report = run_experiment(&params, threads);
    let body = serde_json::to_string_pretty(&report)?;
    if let Some(out) = &args.out {
        fs::write(out, format!("{body}\n"))?;
    }
    if let Some(csv) = &args.csv {
        fs::write(csv, success_curve_csv(&report))?;
    }
    if cfg.json {
        println!("{body}");
    } else if !cfg.quiet {
        for p in &report.per_n {
            println!(
                "n = {:5}  success {:3}/{:<3}  ln E[#IT] = {:8.3}",
                p.n, p.successes, p.trials, p.first_moment_log
            );
        }
    }
    Ok(0)
}
