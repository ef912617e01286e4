//! Seeded Monte-Carlo harness: sweep n for fixed (k, r, s), solve random
//! instances, and report the empirical success curve next to the
//! first-moment curve. Addresses the open question of where random
//! (n,k,r,s)-graphs stop having independent transversals, at desk scale.

use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

use super::bounds::first_moment_log;
use crate::constructions::random::random_nkrs;
use crate::rng::derive_seed;
use crate::solvers::exact::{exact_find, ExactOutcome};
use crate::solvers::greedy::greedy_find;
use crate::solvers::lll::lll_sample;
use crate::solvers::nibble::{nibble_solve, NibbleConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Exact,
    Greedy,
    Lll,
    Nibble,
}

impl std::str::FromStr for SolverKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(SolverKind::Exact),
            "greedy" => Ok(SolverKind::Greedy),
            "lll" => Ok(SolverKind::Lll),
            "nibble" => Ok(SolverKind::Nibble),
            other => Err(format!("unknown solver `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentParams {
    pub k: usize,
    pub r: usize,
    pub s: usize,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub solver: SolverKind,
    pub master_seed: u64,
    pub exact_budget: u64,
    pub lll_rounds_factor: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub success: bool,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub n: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub first_moment_log: f64,
    pub mean_wall_ms: f64,
    pub p50_wall_ms: f64,
    pub p90_wall_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub params: ExperimentParams,
    pub per_n: Vec<SweepPoint>,
    pub seed_ledger: Vec<TrialRecord>,
}

fn run_trial(params: &ExperimentParams, n: usize, trial: usize, seed: u64) -> (bool, f64) {
    let start = Instant::now();
    let success = (|| -> bool {
        let g = match random_nkrs(n, params.k, params.r, params.s, seed) {
            Ok(g) => g,
            Err(_) => return false,
        };
        let solver_seed = derive_seed(seed, 1);
        match params.solver {
            SolverKind::Exact => matches!(
                exact_find(&g, params.exact_budget),
                ExactOutcome::Found { .. }
            ),
            SolverKind::Greedy => matches!(greedy_find(&g), Ok(Some(_))),
            SolverKind::Lll => {
                let rounds = params.lll_rounds_factor * g.num_edges().max(1) as u64;
                matches!(
                    lll_sample(&g, rounds, solver_seed),
                    Ok(run) if run.transversal.is_some()
                )
            }
            SolverKind::Nibble => {
                let cfg = NibbleConfig {
                    seed: solver_seed,
                    ..NibbleConfig::default()
                };
                matches!(
                    nibble_solve(&g, &cfg),
                    Ok(run) if run.transversal.is_some()
                )
            }
        }
    })();
    (success, start.elapsed().as_secs_f64() * 1e3)
}

/// Run the sweep. Trials parallelize over a local rayon pool capped at
/// `threads` (None = rayon default); results are ordered by (n, trial) and
/// independent of scheduling because every trial derives its own seed.
pub fn run_experiment(params: &ExperimentParams, threads: Option<usize>) -> ExperimentReport {
    let jobs: Vec<(usize, usize, u64)> = params
        .n_values
        .iter()
        .enumerate()
        .flat_map(|(ni, &n)| {
            (0..params.trials).map(move |t| {
                let stream = (ni * params.trials + t) as u64;
                (n, t, stream)
            })
        })
        .map(|(n, t, stream)| (n, t, derive_seed(params.master_seed, stream)))
        .collect();

    let run_all = || -> Vec<TrialRecord> {
        jobs.par_iter()
            .map(|&(n, trial, seed)| {
                let (success, wall_ms) = run_trial(params, n, trial, seed);
                TrialRecord {
                    n,
                    trial,
                    seed,
                    success,
                    wall_ms,
                }
            })
            .collect()
    };
    let ledger: Vec<TrialRecord> = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .expect("thread pool")
            .install(run_all),
        None => run_all(),
    };

    let per_n = params
        .n_values
        .iter()
        .map(|&n| {
            let rows: Vec<&TrialRecord> = ledger.iter().filter(|r| r.n == n).collect();
            let successes = rows.iter().filter(|r| r.success).count();
            let mut walls: Vec<f64> = rows.iter().map(|r| r.wall_ms).collect();
            walls.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let quantile = |q: f64| -> f64 {
                if walls.is_empty() {
                    0.0
                } else {
                    walls[((walls.len() - 1) as f64 * q).round() as usize]
                }
            };
            SweepPoint {
                n,
                trials: rows.len(),
                successes,
                success_rate: successes as f64 / rows.len().max(1) as f64,
                first_moment_log: first_moment_log(
                    n as u64,
                    params.k as u64,
                    params.r as u64,
                    params.s as u64,
                )
                .unwrap_or(f64::NAN),
                mean_wall_ms: walls.iter().sum::<f64>() / walls.len().max(1) as f64,
                p50_wall_ms: quantile(0.5),
                p90_wall_ms: quantile(0.9),
            }
        })
        .collect();

    ExperimentReport {
        params: params.clone(),
        per_n,
        seed_ledger: ledger,
    }
}

/// CSV of the success curve against the first-moment curve.
pub fn success_curve_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("n,trials,successes,success_rate,first_moment_log\n");
    for p in &report.per_n {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.n, p.trials, p.successes, p.success_rate, p.first_moment_log
        ));
    }
    out
}
