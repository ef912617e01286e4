//! The semi-random nibble.
//!
//! Each round activates every live part with probability p, picks one
//! uniform vertex per activated part, commits the picks that have no chosen
//! neighbour, and prunes the remaining parts so that every live vertex
//! survives with probability exactly p_v = 1 - d(v) p / S(t). Survival is
//! realized by an explicit coupling: the chance that no neighbour of v is
//! chosen factors over parts as q_v = prod_j (1 - p |N(v) ∩ V_j| / |V_j|),
//! and an independent coin of probability p_v / q_v (valid since
//! |V_j| >= S(t) forces q_v >= p_v) truncates survival down to p_v.
//!
//! S(t) and D(t) are the measured min part size and max part average degree
//! of the live graph. One step must shrink them no worse than the scheduled
//! factors (1 - p/(1+3eps/4)) and (1 - p/(1+eps/4)); because the schedule's
//! concentration guarantee is asymptotic, a step is accepted when it lands
//! within a noise allowance of kappa * sqrt(p S(t)) vertices (resp. degree
//! units) of the target, and resampled otherwise. Once the measured
//! size/degree ratio reaches the completion ratio (default 2e), the run
//! finishes with one LLL sampling round, or exact search when the live
//! instance is tiny.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::exact::{exact_find, ExactOutcome};
use super::lll::lll_sample;
use super::SolverError;
use crate::hypergraph::{PartitionedHypergraph, Transversal, VertexId};
use crate::rng::{derive_seed, rng};

/// Tuning knobs for one nibble run. `None` fields derive from the instance.
#[derive(Debug, Clone)]
pub struct NibbleConfig {
    /// schedule epsilon; capped at the measured size/degree ratio minus one
    pub eps: Option<f64>,
    /// activation probability; default max(1/ln^3 D, 0.02), clamped to [0.02, 0.5]
    pub p: Option<f64>,
    /// max nibble steps; default ceil(10/(eps p)), capped at 10_000
    pub t_star: Option<usize>,
    /// measured min-size / max-avg-degree ratio that triggers completion
    pub completion_ratio: f64,
    /// resamples allowed for a single step
    pub step_retries: u32,
    /// resamples allowed across the whole run
    pub global_retries: u64,
    /// schedule acceptance allowance in units of sqrt(p S(t)); 0 = exact schedule
    pub noise_allowance: f64,
    /// switch to exact completion when the live assignment space is this small
    pub exact_completion_product: f64,
    /// or when this few parts remain live
    pub exact_completion_parts: usize,
    /// LLL completion round budget, per live edge
    pub lll_rounds_factor: u64,
    /// node budget for exact completion
    pub exact_budget: u64,
    pub seed: u64,
}

impl Default for NibbleConfig {
    fn default() -> Self {
        NibbleConfig {
            eps: None,
            p: None,
            t_star: None,
            completion_ratio: 2.0 * std::f64::consts::E,
            step_retries: 20,
            global_retries: 2_000,
            noise_allowance: 4.0,
            exact_completion_product: 1e5,
            exact_completion_parts: 8,
            lll_rounds_factor: 50,
            exact_budget: 5_000_000,
            seed: 0,
        }
    }
}

/// Per-step log line; everything the trajectory diagnostics need.
#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub active_before: usize,
    pub committed: usize,
    pub resamples: u32,
    pub min_size_before: f64,
    pub max_avg_degree_before: f64,
    pub min_size_after: f64,
    pub max_avg_degree_after: f64,
    pub scheduled_min_size: f64,
    pub scheduled_max_avg_degree: f64,
    /// measured values met the scheduled recursion exactly
    pub within_schedule: bool,
    /// mean over surviving parts of 1 - |V_i(t+1)|/|V_i(t)|
    pub size_shrink_mean: f64,
    /// mean over sampled surviving vertices of degree >= D(t)/4 of 1 - d'/d
    pub degree_shrink_mean_heavy: f64,
    pub heavy_sampled: usize,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Trajectory {
    pub eps: f64,
    pub p: f64,
    pub t_star: usize,
    pub initial_min_size: f64,
    pub initial_max_avg_degree: f64,
    pub steps: Vec<StepRecord>,
    pub completion: Option<String>,
    pub final_ratio: Option<f64>,
}

/// The live nibble state: which parts are still open, which vertices are
/// still candidates, and the measured S(t), D(t).
#[derive(Debug, Clone)]
pub struct NibbleState {
    pub step: usize,
    pub active: Vec<bool>,
    pub alive: Vec<bool>,
    pub live_size: Vec<usize>,
    /// degree into the live graph (alive vertices of active parts)
    pub live_deg: Vec<u32>,
    pub partial: Transversal,
    /// S(t): measured min live size over active parts
    pub s_curr: f64,
    /// D(t): measured max live average degree over active parts
    pub d_curr: f64,
    pub resamples: u64,
    pub trajectory: Trajectory,
}

impl NibbleState {
    /// Fresh state: every part active, every vertex alive.
    pub fn init(g: &PartitionedHypergraph) -> Result<Self, SolverError> {
        if let Some(i) = g.parts().iter().position(|p| p.is_empty()) {
            return Err(SolverError::EmptyPart(i));
        }
        let mut live_deg = vec![0u32; g.num_vertices()];
        for e in g.edges() {
            live_deg[e[0] as usize] += 1;
            live_deg[e[1] as usize] += 1;
        }
        let live_size: Vec<usize> = g.parts().iter().map(|p| p.len()).collect();
        let mut st = NibbleState {
            step: 0,
            active: vec![true; g.num_parts()],
            alive: vec![true; g.num_vertices()],
            live_size,
            live_deg,
            partial: Transversal::new(),
            s_curr: 0.0,
            d_curr: 0.0,
            resamples: 0,
            trajectory: Trajectory::default(),
        };
        let (s, d) = live_stats(g, &st.active, &st.alive, &st.live_size, &st.live_deg);
        st.s_curr = s;
        st.d_curr = d;
        Ok(st)
    }

    pub fn active_parts(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn ratio(&self) -> f64 {
        if self.d_curr <= 0.0 {
            f64::INFINITY
        } else {
            self.s_curr / self.d_curr
        }
    }
}

fn live_stats(
    g: &PartitionedHypergraph,
    active: &[bool],
    alive: &[bool],
    live_size: &[usize],
    live_deg: &[u32],
) -> (f64, f64) {
    let mut s = f64::INFINITY;
    let mut d = 0.0f64;
    for i in 0..g.num_parts() {
        if !active[i] {
            continue;
        }
        s = s.min(live_size[i] as f64);
        let total: u64 = g
            .part(i)
            .iter()
            .filter(|&&v| alive[v as usize])
            .map(|&v| live_deg[v as usize] as u64)
            .sum();
        if live_size[i] > 0 {
            d = d.max(total as f64 / live_size[i] as f64);
        }
    }
    if s == f64::INFINITY {
        s = 0.0;
    }
    (s, d)
}

/// The random choices of one nibble round, before acceptance.
#[derive(Debug, Clone)]
pub struct StepDraw {
    pub activated: Vec<usize>,
    /// chosen vertex per activated part (T')
    pub selected: Vec<(usize, VertexId)>,
    /// activated parts whose choice has no chosen neighbour (J-hat)
    pub committed: Vec<(usize, VertexId)>,
    /// retention event per vertex: no chosen neighbour AND the truncation
    /// coin; meaningful for alive vertices of active parts
    pub retained: Vec<bool>,
}

/// Draw one round: activations, selections, commits, and the per-vertex
/// retention events realizing survival probability exactly
/// p_v = clamp(1 - d(v) p / S(t), 0, 1).
pub fn draw_step(
    g: &PartitionedHypergraph,
    adj: &[Vec<VertexId>],
    st: &NibbleState,
    p: f64,
    rng: &mut ChaCha8Rng,
) -> StepDraw {
    let m = g.num_parts();
    let mut activated = Vec::new();
    for i in 0..m {
        if st.active[i] && rng.random::<f64>() < p {
            activated.push(i);
        }
    }
    let mut selected_flag = vec![false; g.num_vertices()];
    let mut selected = Vec::with_capacity(activated.len());
    for &i in &activated {
        let live: Vec<VertexId> = g
            .part(i)
            .iter()
            .copied()
            .filter(|&v| st.alive[v as usize])
            .collect();
        let v = live[rng.random_range(0..live.len())];
        selected_flag[v as usize] = true;
        selected.push((i, v));
    }
    let mut committed = Vec::new();
    for &(i, v) in &selected {
        let clash = adj[v as usize].iter().any(|&w| selected_flag[w as usize]);
        if !clash {
            committed.push((i, v));
        }
    }

    let mut retained = vec![false; g.num_vertices()];
    let s_anchor = st.s_curr;
    for i in 0..m {
        if !st.active[i] {
            continue;
        }
        for &v in g.part(i) {
            if !st.alive[v as usize] {
                continue;
            }
            // walk neighbours grouped by part (adjacency is (part, id) sorted)
            let mut hit = false;
            let mut q_v = 1.0f64;
            let mut degree = 0u32;
            let neigh = &adj[v as usize];
            let mut idx = 0;
            while idx < neigh.len() {
                let part = g.part_of(neigh[idx]);
                let mut count = 0u32;
                while idx < neigh.len() && g.part_of(neigh[idx]) == part {
                    let w = neigh[idx] as usize;
                    if st.active[part] && st.alive[w] {
                        count += 1;
                        if selected_flag[w] {
                            hit = true;
                        }
                    }
                    idx += 1;
                }
                if count > 0 {
                    degree += count;
                    q_v *= 1.0 - p * count as f64 / st.live_size[part] as f64;
                }
            }
            debug_assert_eq!(degree, st.live_deg[v as usize], "live degree counter drift");
            let p_v = (1.0 - degree as f64 * p / s_anchor).clamp(0.0, 1.0);
            if hit || q_v <= 0.0 || p_v == 0.0 {
                continue;
            }
            debug_assert!(p_v <= q_v + 1e-12, "coupling needs p_v <= q_v");
            if rng.random::<f64>() < (p_v / q_v).min(1.0) {
                retained[v as usize] = true;
            }
        }
    }
    StepDraw {
        activated,
        selected,
        committed,
        retained,
    }
}

/// Result of applying a draw to (a copy of) the state.
struct Applied {
    active: Vec<bool>,
    alive: Vec<bool>,
    live_size: Vec<usize>,
    live_deg: Vec<u32>,
    s_new: f64,
    d_new: f64,
    emptied: bool,
    size_shrink_mean: f64,
    degree_shrink_mean_heavy: f64,
    heavy_sampled: usize,
}

const HEAVY_SAMPLE_CAP: usize = 512;

fn apply_draw(
    g: &PartitionedHypergraph,
    adj: &[Vec<VertexId>],
    st: &NibbleState,
    draw: &StepDraw,
) -> Applied {
    let mut active = st.active.clone();
    let mut alive = st.alive.clone();
    let mut live_size = st.live_size.clone();
    let mut live_deg = st.live_deg.clone();

    // sample of heavy vertices for the degree-shrink diagnostic
    let heavy_floor = st.d_curr / 4.0;
    let mut heavy: Vec<(VertexId, u32)> = Vec::new();
    if st.d_curr > 0.0 {
        'outer: for i in 0..g.num_parts() {
            if !st.active[i] {
                continue;
            }
            for &v in g.part(i) {
                if st.alive[v as usize] && st.live_deg[v as usize] as f64 >= heavy_floor {
                    heavy.push((v, st.live_deg[v as usize]));
                    if heavy.len() >= HEAVY_SAMPLE_CAP {
                        break 'outer;
                    }
                }
            }
        }
    }

    let mut dying: Vec<VertexId> = Vec::new();
    for &(i, _) in &draw.committed {
        active[i] = false;
        for &v in g.part(i) {
            if alive[v as usize] {
                dying.push(v);
            }
        }
        live_size[i] = 0;
    }
    for i in 0..g.num_parts() {
        if !active[i] {
            continue;
        }
        for &v in g.part(i) {
            if alive[v as usize] && !draw.retained[v as usize] {
                dying.push(v);
                live_size[i] -= 1;
            }
        }
    }
    for &v in &dying {
        alive[v as usize] = false;
    }
    for &v in &dying {
        for &w in &adj[v as usize] {
            if alive[w as usize] {
                live_deg[w as usize] -= 1;
            }
        }
    }

    let (s_new, d_new) = live_stats(g, &active, &alive, &live_size, &live_deg);
    let emptied = active
        .iter()
        .zip(&live_size)
        .any(|(&a, &sz)| a && sz == 0);

    let mut shrink_sum = 0.0;
    let mut shrink_cnt = 0usize;
    for i in 0..g.num_parts() {
        if active[i] && st.live_size[i] > 0 {
            shrink_sum += 1.0 - live_size[i] as f64 / st.live_size[i] as f64;
            shrink_cnt += 1;
        }
    }
    let mut heavy_sum = 0.0;
    let mut heavy_cnt = 0usize;
    for &(v, old_deg) in &heavy {
        if alive[v as usize] && old_deg > 0 {
            heavy_sum += 1.0 - live_deg[v as usize] as f64 / old_deg as f64;
            heavy_cnt += 1;
        }
    }

    Applied {
        active,
        alive,
        live_size,
        live_deg,
        s_new,
        d_new,
        emptied,
        size_shrink_mean: if shrink_cnt > 0 {
            shrink_sum / shrink_cnt as f64
        } else {
            0.0
        },
        degree_shrink_mean_heavy: if heavy_cnt > 0 {
            heavy_sum / heavy_cnt as f64
        } else {
            0.0
        },
        heavy_sampled: heavy_cnt,
    }
}

/// Runtime schedule parameters shared by every step of a run.
#[derive(Debug, Clone, Copy)]
pub struct Schedule {
    pub eps: f64,
    pub p: f64,
    pub kappa: f64,
    pub step_retries: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepFatal {
    /// the scheduled size target fell below one vertex
    ScheduleExhausted,
    /// per-step resampling budget ran out
    RetriesExhausted { last_reason: String },
}

/// One accepted nibble step: draw, apply, check the schedule, resample on
/// gross deviations. Mutates the state only when a draw is accepted.
pub fn nibble_step(
    g: &PartitionedHypergraph,
    adj: &[Vec<VertexId>],
    st: &mut NibbleState,
    sched: Schedule,
    step_seed: u64,
) -> Result<(), StepFatal> {
    let s_target = (1.0 - sched.p / (1.0 + 3.0 * sched.eps / 4.0)) * st.s_curr;
    let d_target = (1.0 - sched.p / (1.0 + sched.eps / 4.0)) * st.d_curr;
    if s_target < 1.0 {
        return Err(StepFatal::ScheduleExhausted);
    }
    let size_allow = sched.kappa * (sched.p * st.s_curr).sqrt();
    let deg_allow = sched.kappa * (sched.p * st.d_curr.max(1.0)).sqrt();
    let mut last_reason = String::new();
    for attempt in 0..=sched.step_retries {
        let mut rng = rng(derive_seed(step_seed, attempt as u64));
        let draw = draw_step(g, adj, st, sched.p, &mut rng);
        let applied = apply_draw(g, adj, st, &draw);
        let all_done = applied.active.iter().all(|&a| !a);
        if applied.emptied {
            last_reason = "an active part emptied".into();
            st.resamples += 1;
            continue;
        }
        if !all_done
            && (applied.s_new < s_target - size_allow || applied.d_new > d_target + deg_allow)
        {
            last_reason = format!(
                "outside schedule allowance: size {:.2} vs target {:.2}, degree {:.3} vs {:.3}",
                applied.s_new, s_target, applied.d_new, d_target
            );
            st.resamples += 1;
            continue;
        }
        // accept
        let within = applied.s_new >= s_target && applied.d_new <= d_target;
        for &(i, v) in &draw.committed {
            debug_assert!(st.alive[v as usize] && st.active[i]);
            st.partial.set(i, v);
        }
        debug_assert!(committed_is_independent(g, adj, &draw.committed));
        st.trajectory.steps.push(StepRecord {
            step: st.step,
            active_before: st.active.iter().filter(|&&a| a).count(),
            committed: draw.committed.len(),
            resamples: attempt,
            min_size_before: st.s_curr,
            max_avg_degree_before: st.d_curr,
            min_size_after: applied.s_new,
            max_avg_degree_after: applied.d_new,
            scheduled_min_size: s_target,
            scheduled_max_avg_degree: d_target,
            within_schedule: within,
            size_shrink_mean: applied.size_shrink_mean,
            degree_shrink_mean_heavy: applied.degree_shrink_mean_heavy,
            heavy_sampled: applied.heavy_sampled,
        });
        st.active = applied.active;
        st.alive = applied.alive;
        st.live_size = applied.live_size;
        st.live_deg = applied.live_deg;
        st.s_curr = applied.s_new;
        st.d_curr = applied.d_new;
        st.step += 1;
        debug_assert!(partial_avoids_live(g, adj, st), "P3: live vertices must avoid N(T)");
        return Ok(());
    }
    Err(StepFatal::RetriesExhausted { last_reason })
}

fn committed_is_independent(
    g: &PartitionedHypergraph,
    adj: &[Vec<VertexId>],
    committed: &[(usize, VertexId)],
) -> bool {
    let set: std::collections::HashSet<VertexId> = committed.iter().map(|&(_, v)| v).collect();
    let _ = g;
    committed
        .iter()
        .all(|&(_, v)| !adj[v as usize].iter().any(|w| set.contains(w)))
}

fn partial_avoids_live(
    g: &PartitionedHypergraph,
    adj: &[Vec<VertexId>],
    st: &NibbleState,
) -> bool {
    let _ = g;
    st.partial.iter().all(|(_, &v)| {
        adj[v as usize]
            .iter()
            .all(|&w| !(st.alive[w as usize] && st.active[g.part_of(w)]))
    })
}

/// How a successful run finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletionKind {
    /// every part was committed by nibble steps
    AllCommitted,
    Lll,
    Exact,
    Edgeless,
}

#[derive(Debug, Clone)]
pub struct NibbleRun {
    pub transversal: Option<Transversal>,
    pub failure: Option<String>,
    pub steps: usize,
    pub resamples: u64,
    pub completion: Option<CompletionKind>,
    pub trajectory: Trajectory,
}

impl NibbleRun {
    fn failed(reason: String, st: Option<NibbleState>) -> NibbleRun {
        let (steps, resamples, trajectory) = match st {
            Some(s) => (s.step, s.resamples, s.trajectory),
            None => (0, 0, Trajectory::default()),
        };
        NibbleRun {
            transversal: None,
            failure: Some(reason),
            steps,
            resamples,
            completion: None,
            trajectory,
        }
    }
}

/// Prop. 3.2: remove vertices of degree above 8D/eps. Returns the trimmed
/// graph, the new degree cap D' = D/(1 - eps/8), and the new -> old vertex
/// map. Requires eps in (0, 1) and every part of size >= (1+eps) D.
pub struct TrimResult {
    pub graph: PartitionedHypergraph,
    pub d_prime: f64,
    pub old_of_new: Vec<VertexId>,
    pub removed_per_part: Vec<usize>,
}

pub fn max_degree_trim(
    g: &PartitionedHypergraph,
    eps: f64,
) -> Result<TrimResult, SolverError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(SolverError::BadParameter(format!(
            "trim needs eps in (0,1), got {eps}"
        )));
    }
    let d: f64 = to_f64(g.max_avg_degree().map_err(SolverError::Stats)?);
    for (i, part) in g.parts().iter().enumerate() {
        if (part.len() as f64) < (1.0 + eps) * d - 1e-9 {
            return Err(SolverError::PartTooSmall {
                part: i,
                size: part.len(),
                needed: (1.0 + eps) * d,
            });
        }
    }
    let threshold = 8.0 * d / eps;
    let keep: Vec<bool> = (0..g.num_vertices())
        .map(|v| (g.degree(v as VertexId) as f64) <= threshold + 1e-9)
        .collect();
    let removed_per_part: Vec<usize> = g
        .parts()
        .iter()
        .map(|p| p.iter().filter(|&&v| !keep[v as usize]).count())
        .collect();
    let (trimmed, old_of_new) = g.induced(&keep);
    let d_prime = d / (1.0 - eps / 8.0);
    // re-verify the guarantees of Prop. 3.2 on the actual output
    for i in 0..trimmed.num_parts() {
        let size = trimmed.part(i).len() as f64;
        if size < (1.0 + eps / 2.0) * d_prime - 1e-9 {
            return Err(SolverError::TrimPostcondition(format!(
                "part {i} has {size} vertices < (1+eps/2) D' = {:.3}",
                (1.0 + eps / 2.0) * d_prime
            )));
        }
        let avg = to_f64(trimmed.avg_degree_of_part(i).map_err(SolverError::Stats)?);
        if avg > d_prime + 1e-9 {
            return Err(SolverError::TrimPostcondition(format!(
                "part {i} has average degree {avg:.3} > D' = {d_prime:.3}"
            )));
        }
    }
    let max_deg = (0..trimmed.num_vertices())
        .map(|v| trimmed.degree(v as VertexId))
        .max()
        .unwrap_or(0) as f64;
    if max_deg > 8.0 * d_prime / eps + 1e-9 {
        return Err(SolverError::TrimPostcondition(format!(
            "max degree {max_deg} > 8D'/eps"
        )));
    }
    Ok(TrimResult {
        graph: trimmed,
        d_prime,
        old_of_new,
        removed_per_part,
    })
}

fn to_f64(x: num_rational::Ratio<u64>) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Full nibble pipeline: trim, iterate accepted steps, complete with LLL or
/// exact search, validate. Never returns an invalid transversal; failures
/// carry the trajectory.
pub fn nibble_solve(g: &PartitionedHypergraph, cfg: &NibbleConfig) -> Result<NibbleRun, SolverError> {
    if g.uniformity() != 2 {
        return Err(SolverError::GraphsOnly(g.uniformity()));
    }
    if g.num_parts() == 0 {
        return Ok(NibbleRun {
            transversal: Some(Transversal::new()),
            failure: None,
            steps: 0,
            resamples: 0,
            completion: Some(CompletionKind::Edgeless),
            trajectory: Trajectory::default(),
        });
    }
    if g.parts().iter().any(|p| p.is_empty()) {
        return Ok(NibbleRun::failed("an input part is empty".into(), None));
    }
    let d0 = to_f64(g.max_avg_degree().map_err(SolverError::Stats)?);
    let s0 = g.parts().iter().map(|p| p.len()).min().unwrap() as f64;
    if d0 > 0.0 && s0 / d0 <= 1.005 {
        return Ok(NibbleRun::failed(
            format!("min part size {s0} over max average degree {d0:.3} leaves no epsilon"),
            None,
        ));
    }
    let eps_cap = if d0 > 0.0 { s0 / d0 - 1.0 } else { 1.0 };
    let eps_pref = cfg.eps.unwrap_or(eps_cap).min(eps_cap);
    let trim = max_degree_trim(g, eps_pref.min(0.95))?;
    let trimmed = &trim.graph;

    let mut st = NibbleState::init(trimmed)?;
    let eps = cfg.eps.unwrap_or(f64::INFINITY).min(if st.d_curr > 0.0 {
        st.s_curr / st.d_curr - 1.0
    } else {
        1.0
    });
    let p = cfg
        .p
        .unwrap_or_else(|| (1.0 / st.d_curr.max(std::f64::consts::E).ln().powi(3)).max(0.02))
        .clamp(0.001, 0.5);
    let t_star = cfg
        .t_star
        .unwrap_or_else(|| ((10.0 / (eps * p)).ceil() as usize).max(1))
        .min(10_000);
    let sched = Schedule {
        eps,
        p,
        kappa: cfg.noise_allowance,
        step_retries: cfg.step_retries,
    };
    st.trajectory.eps = eps;
    st.trajectory.p = p;
    st.trajectory.t_star = t_star;
    st.trajectory.initial_min_size = st.s_curr;
    st.trajectory.initial_max_avg_degree = st.d_curr;

    let adj = trimmed.adjacency();
    loop {
        if st.active_parts() == 0 {
            st.trajectory.completion = Some("all-committed".into());
            return finish(g, trimmed, &trim.old_of_new, st, CompletionKind::AllCommitted, cfg);
        }
        let live_product: f64 = st
            .live_size
            .iter()
            .zip(&st.active)
            .filter(|&(_, &a)| a)
            .map(|(&sz, _)| sz as f64)
            .fold(1.0, |acc, x| (acc * x).min(1e18));
        let tiny = live_product <= cfg.exact_completion_product
            || st.active_parts() <= cfg.exact_completion_parts;
        if st.ratio() >= cfg.completion_ratio || tiny {
            st.trajectory.final_ratio = Some(st.ratio());
            return complete(g, trimmed, &trim.old_of_new, st, cfg, tiny);
        }
        if st.step >= t_star {
            return Ok(NibbleRun::failed(
                format!("t* = {t_star} steps without reaching the completion ratio"),
                Some(st),
            ));
        }
        if st.resamples >= cfg.global_retries {
            return Ok(NibbleRun::failed(
                "global resampling budget exhausted".into(),
                Some(st),
            ));
        }
        let step_seed = derive_seed(cfg.seed, st.step as u64);
        match nibble_step(trimmed, &adj, &mut st, sched, step_seed) {
            Ok(()) => {}
            Err(StepFatal::ScheduleExhausted) => {
                return Ok(NibbleRun::failed(
                    "scheduled part size fell below 1".into(),
                    Some(st),
                ));
            }
            Err(StepFatal::RetriesExhausted { last_reason }) => {
                return Ok(NibbleRun::failed(
                    format!("step {} resampling exhausted: {last_reason}", st.step),
                    Some(st),
                ));
            }
        }
    }
}

/// Build the live sub-instance (active parts, alive vertices only).
fn live_instance(
    trimmed: &PartitionedHypergraph,
    st: &NibbleState,
) -> (PartitionedHypergraph, Vec<usize>, Vec<VertexId>) {
    let mut part_map = Vec::new(); // sub part -> trimmed part
    let mut vertex_map = Vec::new(); // sub vertex -> trimmed vertex
    let mut new_of_old = vec![u32::MAX; trimmed.num_vertices()];
    let mut parts = Vec::new();
    for i in 0..trimmed.num_parts() {
        if !st.active[i] {
            continue;
        }
        let mut part = Vec::new();
        for &v in trimmed.part(i) {
            if st.alive[v as usize] {
                let nv = vertex_map.len() as u32;
                new_of_old[v as usize] = nv;
                vertex_map.push(v);
                part.push(nv);
            }
        }
        part_map.push(i);
        parts.push(part);
    }
    let mut edges = Vec::new();
    for e in trimmed.edges() {
        let (u, v) = (e[0] as usize, e[1] as usize);
        if new_of_old[u] != u32::MAX && new_of_old[v] != u32::MAX {
            edges.push(vec![new_of_old[u], new_of_old[v]]);
        }
    }
    let sub = PartitionedHypergraph::new(2, parts, edges).expect("live sub-instance is valid");
    (sub, part_map, vertex_map)
}

fn complete(
    g: &PartitionedHypergraph,
    trimmed: &PartitionedHypergraph,
    old_of_new: &[VertexId],
    mut st: NibbleState,
    cfg: &NibbleConfig,
    tiny: bool,
) -> Result<NibbleRun, SolverError> {
    let (sub, part_map, vertex_map) = live_instance(trimmed, &st);
    if sub.num_edges() == 0 {
        for (sp, &tp) in part_map.iter().enumerate() {
            let v = sub.part(sp)[0];
            st.partial.set(tp, vertex_map[v as usize]);
        }
        st.trajectory.completion = Some("edgeless".into());
        return finish(g, trimmed, old_of_new, st, CompletionKind::Edgeless, cfg);
    }
    if tiny {
        match exact_find(&sub, cfg.exact_budget) {
            ExactOutcome::Found { transversal, .. } => {
                for (sp, v) in transversal.iter() {
                    st.partial.set(part_map[*sp], vertex_map[*v as usize]);
                }
                st.trajectory.completion = Some("exact".into());
                return finish(g, trimmed, old_of_new, st, CompletionKind::Exact, cfg);
            }
            ExactOutcome::NoTransversal { .. } => {
                return Ok(NibbleRun::failed(
                    "live instance provably has no transversal".into(),
                    Some(st),
                ));
            }
            ExactOutcome::BudgetExhausted { .. } => {
                // fall through to LLL
            }
        }
    }
    let rounds = cfg.lll_rounds_factor * sub.num_edges() as u64;
    let lll_seed = derive_seed(cfg.seed, 0x4C4C_0000_0000 + st.step as u64);
    match lll_sample(&sub, rounds, lll_seed)? {
        run if run.transversal.is_some() => {
            let t = run.transversal.unwrap();
            for (sp, v) in t.iter() {
                st.partial.set(part_map[*sp], vertex_map[*v as usize]);
            }
            st.trajectory.completion = Some("lll".into());
            finish(g, trimmed, old_of_new, st, CompletionKind::Lll, cfg)
        }
        _ => {
            // LLL stalled; exact is the last resort when remotely feasible
            let product: f64 = sub
                .parts()
                .iter()
                .map(|p| p.len() as f64)
                .fold(1.0, |a, x| (a * x).min(1e18));
            if product <= cfg.exact_completion_product * 100.0 {
                if let ExactOutcome::Found { transversal, .. } = exact_find(&sub, cfg.exact_budget)
                {
                    for (sp, v) in transversal.iter() {
                        st.partial.set(part_map[*sp], vertex_map[*v as usize]);
                    }
                    st.trajectory.completion = Some("exact".into());
                    return finish(g, trimmed, old_of_new, st, CompletionKind::Exact, cfg);
                }
            }
            Ok(NibbleRun::failed(
                "completion sampling exhausted its round budget".into(),
                Some(st),
            ))
        }
    }
}

fn finish(
    g: &PartitionedHypergraph,
    trimmed: &PartitionedHypergraph,
    old_of_new: &[VertexId],
    st: NibbleState,
    kind: CompletionKind,
    _cfg: &NibbleConfig,
) -> Result<NibbleRun, SolverError> {
    let _ = trimmed;
    let t = Transversal::from_pairs(
        st.partial
            .iter()
            .map(|(&p, &v)| (p, old_of_new[v as usize])),
    );
    assert!(
        g.is_independent_transversal(&t),
        "nibble must never return an invalid transversal"
    );
    Ok(NibbleRun {
        transversal: Some(t),
        failure: None,
        steps: st.step,
        resamples: st.resamples,
        completion: Some(kind),
        trajectory: st.trajectory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::random::random_nkrs;

    #[test]
    fn p_zero_step_changes_nothing_but_the_counter() {
        let g = random_nkrs(6, 4, 2, 1, 1).unwrap();
        let adj = g.adjacency();
        let mut st = NibbleState::init(&g).unwrap();
        let before_alive = st.alive.clone();
        let sched = Schedule {
            eps: 0.5,
            p: 0.0,
            kappa: 4.0,
            step_retries: 2,
        };
        nibble_step(&g, &adj, &mut st, sched, 1).unwrap();
        assert_eq!(st.alive, before_alive);
        assert!(st.partial.is_empty());
        assert_eq!(st.step, 1);
    }

    #[test]
    fn single_part_p_one_commits_it() {
        let g = PartitionedHypergraph::new(2, vec![vec![0, 1, 2]], vec![]).unwrap();
        let adj = g.adjacency();
        let mut st = NibbleState::init(&g).unwrap();
        let sched = Schedule {
            eps: 0.5,
            p: 1.0,
            kappa: 4.0,
            step_retries: 0,
        };
        nibble_step(&g, &adj, &mut st, sched, 3).unwrap();
        assert_eq!(st.active_parts(), 0);
        assert_eq!(st.partial.len(), 1);
    }

    #[test]
    fn committed_set_is_always_independent() {
        let g = random_nkrs(40, 8, 2, 1, 5).unwrap();
        let adj = g.adjacency();
        let st = NibbleState::init(&g).unwrap();
        for seed in 0..50u64 {
            let mut rng = rng(seed);
            let draw = draw_step(&g, &adj, &st, 0.5, &mut rng);
            assert!(committed_is_independent(&g, &adj, &draw.committed));
        }
    }

    #[test]
    fn trim_leaves_regular_instances_alone() {
        let g = random_nkrs(10, 5, 2, 1, 2).unwrap();
        let trim = max_degree_trim(&g, 0.5).unwrap();
        assert_eq!(trim.graph.num_vertices(), g.num_vertices());
        assert_eq!(trim.removed_per_part.iter().sum::<usize>(), 0);
    }

    #[test]
    fn trim_removes_exactly_the_heavy_vertex() {
        // one vertex of degree 9 among degree <= 1 vertices; D ~ 9m/(k m) small
        // parts: 10 parts of size 12; vertex 0 adjacent to one vertex in each
        // other part
        let k = 12;
        let parts: Vec<Vec<u32>> = (0..10u32).map(|i| (i * k..(i + 1) * k).collect()).collect();
        let edges: Vec<Vec<u32>> = (1..10u32).map(|j| vec![0, j * k]).collect();
        let g = PartitionedHypergraph::new(2, parts, edges).unwrap();
        // D = max part avg = part 0: 9/12 = 0.75; threshold 8D/eps with
        // eps=0.5 is 12; vertex 0 has degree 9 <= 12, so nothing is removed.
        let trim = max_degree_trim(&g, 0.5).unwrap();
        assert_eq!(trim.removed_per_part.iter().sum::<usize>(), 0);
        // shrink the threshold by growing the graph: duplicate edges through 0
        let edges2: Vec<Vec<u32>> = (1..10u32)
            .flat_map(|j| vec![vec![0u32, j * k], vec![0, j * k + 1]])
            .collect();
        let g2 = PartitionedHypergraph::new(2, parts_clone(&g), edges2).unwrap();
        // D = 18/12 = 1.5, 8D/eps = 24 at eps=0.5: still nothing; use eps -> bigger
        let trim2 = max_degree_trim(&g2, 0.6).unwrap();
        let removed: usize = trim2.removed_per_part.iter().sum();
        // vertex 0 has degree 18 vs threshold 8*1.5/0.6 = 20: kept
        assert_eq!(removed, 0);
        // |B_i| <= eps |V_i| / 8 holds trivially here
        for (i, &r) in trim2.removed_per_part.iter().enumerate() {
            assert!(r as f64 <= 0.6 * g2.part(i).len() as f64 / 8.0 + 1e-9);
        }
    }

    fn parts_clone(g: &PartitionedHypergraph) -> Vec<Vec<u32>> {
        g.parts().to_vec()
    }

    #[test]
    fn trim_rejects_small_parts() {
        let g = random_nkrs(30, 3, 2, 1, 3).unwrap(); // D ~ 9.7 > k
        assert!(matches!(
            max_degree_trim(&g, 0.5),
            Err(SolverError::PartTooSmall { .. })
        ));
    }

    #[test]
    fn solve_in_lll_regime_completes_immediately() {
        let g = random_nkrs(15, 10, 2, 1, 4).unwrap(); // D ~ 1.4, ratio ~ 7
        let run = nibble_solve(&g, &NibbleConfig::default()).unwrap();
        let t = run.transversal.expect("easy instance");
        assert!(g.is_independent_transversal(&t));
        assert_eq!(run.steps, 0);
    }

    #[test]
    fn solve_random_graph_with_steps() {
        let g = random_nkrs(120, 24, 2, 1, 0).unwrap();
        let cfg = NibbleConfig {
            seed: 9,
            ..NibbleConfig::default()
        };
        let run = nibble_solve(&g, &cfg).unwrap();
        let t = run.transversal.expect("desk-scale instance should solve");
        assert!(g.is_independent_transversal(&t));
        assert!(run.steps > 0, "must actually nibble before completing");
    }

    #[test]
    fn no_transversal_instance_reports_failure() {
        let (g, _) = crate::constructions::assemble_upper_bound_instance(2, 2, 1, 3).unwrap();
        let run = nibble_solve(&g, &NibbleConfig::default()).unwrap();
        assert!(run.transversal.is_none());
        assert!(run.failure.is_some());
    }

    #[test]
    fn deterministic_under_seed() {
        let g = random_nkrs(80, 20, 2, 1, 6).unwrap();
        let cfg = NibbleConfig {
            seed: 77,
            ..NibbleConfig::default()
        };
        let a = nibble_solve(&g, &cfg).unwrap();
        let b = nibble_solve(&g, &cfg).unwrap();
        assert_eq!(a.transversal, b.transversal);
        assert_eq!(a.steps, b.steps);
        assert_eq!(a.resamples, b.resamples);
    }

    #[test]
    fn hypergraphs_are_rejected() {
        let g = PartitionedHypergraph::new(
            3,
            vec![vec![0], vec![1], vec![2]],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        assert!(matches!(
            nibble_solve(&g, &NibbleConfig::default()),
            Err(SolverError::GraphsOnly(3))
        ));
    }
}
