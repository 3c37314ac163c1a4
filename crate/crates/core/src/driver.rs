//! Trial loop: bandit selection, initial tour, local search, feedback.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bandit::{self, init_bandits, BanditError, BanditParams, Policy, PolicyCounters, SelectedCandidates};
use crate::candidates::{build_candidate_sets, CandidateError, CandidateSet};
use crate::lksearch::{choose_initial_tour, double_bridge_local, lin_kernighan_with, LkConfig, Tour};
use crate::onetree::{alpha_values, held_karp_ascent_with, AscentConfig, PiVector};
use crate::tsplib::Instance;

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Bandit(#[from] BanditError),
    #[error(transparent)]
    Candidates(#[from] CandidateError),
    #[error("invalid solver parameter: {0}")]
    Parameter(String),
}

/// Which edges the local search may use each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// Per-city bandits pull `n_arm` arms each trial.
    Bandit,
    /// Every entry of every candidate list, every trial.
    FullSet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverParams {
    pub c_max: usize,
    pub n_arm: usize,
    pub epsilon: f64,
    pub lambda: f64,
    /// Stagnant trials before rotating policy; `None` means `max_trials / 20`.
    pub t_type: Option<usize>,
    pub max_trials: usize,
    /// Wall-clock cap per run, preprocessing excluded.
    #[serde(skip)]
    pub max_time: Option<Duration>,
    pub seed: u64,
    pub max_depth: usize,
    /// Exchange levels searched exhaustively before going greedy.
    pub full_breadth: usize,
    pub selection: Selection,
    /// Policies in the rotation: epsilon-greedy, M-greedy, alpha-greedy.
    pub enabled: [bool; 3],
    pub alpha_greedy_largest: bool,
    /// Double-bridge kicks tried when a trial does not beat the best tour.
    pub kicks: usize,
    /// Longest segment a kick moves; 0 picks cut points anywhere.
    pub kick_segment: usize,
    /// Subgradient iterations; `None` means `n` capped at 1000.
    pub ascent_steps: Option<usize>,
    pub record_trace: bool,
    /// Snapshot every M-value after each trial (memory heavy).
    pub record_m_trace: bool,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            c_max: 7,
            n_arm: 5,
            epsilon: 0.15,
            lambda: 0.16,
            t_type: None,
            max_trials: 1000,
            max_time: None,
            seed: 1,
            max_depth: crate::lksearch::DEFAULT_MAX_DEPTH,
            full_breadth: crate::lksearch::DEFAULT_FULL_BREADTH,
            selection: Selection::Bandit,
            enabled: [true; 3],
            alpha_greedy_largest: false,
            kicks: 50,
            kick_segment: 0,
            ascent_steps: None,
            record_trace: false,
            record_m_trace: false,
        }
    }
}

/// Default trial budget by instance size.
pub fn default_max_trials(n: usize) -> usize {
    if n < 10_000 {
        n
    } else if n <= 30_000 {
        10_000
    } else {
        3_000
    }
}

impl SolverParams {
    pub fn effective_t_type(&self) -> usize {
        self.t_type.unwrap_or(self.max_trials / 20).max(1)
    }

    pub fn bandit_params(&self) -> BanditParams {
        BanditParams {
            epsilon: self.epsilon,
            lambda: self.lambda,
            n_arm: self.n_arm,
            t_type: self.effective_t_type(),
            enabled: self.enabled,
            alpha_greedy_largest: self.alpha_greedy_largest,
        }
    }

    fn validate(&self) -> Result<(), SolverError> {
        if self.max_trials == 0 {
            return Err(SolverError::Parameter("max_trials must be at least 1".into()));
        }
        if self.c_max == 0 || self.c_max > 255 {
            return Err(SolverError::Parameter(format!("c_max must lie in [1, 255], got {}", self.c_max)));
        }
        if self.max_depth < 2 {
            return Err(SolverError::Parameter("max_depth must be at least 2".into()));
        }
        self.bandit_params().validate(self.c_max)?;
        Ok(())
    }
}

/// Everything computed once per instance and shared by all runs.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub pi: PiVector,
    pub lower_bound: i64,
    pub ascent_steps: usize,
    pub candidates: CandidateSet,
    pub time: Duration,
}

/// Runs the subgradient ascent and builds the candidate sets.
pub fn prepare(inst: &Instance, params: &SolverParams) -> Result<Prepared, SolverError> {
    params.validate()?;
    let n = inst.dimension();
    if n < 3 {
        return Err(SolverError::Parameter(format!("need at least 3 cities, got {n}")));
    }
    let start = Instant::now();
    let mut cfg = AscentConfig::for_dimension(n);
    if let Some(s) = params.ascent_steps {
        cfg.max_steps = s.max(1);
    }
    let ascent = held_karp_ascent_with(inst, cfg);
    let table = alpha_values(inst, &ascent.pi, params.c_max.min(n - 1));
    let candidates = build_candidate_sets(&table, params.c_max)?;
    Ok(Prepared {
        pi: ascent.pi,
        lower_bound: ascent.lower_bound,
        ascent_steps: ascent.steps,
        candidates,
        time: start.elapsed(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    /// `None` when every candidate edge was available.
    pub policy: Option<Policy>,
    pub length: i64,
    pub best: i64,
    pub reward: f64,
    pub improved: bool,
    pub rotated: bool,
    pub selected_edges: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub seed: u64,
    #[serde(skip)]
    pub best_tour: Tour,
    pub best_length: i64,
    pub trials_used: usize,
    /// Seconds, preprocessing excluded.
    pub wall_time: f64,
    pub reached_bks: Option<bool>,
    pub lower_bound: i64,
    pub counters: PolicyCounters,
    pub trace: Vec<TrialRecord>,
    /// One flat copy of the M-values per trial, when requested.
    #[serde(skip)]
    pub m_trace: Vec<Vec<f64>>,
}

impl RunResult {
    /// `trial,policy,length,best,reward,improved,rotated,selected_edges` rows.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("trial,policy,length,best,reward,improved,rotated,selected_edges\n");
        for r in &self.trace {
            let policy = match r.policy {
                Some(Policy::EpsilonGreedy) => "epsilon-greedy",
                Some(Policy::MGreedy) => "m-greedy",
                Some(Policy::AlphaGreedy) => "alpha-greedy",
                None => "full-set",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.trial, policy, r.length, r.best, r.reward, r.improved, r.rotated, r.selected_edges
            );
        }
        out
    }
}

/// Solves one instance with one seed, preprocessing included.
pub fn solve(inst: &Instance, params: &SolverParams, bks: Option<i64>) -> Result<RunResult, SolverError> {
    let prep = prepare(inst, params)?;
    solve_prepared(inst, &prep, params, bks, params.seed)
}

/// One run of the trial loop on preprocessed data.
pub fn solve_prepared(
    inst: &Instance,
    prep: &Prepared,
    params: &SolverParams,
    bks: Option<i64>,
    seed: u64,
) -> Result<RunResult, SolverError> {
    params.validate()?;
    let start = Instant::now();
    let cs = &prep.candidates;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bandits = init_bandits(cs, &params.bandit_params())?;
    let full = match params.selection {
        Selection::FullSet => Some(SelectedCandidates::all(cs)),
        Selection::Bandit => None,
    };
    let lk = LkConfig {
        max_depth: params.max_depth,
        full_breadth: params.full_breadth,
        certify: true,
    };
    let mut best: Option<Tour> = None;
    let mut trace = Vec::new();
    let mut m_trace = Vec::new();
    let mut trials = 0;

    while trials < params.max_trials {
        if let Some(limit) = params.max_time {
            if trials > 0 && start.elapsed() >= limit {
                break;
            }
        }
        trials += 1;
        let (sel, policy) = match &full {
            Some(all) => (all.clone(), None),
            None => {
                let p = bandits.bandtype();
                (bandits.call_bandit(cs, &mut rng), Some(p))
            }
        };
        let mut tour = choose_initial_tour(inst, &sel, &mut rng, best.as_ref());
        lin_kernighan_with(inst, &mut tour, &sel, lk, None, None);
        if inst.dimension() >= 8 && params.kicks > 0 && best.as_ref().is_none_or(|b| tour.length() >= b.length()) {
            tour = kick_descent(inst, tour, &sel, lk, params, &mut rng);
        }

        let len = tour.length();
        // with no incumbent yet the reward is neutral
        let r = best.as_ref().map_or(0.0, |b| bandit::reward(len, b.length()));
        if full.is_none() {
            bandits.update_m(&sel, r);
        }
        let improved = best.as_ref().is_none_or(|b| len < b.length());
        if improved {
            best = Some(tour);
        }
        let rotated = full.is_none() && bandits.record_trial(improved);
        let best_len = best.as_ref().map(Tour::length).expect("set on first trial");
        if params.record_trace {
            trace.push(TrialRecord {
                trial: trials,
                policy,
                length: len,
                best: best_len,
                reward: r,
                improved,
                rotated,
                selected_edges: sel.edge_count(),
            });
        }
        if params.record_m_trace {
            m_trace.push(bandits.all_m_values().to_vec());
        }
        log::debug!("trial {trials}: length {len}, best {best_len}");
        if bks.is_some_and(|b| best_len <= b) {
            break;
        }
    }

    let best_tour = best.expect("at least one trial");
    Ok(RunResult {
        seed,
        best_length: best_tour.length(),
        reached_bks: bks.map(|b| best_tour.length() <= b),
        best_tour,
        trials_used: trials,
        wall_time: start.elapsed().as_secs_f64(),
        lower_bound: prep.lower_bound,
        counters: bandits.counters().clone(),
        trace,
        m_trace,
    })
}

/// Iterated descent used when a trial does not beat the incumbent: kick
/// the trial tour with a double bridge, re-descend from the touched cities
/// and keep strict improvements. The result is certified once at the end.
fn kick_descent(
    inst: &Instance,
    mut tour: Tour,
    sel: &SelectedCandidates,
    lk: LkConfig,
    params: &SolverParams,
    rng: &mut ChaCha8Rng,
) -> Tour {
    let quick = LkConfig { certify: false, ..lk };
    let mut improved = false;
    for _ in 0..params.kicks {
        let mut kicked = double_bridge_local(inst, &tour, params.kick_segment, rng).expect("n >= 8");
        let touched: Vec<usize> = (0..kicked.n())
            .map(|k| kicked.city_at(k))
            .filter(|&c| !tour.has_edge(c, kicked.next(c)) || !tour.has_edge(c, kicked.prev(c)))
            .collect();
        lin_kernighan_with(inst, &mut kicked, sel, quick, Some(&touched), None);
        if kicked.length() < tour.length() {
            tour = kicked;
            improved = true;
        }
    }
    if improved {
        lin_kernighan_with(inst, &mut tour, sel, lk, Some(&[]), None);
    }
    tour
}

/// Seed of run `k` in a batch.
pub fn run_seed(base: u64, k: usize) -> u64 {
    base.wrapping_add(k as u64)
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchResult {
    pub runs: Vec<RunResult>,
    pub lower_bound: i64,
    pub preprocessing_time: f64,
}

impl BatchResult {
    pub fn best(&self) -> i64 {
        self.runs.iter().map(|r| r.best_length).min().unwrap_or(i64::MAX)
    }

    pub fn average(&self) -> f64 {
        self.runs.iter().map(|r| r.best_length as f64).sum::<f64>() / self.runs.len() as f64
    }

    pub fn mean_trials(&self) -> f64 {
        self.runs.iter().map(|r| r.trials_used as f64).sum::<f64>() / self.runs.len() as f64
    }

    pub fn mean_time(&self) -> f64 {
        self.runs.iter().map(|r| r.wall_time).sum::<f64>() / self.runs.len() as f64
    }

    /// Runs that reached the best known length.
    pub fn successes(&self) -> usize {
        self.runs.iter().filter(|r| r.reached_bks == Some(true)).count()
    }
}

/// Independent runs with seeds `seed, seed + 1, ...`, executed in parallel.
/// Results come back in seed order regardless of scheduling.
pub fn run_batch(
    inst: &Instance,
    params: &SolverParams,
    runs: usize,
    bks: Option<i64>,
) -> Result<BatchResult, SolverError> {
    if runs == 0 {
        return Err(SolverError::Parameter("runs must be at least 1".into()));
    }
    let prep = prepare(inst, params)?;
    let runs = (0..runs)
        .into_par_iter()
        .map(|k| solve_prepared(inst, &prep, params, bks, run_seed(params.seed, k)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BatchResult {
        runs,
        lower_bound: prep.lower_bound,
        preprocessing_time: prep.time.as_secs_f64(),
    })
}
