//! Multi-start driver: construct, reoptimize the loading, keep the best.
//!
//! A non-improvement counter starts at one, resets to one on every
//! improvement and increments otherwise; the run stops once it reaches
//! `max_iter`. Iteration `i` draws from its own ChaCha stream `(seed, i)`, so
//! the outcome does not depend on how iterations are spread over threads.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::construction::{construct_solution, ConstructionParams};
use crate::error::{Error, Result};
use crate::loading::{reoptimize_solution, LoadingOptions};
use crate::model::{Instance, ObjectiveBreakdown, Scoring, Solution};

const IMPROVEMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub max_iter: usize,
    pub master_seed: u64,
    pub scoring: Scoring,
    pub construction: ConstructionParams,
    pub loading: LoadingOptions,
    pub parallelism: usize,
    pub wall_clock_cap: Option<Duration>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_iter: 500,
            master_seed: 1,
            scoring: Scoring::default(),
            construction: ConstructionParams::default(),
            loading: LoadingOptions::default(),
            parallelism: 1,
            wall_clock_cap: None,
        }
    }
}

impl RunConfig {
    pub fn check(&self) -> Result<()> {
        if self.max_iter < 2 {
            return Err(Error::Config(format!("max_iter must be at least 2, got {}", self.max_iter)));
        }
        if self.parallelism == 0 {
            return Err(Error::Config("parallelism must be at least 1".into()));
        }
        self.construction.check()?;
        self.scoring.weights.check()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimings {
    pub construction: Duration,
    pub loading: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub best: Solution,
    pub best_objective: ObjectiveBreakdown,
    /// 1-based iteration that produced `best`.
    pub iteration_of_best: usize,
    pub total_iterations: usize,
    /// Every accepted incumbent as `(iteration, total)`.
    pub trace: Vec<(usize, f64)>,
    pub timings: PhaseTimings,
    pub hit_time_cap: bool,
}

impl RunReport {
    /// Equality ignoring wall-clock fields.
    pub fn same_outcome(&self, other: &RunReport) -> bool {
        self.best == other.best
            && self.best_objective == other.best_objective
            && self.iteration_of_best == other.iteration_of_best
            && self.total_iterations == other.total_iterations
            && self.trace == other.trace
            && self.hit_time_cap == other.hit_time_cap
    }
}

/// Strict improvement of `candidate` over `incumbent`; no incumbent is `+inf`.
pub fn is_better(candidate: &Solution, incumbent: Option<&Solution>) -> bool {
    match incumbent {
        None => true,
        Some(b) => candidate.objective.total < b.objective.total - IMPROVEMENT_TOL,
    }
}

/// RNG for iteration `iteration` of a run seeded with `seed`.
pub fn iteration_rng(seed: u64, iteration: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration as u64);
    rng
}

struct Candidate {
    solution: Solution,
    construction: Duration,
    loading: Duration,
}

fn one_iteration(instance: &Instance, config: &RunConfig, iteration: usize) -> Result<Candidate> {
    let mut rng = iteration_rng(config.master_seed, iteration);
    let t0 = Instant::now();
    let initial = construct_solution(instance, &config.construction, &config.scoring, &mut rng);
    let t1 = Instant::now();
    let solution = reoptimize_solution(instance, &initial, config.loading, &config.scoring)?;
    Ok(Candidate {
        solution,
        construction: t1 - t0,
        loading: t1.elapsed(),
    })
}

pub fn run(instance: &Instance, config: &RunConfig) -> Result<RunReport> {
    config.check()?;
    let start = Instant::now();
    let pool = if config.parallelism > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(config.parallelism)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?,
        )
    } else {
        None
    };
    let batch = if config.parallelism > 1 { config.parallelism * 2 } else { 1 };

    let mut best: Option<Solution> = None;
    let mut iteration_of_best = 0;
    let mut trace = Vec::new();
    let mut counter = 1usize;
    let mut timings = PhaseTimings::default();
    let mut next = 1usize;
    let mut total_iterations = 0;
    let mut hit_time_cap = false;

    'outer: loop {
        let ids: Vec<usize> = (next..next + batch).collect();
        next += batch;
        let results: Vec<Result<Candidate>> = match &pool {
            Some(pool) => pool.install(|| ids.par_iter().map(|&i| one_iteration(instance, config, i)).collect()),
            None => ids.iter().map(|&i| one_iteration(instance, config, i)).collect(),
        };
        for (iteration, result) in ids.into_iter().zip(results) {
            let cand = result?;
            timings.construction += cand.construction;
            timings.loading += cand.loading;
            total_iterations = iteration;
            if is_better(&cand.solution, best.as_ref()) {
                trace.push((iteration, cand.solution.objective.total));
                best = Some(cand.solution);
                iteration_of_best = iteration;
                counter = 1;
            } else {
                counter += 1;
            }
            if counter >= config.max_iter {
                break 'outer;
            }
        }
        if let Some(cap) = config.wall_clock_cap {
            if start.elapsed() >= cap {
                hit_time_cap = true;
                break;
            }
        }
    }

    let best = best.expect("at least one iteration ran");
    timings.total = start.elapsed();
    Ok(RunReport {
        best_objective: best.objective,
        best,
        iteration_of_best,
        total_iterations,
        trace,
        timings,
        hit_time_cap,
    })
}
