//! (θ, μ) parameter sweeps.
//!
//! Every cell of the grid runs the matheuristic single-threaded on each
//! instance with each seed. Cells may be spread over worker threads; rows
//! always come back ordered by family label, then θ, then μ.
//!
//! CSV columns, in order:
//!
//! | column        | meaning                                              |
//! |---------------|------------------------------------------------------|
//! | `family`      | instance family label                                |
//! | `theta`, `mu` | construction parameters of the cell                  |
//! | `of_mean`     | mean best objective total over successful runs       |
//! | `of_best`     | smallest best objective total                        |
//! | `iter_mean`   | mean iteration at which the best solution was found  |
//! | `cpu_mean_s`  | mean wall-clock seconds per run (one worker per run) |
//! | `n_instances` | instances in the family                              |
//! | `n_seeds`     | seeds per instance                                   |
//! | `of_std`      | population standard deviation of the totals          |
//! | `n_failed`    | runs that returned an error                          |
//!
//! Aggregates over zero successful runs are `NaN`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::ConstructionParams;
use crate::error::{Error, Result};
use crate::loading::LoadingOptions;
use crate::matheuristic::{run, RunConfig};
use crate::model::{Instance, Scoring};

pub const DEFAULT_THETAS: [f64; 3] = [0.3, 0.5, 0.8];
pub const DEFAULT_MUS: [f64; 3] = [1.0, 1.5, 2.0];

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub thetas: Vec<f64>,
    pub mus: Vec<f64>,
    /// `(family label, instance)` pairs.
    pub instances: Vec<(String, Instance)>,
    pub seeds: Vec<u64>,
    pub max_iter: usize,
    pub scoring: Scoring,
    pub loading: LoadingOptions,
    pub workers: usize,
}

impl SweepSpec {
    pub fn new(instances: Vec<(String, Instance)>) -> Self {
        SweepSpec {
            thetas: DEFAULT_THETAS.to_vec(),
            mus: DEFAULT_MUS.to_vec(),
            instances,
            seeds: vec![1],
            max_iter: 500,
            scoring: Scoring::default(),
            loading: LoadingOptions::default(),
            workers: 1,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.thetas.is_empty() || self.mus.is_empty() {
            return Err(Error::Config("sweep grids must be non-empty".into()));
        }
        if self.instances.is_empty() {
            return Err(Error::Config("sweep needs at least one instance".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("sweep needs at least one seed".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        for &theta in &self.thetas {
            for &mu in &self.mus {
                ConstructionParams::new(theta, mu)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: String,
    pub theta: f64,
    pub mu: f64,
    pub of_mean: f64,
    pub of_best: f64,
    pub iter_mean: f64,
    pub cpu_mean_s: f64,
    pub n_instances: usize,
    pub n_seeds: usize,
    pub of_std: f64,
    pub n_failed: usize,
}

impl SweepRow {
    /// Equality ignoring the timing column.
    pub fn same_outcome(&self, other: &SweepRow) -> bool {
        let eq = |a: f64, b: f64| a == b || (a.is_nan() && b.is_nan());
        self.family == other.family
            && self.theta == other.theta
            && self.mu == other.mu
            && eq(self.of_mean, other.of_mean)
            && eq(self.of_best, other.of_best)
            && eq(self.iter_mean, other.iter_mean)
            && self.n_instances == other.n_instances
            && self.n_seeds == other.n_seeds
            && eq(self.of_std, other.of_std)
            && self.n_failed == other.n_failed
    }
}

struct Outcome {
    total: f64,
    iteration_of_best: usize,
    seconds: f64,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.check()?;
    let mut families: BTreeMap<&str, Vec<&Instance>> = BTreeMap::new();
    for (label, inst) in &spec.instances {
        families.entry(label.as_str()).or_default().push(inst);
    }

    let mut cells = Vec::new();
    for (&family, insts) in &families {
        for &theta in &spec.thetas {
            for &mu in &spec.mus {
                cells.push((family, insts, theta, mu));
            }
        }
    }

    let run_cell = |&(family, insts, theta, mu): &(&str, &Vec<&Instance>, f64, f64)| {
        let mut outcomes = Vec::new();
        let mut failed = 0;
        for inst in insts.iter() {
            for &seed in &spec.seeds {
                let config = RunConfig {
                    max_iter: spec.max_iter,
                    master_seed: seed,
                    scoring: spec.scoring,
                    construction: ConstructionParams { theta, mu },
                    loading: spec.loading,
                    parallelism: 1,
                    wall_clock_cap: None,
                };
                match run(inst, &config) {
                    Ok(r) => outcomes.push(Outcome {
                        total: r.best_objective.total,
                        iteration_of_best: r.iteration_of_best,
                        seconds: r.timings.total.as_secs_f64(),
                    }),
                    Err(_) => failed += 1,
                }
            }
        }
        summarize(family, theta, mu, insts.len(), spec.seeds.len(), &outcomes, failed)
    };

    let rows = if spec.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.workers)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        pool.install(|| cells.par_iter().map(run_cell).collect())
    } else {
        cells.iter().map(run_cell).collect()
    };
    Ok(rows)
}

fn summarize(
    family: &str,
    theta: f64,
    mu: f64,
    n_instances: usize,
    n_seeds: usize,
    outcomes: &[Outcome],
    n_failed: usize,
) -> SweepRow {
    let n = outcomes.len() as f64;
    let mean = |f: &dyn Fn(&Outcome) -> f64| outcomes.iter().map(f).sum::<f64>() / n;
    let of_mean = mean(&|o| o.total);
    let of_std = (mean(&|o| (o.total - of_mean).powi(2))).sqrt();
    SweepRow {
        family: family.to_string(),
        theta,
        mu,
        of_mean,
        of_best: outcomes.iter().map(|o| o.total).fold(f64::NAN, f64::min),
        iter_mean: mean(&|o| o.iteration_of_best as f64),
        cpu_mean_s: mean(&|o| o.seconds),
        n_instances,
        n_seeds,
        of_std,
        n_failed,
    }
}

pub fn write_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Config(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_json(rows: &[SweepRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate_instance, GeneratorConfig};

    fn small(seed: u64) -> Instance {
        let cfg = GeneratorConfig { station_count: 6, ..GeneratorConfig::wien(6, seed) };
        generate_instance(&cfg).unwrap()
    }

    #[test]
    fn default_grid_has_nine_rows_per_family() {
        let mut spec = SweepSpec::new(vec![("b".into(), small(1)), ("a".into(), small(2))]);
        spec.max_iter = 3;
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 18);
        assert!(rows[..9].iter().all(|r| r.family == "a"));
        assert_eq!((rows[0].theta, rows[0].mu), (0.3, 1.0));
        assert_eq!((rows[1].theta, rows[1].mu), (0.3, 1.5));
        assert_eq!((rows[8].theta, rows[8].mu), (0.8, 2.0));
    }

    #[test]
    fn identical_seeds_give_zero_spread() {
        let mut spec = SweepSpec::new(vec![("x".into(), small(3))]);
        spec.thetas = vec![0.5];
        spec.mus = vec![1.5];
        spec.seeds = vec![9, 9];
        spec.max_iter = 4;
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows[0].of_std, 0.0);
        assert_eq!(rows[0].of_mean, rows[0].of_best);
    }

    #[test]
    fn csv_header() {
        let mut spec = SweepSpec::new(vec![("x".into(), small(3))]);
        spec.thetas = vec![0.5];
        spec.mus = vec![1.5];
        spec.max_iter = 2;
        let csv = write_csv(&run_sweep(&spec).unwrap()).unwrap();
        assert_eq!(
            csv.lines().next().unwrap(),
            "family,theta,mu,of_mean,of_best,iter_mean,cpu_mean_s,n_instances,n_seeds,of_std,n_failed"
        );
    }

    #[test]
    fn empty_grid_is_rejected() {
        let mut spec = SweepSpec::new(vec![("x".into(), small(3))]);
        spec.mus.clear();
        assert!(run_sweep(&spec).is_err());
    }
}
