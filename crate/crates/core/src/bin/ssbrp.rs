use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use ssbrp::bench::{run_sweep, write_csv, write_json, SweepSpec};
use ssbrp::construction::ConstructionParams;
use ssbrp::generator::{generate_instance, Family, GeneratorConfig};
use ssbrp::io::{parse_instance, parse_solution, write_instance, write_solution, ParamsDoc};
use ssbrp::loading::LoadingOptions;
use ssbrp::matheuristic::{run, RunConfig};
use ssbrp::{DenominatorMode, Error, Instance, ObjectiveWeights, Scoring};

const OBJECTIVE_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "ssbrp", version, about = "Bike-sharing repositioning with operative and damaged bikes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the matheuristic on one instance.
    Solve(SolveArgs),
    /// Run the (theta, mu) parameter grid and write a report.
    Sweep(SweepArgs),
    /// Check a solution document against an instance.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Write a synthetic instance.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct ScoringArgs {
    #[arg(long, default_value_t = 1.0)]
    gamma_d: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma_a: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma_t: f64,
    /// Weight damaged bikes in the normalising denominator.
    #[arg(long)]
    weighted_damaged_denominator: bool,
    /// Use station weights in the loading model's cost coefficients.
    #[arg(long)]
    weighted_phase2: bool,
}

impl ScoringArgs {
    fn scoring(&self) -> Result<Scoring, Error> {
        Ok(Scoring {
            weights: ObjectiveWeights::new(self.gamma_d, self.gamma_a, self.gamma_t)?,
            denominator: if self.weighted_damaged_denominator {
                DenominatorMode::WeightedDamaged
            } else {
                DenominatorMode::Literal
            },
        })
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = ConstructionParams::default().theta)]
    theta: f64,
    #[arg(long, default_value_t = ConstructionParams::default().mu)]
    mu: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Stop after this many seconds even if the counter has not run out.
    #[arg(long)]
    time_cap_s: Option<f64>,
    #[command(flatten)]
    scoring: ScoringArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Instance files, optionally labelled as `family=path`.
    #[arg(long)]
    instance: Vec<String>,
    /// Families to generate when no instance file is given.
    #[arg(long)]
    family: Vec<Family>,
    /// Generated instances per family.
    #[arg(long, default_value_t = 1)]
    instances_per_family: usize,
    #[arg(long, value_delimiter = ',')]
    theta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    mu: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// CSV output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[command(flatten)]
    scoring: ScoringArgs,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value = "palma")]
    family: Family,
    #[arg(long)]
    stations: Option<usize>,
    #[arg(long)]
    vehicles: Option<usize>,
    #[arg(long)]
    capacity: Option<i64>,
    #[arg(long)]
    time_budget_min: Option<f64>,
    #[arg(long)]
    depot_stock: Option<i64>,
    #[arg(long)]
    damaged_fraction: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl GenerateArgs {
    fn config(&self) -> GeneratorConfig {
        let mut cfg = GeneratorConfig::for_family(self.family, self.seed);
        if let Some(n) = self.stations {
            cfg.station_count = n;
        }
        if let Some(n) = self.vehicles {
            cfg.vehicle_count = n;
        }
        if let Some(k) = self.capacity {
            cfg.vehicle_capacity = k;
        }
        if let Some(t) = self.time_budget_min {
            cfg.time_budget_min = t;
        }
        if let Some(p) = self.depot_stock {
            cfg.depot_stock = p;
        }
        if let Some(f) = self.damaged_fraction {
            cfg.damaged_fraction = f;
        }
        cfg
    }
}

fn read_instance(path: &Path) -> Result<Instance, Error> {
    parse_instance(&std::fs::read_to_string(path)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn solve(args: SolveArgs) -> Result<ExitCode, Error> {
    let instance = read_instance(&args.instance)?;
    let scoring = args.scoring.scoring()?;
    let config = RunConfig {
        max_iter: args.max_iter,
        master_seed: args.seed,
        scoring,
        construction: ConstructionParams::new(args.theta, args.mu)?,
        loading: LoadingOptions { weighted: args.scoring.weighted_phase2 },
        parallelism: args.workers,
        wall_clock_cap: args.time_cap_s.map(std::time::Duration::from_secs_f64),
    };
    let report = run(&instance, &config)?;
    let params = ParamsDoc {
        theta: args.theta,
        mu: args.mu,
        max_iter: args.max_iter,
        gamma_d: args.scoring.gamma_d,
        gamma_a: args.scoring.gamma_a,
        gamma_t: args.scoring.gamma_t,
        weighted_damaged_denominator: args.scoring.weighted_damaged_denominator,
    };
    let text = write_solution(&report.best, Some(args.seed), Some(params));
    if let Some(out) = &args.out {
        std::fs::write(out, text)?;
    }
    let o = report.best_objective;
    eprintln!("imbalance         {:.6}", o.imbalance_term);
    eprintln!("damaged           {:.6}", o.damaged_term);
    eprintln!("time              {:.6}", o.time_term);
    eprintln!("total             {:.6}", o.total);
    eprintln!("iteration of best {} of {}", report.iteration_of_best, report.total_iterations);
    eprintln!("elapsed           {:.3} s", report.timings.total.as_secs_f64());
    if report.hit_time_cap {
        eprintln!("stopped by the time cap");
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep(args: SweepArgs) -> Result<ExitCode, Error> {
    let mut instances = Vec::new();
    for entry in &args.instance {
        let (label, path) = entry.split_once('=').unwrap_or(("custom", entry.as_str()));
        instances.push((label.to_string(), read_instance(Path::new(path))?));
    }
    if instances.is_empty() {
        let families = if args.family.is_empty() { vec![Family::Palma, Family::Wien] } else { args.family.clone() };
        for family in families {
            for i in 0..args.instances_per_family as u64 {
                let cfg = GeneratorConfig::for_family(family, args.seed.wrapping_add(i));
                instances.push((family.name().to_string(), generate_instance(&cfg)?));
            }
        }
    }
    let mut spec = SweepSpec::new(instances);
    if !args.theta.is_empty() {
        spec.thetas = args.theta.clone();
    }
    if !args.mu.is_empty() {
        spec.mus = args.mu.clone();
    }
    spec.seeds = (0..args.seeds).map(|i| args.seed.wrapping_add(i)).collect();
    spec.max_iter = args.max_iter;
    spec.scoring = args.scoring.scoring()?;
    spec.loading = LoadingOptions { weighted: args.scoring.weighted_phase2 };
    spec.workers = args.workers;

    let started = Instant::now();
    let rows = run_sweep(&spec)?;
    emit(args.out.as_deref(), &write_csv(&rows)?)?;
    if let Some(json) = &args.json {
        std::fs::write(json, write_json(&rows))?;
    }
    let failed: usize = rows.iter().map(|r| r.n_failed).sum();
    eprintln!("{} rows in {:.1} s, {failed} failed runs", rows.len(), started.elapsed().as_secs_f64());
    Ok(if failed > 0 { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn validate(instance: &Path, solution: &Path) -> Result<ExitCode, Error> {
    let instance = read_instance(instance)?;
    let parsed = match parse_solution(&std::fs::read_to_string(solution)?, &instance) {
        Ok(p) => p,
        Err(Error::Infeasible(violations)) => {
            for v in &violations {
                println!("{v}");
            }
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Err(e),
    };
    let (stored, fresh) = (parsed.stored_objective, parsed.solution.objective);
    let pairs = [
        ("imbalance", stored.imbalance_term, fresh.imbalance_term),
        ("damaged", stored.damaged_term, fresh.damaged_term),
        ("time", stored.time_term, fresh.time_term),
        ("total", stored.total, fresh.total),
    ];
    let mut ok = true;
    for (name, s, f) in pairs {
        // NaN counts as a mismatch
        let matches = (s - f).abs() <= OBJECTIVE_TOL;
        if !matches {
            println!("objective mismatch: stored {name} {s} but recomputed {f}");
            ok = false;
        }
    }
    if ok {
        println!("ok: total {:.6}", fresh.total);
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn generate(args: GenerateArgs) -> Result<ExitCode, Error> {
    let instance = generate_instance(&args.config())?;
    emit(args.out.as_deref(), &write_instance(&instance))?;
    let fleet: i64 = instance.fleet().iter().map(|v| v.capacity).sum();
    eprintln!("stations          {}", instance.stations().len());
    eprintln!("total |imbalance| {}", instance.total_imbalance());
    eprintln!("total damaged     {}", instance.total_damaged());
    eprintln!("fleet capacity    {fleet}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a),
        Command::Validate { instance, solution } => validate(&instance, &solution),
        Command::Generate(a) => generate(a),
    };
    match result {
        Ok(code) => code,
        Err(Error::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
