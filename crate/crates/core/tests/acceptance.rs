//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any FAIL.

mod common;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ssbrp::bench::{run_sweep, write_csv, SweepSpec};
use ssbrp::construction::{construct_solution, select_next, select_with_threshold, ConstructionParams};
use ssbrp::generator::{generate_instance, GeneratorConfig};
use ssbrp::loading::{brute_force_loading, build_model, reoptimize_solution, solve_exact, LoadingOptions, RouteSkeleton};
use ssbrp::matheuristic::{run, RunConfig};
use ssbrp::{validate_solution, Node, Scoring, Solution};

type Outcome = Result<String, String>;

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for seed in 1..=200u64 {
        let (inst, routes) = common::oracle_case(seed);
        let sk = RouteSkeleton::from_routes(&inst, &routes).map_err(|e| e.to_string())?;
        let model = build_model(&inst, &sk, LoadingOptions::default()).map_err(|e| e.to_string())?;
        let exact = solve_exact(&model).map_err(|e| e.to_string())?;
        let oracle = brute_force_loading(&inst, &routes, false).map_err(|e| e.to_string())?;
        if exact.objective != oracle.objective {
            mismatches.push((seed, exact.objective, oracle.objective));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if !mismatches.is_empty() {
        return Err(format!("{} mismatches, first {:?}", mismatches.len(), mismatches[0]));
    }
    if secs >= 60.0 {
        return Err(format!("200 cases took {secs:.1} s"));
    }
    Ok(format!("200/200 equal in {secs:.2} s"))
}

/// Criteria 2 and 4 share the fuzz corpus.
fn fuzz_corpus() -> (Outcome, Outcome) {
    let scoring = Scoring::default();
    let mut infeasible = Vec::new();
    let mut worse = Vec::new();
    let mut time_changed = Vec::new();
    for seed in 0..1000u64 {
        let inst = generate_instance(&common::fuzz_config(seed)).expect("fuzz config is valid");
        let theta = [0.3, 0.5, 0.8, 1.0][seed as usize % 4];
        let mu = [1.0, 1.5, 2.0][seed as usize % 3];
        let params = ConstructionParams::new(theta, mu).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let before = construct_solution(&inst, &params, &scoring, &mut rng);
        let after = match reoptimize_solution(&inst, &before, LoadingOptions::default(), &scoring) {
            Ok(s) => s,
            Err(e) => {
                infeasible.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        for (phase, sol) in [("I", &before), ("II", &after)] {
            let v = validate_solution(&inst, &sol.routes, &sol.plans);
            if !v.is_empty() {
                infeasible.push(format!("seed {seed} phase {phase}: {}", v[0]));
            }
        }
        if common::station_numerator(&inst, &after) > common::station_numerator(&inst, &before) {
            worse.push(seed);
        }
        if after.objective.time_term.to_bits() != before.objective.time_term.to_bits() {
            time_changed.push(seed);
        }
    }
    let feas = if infeasible.is_empty() {
        Ok("1000 runs, 2000 solutions, 0 violations".into())
    } else {
        Err(format!("{} failures, first: {}", infeasible.len(), infeasible[0]))
    };
    let dom = if worse.is_empty() && time_changed.is_empty() {
        Ok("1000/1000 runs no worse, time term bit-identical".into())
    } else {
        Err(format!("worse on {:?}, time changed on {:?}", worse, time_changed))
    };
    (feas, dom)
}

fn calibration() -> Outcome {
    let mut checked = 0;
    for seed in 0..500u64 {
        let inst = generate_instance(&common::fuzz_config(seed)).unwrap();
        if inst.total_imbalance() + inst.total_damaged() == 0 {
            continue;
        }
        let total = Solution::empty(&inst, &Scoring::default()).objective.total;
        if (total - 1.0).abs() > 1e-12 {
            return Err(format!("seed {seed}: empty solution scores {total}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} instances at 1.0 within 1e-12"))
}

fn determinism() -> Outcome {
    for seed in 0..6u64 {
        let inst = generate_instance(&common::fuzz_config(100 + seed)).unwrap();
        let cfg = RunConfig { max_iter: 60, master_seed: seed, ..RunConfig::default() };
        let a = run(&inst, &cfg).map_err(|e| e.to_string())?;
        let b = run(&inst, &cfg).map_err(|e| e.to_string())?;
        let c = run(&inst, &RunConfig { parallelism: 4, ..cfg }).map_err(|e| e.to_string())?;
        if !a.same_outcome(&b) {
            return Err(format!("seed {seed}: repeat differs"));
        }
        if !a.same_outcome(&c) {
            return Err(format!("seed {seed}: parallelism 4 differs"));
        }
        if !a.trace.windows(2).all(|w| w[1].1 < w[0].1) {
            return Err(format!("seed {seed}: trace not strictly decreasing"));
        }
    }
    Ok("6 instances identical across repeats and parallelism 1/4, traces strictly decreasing".into())
}

fn toy_optimality() -> Outcome {
    let mut solved = 0;
    let mut missed = Vec::new();
    for i in 0..20u64 {
        let inst = common::toy_instance(i);
        let report = run(&inst, &RunConfig { max_iter: 50, master_seed: i, ..RunConfig::default() })
            .map_err(|e| e.to_string())?;
        let o = report.best_objective;
        if o.imbalance_term == 0.0 && o.damaged_term == 0.0 {
            solved += 1;
        } else {
            missed.push(i);
        }
    }
    let msg = format!("{solved}/20 solved to zero imbalance and damage (missed {missed:?})");
    if solved >= 19 { Ok(msg) } else { Err(msg) }
}

fn scale() -> Outcome {
    let palma = generate_instance(&GeneratorConfig { vehicle_count: 3, time_budget_min: 240.0, ..GeneratorConfig::palma(1) })
        .unwrap();
    let wien = generate_instance(&GeneratorConfig {
        vehicle_count: 5,
        time_budget_min: 480.0,
        ..GeneratorConfig::wien(90, 1)
    })
    .unwrap();
    let cfg = RunConfig::default();
    let t0 = Instant::now();
    run(&palma, &cfg).map_err(|e| e.to_string())?;
    let tp = t0.elapsed();
    let t1 = Instant::now();
    run(&wien, &cfg).map_err(|e| e.to_string())?;
    let tw = t1.elapsed();
    let msg = format!("palma 28/3/240 in {:.2} s, wien 90 in {:.2} s", tp.as_secs_f64(), tw.as_secs_f64());
    if tp <= Duration::from_secs(60) && tw <= Duration::from_secs(300) { Ok(msg) } else { Err(msg) }
}

fn selection_statistics() -> Outcome {
    const DRAWS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let scored = [(Node::station(0), 10.0), (Node::station(1), 6.0), (Node::station(2), 2.0)];
    let mut counts = [0usize; 3];
    for _ in 0..DRAWS {
        counts[select_with_threshold(&scored, 0.5, &mut rng).0 - 1] += 1;
    }
    let share: Vec<f64> = counts.iter().map(|&c| c as f64 / DRAWS as f64).collect();
    if (share[0] - 0.5).abs() > 0.02 || (share[1] - 0.5).abs() > 0.02 || share[2] > 0.02 {
        return Err(format!("shares {share:?}"));
    }

    let equal: Vec<(Node, f64)> = (0..5).map(|i| (Node::station(i), 3.0)).collect();
    let mut counts = [0usize; 5];
    for _ in 0..DRAWS {
        counts[select_next(&equal, &mut rng).0 - 1] += 1;
    }
    let expected = DRAWS as f64 / 5.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // chi-squared quantile, 4 degrees of freedom, upper 1 %
    let critical = 13.2767;
    let msg = format!("shares {:.3}/{:.3}/{:.3}, uniform chi2 = {chi2:.2} < {critical}", share[0], share[1], share[2]);
    if chi2 < critical { Ok(msg) } else { Err(msg) }
}

fn sweep_shape() -> Outcome {
    let instances = vec![
        ("palma".to_string(), generate_instance(&GeneratorConfig::palma(1)).unwrap()),
        ("wien".to_string(), generate_instance(&GeneratorConfig::wien(20, 1)).unwrap()),
    ];
    let mut spec = SweepSpec::new(instances);
    spec.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let rows = run_sweep(&spec).map_err(|e| e.to_string())?;
    let csv = write_csv(&rows).map_err(|e| e.to_string())?;
    let header: Vec<&str> = csv.lines().next().unwrap_or("").split(',').collect();
    let documented = ["family", "theta", "mu", "of_mean", "of_best", "iter_mean", "cpu_mean_s", "n_instances", "n_seeds"];
    if header[..documented.len().min(header.len())] != documented {
        return Err(format!("header {header:?}"));
    }
    for family in ["palma", "wien"] {
        let n = rows.iter().filter(|r| r.family == family).count();
        if n != 9 {
            return Err(format!("{family}: {n} rows"));
        }
    }
    Ok("9 rows each for palma and wien, documented columns in order".into())
}

fn main() {
    let (feasibility, dominance) = fuzz_corpus();
    let results = [
        ("1", "phase II oracle equivalence", oracle_equivalence()),
        ("2", "feasibility fuzz", feasibility),
        ("3", "do-nothing calibration", calibration()),
        ("4", "phase II dominance", dominance),
        ("5", "incumbent monotonicity and determinism", determinism()),
        ("6", "toy optimality", toy_optimality()),
        ("7", "scale smoke", scale()),
        ("8", "selection statistics", selection_statistics()),
        ("9", "sweep report shape", sweep_shape()),
    ];
    let mut failed = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  {id}  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {id}  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
