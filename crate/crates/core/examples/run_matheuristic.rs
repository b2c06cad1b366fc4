//! Full multi-start run on a generated instance.
//!
//! ```text
//! cargo run --release --example run_matheuristic -- [instance.json] [workers]
//! ```

use ssbrp::generator::{generate_instance, GeneratorConfig};
use ssbrp::io::parse_instance;
use ssbrp::matheuristic::{run, RunConfig};

fn main() -> ssbrp::Result<()> {
    let mut args = std::env::args().skip(1);
    let instance = match args.next() {
        Some(path) => parse_instance(&std::fs::read_to_string(path)?)?,
        None => generate_instance(&GeneratorConfig { vehicle_count: 3, time_budget_min: 240.0, ..GeneratorConfig::palma(1) })?,
    };
    let workers = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);

    let config = RunConfig { parallelism: workers, ..RunConfig::default() };
    let report = run(&instance, &config)?;

    for (iteration, total) in &report.trace {
        println!("iteration {iteration:>5}  total {total:.6}");
    }
    let o = report.best_objective;
    println!("best: imbalance {:.4}, damaged {:.4}, time {:.4}", o.imbalance_term, o.damaged_term, o.time_term);
    println!(
        "{} iterations, construction {:.2?}, loading {:.2?}, wall {:.2?}",
        report.total_iterations, report.timings.construction, report.timings.loading, report.timings.total
    );
    println!("vehicles used: {}", report.best.used_vehicles());
    Ok(())
}
