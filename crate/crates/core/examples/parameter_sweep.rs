//! A reduced (θ, μ) sweep over both generated families, written as CSV.

use ssbrp::bench::{run_sweep, write_csv, SweepSpec};
use ssbrp::generator::{generate_instance, GeneratorConfig};

fn main() -> ssbrp::Result<()> {
    let mut instances = Vec::new();
    for seed in 1..=2 {
        instances.push(("palma".to_string(), generate_instance(&GeneratorConfig::palma(seed))?));
        instances.push(("wien".to_string(), generate_instance(&GeneratorConfig::wien(30, seed))?));
    }
    let mut spec = SweepSpec::new(instances);
    spec.seeds = vec![1, 2];
    spec.max_iter = 50;
    spec.workers = std::thread::available_parallelism().map_or(1, |n| n.get());

    let rows = run_sweep(&spec)?;
    print!("{}", write_csv(&rows)?);
    Ok(())
}
