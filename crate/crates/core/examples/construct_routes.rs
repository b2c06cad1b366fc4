//! Phase I only: build routes with the randomized greedy rule and show the
//! loading instructions it chose along the way.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ssbrp::construction::{construct_solution, ConstructionParams};
use ssbrp::generator::{generate_instance, GeneratorConfig};
use ssbrp::{validate_solution, Scoring};

fn main() -> ssbrp::Result<()> {
    let instance = generate_instance(&GeneratorConfig { station_count: 12, ..GeneratorConfig::palma(3) })?;
    let params = ConstructionParams::new(0.5, 1.5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let solution = construct_solution(&instance, &params, &Scoring::default(), &mut rng);

    for (route, plan) in solution.routes.iter().zip(&solution.plans) {
        println!("vehicle {}", route.vehicle);
        for (node, mv) in route.visits.iter().zip(&plan.moves) {
            // positive = loaded onto the vehicle
            println!("  {node:>4}  operative {:>4}  damaged {:>3}", mv.operative, mv.damaged);
        }
    }
    let o = solution.objective;
    println!(
        "imbalance {:.4}  damaged {:.4}  time {:.4}  total {:.4}",
        o.imbalance_term, o.damaged_term, o.time_term, o.total
    );
    assert!(validate_solution(&instance, &solution.routes, &solution.plans).is_empty());
    Ok(())
}
