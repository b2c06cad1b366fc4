//! Write a solution document, read it back, then break it on purpose.

use ssbrp::generator::{generate_instance, GeneratorConfig};
use ssbrp::io::{parse_solution, write_solution, SolutionDocument};
use ssbrp::matheuristic::{run, RunConfig};
use ssbrp::{validate_solution, Error};

fn main() -> ssbrp::Result<()> {
    let instance = generate_instance(&GeneratorConfig::wien(15, 4))?;
    let report = run(&instance, &RunConfig { max_iter: 30, ..RunConfig::default() })?;
    let text = write_solution(&report.best, Some(1), None);

    let parsed = parse_solution(&text, &instance)?;
    println!("round trip ok, total {:.6}", parsed.solution.objective.total);

    let mut doc: SolutionDocument = serde_json::from_str(&text)?;
    let Some(route) = doc.routes.iter_mut().find(|r| r.moves.len() > 2) else {
        println!("best solution is empty, nothing to break");
        return Ok(());
    };
    route.moves[1].operative += 100;
    let (routes, plans) = doc.routes_and_plans();
    for v in validate_solution(&instance, &routes, &plans) {
        println!("  {v}");
    }
    let broken = serde_json::to_string(&doc)?;
    assert!(matches!(parse_solution(&broken, &instance), Err(Error::Infeasible(_))));
    Ok(())
}
