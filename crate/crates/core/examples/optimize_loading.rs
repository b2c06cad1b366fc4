//! Phase II: keep the routes of a greedy solution and recompute optimal
//! loading instructions with the integer program. On small cases the result
//! is cross-checked against exhaustive enumeration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ssbrp::construction::{construct_solution, ConstructionParams};
use ssbrp::generator::{generate_instance, GeneratorConfig};
use ssbrp::loading::{
    brute_force_loading, build_model, optimal_moves, reoptimize_solution, solve_exact, LoadingOptions,
    RouteSkeleton,
};
use ssbrp::{Depot, Instance, Node, Route, Scoring, Station, StationId, TravelMatrix, Vehicle, VehicleId};

fn main() -> ssbrp::Result<()> {
    let config = GeneratorConfig {
        station_count: 8,
        vehicle_capacity: 6,
        time_budget_min: 90.0,
        ..GeneratorConfig::wien(8, 11)
    };
    let instance = generate_instance(&config)?;
    let scoring = Scoring::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let greedy = construct_solution(&instance, &ConstructionParams::default(), &scoring, &mut rng);

    let skeletons = RouteSkeleton::from_routes(&instance, &greedy.routes)?;
    let model = build_model(&instance, &skeletons, LoadingOptions::default())?;
    println!("{} variables, {} constraints", model.variables.len(), model.constraints.len());
    if std::env::args().any(|a| a == "--dump") {
        print!("{}", model.to_algebraic());
    }

    let (_, exact) = optimal_moves(&model)?;
    println!("integer program: {} ({} nodes)", exact.objective, exact.nodes);

    let better = reoptimize_solution(&instance, &greedy, LoadingOptions::default(), &scoring)?;
    println!("greedy    total {:.4}", greedy.objective.total);
    println!("optimized total {:.4}", better.objective.total);

    // Two vehicles sharing station s2, small enough to enumerate.
    let tiny = tiny_instance()?;
    let routes = vec![
        Route { vehicle: VehicleId(1), visits: [0, 1, 2, 0].map(Node).to_vec() },
        Route { vehicle: VehicleId(2), visits: [0, 3, 2, 4, 0].map(Node).to_vec() },
    ];
    let model = build_model(&tiny, &RouteSkeleton::from_routes(&tiny, &routes)?, LoadingOptions::default())?;
    let exact = solve_exact(&model)?;
    let oracle = brute_force_loading(&tiny, &routes, false)?;
    println!("tiny: integer program {}, enumeration {}", exact.objective, oracle.objective);
    assert_eq!(exact.objective, oracle.objective);
    Ok(())
}

fn tiny_instance() -> ssbrp::Result<Instance> {
    let station = |id, p, a, q| Station {
        id: StationId(id),
        capacity: 10,
        initial_operative: p,
        initial_damaged: a,
        target: q,
        weight: 1.0,
    };
    let rows = (0..5)
        .map(|u| (0..5).map(|v| if u == v { 0.0 } else { 10.0 }).collect())
        .collect();
    Instance::new(
        vec![station(1, 6, 1, 2), station(2, 1, 2, 5), station(3, 5, 0, 3), station(4, 0, 1, 1)],
        Depot { initial_operative: 2, capacity: None },
        TravelMatrix::from_rows(rows)?,
        vec![Vehicle { id: VehicleId(1), capacity: 4 }, Vehicle { id: VehicleId(2), capacity: 3 }],
        120.0,
        true,
    )
}
