//! Phase II: exact loading instructions for fixed routes.

mod brute;
mod exact;
mod model;

pub use brute::{brute_force_loading, BruteForceResult, MAX_CAPACITY, MAX_STATION_COUNT, MAX_VISITS};
pub use exact::{solve_exact, solve_exact_with, ExactSolution, SearchLimits};
pub use model::{
    build_model, Constraint, LoadingModel, LoadingOptions, RouteSkeleton, RouteVars, Sense, VarKind,
    Variable,
};

use crate::error::Result;
use crate::model::{Instance, LoadingPlan, Move, Scoring, Solution};

/// Optimal loading for `model`, mapped back to one move list per skeleton.
pub fn optimal_moves(model: &LoadingModel) -> Result<(Vec<Vec<Move>>, ExactSolution)> {
    let exact = solve_exact(model)?;
    let moves = model
        .route_vars
        .iter()
        .map(|rv| {
            rv.operative
                .iter()
                .zip(&rv.damaged)
                .map(|(x, y)| {
                    Move::new(x.map_or(0, |v| exact.values[v]), y.map_or(0, |v| exact.values[v]))
                })
                .collect()
        })
        .collect();
    Ok((moves, exact))
}

/// Replaces the loading plans of `solution` with optimal ones for its routes.
///
/// Routes and route times are left untouched.
pub fn reoptimize_solution(
    instance: &Instance,
    solution: &Solution,
    options: LoadingOptions,
    scoring: &Scoring,
) -> Result<Solution> {
    let skeletons = RouteSkeleton::from_routes(instance, &solution.routes)?;
    if skeletons.is_empty() {
        return Ok(solution.clone());
    }
    let model = build_model(instance, &skeletons, options)?;
    let (mut moves, _) = optimal_moves(&model)?;
    moves.reverse();
    let plans = solution
        .routes
        .iter()
        .map(|r| {
            if r.is_empty() {
                LoadingPlan::empty(r.vehicle)
            } else {
                LoadingPlan { vehicle: r.vehicle, moves: moves.pop().expect("one move list per route") }
            }
        })
        .collect();
    Solution::evaluate(instance, solution.routes.clone(), plans, scoring)
}
