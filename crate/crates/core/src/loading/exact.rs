//! Depth-first branch and bound over the integer moves, bounded by the
//! linear relaxation.
//!
//! Branching takes the first fractional variable in model order (vehicle,
//! then visit) and explores the child that rounds away from zero first. The
//! incumbent starts at the all-zero assignment, which is always feasible, and
//! is only replaced by strictly better assignments.

use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Solution as LpSolution};

use super::model::{LoadingModel, Sense};
use crate::error::{Error, Result};

const INT_TOL: f64 = 1e-6;
const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    /// One integer value per model variable.
    pub values: Vec<i64>,
    pub objective: f64,
    pub proven_optimal: bool,
    pub nodes: usize,
}

/// Search limits; the default explores the whole tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: usize::MAX }
    }
}

pub fn solve_exact(model: &LoadingModel) -> Result<ExactSolution> {
    solve_exact_with(model, SearchLimits::default())
}

pub fn solve_exact_with(model: &LoadingModel, limits: SearchLimits) -> Result<ExactSolution> {
    let zero = vec![0i64; model.variables.len()];
    debug_assert!(model.is_feasible(&zero), "all-zero loading must be feasible");
    let mut best = ExactSolution {
        objective: model.objective(&zero),
        values: zero,
        proven_optimal: true,
        nodes: 0,
    };
    if model.variables.is_empty() {
        return Ok(best);
    }

    let (problem, vars) = relaxation(model);
    let root = match problem.solve() {
        Ok(outcome) => outcome.into_solution().map_err(|_| Error::Lp("root relaxation interrupted".into()))?,
        Err(microlp::Error::Infeasible) => {
            return Err(Error::Lp("relaxation infeasible although the zero loading is feasible".into()))
        }
        Err(e) => return Err(Error::Lp(e.to_string())),
    };

    let mut stack: Vec<LpSolution> = vec![root];
    while let Some(node) = stack.pop() {
        best.nodes += 1;
        if best.nodes > limits.max_nodes {
            best.proven_optimal = false;
            break;
        }
        let bound = node.objective() + model.constant;
        if pruned(model, bound, best.objective) {
            continue;
        }
        let raw: Vec<f64> = vars.iter().map(|&v| node.var_value_raw(v)).collect();
        match raw.iter().position(|x| (x - x.round()).abs() > INT_TOL) {
            None => {
                let values: Vec<i64> = raw.iter().map(|x| x.round() as i64).collect();
                if !model.is_feasible(&values) {
                    return Err(Error::Lp("relaxation returned an infeasible integral point".into()));
                }
                let objective = model.objective(&values);
                if objective < best.objective - BOUND_TOL {
                    best.objective = objective;
                    best.values = values;
                }
            }
            Some(j) => {
                let value = raw[j];
                let down = value.floor();
                let up = value.ceil();
                let var = vars[j];
                let child = |sol: LpSolution, op: ComparisonOp, rhs: f64| -> Result<Option<LpSolution>> {
                    let mut expr = LinearExpr::empty();
                    expr.add(var, 1.0);
                    match sol.add_constraint(expr, op, rhs) {
                        Ok(outcome) => Ok(outcome.into_solution().ok()),
                        Err(microlp::Error::Infeasible) => Ok(None),
                        Err(e) => Err(Error::Lp(e.to_string())),
                    }
                };
                let down_child = child(node.clone(), ComparisonOp::Le, down)?;
                let up_child = child(node, ComparisonOp::Ge, up)?;
                // Pushed last is explored first: prefer the larger magnitude.
                let (first, second) = if value > 0.0 { (up_child, down_child) } else { (down_child, up_child) };
                stack.extend(second);
                stack.extend(first);
            }
        }
    }
    Ok(best)
}

fn pruned(model: &LoadingModel, bound: f64, incumbent: f64) -> bool {
    if model.integral_costs {
        (bound - INT_TOL).ceil() >= incumbent - BOUND_TOL
    } else {
        bound >= incumbent - BOUND_TOL
    }
}

fn relaxation(model: &LoadingModel) -> (Problem, Vec<microlp::Variable>) {
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<microlp::Variable> = model
        .variables
        .iter()
        .map(|v| problem.add_var(v.cost, (v.lower as f64, v.upper as f64)))
        .collect();
    for c in &model.constraints {
        let mut expr = LinearExpr::empty();
        for &(v, coef) in &c.terms {
            expr.add(vars[v], coef as f64);
        }
        let op = match c.sense {
            Sense::Le => ComparisonOp::Le,
            Sense::Ge => ComparisonOp::Ge,
            Sense::Eq => ComparisonOp::Eq,
        };
        problem.add_constraint(expr, op, c.rhs as f64);
    }
    (problem, vars)
}
