//! JSON documents for instances and solutions.
//!
//! Instance document:
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "metric": true,
//!   "time_budget_min": 240.0,
//!   "depot": { "operative": 10 },
//!   "stations": [
//!     { "id": 1, "capacity": 20, "operative": 12, "damaged": 1, "target": 8, "weight": 1.0 }
//!   ],
//!   "vehicles": [ { "id": 1, "capacity": 20 } ],
//!   "travel_min": [[0.0, 7.0], [7.0, 0.0]]
//! }
//! ```
//!
//! `depot.capacity` is optional (absent = unbounded). `travel_min` is the full
//! square matrix with the depot at index 0 and station `i` of the list at
//! index `i + 1`.
//!
//! Solution document: `routes` (one entry per vehicle with `vehicle`, the
//! `visits` as travel-matrix indices and the aligned `moves`), `objective`
//! (`imbalance`, `damaged`, `time`, `total`), and optionally the `seed` and
//! `params` that produced it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    DenominatorMode, Depot, Instance, LoadingPlan, Move, Node, ObjectiveBreakdown, ObjectiveWeights,
    Route, Scoring, Solution, Station, StationId, TravelMatrix, Vehicle, VehicleId,
};
use crate::validate::validate_solution;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub format_version: u32,
    pub metric: bool,
    pub time_budget_min: f64,
    pub depot: DepotDoc,
    pub stations: Vec<StationDoc>,
    pub vehicles: Vec<VehicleDoc>,
    pub travel_min: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DepotDoc {
    pub operative: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationDoc {
    pub id: u32,
    pub capacity: i64,
    pub operative: i64,
    pub damaged: i64,
    pub target: i64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleDoc {
    pub id: u32,
    pub capacity: i64,
}

impl InstanceDocument {
    pub fn from_instance(instance: &Instance) -> Self {
        InstanceDocument {
            format_version: FORMAT_VERSION,
            metric: instance.metric(),
            time_budget_min: instance.time_budget(),
            depot: DepotDoc {
                operative: instance.depot().initial_operative,
                capacity: instance.depot().capacity,
            },
            stations: instance
                .stations()
                .iter()
                .map(|s| StationDoc {
                    id: s.id.0,
                    capacity: s.capacity,
                    operative: s.initial_operative,
                    damaged: s.initial_damaged,
                    target: s.target,
                    weight: s.weight,
                })
                .collect(),
            vehicles: instance
                .fleet()
                .iter()
                .map(|v| VehicleDoc { id: v.id.0, capacity: v.capacity })
                .collect(),
            travel_min: instance.travel().rows(),
        }
    }

    pub fn into_instance(self) -> Result<Instance> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::invalid(
                "format_version",
                format!("unsupported version {} (expected {FORMAT_VERSION})", self.format_version),
            ));
        }
        let stations = self
            .stations
            .into_iter()
            .map(|s| Station {
                id: StationId(s.id),
                capacity: s.capacity,
                initial_operative: s.operative,
                initial_damaged: s.damaged,
                target: s.target,
                weight: s.weight,
            })
            .collect();
        let fleet = self
            .vehicles
            .into_iter()
            .map(|v| Vehicle { id: VehicleId(v.id), capacity: v.capacity })
            .collect();
        Instance::new(
            stations,
            Depot { initial_operative: self.depot.operative, capacity: self.depot.capacity },
            TravelMatrix::from_rows(self.travel_min)?,
            fleet,
            self.time_budget_min,
            self.metric,
        )
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDocument = serde_json::from_str(text)?;
    doc.into_instance()
}

pub fn write_instance(instance: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&InstanceDocument::from_instance(instance))
        .expect("instance documents always serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDocument {
    pub routes: Vec<RouteDoc>,
    pub objective: ObjectiveBreakdown,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: Option<ParamsDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteDoc {
    pub vehicle: u32,
    pub visits: Vec<usize>,
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub theta: f64,
    pub mu: f64,
    pub max_iter: usize,
    pub gamma_d: f64,
    pub gamma_a: f64,
    pub gamma_t: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub weighted_damaged_denominator: bool,
}

impl ParamsDoc {
    /// Scoring rule the parameters describe.
    pub fn scoring(&self) -> Scoring {
        Scoring {
            weights: ObjectiveWeights { gamma_d: self.gamma_d, gamma_a: self.gamma_a, gamma_t: self.gamma_t },
            denominator: if self.weighted_damaged_denominator {
                DenominatorMode::WeightedDamaged
            } else {
                DenominatorMode::Literal
            },
        }
    }
}

impl SolutionDocument {
    pub fn from_solution(solution: &Solution, seed: Option<u64>, params: Option<ParamsDoc>) -> Self {
        SolutionDocument {
            routes: solution
                .routes
                .iter()
                .zip(&solution.plans)
                .map(|(r, p)| RouteDoc {
                    vehicle: r.vehicle.0,
                    visits: r.visits.iter().map(|n| n.0).collect(),
                    moves: p.moves.clone(),
                })
                .collect(),
            objective: solution.objective,
            seed,
            params,
        }
    }

    pub fn routes_and_plans(&self) -> (Vec<Route>, Vec<LoadingPlan>) {
        self.routes
            .iter()
            .map(|r| {
                let vehicle = VehicleId(r.vehicle);
                (
                    Route { vehicle, visits: r.visits.iter().map(|&n| Node(n)).collect() },
                    LoadingPlan { vehicle, moves: r.moves.clone() },
                )
            })
            .unzip()
    }

    /// Scoring rule recorded in `params`, or the default unit weights.
    pub fn scoring(&self) -> Scoring {
        self.params.map(|p| p.scoring()).unwrap_or_default()
    }
}

pub fn write_solution(solution: &Solution, seed: Option<u64>, params: Option<ParamsDoc>) -> String {
    let mut s = serde_json::to_string_pretty(&SolutionDocument::from_solution(solution, seed, params))
        .expect("solution documents always serialize");
    s.push('\n');
    s
}

/// A revalidated solution plus the objective stored in its document.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSolution {
    pub solution: Solution,
    pub stored_objective: ObjectiveBreakdown,
    pub seed: Option<u64>,
    pub params: Option<ParamsDoc>,
}

/// Parses and revalidates a solution document against `instance`.
///
/// Violations are returned as [`Error::Infeasible`]. The objective is
/// recomputed with the scoring rule recorded in the document.
pub fn parse_solution(text: &str, instance: &Instance) -> Result<ParsedSolution> {
    let doc: SolutionDocument = serde_json::from_str(text)?;
    let (routes, plans) = doc.routes_and_plans();
    let violations = validate_solution(instance, &routes, &plans);
    if !violations.is_empty() {
        return Err(Error::Infeasible(violations));
    }
    let solution = Solution::evaluate(instance, routes, plans, &doc.scoring())?;
    Ok(ParsedSolution { solution, stored_objective: doc.objective, seed: doc.seed, params: doc.params })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "format_version": 1,
        "metric": true,
        "time_budget_min": 60,
        "depot": { "operative": 2 },
        "stations": [ { "id": 7, "capacity": 10, "operative": 6, "damaged": 1, "target": 4, "weight": 1 } ],
        "vehicles": [ { "id": 1, "capacity": 5 } ],
        "travel_min": [[0, 5], [5, 0]]
    }"#;

    #[test]
    fn minimal_document() {
        let inst = parse_instance(MINIMAL).unwrap();
        assert_eq!(inst.stations().len(), 1);
        assert_eq!(inst.fleet().len(), 1);
        assert_eq!(inst.depot().capacity, None);
        let again = parse_instance(&write_instance(&inst)).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn capacity_breach_is_rejected() {
        let text = MINIMAL.replace("\"damaged\": 1", "\"damaged\": 5");
        let err = parse_instance(&text).unwrap_err();
        assert!(matches!(err, Error::Invalid { ref path, .. } if path == "stations[0].capacity"), "{err}");
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = MINIMAL.replace("\"metric\": true", "\"metric\": true, \"extra\": 1");
        assert!(matches!(parse_instance(&text), Err(Error::Json(_))));
    }

    #[test]
    fn solution_roundtrip_and_tamper() {
        let inst = parse_instance(MINIMAL).unwrap();
        let v = VehicleId(1);
        let sol = Solution::evaluate(
            &inst,
            vec![Route { vehicle: v, visits: vec![Node(0), Node(1), Node(0)] }],
            vec![LoadingPlan { vehicle: v, moves: vec![Move::NONE, Move::new(2, 1), Move::new(-2, -1)] }],
            &Scoring::default(),
        )
        .unwrap();
        let text = write_solution(&sol, Some(3), None);
        let parsed = parse_solution(&text, &inst).unwrap();
        assert_eq!(parsed.solution, sol);
        assert_eq!(parsed.stored_objective, sol.objective);
        assert_eq!(parsed.seed, Some(3));

        let empty = Solution::empty(&inst, &Scoring::default());
        let parsed = parse_solution(&write_solution(&empty, None, None), &inst).unwrap();
        assert_eq!(parsed.solution, empty);

        let tampered = text.replace("\"operative\": 2,\n          \"damaged\": 1", "\"operative\": 2,\n          \"damaged\": 4");
        assert_ne!(tampered, text);
        assert!(matches!(parse_solution(&tampered, &inst), Err(Error::Infeasible(_))));
    }
}
