//! Consolidated feasibility checker for routes and loading plans.
//!
//! Vehicles run concurrently, so events at the same node by different
//! vehicles have no global order. Station checks therefore rely on the
//! per-visit direction rules (surplus stations only give operative bikes,
//! deficit stations only receive them, damaged bikes only leave stations)
//! plus the final inventories. Depot stock is checked against the worst case
//! where bikes returned by one vehicle are never available to another.

use std::fmt;

use serde::Serialize;

use crate::evaluate::route_time;
use crate::model::{Instance, LoadingPlan, Route, StationClass, VehicleId};

const TIME_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    RouteCountMismatch { routes: usize, plans: usize },
    UnknownVehicle { vehicle: VehicleId },
    DuplicateVehicle { vehicle: VehicleId },
    PlanMismatch { vehicle: VehicleId, visits: usize, moves: usize },
    UnknownNode { vehicle: VehicleId, position: usize, node: usize },
    NotDepotBounded { vehicle: VehicleId },
    RepeatedVisit { vehicle: VehicleId, position: usize },
    RouteTime { vehicle: VehicleId, time: f64, budget: f64 },
    NegativeOperativeLoad { vehicle: VehicleId, position: usize, load: i64 },
    NegativeDamagedLoad { vehicle: VehicleId, position: usize, load: i64 },
    Overload { vehicle: VehicleId, position: usize, load: i64, capacity: i64 },
    NotEmptyAtEnd { vehicle: VehicleId, operative: i64, damaged: i64 },
    DamagedLoadedAtDepot { vehicle: VehicleId, position: usize },
    DamagedUnloadedAtStation { vehicle: VehicleId, position: usize },
    OperativeDirection { vehicle: VehicleId, position: usize, delta: i64 },
    StationNegative { station: usize, operative: i64 },
    TargetOvershoot { station: usize, initial: i64, target: i64, final_operative: i64 },
    DamagedOutOfRange { station: usize, initial: i64, final_damaged: i64 },
    StationCapacity { station: usize, total: i64, capacity: i64 },
    DepotStock { required: i64, available: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            RouteCountMismatch { routes, plans } => {
                write!(f, "{routes} routes but {plans} loading plans")
            }
            UnknownVehicle { vehicle } => write!(f, "route for unknown vehicle {vehicle}"),
            DuplicateVehicle { vehicle } => write!(f, "vehicle {vehicle} has more than one route"),
            PlanMismatch { vehicle, visits, moves } => {
                write!(f, "{vehicle}: {moves} moves for {visits} visits")
            }
            UnknownNode { vehicle, position, node } => {
                write!(f, "{vehicle}: visit {position} references unknown node {node}")
            }
            NotDepotBounded { vehicle } => {
                write!(f, "{vehicle}: route must start and end at the depot")
            }
            RepeatedVisit { vehicle, position } => {
                write!(f, "{vehicle}: visit {position} repeats the previous node")
            }
            RouteTime { vehicle, time, budget } => {
                write!(f, "{vehicle}: route time {time} exceeds budget {budget}")
            }
            NegativeOperativeLoad { vehicle, position, load } => {
                write!(f, "{vehicle}: operative load {load} after visit {position}")
            }
            NegativeDamagedLoad { vehicle, position, load } => {
                write!(f, "{vehicle}: damaged load {load} after visit {position}")
            }
            Overload { vehicle, position, load, capacity } => write!(
                f,
                "{vehicle}: capacity exceeded after visit {position} (load {load} > {capacity})"
            ),
            NotEmptyAtEnd { vehicle, operative, damaged } => write!(
                f,
                "{vehicle}: vehicle ends with {operative} operative and {damaged} damaged bikes"
            ),
            DamagedLoadedAtDepot { vehicle, position } => {
                write!(f, "{vehicle}: damaged bikes loaded at depot visit {position}")
            }
            DamagedUnloadedAtStation { vehicle, position } => {
                write!(f, "{vehicle}: damaged bikes unloaded at station visit {position}")
            }
            OperativeDirection { vehicle, position, delta } => write!(
                f,
                "{vehicle}: operative move {delta} at visit {position} goes against the station's imbalance"
            ),
            StationNegative { station, operative } => {
                write!(f, "station #{station}: final operative inventory {operative} < 0")
            }
            TargetOvershoot { station, initial, target, final_operative } => write!(
                f,
                "station #{station}: final operative {final_operative} not between initial {initial} and target {target}"
            ),
            DamagedOutOfRange { station, initial, final_damaged } => write!(
                f,
                "station #{station}: final damaged {final_damaged} outside [0, {initial}]"
            ),
            StationCapacity { station, total, capacity } => write!(
                f,
                "station #{station}: final inventory {total} exceeds capacity {capacity}"
            ),
            DepotStock { required, available } => write!(
                f,
                "depot stock exceeded: routes need {required} operative bikes, depot holds {available}"
            ),
        }
    }
}

/// Returns every violated feasibility rule; an empty list means feasible.
pub fn validate_solution(instance: &Instance, routes: &[Route], plans: &[LoadingPlan]) -> Vec<Violation> {
    let mut out = Vec::new();
    if routes.len() != plans.len() {
        out.push(Violation::RouteCountMismatch { routes: routes.len(), plans: plans.len() });
        return out;
    }

    let mut seen = vec![false; instance.fleet().len()];
    let mut final_operative: Vec<i64> = instance.stations().iter().map(|s| s.initial_operative).collect();
    let mut final_damaged: Vec<i64> = instance.stations().iter().map(|s| s.initial_damaged).collect();
    let mut depot_required = 0i64;

    for (route, plan) in routes.iter().zip(plans) {
        let vehicle = route.vehicle;
        let Some(slot) = instance.vehicle_index(vehicle) else {
            out.push(Violation::UnknownVehicle { vehicle });
            continue;
        };
        if std::mem::replace(&mut seen[slot], true) {
            out.push(Violation::DuplicateVehicle { vehicle });
            continue;
        }
        if plan.vehicle != vehicle || plan.moves.len() != route.visits.len() {
            out.push(Violation::PlanMismatch {
                vehicle,
                visits: route.visits.len(),
                moves: plan.moves.len(),
            });
            continue;
        }
        if route.is_empty() {
            continue;
        }
        if let Some(position) = route.visits.iter().position(|n| !instance.travel().contains(*n)) {
            out.push(Violation::UnknownNode { vehicle, position, node: route.visits[position].0 });
            continue;
        }
        if route.len() < 2 || !route.visits[0].is_depot() || !route.visits[route.len() - 1].is_depot() {
            out.push(Violation::NotDepotBounded { vehicle });
        }
        for (position, w) in route.visits.windows(2).enumerate() {
            if w[0] == w[1] {
                out.push(Violation::RepeatedVisit { vehicle, position: position + 1 });
            }
        }
        let time = route_time(&route.visits, instance.travel()).unwrap_or(f64::INFINITY);
        if time > instance.time_budget() + TIME_EPS {
            out.push(Violation::RouteTime { vehicle, time, budget: instance.time_budget() });
        }

        let capacity = instance.fleet()[slot].capacity;
        let (mut operative, mut damaged) = (0i64, 0i64);
        let mut depot_taken = 0i64;
        let mut depot_peak = 0i64;
        for (position, (node, mv)) in route.visits.iter().zip(&plan.moves).enumerate() {
            operative += mv.operative;
            damaged += mv.damaged;
            match instance.station(*node) {
                None => {
                    if mv.damaged > 0 {
                        out.push(Violation::DamagedLoadedAtDepot { vehicle, position });
                    }
                    depot_taken += mv.operative;
                    depot_peak = depot_peak.max(depot_taken);
                }
                Some(station) => {
                    let i = node.station_index().unwrap();
                    if mv.damaged < 0 {
                        out.push(Violation::DamagedUnloadedAtStation { vehicle, position });
                    }
                    let wrong_way = match station.class() {
                        StationClass::Surplus => mv.operative < 0,
                        StationClass::Deficit => mv.operative > 0,
                        StationClass::Balanced => mv.operative != 0,
                    };
                    if wrong_way {
                        out.push(Violation::OperativeDirection { vehicle, position, delta: mv.operative });
                    }
                    final_operative[i] -= mv.operative;
                    final_damaged[i] -= mv.damaged;
                }
            }
            if operative < 0 {
                out.push(Violation::NegativeOperativeLoad { vehicle, position, load: operative });
            }
            if damaged < 0 {
                out.push(Violation::NegativeDamagedLoad { vehicle, position, load: damaged });
            }
            if operative + damaged > capacity {
                out.push(Violation::Overload { vehicle, position, load: operative + damaged, capacity });
            }
        }
        if operative != 0 || damaged != 0 {
            out.push(Violation::NotEmptyAtEnd { vehicle, operative, damaged });
        }
        depot_required += depot_peak;
    }

    for (i, s) in instance.stations().iter().enumerate() {
        let (p, a) = (final_operative[i], final_damaged[i]);
        if p < 0 {
            out.push(Violation::StationNegative { station: i, operative: p });
        }
        let (lo, hi) = if s.initial_operative <= s.target {
            (s.initial_operative, s.target)
        } else {
            (s.target, s.initial_operative)
        };
        if p < lo || p > hi {
            out.push(Violation::TargetOvershoot {
                station: i,
                initial: s.initial_operative,
                target: s.target,
                final_operative: p,
            });
        }
        if a < 0 || a > s.initial_damaged {
            out.push(Violation::DamagedOutOfRange { station: i, initial: s.initial_damaged, final_damaged: a });
        }
        if p + a > s.capacity {
            out.push(Violation::StationCapacity { station: i, total: p + a, capacity: s.capacity });
        }
    }

    if depot_required > instance.depot().initial_operative {
        out.push(Violation::DepotStock {
            required: depot_required,
            available: instance.depot().initial_operative,
        });
    }
    out
}
