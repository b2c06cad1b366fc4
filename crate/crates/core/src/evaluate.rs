//! Route timing, final-state bookkeeping and the three-term objective.

use crate::error::{Error, Result};
use crate::model::{
    DenominatorMode, FinalState, Instance, LoadingPlan, Node, ObjectiveBreakdown, Route, Scoring,
    TravelMatrix,
};

/// Sum of arc travel times along `visits`. No service time is charged at stops.
pub fn route_time(visits: &[Node], travel: &TravelMatrix) -> Result<f64> {
    if let Some(bad) = visits.iter().find(|n| !travel.contains(**n)) {
        return Err(Error::invalid("route", format!("unknown node {}", bad.0)));
    }
    Ok(visits.windows(2).map(|w| travel.time(w[0], w[1])).sum())
}

/// Applies every loading plan to the initial inventories.
///
/// Positive deltas remove bikes from the visited node, negative deltas add
/// them. Unused vehicles get a route time of zero.
pub fn apply_solution(
    instance: &Instance,
    routes: &[Route],
    plans: &[LoadingPlan],
) -> Result<FinalState> {
    if routes.len() != plans.len() {
        return Err(Error::invalid(
            "plans",
            format!("{} routes but {} loading plans", routes.len(), plans.len()),
        ));
    }
    let mut operative: Vec<i64> = instance.stations().iter().map(|s| s.initial_operative).collect();
    let mut damaged: Vec<i64> = instance.stations().iter().map(|s| s.initial_damaged).collect();
    let mut depot_operative = instance.depot().initial_operative;
    let mut depot_damaged = 0;
    let mut route_times = vec![0.0; instance.fleet().len()];
    let mut seen = vec![false; instance.fleet().len()];

    for (k, (route, plan)) in routes.iter().zip(plans).enumerate() {
        if route.vehicle != plan.vehicle {
            return Err(Error::invalid(
                format!("plans[{k}].vehicle"),
                format!("plan for {} paired with route of {}", plan.vehicle, route.vehicle),
            ));
        }
        if route.visits.len() != plan.moves.len() {
            return Err(Error::invalid(
                format!("plans[{k}].moves"),
                format!("{} moves for {} visits", plan.moves.len(), route.visits.len()),
            ));
        }
        let slot = instance.vehicle_index(route.vehicle).ok_or_else(|| {
            Error::invalid(format!("routes[{k}].vehicle"), format!("unknown vehicle {}", route.vehicle.0))
        })?;
        if std::mem::replace(&mut seen[slot], true) {
            return Err(Error::invalid(
                format!("routes[{k}].vehicle"),
                format!("vehicle {} has more than one route", route.vehicle.0),
            ));
        }
        route_times[slot] = route_time(&route.visits, instance.travel())?;
        for (node, mv) in route.visits.iter().zip(&plan.moves) {
            match node.station_index() {
                None => {
                    depot_operative -= mv.operative;
                    depot_damaged -= mv.damaged;
                }
                Some(i) => {
                    operative[i] -= mv.operative;
                    damaged[i] -= mv.damaged;
                }
            }
        }
    }

    Ok(FinalState {
        operative,
        damaged,
        depot_operative,
        depot_damaged,
        route_times,
    })
}

/// Normalising denominator of the imbalance and damaged terms.
pub fn denominator(instance: &Instance, mode: DenominatorMode) -> f64 {
    instance
        .stations()
        .iter()
        .map(|s| {
            let gap = (s.target - s.initial_operative).abs() as f64;
            let damaged = s.initial_damaged as f64;
            match mode {
                DenominatorMode::Literal => s.weight * gap + damaged,
                DenominatorMode::WeightedDamaged => s.weight * (gap + damaged),
            }
        })
        .sum()
}

/// Scores a final state.
///
/// `imbalance = sum w|q - p^| / D`, `damaged = sum w a^ / D`,
/// `time = sum t^l / (T |L|)`. When `D` is zero both station terms are zero.
pub fn evaluate_objective(
    instance: &Instance,
    state: &FinalState,
    scoring: &Scoring,
) -> Result<ObjectiveBreakdown> {
    if let Some(i) = state.operative.iter().position(|&p| p < 0) {
        return Err(Error::invalid(format!("final.operative[{i}]"), "negative inventory"));
    }
    if let Some(i) = state.damaged.iter().position(|&a| a < 0) {
        return Err(Error::invalid(format!("final.damaged[{i}]"), "negative inventory"));
    }
    let stations = instance.stations();
    let denom = denominator(instance, scoring.denominator);
    let (imbalance_term, damaged_term) = if denom > 0.0 {
        let imbalance: f64 = stations
            .iter()
            .zip(&state.operative)
            .map(|(s, &p)| s.weight * (s.target - p).abs() as f64)
            .sum();
        let damaged: f64 = stations
            .iter()
            .zip(&state.damaged)
            .map(|(s, &a)| s.weight * a as f64)
            .sum();
        (imbalance / denom, damaged / denom)
    } else {
        (0.0, 0.0)
    };
    let fleet = instance.fleet().len();
    let time_term = if fleet == 0 {
        0.0
    } else {
        state.route_times.iter().sum::<f64>() / (instance.time_budget() * fleet as f64)
    };
    let w = &scoring.weights;
    Ok(ObjectiveBreakdown {
        imbalance_term,
        damaged_term,
        time_term,
        total: imbalance_term * w.gamma_d + damaged_term * w.gamma_a + time_term * w.gamma_t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    fn line_instance(stations: Vec<Station>, rows: Vec<Vec<f64>>, fleet: usize, t: f64) -> Instance {
        let fleet = (0..fleet)
            .map(|i| Vehicle { id: VehicleId(i as u32 + 1), capacity: 20 })
            .collect();
        Instance::new(
            stations,
            Depot { initial_operative: 0, capacity: None },
            TravelMatrix::from_rows(rows).unwrap(),
            fleet,
            t,
            false,
        )
        .unwrap()
    }

    fn st(id: u32, p: i64, a: i64, q: i64, w: f64) -> Station {
        Station {
            id: StationId(id),
            capacity: 30,
            initial_operative: p,
            initial_damaged: a,
            target: q,
            weight: w,
        }
    }

    #[test]
    fn route_time_sums_arcs() {
        let travel = TravelMatrix::from_rows(vec![
            vec![0.0, 10.0, 7.0],
            vec![12.0, 0.0, 5.0],
            vec![12.0, 5.0, 0.0],
        ])
        .unwrap();
        assert_eq!(route_time(&[], &travel).unwrap(), 0.0);
        assert_eq!(route_time(&[Node(0), Node(1), Node(0)], &travel).unwrap(), 22.0);
        assert_eq!(route_time(&[Node(0), Node(1), Node(2), Node(0)], &travel).unwrap(), 27.0);
        assert!(route_time(&[Node(0), Node(3)], &travel).is_err());
    }

    #[test]
    fn apply_bookkeeping() {
        let inst = line_instance(
            vec![st(1, 5, 1, 3, 1.0)],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            1,
            60.0,
        );
        let v = VehicleId(1);
        let none = apply_solution(&inst, &[Route::empty(v)], &[LoadingPlan::empty(v)]).unwrap();
        assert_eq!(none.operative, vec![5]);
        assert_eq!(none.damaged, vec![1]);

        let route = Route { vehicle: v, visits: vec![Node(0), Node(1), Node(0)] };
        let plan = LoadingPlan { vehicle: v, moves: vec![Move::NONE, Move::new(2, 1), Move::new(-2, -1)] };
        let s = apply_solution(&inst, &[route], &[plan]).unwrap();
        assert_eq!((s.operative[0], s.damaged[0]), (3, 0));
        assert_eq!((s.depot_operative, s.depot_damaged), (2, 1));

        let route = Route { vehicle: v, visits: vec![Node(0), Node(1), Node(0), Node(1), Node(0)] };
        let plan = LoadingPlan {
            vehicle: v,
            moves: vec![Move::NONE, Move::new(2, 0), Move::NONE, Move::new(-1, 0), Move::new(-1, 0)],
        };
        let s = apply_solution(&inst, &[route], &[plan]).unwrap();
        assert_eq!(s.operative[0], 4);
    }

    #[test]
    fn apply_rejects_misaligned_plan() {
        let inst = line_instance(vec![st(1, 5, 0, 3, 1.0)], vec![vec![0.0, 1.0], vec![1.0, 0.0]], 1, 60.0);
        let v = VehicleId(1);
        let route = Route { vehicle: v, visits: vec![Node(0), Node(1), Node(0)] };
        let plan = LoadingPlan { vehicle: v, moves: vec![Move::NONE; 2] };
        assert!(apply_solution(&inst, &[route], &[plan]).is_err());
    }

    #[test]
    fn objective_examples() {
        // Balanced, no damaged: D = 0 and nothing to do.
        let inst = line_instance(vec![st(1, 3, 0, 3, 1.0)], vec![vec![0.0, 1.0], vec![1.0, 0.0]], 1, 60.0);
        let empty = Solution::empty(&inst, &Scoring::default());
        assert_eq!(empty.objective.total, 0.0);

        // Do-nothing with unit weights is exactly one.
        let inst = line_instance(
            vec![st(1, 5, 1, 3, 1.0), st(2, 1, 2, 4, 1.0)],
            vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]],
            2,
            60.0,
        );
        assert_eq!(Solution::empty(&inst, &Scoring::default()).objective.total, 1.0);

        // w=2, p=5, q=3, a=1 fully fixed with t=60 of T=120:
        // D = 2*2 + 1 = 5, numerators 0, time 60/120 = 0.5.
        let inst = line_instance(
            vec![st(1, 5, 1, 3, 2.0)],
            vec![vec![0.0, 30.0], vec![30.0, 0.0]],
            1,
            120.0,
        );
        let v = VehicleId(1);
        let route = Route { vehicle: v, visits: vec![Node(0), Node(1), Node(0)] };
        let plan = LoadingPlan { vehicle: v, moves: vec![Move::NONE, Move::new(2, 1), Move::new(-2, -1)] };
        let sol = Solution::evaluate(&inst, vec![route], vec![plan], &Scoring::default()).unwrap();
        assert_eq!(sol.objective.imbalance_term, 0.0);
        assert_eq!(sol.objective.damaged_term, 0.0);
        assert_eq!(sol.objective.total, 0.5);
    }

    #[test]
    fn weighted_denominator_flag() {
        let inst = line_instance(vec![st(1, 5, 1, 3, 2.0)], vec![vec![0.0, 1.0], vec![1.0, 0.0]], 1, 60.0);
        assert_eq!(denominator(&inst, DenominatorMode::Literal), 5.0);
        assert_eq!(denominator(&inst, DenominatorMode::WeightedDamaged), 6.0);
    }

    #[test]
    fn negative_final_state_rejected() {
        let inst = line_instance(vec![st(1, 1, 0, 3, 1.0)], vec![vec![0.0, 1.0], vec![1.0, 0.0]], 1, 60.0);
        let state = FinalState {
            operative: vec![-1],
            damaged: vec![0],
            depot_operative: 0,
            depot_damaged: 0,
            route_times: vec![0.0],
        };
        assert!(evaluate_objective(&inst, &state, &Scoring::default()).is_err());
    }
}
