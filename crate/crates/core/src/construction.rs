//! Phase I: randomized greedy route construction.
//!
//! Routes are built one vehicle at a time. From the last visited node the
//! builder collects every feasible successor, scores each by the number of
//! bikes it could move per minute of travel, draws a fresh threshold
//! `eps in (0, 1)` and picks uniformly among the candidates whose score is at
//! least `eps * best`. Operative bikes are never loaded up front: when a
//! deficit station needs more bikes than the vehicle carries, the missing
//! amount is retroactively picked up at the vehicle's most recent depot visit.

use rand::distributions::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{
    Instance, LoadingPlan, Move, Node, Route, Scoring, Solution, StationClass, Vehicle,
};

const TIME_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructionParams {
    /// Exponent on the movable bike count, in `(0, 1]`.
    pub theta: f64,
    /// Multiplier on the depot score; values above one favour depot returns.
    pub mu: f64,
}

impl Default for ConstructionParams {
    fn default() -> Self {
        ConstructionParams { theta: 0.8, mu: 2.0 }
    }
}

impl ConstructionParams {
    pub fn new(theta: f64, mu: f64) -> Result<Self> {
        let p = ConstructionParams { theta, mu };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::Config(format!("theta must lie in (0, 1], got {}", self.theta)));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::Config(format!("mu must be positive, got {}", self.mu)));
        }
        Ok(())
    }
}

/// Station and depot state shared by all routes of one construction run.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildState {
    /// Residual imbalance per station (operative minus target).
    pub residual_imbalance: Vec<i64>,
    /// Damaged bikes still parked at each station.
    pub residual_damaged: Vec<i64>,
    /// Initial depot stock that no vehicle has claimed yet.
    pub depot_remaining: i64,
}

impl BuildState {
    pub fn new(instance: &Instance) -> Self {
        BuildState {
            residual_imbalance: instance.stations().iter().map(|s| s.imbalance()).collect(),
            residual_damaged: instance.stations().iter().map(|s| s.initial_damaged).collect(),
            depot_remaining: instance.depot().initial_operative,
        }
    }

    fn class(&self, station: usize) -> StationClass {
        match self.residual_imbalance[station] {
            0 => StationClass::Balanced,
            d if d > 0 => StationClass::Surplus,
            _ => StationClass::Deficit,
        }
    }
}

/// State of the vehicle whose route is currently being extended.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleState {
    pub capacity: i64,
    pub onboard_operative: i64,
    pub onboard_damaged: i64,
    /// Travel time of the partial route.
    pub elapsed: f64,
    /// Smallest free capacity on the stretch since the last depot visit.
    pub min_free: i64,
    /// Position of the last depot visit in the partial route.
    pub last_depot: usize,
}

impl VehicleState {
    pub fn at_depot(vehicle: &Vehicle) -> Self {
        VehicleState {
            capacity: vehicle.capacity,
            onboard_operative: 0,
            onboard_damaged: 0,
            elapsed: 0.0,
            min_free: vehicle.capacity,
            last_depot: 0,
        }
    }

    #[inline]
    fn load(&self) -> i64 {
        self.onboard_operative + self.onboard_damaged
    }
}

/// Most operative (`beta`) and damaged (`alpha`) bikes a station visit can move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Movable {
    pub beta: i64,
    pub alpha: i64,
}

impl Movable {
    #[inline]
    pub fn total(&self) -> i64 {
        self.beta + self.alpha
    }
}

/// Maximum movable bikes if station `v` were visited next.
///
/// Surplus and balanced stations: `beta = min(free, d)`,
/// `alpha = min(free - beta, a)`. Deficit stations:
/// `beta = min(p + min(depot, min_free), |d|)` and `alpha` limited by the
/// room left once `beta` bikes have been handed over.
///
/// Panics if `v` is the depot.
pub fn max_movable(instance: &Instance, state: &BuildState, vehicle: &VehicleState, v: Node) -> Movable {
    let i = v.station_index().expect("max_movable called for the depot");
    assert!(i < instance.stations().len(), "unknown station node {}", v.0);
    let d = state.residual_imbalance[i];
    let a = state.residual_damaged[i];
    let free = vehicle.capacity - vehicle.load();
    match state.class(i) {
        StationClass::Surplus | StationClass::Balanced => {
            let beta = free.min(d).max(0);
            let alpha = (free - beta).min(a).max(0);
            Movable { beta, alpha }
        }
        StationClass::Deficit => {
            let reachable = vehicle.onboard_operative + state.depot_remaining.min(vehicle.min_free).max(0);
            let beta = reachable.min(-d).max(0);
            // Bikes picked up retroactively are delivered here, so the vehicle
            // never carries more than what was already on board.
            let left_over = (vehicle.onboard_operative - beta).max(0);
            let alpha = (vehicle.capacity - vehicle.onboard_damaged - left_over).min(a).max(0);
            Movable { beta, alpha }
        }
    }
}

/// Feasible successors of `u`, in node order.
///
/// Stations qualify when they are unbalanced or hold damaged bikes, can be
/// reached and left for the depot within the time budget, and allow at least
/// one bike to be moved. The depot qualifies when the vehicle carries damaged
/// bikes, is not already there, and can get there in time.
pub fn feasible_successors(
    instance: &Instance,
    state: &BuildState,
    vehicle: &VehicleState,
    u: Node,
) -> Vec<Node> {
    let travel = instance.travel();
    let budget = instance.time_budget() + TIME_EPS;
    let mut out = Vec::new();
    if !u.is_depot()
        && vehicle.onboard_damaged > 0
        && vehicle.elapsed + travel.time(u, Node::DEPOT) <= budget
    {
        out.push(Node::DEPOT);
    }
    for i in 0..instance.stations().len() {
        let v = Node::station(i);
        if v == u {
            continue;
        }
        if state.residual_imbalance[i] == 0 && state.residual_damaged[i] == 0 {
            continue;
        }
        if vehicle.elapsed + travel.time(u, v) + travel.time(v, Node::DEPOT) > budget {
            continue;
        }
        if max_movable(instance, state, vehicle, v).total() == 0 {
            continue;
        }
        out.push(v);
    }
    out
}

/// Greedy score of moving to `v` from `u`. A zero travel time scores `+inf`.
pub fn ratio(
    instance: &Instance,
    u: Node,
    v: Node,
    movable: Movable,
    vehicle: &VehicleState,
    params: &ConstructionParams,
) -> f64 {
    let t = instance.travel().time(u, v);
    if v.is_depot() {
        if t == 0.0 {
            return f64::INFINITY;
        }
        return vehicle.onboard_damaged as f64 / t * params.mu;
    }
    if t == 0.0 {
        return f64::INFINITY;
    }
    let weight = instance.station(v).map_or(1.0, |s| s.weight);
    (movable.total() as f64).powf(params.theta) / t * weight
}

/// Draws `eps in (0, 1)` and picks uniformly among candidates scoring at
/// least `eps * max`.
pub fn select_next<R: Rng + ?Sized>(scored: &[(Node, f64)], rng: &mut R) -> Node {
    let eps: f64 = rng.sample(Open01);
    select_with_threshold(scored, eps, rng)
}

/// [`select_next`] with a caller-supplied threshold fraction.
pub fn select_with_threshold<R: Rng + ?Sized>(scored: &[(Node, f64)], eps: f64, rng: &mut R) -> Node {
    assert!(!scored.is_empty(), "no candidate to select from");
    let best = scored.iter().map(|(_, r)| *r).fold(f64::NEG_INFINITY, f64::max);
    let cut = eps * best;
    let eligible: Vec<Node> = scored
        .iter()
        .filter(|(_, r)| *r >= cut || *r == best)
        .map(|(n, _)| *n)
        .collect();
    eligible[rng.gen_range(0..eligible.len())]
}

/// Appends `v` to the partial route and updates every piece of state.
///
/// `movable` must come from [`max_movable`] for `v` (ignored for the depot).
/// Panics if the update would break a capacity, time or stock limit.
pub fn apply_visit(
    instance: &Instance,
    state: &mut BuildState,
    vehicle: &mut VehicleState,
    route: &mut Route,
    plan: &mut LoadingPlan,
    v: Node,
    movable: Movable,
) {
    let u = *route.visits.last().expect("route has no start");
    assert_ne!(u, v, "a visit may not repeat the previous node");
    vehicle.elapsed += instance.travel().time(u, v);
    assert!(
        vehicle.elapsed + instance.travel().time(v, Node::DEPOT) <= instance.time_budget() + TIME_EPS,
        "visit breaks the time budget"
    );

    let mv = match v.station_index() {
        None => {
            let mv = Move::new(0, -vehicle.onboard_damaged);
            vehicle.onboard_damaged = 0;
            vehicle.last_depot = route.visits.len();
            vehicle.min_free = vehicle.capacity - vehicle.load();
            mv
        }
        Some(i) => {
            let Movable { beta, alpha } = movable;
            assert!(alpha <= state.residual_damaged[i], "more damaged bikes than parked");
            state.residual_damaged[i] -= alpha;
            vehicle.onboard_damaged += alpha;
            let mv = match state.class(i) {
                StationClass::Surplus | StationClass::Balanced => {
                    assert!(beta <= state.residual_imbalance[i], "pickup overshoots target");
                    state.residual_imbalance[i] -= beta;
                    vehicle.onboard_operative += beta;
                    Move::new(beta, alpha)
                }
                StationClass::Deficit => {
                    assert!(beta <= -state.residual_imbalance[i], "delivery overshoots target");
                    let extra = (beta - vehicle.onboard_operative).max(0);
                    if extra > 0 {
                        assert!(
                            extra <= state.depot_remaining && extra <= vehicle.min_free,
                            "retro-loading exceeds depot stock or free capacity"
                        );
                        plan.moves[vehicle.last_depot].operative += extra;
                        state.depot_remaining -= extra;
                        vehicle.min_free -= extra;
                        vehicle.onboard_operative += extra;
                    }
                    state.residual_imbalance[i] += beta;
                    vehicle.onboard_operative -= beta;
                    Move::new(-beta, alpha)
                }
            };
            vehicle.min_free = vehicle.min_free.min(vehicle.capacity - vehicle.load());
            mv
        }
    };
    assert!(vehicle.onboard_operative >= 0 && vehicle.onboard_damaged >= 0);
    assert!(vehicle.load() <= vehicle.capacity, "vehicle overloaded");
    route.visits.push(v);
    plan.moves.push(mv);
}

/// Builds one vehicle's route against the shared state.
///
/// The returned route is empty when the vehicle has nothing useful to do.
pub fn build_route<R: Rng + ?Sized>(
    instance: &Instance,
    state: &mut BuildState,
    vehicle: &Vehicle,
    params: &ConstructionParams,
    rng: &mut R,
) -> (Route, LoadingPlan) {
    let mut route = Route { vehicle: vehicle.id, visits: vec![Node::DEPOT] };
    let mut plan = LoadingPlan { vehicle: vehicle.id, moves: vec![Move::NONE] };
    let mut vs = VehicleState::at_depot(vehicle);
    let mut scored = Vec::new();

    loop {
        let u = *route.visits.last().unwrap();
        let candidates = feasible_successors(instance, state, &vs, u);
        if candidates.is_empty() {
            break;
        }
        scored.clear();
        for &v in &candidates {
            let m = if v.is_depot() { Movable::default() } else { max_movable(instance, state, &vs, v) };
            scored.push((v, ratio(instance, u, v, m, &vs, params)));
        }
        let next = select_next(&scored, rng);
        let m = if next.is_depot() { Movable::default() } else { max_movable(instance, state, &vs, next) };
        apply_visit(instance, state, &mut vs, &mut route, &mut plan, next, m);
    }

    if route.visits.len() == 1 {
        return (Route::empty(vehicle.id), LoadingPlan::empty(vehicle.id));
    }
    let last = route.visits.len() - 1;
    if route.visits[last].is_depot() {
        // Damaged bikes were dropped on arrival; only operative ones remain.
        plan.moves[last].operative -= vs.onboard_operative;
    } else {
        route.visits.push(Node::DEPOT);
        plan.moves.push(Move::new(-vs.onboard_operative, -vs.onboard_damaged));
    }
    (route, plan)
}

/// Builds one route per vehicle, in fleet order, and scores the result.
pub fn construct_solution<R: Rng + ?Sized>(
    instance: &Instance,
    params: &ConstructionParams,
    scoring: &Scoring,
    rng: &mut R,
) -> Solution {
    let mut state = BuildState::new(instance);
    let mut routes = Vec::with_capacity(instance.fleet().len());
    let mut plans = Vec::with_capacity(instance.fleet().len());
    for vehicle in instance.fleet() {
        let (r, p) = build_route(instance, &mut state, vehicle, params, rng);
        routes.push(r);
        plans.push(p);
    }
    Solution::evaluate(instance, routes, plans, scoring).expect("constructed routes are consistent")
}
