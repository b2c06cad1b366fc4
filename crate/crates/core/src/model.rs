//! Problem data: stations, depot, fleet, travel times, and the route / loading
//! plan representation shared by every phase of the solver.
//!
//! Nodes are addressed by their row in the travel matrix. Row 0 is the depot,
//! row `i >= 1` is the `i`-th station of [`Instance::stations`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a node in the travel matrix; `Node(0)` is the depot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Node(pub usize);

impl Node {
    pub const DEPOT: Node = Node(0);

    /// Node of the station stored at `index` in [`Instance::stations`].
    #[inline]
    pub fn station(index: usize) -> Node {
        Node(index + 1)
    }

    #[inline]
    pub fn is_depot(self) -> bool {
        self.0 == 0
    }

    /// Position in [`Instance::stations`], or `None` for the depot.
    #[inline]
    pub fn station_index(self) -> Option<usize> {
        self.0.checked_sub(1)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_depot() {
            write!(f, "O")
        } else {
            write!(f, "s{}", self.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StationId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VehicleId(pub u32);

impl fmt::Display for VehicleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Station {
    pub id: StationId,
    /// Number of docks.
    pub capacity: i64,
    pub initial_operative: i64,
    pub initial_damaged: i64,
    /// Desired operative inventory after repositioning.
    pub target: i64,
    /// Visit priority.
    pub weight: f64,
}

impl Station {
    /// Initial operative inventory minus target.
    #[inline]
    pub fn imbalance(&self) -> i64 {
        self.initial_operative - self.target
    }

    #[inline]
    pub fn has_damaged(&self) -> bool {
        self.initial_damaged > 0
    }

    #[inline]
    pub fn class(&self) -> StationClass {
        classify_station(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StationClass {
    Balanced,
    Surplus,
    Deficit,
}

pub fn classify_station(station: &Station) -> StationClass {
    match station.imbalance() {
        0 => StationClass::Balanced,
        d if d > 0 => StationClass::Surplus,
        _ => StationClass::Deficit,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Depot {
    pub initial_operative: i64,
    /// `None` means unbounded.
    pub capacity: Option<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vehicle {
    pub id: VehicleId,
    pub capacity: i64,
}

/// Square matrix of travel times in minutes.
#[derive(Debug, Clone, PartialEq)]
pub struct TravelMatrix {
    size: usize,
    times: Vec<f64>,
}

impl TravelMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        let mut times = Vec::with_capacity(size * size);
        for (u, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(Error::invalid(
                    format!("travel_min[{u}]"),
                    format!("expected {size} columns, found {}", row.len()),
                ));
            }
            for (v, t) in row.into_iter().enumerate() {
                if !t.is_finite() || t < 0.0 {
                    return Err(Error::invalid(
                        format!("travel_min[{u}][{v}]"),
                        format!("travel time must be finite and nonnegative, found {t}"),
                    ));
                }
                if u == v && t != 0.0 {
                    return Err(Error::invalid(
                        format!("travel_min[{u}][{v}]"),
                        "diagonal entries must be zero",
                    ));
                }
                times.push(t);
            }
        }
        Ok(TravelMatrix { size, times })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn contains(&self, node: Node) -> bool {
        node.0 < self.size
    }

    /// Travel time from `u` to `v`. Panics when either node is out of range.
    #[inline]
    pub fn time(&self, u: Node, v: Node) -> f64 {
        assert!(u.0 < self.size && v.0 < self.size, "node out of range");
        self.times[u.0 * self.size + v.0]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.times.chunks(self.size.max(1)).take(self.size).map(<[f64]>::to_vec).collect()
    }

    /// First triple `(u, v, w)` with `t(u,w) > t(u,v) + t(v,w) + tol`, if any.
    pub fn triangle_violation(&self, tol: f64) -> Option<(Node, Node, Node)> {
        let n = self.size;
        for u in 0..n {
            for v in 0..n {
                let uv = self.times[u * n + v];
                for w in 0..n {
                    if self.times[u * n + w] > uv + self.times[v * n + w] + tol {
                        return Some((Node(u), Node(v), Node(w)));
                    }
                }
            }
        }
        None
    }
}

/// A validated problem instance. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    stations: Vec<Station>,
    depot: Depot,
    travel: TravelMatrix,
    fleet: Vec<Vehicle>,
    time_budget: f64,
    metric: bool,
}

impl Instance {
    /// Builds an instance after checking every structural invariant. When
    /// `metric` is set the travel matrix must also satisfy the triangle
    /// inequality.
    pub fn new(
        stations: Vec<Station>,
        depot: Depot,
        travel: TravelMatrix,
        fleet: Vec<Vehicle>,
        time_budget: f64,
        metric: bool,
    ) -> Result<Self> {
        for (i, s) in stations.iter().enumerate() {
            let path = |field: &str| format!("stations[{i}].{field}");
            if s.capacity <= 0 {
                return Err(Error::invalid(path("capacity"), "must be positive"));
            }
            if s.initial_operative < 0 {
                return Err(Error::invalid(path("operative"), "must be nonnegative"));
            }
            if s.initial_damaged < 0 {
                return Err(Error::invalid(path("damaged"), "must be nonnegative"));
            }
            if s.target < 0 {
                return Err(Error::invalid(path("target"), "must be nonnegative"));
            }
            if s.initial_operative + s.initial_damaged > s.capacity {
                return Err(Error::invalid(
                    path("capacity"),
                    format!(
                        "operative + damaged = {} exceeds capacity {}",
                        s.initial_operative + s.initial_damaged,
                        s.capacity
                    ),
                ));
            }
            if s.target > s.capacity {
                return Err(Error::invalid(
                    path("target"),
                    format!("target {} exceeds capacity {}", s.target, s.capacity),
                ));
            }
            if !s.weight.is_finite() || s.weight < 0.0 {
                return Err(Error::invalid(path("weight"), "must be finite and nonnegative"));
            }
            if stations[..i].iter().any(|o| o.id == s.id) {
                return Err(Error::invalid(path("id"), format!("duplicate station id {}", s.id.0)));
            }
        }
        if depot.initial_operative < 0 {
            return Err(Error::invalid("depot.operative", "must be nonnegative"));
        }
        if let Some(c) = depot.capacity {
            if c < depot.initial_operative {
                return Err(Error::invalid("depot.capacity", "smaller than initial inventory"));
            }
        }
        for (i, v) in fleet.iter().enumerate() {
            if v.capacity <= 0 {
                return Err(Error::invalid(format!("vehicles[{i}].capacity"), "must be positive"));
            }
            if fleet[..i].iter().any(|o| o.id == v.id) {
                return Err(Error::invalid(
                    format!("vehicles[{i}].id"),
                    format!("duplicate vehicle id {}", v.id.0),
                ));
            }
        }
        if travel.size() != stations.len() + 1 {
            return Err(Error::invalid(
                "travel_min",
                format!(
                    "matrix has {} rows but {} nodes are defined",
                    travel.size(),
                    stations.len() + 1
                ),
            ));
        }
        if !time_budget.is_finite() || time_budget <= 0.0 {
            return Err(Error::invalid("time_budget_min", "must be positive"));
        }
        if metric {
            if let Some((u, v, w)) = travel.triangle_violation(1e-9) {
                return Err(Error::invalid(
                    "travel_min",
                    format!("triangle inequality fails for {u} -> {v} -> {w}"),
                ));
            }
        }
        Ok(Instance {
            stations,
            depot,
            travel,
            fleet,
            time_budget,
            metric,
        })
    }

    #[inline]
    pub fn stations(&self) -> &[Station] {
        &self.stations
    }

    #[inline]
    pub fn depot(&self) -> &Depot {
        &self.depot
    }

    #[inline]
    pub fn travel(&self) -> &TravelMatrix {
        &self.travel
    }

    #[inline]
    pub fn fleet(&self) -> &[Vehicle] {
        &self.fleet
    }

    #[inline]
    pub fn time_budget(&self) -> f64 {
        self.time_budget
    }

    #[inline]
    pub fn metric(&self) -> bool {
        self.metric
    }

    /// Station at `node`, or `None` for the depot and out-of-range nodes.
    #[inline]
    pub fn station(&self, node: Node) -> Option<&Station> {
        node.station_index().and_then(|i| self.stations.get(i))
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.stations.len() + 1
    }

    pub fn vehicle_index(&self, id: VehicleId) -> Option<usize> {
        self.fleet.iter().position(|v| v.id == id)
    }

    /// `sum_v |d_v|`.
    pub fn total_imbalance(&self) -> i64 {
        self.stations.iter().map(|s| s.imbalance().abs()).sum()
    }

    pub fn total_damaged(&self) -> i64 {
        self.stations.iter().map(|s| s.initial_damaged).sum()
    }

    /// Same instance with the fleet replaced; used by tools that vary fleet
    /// size on a fixed station set.
    pub fn with_fleet(&self, fleet: Vec<Vehicle>) -> Result<Self> {
        Instance::new(
            self.stations.clone(),
            self.depot.clone(),
            self.travel.clone(),
            fleet,
            self.time_budget,
            self.metric,
        )
    }
}

/// Ordered visit sequence of one vehicle. Empty means the vehicle stays home.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub vehicle: VehicleId,
    pub visits: Vec<Node>,
}

impl Route {
    pub fn empty(vehicle: VehicleId) -> Self {
        Route { vehicle, visits: Vec::new() }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.visits.len()
    }
}

/// Bikes moved at one visit. Positive loads onto the vehicle, negative unloads.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub operative: i64,
    pub damaged: i64,
}

impl Move {
    pub const NONE: Move = Move { operative: 0, damaged: 0 };

    #[inline]
    pub fn new(operative: i64, damaged: i64) -> Self {
        Move { operative, damaged }
    }
}

/// Loading instructions aligned index-for-index with a [`Route`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadingPlan {
    pub vehicle: VehicleId,
    pub moves: Vec<Move>,
}

impl LoadingPlan {
    pub fn empty(vehicle: VehicleId) -> Self {
        LoadingPlan { vehicle, moves: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveWeights {
    pub gamma_d: f64,
    pub gamma_a: f64,
    pub gamma_t: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        ObjectiveWeights { gamma_d: 1.0, gamma_a: 1.0, gamma_t: 1.0 }
    }
}

impl ObjectiveWeights {
    pub fn new(gamma_d: f64, gamma_a: f64, gamma_t: f64) -> Result<Self> {
        let w = ObjectiveWeights { gamma_d, gamma_a, gamma_t };
        w.check()?;
        Ok(w)
    }

    pub fn check(&self) -> Result<()> {
        let all = [self.gamma_d, self.gamma_a, self.gamma_t];
        if all.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(Error::Config("objective weights must be finite and nonnegative".into()));
        }
        if all.iter().all(|g| *g == 0.0) {
            return Err(Error::Config("at least one objective weight must be positive".into()));
        }
        Ok(())
    }
}

/// How the normalising denominator of the station terms is formed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DenominatorMode {
    /// `sum_v (w_v |q_v - p_v| + a_v)`.
    #[default]
    Literal,
    /// `sum_v w_v (|q_v - p_v| + a_v)`.
    WeightedDamaged,
}

/// Everything needed to turn a final state into an objective value.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Scoring {
    pub weights: ObjectiveWeights,
    pub denominator: DenominatorMode,
}

impl Scoring {
    pub fn new(weights: ObjectiveWeights) -> Self {
        Scoring { weights, denominator: DenominatorMode::Literal }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBreakdown {
    #[serde(rename = "imbalance")]
    pub imbalance_term: f64,
    #[serde(rename = "damaged")]
    pub damaged_term: f64,
    #[serde(rename = "time")]
    pub time_term: f64,
    pub total: f64,
}

/// Station and depot inventories after all loading instructions are applied,
/// plus the travel time of every vehicle (fleet order; unused vehicles are 0).
#[derive(Debug, Clone, PartialEq)]
pub struct FinalState {
    pub operative: Vec<i64>,
    pub damaged: Vec<i64>,
    pub depot_operative: i64,
    pub depot_damaged: i64,
    pub route_times: Vec<f64>,
}

/// Routes, their loading plans, and everything derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub routes: Vec<Route>,
    pub plans: Vec<LoadingPlan>,
    pub state: FinalState,
    pub objective: ObjectiveBreakdown,
}

impl Solution {
    /// Applies `plans` along `routes` and scores the result.
    pub fn evaluate(
        instance: &Instance,
        routes: Vec<Route>,
        plans: Vec<LoadingPlan>,
        scoring: &Scoring,
    ) -> Result<Self> {
        let state = crate::evaluate::apply_solution(instance, &routes, &plans)?;
        let objective = crate::evaluate::evaluate_objective(instance, &state, scoring)?;
        Ok(Solution { routes, plans, state, objective })
    }

    /// The do-nothing solution: every vehicle stays at the depot.
    pub fn empty(instance: &Instance, scoring: &Scoring) -> Self {
        let routes = instance.fleet().iter().map(|v| Route::empty(v.id)).collect();
        let plans = instance.fleet().iter().map(|v| LoadingPlan::empty(v.id)).collect();
        Solution::evaluate(instance, routes, plans, scoring)
            .expect("the empty solution is always consistent")
    }

    /// Number of vehicles that leave the depot.
    pub fn used_vehicles(&self) -> usize {
        self.routes.iter().filter(|r| !r.is_empty()).count()
    }
}
