//! Integer program for the loading instructions of a fixed set of routes.
//!
//! For every used vehicle `l` the model has a depot allotment `w0[l]` and,
//! for every visit `i`, an operative move `x[l,i]` and a damaged move
//! `y[l,i]` (positive = loaded onto the vehicle). Moves that are forced to
//! zero (operative moves at balanced stations, damaged moves at stations
//! without damaged bikes) are not materialised.
//!
//! Text dump grammar (one item per line):
//!
//! ```text
//! min <const> [(+|-) <coef> <var>]*
//! s.t.
//!   <label>: <coef> <var> [(+|-) <coef> <var>]* (<=|>=|=) <int>
//! bounds
//!   <lo> <= <var> <= <hi>
//! general
//!   <var> [<var>]*
//! end
//! ```
//!
//! Variables are named `w0[<vehicle>]`, `x[<vehicle>,<visit>]` and
//! `y[<vehicle>,<visit>]` with 1-based visit positions.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Instance, Node, Route, StationClass, VehicleId};

/// A non-empty route with its per-node visit positions.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteSkeleton {
    pub vehicle: VehicleId,
    pub capacity: i64,
    pub visits: Vec<Node>,
    /// Every 0-based position at which each node is visited.
    pub index_sets: BTreeMap<Node, Vec<usize>>,
}

impl RouteSkeleton {
    pub fn new(instance: &Instance, route: &Route) -> Result<Self> {
        let slot = instance
            .vehicle_index(route.vehicle)
            .ok_or_else(|| Error::invalid("route.vehicle", format!("unknown vehicle {}", route.vehicle.0)))?;
        let n = route.visits.len();
        if n < 2 || !route.visits[0].is_depot() || !route.visits[n - 1].is_depot() {
            return Err(Error::invalid(
                format!("route of {}", route.vehicle),
                "must start and end at the depot",
            ));
        }
        let mut index_sets: BTreeMap<Node, Vec<usize>> = BTreeMap::new();
        for (i, &v) in route.visits.iter().enumerate() {
            if !instance.travel().contains(v) {
                return Err(Error::invalid(format!("route of {}", route.vehicle), format!("unknown node {}", v.0)));
            }
            index_sets.entry(v).or_default().push(i);
        }
        Ok(RouteSkeleton {
            vehicle: route.vehicle,
            capacity: instance.fleet()[slot].capacity,
            visits: route.visits.clone(),
            index_sets,
        })
    }

    /// Skeletons of all non-empty routes, in the given order.
    pub fn from_routes(instance: &Instance, routes: &[Route]) -> Result<Vec<Self>> {
        routes
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| RouteSkeleton::new(instance, r))
            .collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.visits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    DepotAllotment { route: usize },
    Operative { route: usize, visit: usize },
    Damaged { route: usize, visit: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub kind: VarKind,
    pub name: String,
    pub lower: i64,
    pub upper: i64,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub label: String,
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Constraint {
    pub fn holds(&self, values: &[i64]) -> bool {
        let lhs: i64 = self.terms.iter().map(|&(v, c)| c * values[v]).sum();
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadingOptions {
    /// Scale each station's residual by its weight in the objective.
    pub weighted: bool,
}

/// Variable handles of one route: depot allotment plus per-visit moves.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteVars {
    pub allotment: usize,
    pub operative: Vec<Option<usize>>,
    pub damaged: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadingModel {
    pub skeletons: Vec<RouteSkeleton>,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub route_vars: Vec<RouteVars>,
    /// Objective value of the all-zero assignment.
    pub constant: f64,
    /// Every objective coefficient is integral.
    pub integral_costs: bool,
}

impl LoadingModel {
    pub fn objective(&self, values: &[i64]) -> f64 {
        self.constant
            + self
                .variables
                .iter()
                .zip(values)
                .map(|(v, &x)| v.cost * x as f64)
                .sum::<f64>()
    }

    /// Checks bounds and constraints in exact integer arithmetic.
    pub fn is_feasible(&self, values: &[i64]) -> bool {
        values.len() == self.variables.len()
            && self.variables.iter().zip(values).all(|(v, &x)| v.lower <= x && x <= v.upper)
            && self.constraints.iter().all(|c| c.holds(values))
    }

    pub fn to_algebraic(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "min {}", fmt_num(self.constant));
        for v in &self.variables {
            if v.cost != 0.0 {
                let sign = if v.cost < 0.0 { '-' } else { '+' };
                let _ = write!(out, " {sign} {} {}", fmt_num(v.cost.abs()), v.name);
            }
        }
        out.push_str("\ns.t.\n");
        for c in &self.constraints {
            let _ = write!(out, "  {}:", c.label);
            for (k, &(var, coef)) in c.terms.iter().enumerate() {
                let name = &self.variables[var].name;
                match (k, coef < 0) {
                    (0, false) => {
                        let _ = write!(out, " {coef} {name}");
                    }
                    (0, true) => {
                        let _ = write!(out, " -{} {name}", -coef);
                    }
                    (_, false) => {
                        let _ = write!(out, " + {coef} {name}");
                    }
                    (_, true) => {
                        let _ = write!(out, " - {} {name}", -coef);
                    }
                }
            }
            let op = match c.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
                Sense::Eq => "=",
            };
            let _ = writeln!(out, " {op} {}", c.rhs);
        }
        out.push_str("bounds\n");
        for v in &self.variables {
            let _ = writeln!(out, "  {} <= {} <= {}", v.lower, v.name, v.upper);
        }
        out.push_str("general\n");
        if !self.variables.is_empty() {
            let names: Vec<&str> = self.variables.iter().map(|v| v.name.as_str()).collect();
            let _ = writeln!(out, "  {}", names.join(" "));
        }
        out.push_str("end\n");
        out
    }
}

fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

struct Builder {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
}

impl Builder {
    fn var(&mut self, kind: VarKind, name: String, lower: i64, upper: i64, cost: f64) -> usize {
        self.variables.push(Variable { kind, name, lower, upper, cost });
        self.variables.len() - 1
    }

    fn row(&mut self, label: String, terms: Vec<(usize, i64)>, sense: Sense, rhs: i64) {
        if !terms.is_empty() {
            self.constraints.push(Constraint { label, terms, sense, rhs });
        }
    }
}

/// Builds the loading model for the given routes.
pub fn build_model(instance: &Instance, skeletons: &[RouteSkeleton], options: LoadingOptions) -> Result<LoadingModel> {
    for sk in skeletons {
        let fresh = RouteSkeleton::new(instance, &Route { vehicle: sk.vehicle, visits: sk.visits.clone() })?;
        if fresh != *sk {
            return Err(Error::invalid(format!("skeleton of {}", sk.vehicle), "does not match the instance"));
        }
    }
    let stations = instance.stations();
    let weight = |i: usize| if options.weighted { stations[i].weight } else { 1.0 };

    let mut b = Builder { variables: Vec::new(), constraints: Vec::new() };
    let mut route_vars = Vec::with_capacity(skeletons.len());
    let depot_stock = instance.depot().initial_operative;

    for (r, sk) in skeletons.iter().enumerate() {
        let vid = sk.vehicle.0;
        let k = sk.capacity;
        let allotment = b.var(VarKind::DepotAllotment { route: r }, format!("w0[{vid}]"), 0, depot_stock, 0.0);
        let mut operative = Vec::with_capacity(sk.len());
        let mut damaged = Vec::with_capacity(sk.len());
        for (i, &node) in sk.visits.iter().enumerate() {
            let pos = i + 1;
            let xname = format!("x[{vid},{pos}]");
            let yname = format!("y[{vid},{pos}]");
            let kind_x = VarKind::Operative { route: r, visit: i };
            let kind_y = VarKind::Damaged { route: r, visit: i };
            match node.station_index() {
                None => {
                    operative.push(Some(b.var(kind_x, xname, -k, k, 0.0)));
                    damaged.push(Some(b.var(kind_y, yname, -k, 0, 0.0)));
                }
                Some(s) => {
                    let st = &stations[s];
                    let d = st.imbalance();
                    operative.push(match st.class() {
                        StationClass::Balanced => None,
                        StationClass::Surplus => Some(b.var(kind_x, xname, 0, d.min(k), -weight(s))),
                        StationClass::Deficit => Some(b.var(kind_x, xname, d.max(-k), 0, weight(s))),
                    });
                    damaged.push(if st.has_damaged() {
                        Some(b.var(kind_y, yname, 0, st.initial_damaged.min(k), -weight(s)))
                    } else {
                        None
                    });
                }
            }
        }
        route_vars.push(RouteVars { allotment, operative, damaged });
    }

    for (r, sk) in skeletons.iter().enumerate() {
        let vid = sk.vehicle.0;
        let rv = &route_vars[r];
        let n = sk.len();
        let mut xs: Vec<(usize, i64)> = Vec::new();
        let mut ys: Vec<(usize, i64)> = Vec::new();
        let mut depot_xs: Vec<(usize, i64)> = Vec::new();
        for j in 0..n {
            if let Some(x) = rv.operative[j] {
                xs.push((x, 1));
            }
            if let Some(y) = rv.damaged[j] {
                ys.push((y, 1));
            }
            let pos = j + 1;
            if j + 1 < n {
                let both: Vec<(usize, i64)> = xs.iter().chain(&ys).copied().collect();
                b.row(format!("cap[{vid},{pos}]"), both, Sense::Le, sk.capacity);
                b.row(format!("op_nonneg[{vid},{pos}]"), xs.clone(), Sense::Ge, 0);
                b.row(format!("dam_nonneg[{vid},{pos}]"), ys.clone(), Sense::Ge, 0);
            } else {
                b.row(format!("unload_op[{vid}]"), xs.clone(), Sense::Eq, 0);
            }
            if sk.visits[j].is_depot() {
                b.row(format!("unload_dam[{vid},{pos}]"), ys.clone(), Sense::Eq, 0);
                depot_xs.push((rv.operative[j].unwrap(), 1));
                let mut take = depot_xs.clone();
                take.push((rv.allotment, -1));
                b.row(format!("depot_take[{vid},{pos}]"), take, Sense::Le, 0);
            }
        }
    }

    let allotments: Vec<(usize, i64)> = route_vars.iter().map(|rv| (rv.allotment, 1)).collect();
    b.row("depot_stock".to_string(), allotments, Sense::Le, depot_stock);

    let mut per_station_x: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
    let mut per_station_y: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
    for (r, sk) in skeletons.iter().enumerate() {
        for (j, node) in sk.visits.iter().enumerate() {
            if let Some(s) = node.station_index() {
                if let Some(x) = route_vars[r].operative[j] {
                    per_station_x.entry(s).or_default().push((x, 1));
                }
                if let Some(y) = route_vars[r].damaged[j] {
                    per_station_y.entry(s).or_default().push((y, 1));
                }
            }
        }
    }
    for (&s, terms) in &per_station_x {
        let st = &stations[s];
        let label = format!("station_op[{}]", Node::station(s).0);
        match st.class() {
            StationClass::Surplus => b.row(label, terms.clone(), Sense::Le, st.imbalance()),
            StationClass::Deficit => b.row(label, terms.clone(), Sense::Ge, st.imbalance()),
            StationClass::Balanced => {}
        }
    }
    for (&s, terms) in &per_station_y {
        let st = &stations[s];
        b.row(format!("station_dam[{}]", Node::station(s).0), terms.clone(), Sense::Le, st.initial_damaged);
    }
    // Deliveries must leave room for damaged bikes that stay parked.
    for (&s, xterms) in &per_station_x {
        let st = &stations[s];
        if st.class() == StationClass::Deficit && st.target + st.initial_damaged > st.capacity {
            let mut terms: Vec<(usize, i64)> = xterms.iter().map(|&(v, _)| (v, -1)).collect();
            if let Some(yterms) = per_station_y.get(&s) {
                terms.extend(yterms.iter().map(|&(v, _)| (v, -1)));
            }
            let rhs = st.capacity - st.initial_operative - st.initial_damaged;
            b.row(format!("station_cap[{}]", Node::station(s).0), terms, Sense::Le, rhs);
        }
    }

    let constant: f64 = stations
        .iter()
        .enumerate()
        .map(|(i, s)| weight(i) * (s.imbalance().abs() + s.initial_damaged) as f64)
        .sum();
    let integral_costs = b.variables.iter().all(|v| v.cost.fract() == 0.0) && constant.fract() == 0.0;

    Ok(LoadingModel {
        skeletons: skeletons.to_vec(),
        variables: b.variables,
        constraints: b.constraints,
        route_vars,
        constant,
        integral_costs,
    })
}
