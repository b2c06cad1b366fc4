//! Exhaustive enumeration of loading instructions for tiny route sets.
//!
//! Shares no code with the model builder or the branch and bound. Each route
//! is enumerated on its own by walking the visits and trying every integer
//! move in the natural domain of the visited node; complete sequences are
//! collapsed into their effect on the stations and the depot, and the
//! distinct effects of all routes are then combined exhaustively.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{Instance, Move, Node, Route};

pub const MAX_VISITS: usize = 12;
pub const MAX_CAPACITY: i64 = 6;
pub const MAX_STATION_COUNT: i64 = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub objective: f64,
    /// One optimal move list per non-empty route, in input order.
    pub moves: Vec<Vec<Move>>,
}

/// Effect of one complete route loading on the rest of the system.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Effect {
    /// Smallest depot allotment that covers the route's net depot takes.
    depot_need: i64,
    /// Net operative and damaged bikes taken from each visited station.
    taken: Vec<(usize, i64, i64)>,
}

/// Minimum loading objective for `routes` found by enumeration.
///
/// Guard rails: at most [`MAX_VISITS`] visits in total, vehicle capacities
/// up to [`MAX_CAPACITY`], and visited stations with imbalance and damaged
/// counts up to [`MAX_STATION_COUNT`].
pub fn brute_force_loading(instance: &Instance, routes: &[Route], weighted: bool) -> Result<BruteForceResult> {
    let routes: Vec<&Route> = routes.iter().filter(|r| !r.is_empty()).collect();
    let total: usize = routes.iter().map(|r| r.visits.len()).sum();
    if total > MAX_VISITS {
        return Err(Error::GuardRail(format!("{total} visits > {MAX_VISITS}")));
    }
    let mut capacities = Vec::with_capacity(routes.len());
    for r in &routes {
        let slot = instance
            .vehicle_index(r.vehicle)
            .ok_or_else(|| Error::invalid("route.vehicle", format!("unknown vehicle {}", r.vehicle.0)))?;
        let k = instance.fleet()[slot].capacity;
        if k > MAX_CAPACITY {
            return Err(Error::GuardRail(format!("vehicle capacity {k} > {MAX_CAPACITY}")));
        }
        capacities.push(k);
        for &v in &r.visits {
            if let Some(s) = instance.station(v) {
                if s.imbalance().abs() > MAX_STATION_COUNT || s.initial_damaged > MAX_STATION_COUNT {
                    return Err(Error::GuardRail(format!("station {} exceeds enumeration bounds", v.0)));
                }
            } else if !v.is_depot() {
                return Err(Error::invalid("route", format!("unknown node {}", v.0)));
            }
        }
        let n = r.visits.len();
        if n < 2 || !r.visits[0].is_depot() || !r.visits[n - 1].is_depot() {
            return Err(Error::invalid("route", "must start and end at the depot"));
        }
    }

    let per_route: Vec<Vec<(Effect, Vec<Move>)>> = routes
        .iter()
        .zip(&capacities)
        .map(|(r, &k)| enumerate_route(instance, &r.visits, k))
        .collect();

    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut pick = vec![0usize; per_route.len()];
    combine(instance, weighted, &per_route, 0, &mut pick, &mut best);
    let (objective, choice) = best.expect("the all-zero loading is always feasible");
    let moves = choice
        .iter()
        .enumerate()
        .map(|(r, &c)| per_route[r][c].1.clone())
        .collect();
    Ok(BruteForceResult { objective, moves })
}

fn enumerate_route(instance: &Instance, visits: &[Node], k: i64) -> Vec<(Effect, Vec<Move>)> {
    let mut found: BTreeMap<Effect, Vec<Move>> = BTreeMap::new();
    let mut moves = Vec::with_capacity(visits.len());
    walk(instance, visits, k, 0, 0, 0, 0, 0, &mut moves, &mut found);
    found.into_iter().collect()
}

#[allow(clippy::too_many_arguments)]
fn walk(
    instance: &Instance,
    visits: &[Node],
    k: i64,
    at: usize,
    operative: i64,
    damaged: i64,
    depot_taken: i64,
    depot_need: i64,
    moves: &mut Vec<Move>,
    found: &mut BTreeMap<Effect, Vec<Move>>,
) {
    if at == visits.len() {
        if operative != 0 || damaged != 0 {
            return;
        }
        let mut taken: BTreeMap<usize, (i64, i64)> = BTreeMap::new();
        for (v, m) in visits.iter().zip(moves.iter()) {
            if let Some(i) = v.station_index() {
                let e = taken.entry(i).or_default();
                e.0 += m.operative;
                e.1 += m.damaged;
            }
        }
        let effect = Effect {
            depot_need,
            taken: taken.into_iter().map(|(i, (x, y))| (i, x, y)).collect(),
        };
        found.entry(effect).or_insert_with(|| moves.clone());
        return;
    }
    let node = visits[at];
    let last = at + 1 == visits.len();
    let (x_range, y_range) = match instance.station(node) {
        None => ((-k, k), (-k, 0)),
        Some(s) => {
            let d = s.imbalance();
            let x = if d > 0 { (0, d) } else if d < 0 { (d, 0) } else { (0, 0) };
            (x, (0, s.initial_damaged))
        }
    };
    for x in x_range.0..=x_range.1 {
        for y in y_range.0..=y_range.1 {
            let op = operative + x;
            let dm = damaged + y;
            if !last && (op < 0 || dm < 0 || op + dm > k) {
                continue;
            }
            if node.is_depot() && dm != 0 {
                continue;
            }
            let (taken, need) = if node.is_depot() {
                let t = depot_taken + x;
                (t, depot_need.max(t))
            } else {
                (depot_taken, depot_need)
            };
            moves.push(Move::new(x, y));
            walk(instance, visits, k, at + 1, op, dm, taken, need, moves, found);
            moves.pop();
        }
    }
}

fn combine(
    instance: &Instance,
    weighted: bool,
    per_route: &[Vec<(Effect, Vec<Move>)>],
    r: usize,
    pick: &mut Vec<usize>,
    best: &mut Option<(f64, Vec<usize>)>,
) {
    if r < per_route.len() {
        for c in 0..per_route[r].len() {
            pick[r] = c;
            combine(instance, weighted, per_route, r + 1, pick, best);
        }
        return;
    }
    let need: i64 = pick.iter().enumerate().map(|(r, &c)| per_route[r][c].0.depot_need).sum();
    if need > instance.depot().initial_operative {
        return;
    }
    let stations = instance.stations();
    let mut x_total = vec![0i64; stations.len()];
    let mut y_total = vec![0i64; stations.len()];
    for (r, &c) in pick.iter().enumerate() {
        for &(i, x, y) in &per_route[r][c].0.taken {
            x_total[i] += x;
            y_total[i] += y;
        }
    }
    let mut objective = 0.0;
    for (i, s) in stations.iter().enumerate() {
        let d = s.imbalance();
        let (x, y) = (x_total[i], y_total[i]);
        if d > 0 && x > d || d < 0 && x < d || y > s.initial_damaged {
            return;
        }
        if s.initial_operative - x + s.initial_damaged - y > s.capacity {
            return;
        }
        let w = if weighted { s.weight } else { 1.0 };
        objective += w * ((d - x).abs() + s.initial_damaged - y) as f64;
    }
    if best.as_ref().is_none_or(|(b, _)| objective < *b) {
        *best = Some((objective, pick.clone()));
    }
}
