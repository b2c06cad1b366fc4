#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssbrp::generator::{Family, GeneratorConfig};
use ssbrp::{Depot, Instance, Node, Route, Station, StationId, TravelMatrix, Vehicle, VehicleId};

pub fn station(id: u32, capacity: i64, operative: i64, damaged: i64, target: i64) -> Station {
    Station {
        id: StationId(id),
        capacity,
        initial_operative: operative,
        initial_damaged: damaged,
        target,
        weight: 1.0,
    }
}

/// Rounded-up Euclidean minutes between random grid points; depot first.
pub fn grid_travel(rng: &mut impl Rng, nodes: usize) -> TravelMatrix {
    let pts: Vec<(f64, f64)> = (0..nodes).map(|_| (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))).collect();
    let rows = pts
        .iter()
        .map(|a| pts.iter().map(|b| ((a.0 - b.0).hypot(a.1 - b.1) * 3.0).ceil()).collect())
        .collect();
    TravelMatrix::from_rows(rows).unwrap()
}

pub fn uniform_travel(nodes: usize, t: f64) -> TravelMatrix {
    let rows = (0..nodes)
        .map(|u| (0..nodes).map(|v| if u == v { 0.0 } else { t }).collect())
        .collect();
    TravelMatrix::from_rows(rows).unwrap()
}

/// A small instance plus fixed routes inside the enumeration guard rails:
/// at most 2 routes of at most 6 visits, k <= 4, |d| and a <= 4.
pub fn oracle_case(seed: u64) -> (Instance, Vec<Route>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=5);
    let stations = (0..n)
        .map(|i| {
            let capacity = rng.gen_range(4..=10);
            let target = rng.gen_range(0..=capacity);
            let lo = (target - 4).max(0);
            let hi = (target + 4).min(capacity);
            let operative = rng.gen_range(lo..=hi);
            let damaged = rng.gen_range(0..=(capacity - operative).min(4));
            station(i as u32 + 1, capacity, operative, damaged, target)
        })
        .collect();
    let vehicles = rng.gen_range(1..=2);
    let fleet = (0..vehicles)
        .map(|i| Vehicle { id: VehicleId(i + 1), capacity: rng.gen_range(1..=4) })
        .collect::<Vec<_>>();
    let depot = Depot { initial_operative: rng.gen_range(0..=4), capacity: None };
    let inst = Instance::new(stations, depot, uniform_travel(n + 1, 1.0), fleet.clone(), 100.0, true).unwrap();

    let routes = fleet
        .iter()
        .map(|v| {
            let len = rng.gen_range(3..=6);
            let mut visits = vec![Node::DEPOT];
            while visits.len() < len - 1 {
                let last = *visits.last().unwrap();
                let next = if rng.gen_bool(0.2) { Node::DEPOT } else { Node::station(rng.gen_range(0..n)) };
                if next != last {
                    visits.push(next);
                }
            }
            if *visits.last().unwrap() != Node::DEPOT {
                visits.push(Node::DEPOT);
            }
            Route { vehicle: v.id, visits }
        })
        .collect();
    (inst, routes)
}

/// Instances with a perfect plan: surplus and deficit match, ample time and
/// a fleet that can carry every bike that has to move.
pub fn toy_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
    let pairs = rng.gen_range(1..=3);
    let mut stations = Vec::new();
    let mut flow = 0;
    for _ in 0..pairs {
        let amount = rng.gen_range(1..=5);
        let (cs, cd) = (rng.gen_range(10..=15), rng.gen_range(10..=15));
        let q_s = rng.gen_range(0..=cs - amount - 2);
        let q_d = rng.gen_range(amount..=cd - 2);
        let a_s = rng.gen_range(0..=2);
        stations.push((cs, q_s + amount, a_s, q_s));
        stations.push((cd, q_d - amount, 0, q_d));
        flow += amount + a_s;
    }
    stations.shuffle(&mut rng);
    let stations: Vec<Station> = stations
        .into_iter()
        .enumerate()
        .map(|(i, (c, p, a, q))| station(i as u32 + 1, c, p, a, q))
        .collect();
    let n = stations.len();
    Instance::new(
        stations,
        Depot { initial_operative: 0, capacity: None },
        grid_travel(&mut rng, n + 1),
        vec![Vehicle { id: VehicleId(1), capacity: flow.max(1) }],
        10_000.0,
        true,
    )
    .unwrap()
}

/// Mixed generator configurations for fuzzing.
pub fn fuzz_config(seed: u64) -> GeneratorConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let family = if rng.gen_bool(0.5) { Family::Palma } else { Family::Wien };
    let mut cfg = GeneratorConfig::for_family(family, seed);
    cfg.station_count = rng.gen_range(1..=30);
    cfg.vehicle_count = rng.gen_range(0..=4);
    cfg.vehicle_capacity = rng.gen_range(1..=25);
    cfg.time_budget_min = [30.0, 60.0, 120.0, 240.0][rng.gen_range(0..4)];
    cfg.depot_stock = rng.gen_range(0..=15);
    cfg.damaged_fraction = [0.0, 0.1, 0.3, 0.6][rng.gen_range(0..4)];
    cfg
}

/// Weighted remaining imbalance plus damaged bikes, before normalising.
///
/// Equal station terms can round differently once divided and summed, so
/// dominance checks compare this instead.
pub fn station_numerator(inst: &Instance, sol: &ssbrp::Solution) -> f64 {
    inst.stations()
        .iter()
        .zip(sol.state.operative.iter().zip(&sol.state.damaged))
        .map(|(s, (&p, &a))| s.weight * ((s.target - p).abs() + a) as f64)
        .sum()
}
