//! Seeded synthetic instances shaped like the two benchmark families.
//!
//! Sampling recipe (version 1):
//!
//! * depot at the centre of a 20 km x 20 km square, stations uniform on it;
//! * travel time = Euclidean distance at 20 km/h, rounded up to whole
//!   minutes (keeps the triangle inequality);
//! * capacity uniform in `10..=30`, target uniform in `2..=c-2`, operative
//!   stock uniform in `0..=c`, weight 1;
//! * every operative bike is independently replaced by a damaged one with
//!   probability `damaged_fraction`.
//!
//! Stations whose round trip from the depot exceeds the time budget are
//! resampled. Each station draws a fixed number of random values for its
//! damaged flips, so raising the fraction never lowers the damaged count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Depot, Instance, Station, StationId, TravelMatrix, Vehicle, VehicleId};

pub const SQUARE_KM: f64 = 20.0;
pub const SPEED_KMH: f64 = 20.0;
const MAX_RESAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// 28 stations, depot stock 10, 2 or 3 vehicles, 2 or 4 hour budget.
    Palma,
    /// 20 to 90 stations, empty depot, 2, 3 or 5 vehicles, 4 or 8 hour budget.
    Wien,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Palma => "palma",
            Family::Wien => "wien",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "palma" => Ok(Family::Palma),
            "wien" => Ok(Family::Wien),
            other => Err(Error::Config(format!("unknown family {other:?} (expected palma or wien)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub family: Family,
    pub station_count: usize,
    pub vehicle_count: usize,
    pub vehicle_capacity: i64,
    pub time_budget_min: f64,
    pub depot_stock: i64,
    pub damaged_fraction: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn palma(seed: u64) -> Self {
        GeneratorConfig {
            family: Family::Palma,
            station_count: 28,
            vehicle_count: 2,
            vehicle_capacity: 20,
            time_budget_min: 120.0,
            depot_stock: 10,
            damaged_fraction: 0.1,
            seed,
        }
    }

    pub fn wien(station_count: usize, seed: u64) -> Self {
        GeneratorConfig {
            family: Family::Wien,
            station_count,
            vehicle_count: 2,
            vehicle_capacity: 20,
            time_budget_min: 240.0,
            depot_stock: 0,
            damaged_fraction: 0.1,
            seed,
        }
    }

    pub fn for_family(family: Family, seed: u64) -> Self {
        match family {
            Family::Palma => GeneratorConfig::palma(seed),
            Family::Wien => GeneratorConfig::wien(20, seed),
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.vehicle_capacity <= 0 {
            return Err(Error::Config("vehicle capacity must be positive".into()));
        }
        if !(self.time_budget_min.is_finite() && self.time_budget_min > 0.0) {
            return Err(Error::Config("time budget must be positive".into()));
        }
        if self.depot_stock < 0 {
            return Err(Error::Config("depot stock must be nonnegative".into()));
        }
        if !(0.0..=1.0).contains(&self.damaged_fraction) {
            return Err(Error::Config("damaged fraction must lie in [0, 1]".into()));
        }
        if self.time_budget_min < 2.0 && self.station_count > 0 {
            return Err(Error::Config("time budget too small to reach any station and return".into()));
        }
        Ok(())
    }
}

fn minutes(a: (f64, f64), b: (f64, f64)) -> f64 {
    let km = (a.0 - b.0).hypot(a.1 - b.1);
    (km / SPEED_KMH * 60.0).ceil()
}

pub fn generate_instance(config: &GeneratorConfig) -> Result<Instance> {
    config.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let depot_xy = (SQUARE_KM / 2.0, SQUARE_KM / 2.0);
    let mut coords = vec![depot_xy];
    let mut stations = Vec::with_capacity(config.station_count);

    for i in 0..config.station_count {
        let capacity: i64 = rng.gen_range(10..=30);
        let target: i64 = rng.gen_range(2..=capacity - 2);
        let stock: i64 = rng.gen_range(0..=capacity);
        let mut damaged = 0;
        for _ in 0..stock {
            let u: f64 = rng.gen();
            if u < config.damaged_fraction {
                damaged += 1;
            }
        }
        let mut attempts = 0;
        let xy = loop {
            let xy = (rng.gen_range(0.0..SQUARE_KM), rng.gen_range(0.0..SQUARE_KM));
            if 2.0 * minutes(depot_xy, xy) <= config.time_budget_min {
                break xy;
            }
            attempts += 1;
            if attempts >= MAX_RESAMPLES {
                return Err(Error::Config(format!(
                    "no station location reachable within {} minutes",
                    config.time_budget_min
                )));
            }
        };
        coords.push(xy);
        stations.push(Station {
            id: StationId(i as u32 + 1),
            capacity,
            initial_operative: stock - damaged,
            initial_damaged: damaged,
            target,
            weight: 1.0,
        });
    }

    let rows = coords
        .iter()
        .map(|&a| coords.iter().map(|&b| minutes(a, b)).collect())
        .collect();
    let fleet = (0..config.vehicle_count)
        .map(|i| Vehicle { id: VehicleId(i as u32 + 1), capacity: config.vehicle_capacity })
        .collect();
    Instance::new(
        stations,
        Depot { initial_operative: config.depot_stock, capacity: None },
        TravelMatrix::from_rows(rows)?,
        fleet,
        config.time_budget_min,
        true,
    )
}
