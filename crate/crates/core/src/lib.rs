//! Static bike-sharing repositioning with operative and damaged bikes.
//!
//! A heterogeneous fleet leaves a single depot, visits stations (possibly
//! several times) and moves operative bikes from surplus to deficit stations
//! while collecting damaged bikes for the depot. Solutions are scored by a
//! weighted sum of the remaining imbalance, the damaged bikes left behind and
//! the fleet's travel time, each normalised to one.
//!
//! The solver is a two-phase matheuristic:
//!
//! * [`construction`] builds routes with a randomized greedy rule,
//! * [`loading`] recomputes exactly optimal loading instructions for those
//!   routes with an integer program,
//! * [`matheuristic`] repeats both phases and keeps the best solution.
//!
//! [`io`] and [`generator`] handle documents and synthetic instances;
//! [`bench`] runs parameter sweeps.

pub mod bench;
pub mod construction;
pub mod error;
pub mod evaluate;
pub mod generator;
pub mod io;
pub mod loading;
pub mod matheuristic;
pub mod model;
pub mod validate;

pub use error::{Error, Result};
pub use model::{
    classify_station, DenominatorMode, Depot, FinalState, Instance, LoadingPlan, Move, Node,
    ObjectiveBreakdown, ObjectiveWeights, Route, Scoring, Solution, Station, StationClass,
    StationId, TravelMatrix, Vehicle, VehicleId,
};
pub use validate::{validate_solution, Violation};
