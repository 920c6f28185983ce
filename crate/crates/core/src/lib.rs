//! Optimal any-angle shortest paths on the sphere over equirectangular
//! occupancy grids, with a flat-grid baseline, a brute-force oracle, a route
//! legality checker and a benchmark harness.

pub mod anya_core;
pub mod bench;
mod engine;
pub mod geom;
pub mod grid;
pub mod oracle;
pub mod route;
pub mod sanya;

pub use geom::{SphereConfig, SpherePoint};
pub use grid::{GridMap, GridPoint, GridVertex, Interval};
pub use route::{RouteRecord, SearchError, SegmentKind};
