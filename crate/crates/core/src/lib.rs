//! Covering paths on integral grids under the l1 metric.
//!
//! A covering path visits a set of stops such that every point of the grid
//! lies within l1 distance `k` of some stop, and costs `alpha L + beta T`
//! for path length `L` and stop count `T`. This crate evaluates closed-form
//! lower and upper bounds on that cost, constructs covering paths that
//! meet the upper bounds, certifies coverage, and solves tiny instances
//! exactly for comparison.

pub mod bounds;
pub mod error;
pub mod generate;
pub mod grid;
pub mod oracle;
pub mod pathgen;
pub mod rational;
pub mod stops;
pub mod verify;

pub use bounds::{BoundsProfile, CostParams};
pub use error::{Error, Result};
pub use grid::{l1_distance, parse_grid, BoundaryLoop, Grid, Point};
pub use oracle::OracleConfig;
pub use pathgen::{construct, construct_with, ConstructOptions, CoveringPath, PathMethod};
pub use rational::Q;
pub use stops::{StopLattice, StopSet};
pub use verify::{AuditReport, CoverageReport};
