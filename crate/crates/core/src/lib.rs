//! Exact minimum guarding of 1.5D terrains from a horizontal altitude line.

pub mod adapters;
pub mod error;
pub mod geom;
pub mod io;
pub mod oracle;
pub mod preprocess;
pub mod sweep;
pub mod visibility;
pub mod witness;

pub use error::{Error, Result};
pub use geom::{Coord, Instance, Point, Terrain};
pub use sweep::{replay, solve, solve_with, Solution, SolveOptions};
pub use witness::{certify, certify_parts, Certificate, Witness, WitnessKind};
