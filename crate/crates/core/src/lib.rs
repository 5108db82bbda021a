//! Brauer-Severi fibrations of smooth orders through their local quiver data.
//!
//! Starting from a quiver setting `(Q, α)` with multiplicities `γ`, the crate
//! decides where the fibration is flat, recognises the reduced settings whose
//! flat locus is larger than the Azumaya locus, and describes the fibers over
//! flat non-Azumaya points twice: as iterated fibered products of graphs of
//! projections, and as smooth projective toric varieties with explicit fans
//! and cohomology rings.

pub mod error;
pub mod fiber;
pub mod limits;
pub mod quiver;
pub mod rep_theory;
pub mod shapes;
pub mod cofree;
pub mod flat;
pub mod toric;
pub mod catalog;
pub mod oracle;
pub mod cli;

pub use error::{Error, Result};
pub use limits::Limits;
pub use quiver::{Arrow, DimensionVector, EulerMatrix, Quiver, QuiverSetting};
