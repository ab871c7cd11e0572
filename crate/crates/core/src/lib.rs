//! Multi-point Schwarz-Pick machinery on the unit disk.
//!
//! The crate evaluates hyperbolic difference quotients of holomorphic
//! self-maps of the disk, runs the Schur algorithm at arbitrary nodes, computes
//! Peschl's invariant derivatives and turns Schur parameters into sharp value
//! and derivative bounds. Finite Nevanlinna-Pick data are tested for
//! feasibility and interpolated.

pub mod bounds;
pub mod error;
pub mod function;
pub mod geometry;
pub mod hdq;
pub mod io;
pub mod jet;
pub mod par;
pub mod peschl;
pub mod pick;
pub mod verify;

pub use error::{Error, Result};
pub use function::AnalyticFn;
pub use geometry::{ClosedDisk, DiskPoint, MobiusMap};
pub use jet::Jet;
