//! Static pressure-to-bending models for the pneumatic actuators used to
//! steer soft growing ("vine") robots: the pouch motor, the cylindrical
//! pneumatic artificial muscle (cPAM) and the fabric pneumatic artificial
//! muscle (fPAM).
//!
//! The crate is organized bottom-up:
//!
//! * [`geometry`]: actuator/vine geometry, fabrication checks, body force
//! * [`models`]: closed-form force and kinematic relations per actuator
//! * [`solver`]: static equilibrium, pressure in, bending per length out
//! * [`shape`]: superposition of actuator lines and constant-curvature chaining
//! * [`dataset`]: built-in eversion table, bend CSV I/O, normalized model error
//! * [`design`]: ranking of actuator candidates against weighted priorities
//!
//! All quantities are SI internally; [`units`] converts at the edges.

pub mod dataset;
pub mod design;
pub mod error;
pub mod geometry;
pub mod models;
pub mod roots;
pub mod shape;
pub mod solver;
pub mod units;

pub use error::{DataError, ModelError, ShapeError, SolveError};
pub use geometry::{
    validate_spec, vine_axial_force, ActuatorKind, ActuatorLine, ActuatorSpec, FpamStrains, ValidationReport, VineBody,
    VineSpec,
};
pub use models::FpamCalibration;
pub use solver::{BendModel, BendSolution, SolverConfig};
