use thiserror::Error;

use crate::geometry::ValidationReport;

/// Errors from evaluating the closed-form actuator relations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("central angle {0} outside (0, pi/2]")]
    ThetaOutOfDomain(f64),
    #[error("cPAM pressure {p_cpam} Pa is below half the body pressure {half_vine} Pa")]
    NonPositiveDrive { p_cpam: f64, half_vine: f64 },
    #[error("cPAM width {width} m does not fit a {diameter} m body")]
    ChordTooWide { width: f64, diameter: f64 },
    #[error("eps0 - eps_ps = {0} is too small to calibrate")]
    DegenerateCalibration(f64),
    #[error("contraction {eps} outside [{lo}, {hi}]")]
    ContractionOutOfRange { eps: f64, lo: f64, hi: f64 },
}

/// Errors from the equilibrium solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0}")]
    Infeasible(ValidationReport),
    #[error("no equilibrium in the search bracket at {pressure} Pa")]
    NoEquilibrium { pressure: f64 },
    #[error("solver did not converge in {iterations} iterations at {pressure} Pa")]
    NonConvergence { pressure: f64, iterations: usize },
    #[error("pressures must be ascending (index {index})")]
    UnsortedPressures { index: usize },
    #[error("sweep point {index} ({pressure} Pa): {source}")]
    AtPoint {
        index: usize,
        pressure: f64,
        #[source]
        source: Box<SolveError>,
    },
}

/// Errors from composing the robot shape.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShapeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("expected {expected} line pressures, got {got}")]
    PressureCount { expected: usize, got: usize },
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: SolveError,
    },
}

/// Errors from datasets, tables and the error metric.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("no fabricated dimension matches {0}")]
    UnknownDimension(String),
    #[error("no data points left after skipping bends below {threshold} rad/m")]
    EmptyAfterFilter { threshold: f64 },
    #[error("dataset has no data points")]
    EmptyDataset,
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("model evaluation failed at {pressure} Pa: {source}")]
    Model {
        pressure: f64,
        #[source]
        source: SolveError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
