//! Actuator and vine body geometry, fabrication constraints and the axial
//! body force.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Relative band around the nominal fold `f = L0/π` accepted for a cPAM.
pub const FOLD_TOLERANCE: f64 = 0.30;

/// Maximum number of actuator lines on one vine body.
pub const MAX_LINES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActuatorKind {
    Cpam,
    #[serde(rename = "pouch")]
    PouchMotor,
    Fpam,
}

impl ActuatorKind {
    pub const ALL: [ActuatorKind; 3] = [ActuatorKind::PouchMotor, ActuatorKind::Cpam, ActuatorKind::Fpam];

    /// Short lowercase name used in files and on the command line.
    pub fn as_str(self) -> &'static str {
        match self {
            ActuatorKind::PouchMotor => "pouch",
            ActuatorKind::Cpam => "cpam",
            ActuatorKind::Fpam => "fpam",
        }
    }
}

impl fmt::Display for ActuatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ActuatorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pouch" | "pouch-motor" | "pm" => Ok(ActuatorKind::PouchMotor),
            "cpam" => Ok(ActuatorKind::Cpam),
            "fpam" => Ok(ActuatorKind::Fpam),
            other => Err(format!("unknown actuator kind '{other}' (expected pouch, cpam or fpam)")),
        }
    }
}

/// Geometry of a single actuator. All lengths in meters.
///
/// The fPAM tube diameter is not stored; it follows from the flat width as
/// `D = 2w/π` (see [`ActuatorSpec::tube_diameter`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ActuatorSpec {
    #[serde(rename = "pouch")]
    PouchMotor {
        width: f64,
        length: f64,
    },
    Cpam {
        width: f64,
        length: f64,
        fold: f64,
    },
    Fpam {
        width: f64,
    },
}

impl ActuatorSpec {
    pub fn pouch(width: f64, length: f64) -> Self {
        ActuatorSpec::PouchMotor { width, length }
    }

    pub fn cpam(width: f64, length: f64, fold: f64) -> Self {
        ActuatorSpec::Cpam { width, length, fold }
    }

    /// cPAM with the standardized fabrication fold of 8 mm per 20 mm of length.
    pub fn cpam_standard_fold(width: f64, length: f64) -> Self {
        ActuatorSpec::Cpam { width, length, fold: standard_fold(length) }
    }

    pub fn fpam(width: f64) -> Self {
        ActuatorSpec::Fpam { width }
    }

    /// Shorthand for building a spec from millimeter dimensions. `length_mm`
    /// is ignored for fPAMs; cPAMs get the standardized fold.
    pub fn from_mm(kind: ActuatorKind, width_mm: f64, length_mm: f64) -> Self {
        let w = width_mm / 1000.0;
        let l = length_mm / 1000.0;
        match kind {
            ActuatorKind::PouchMotor => Self::pouch(w, l),
            ActuatorKind::Cpam => Self::cpam_standard_fold(w, l),
            ActuatorKind::Fpam => Self::fpam(w),
        }
    }

    pub fn kind(&self) -> ActuatorKind {
        match self {
            ActuatorSpec::PouchMotor { .. } => ActuatorKind::PouchMotor,
            ActuatorSpec::Cpam { .. } => ActuatorKind::Cpam,
            ActuatorSpec::Fpam { .. } => ActuatorKind::Fpam,
        }
    }

    pub fn width(&self) -> f64 {
        match *self {
            ActuatorSpec::PouchMotor { width, .. }
            | ActuatorSpec::Cpam { width, .. }
            | ActuatorSpec::Fpam { width } => width,
        }
    }

    /// Uninflated length `L0`; `None` for the continuous fPAM tube.
    pub fn length(&self) -> Option<f64> {
        match *self {
            ActuatorSpec::PouchMotor { length, .. } | ActuatorSpec::Cpam { length, .. } => Some(length),
            ActuatorSpec::Fpam { .. } => None,
        }
    }

    /// Inflated tube diameter of an fPAM, `D = 2w/π`.
    pub fn tube_diameter(&self) -> Option<f64> {
        match *self {
            ActuatorSpec::Fpam { width } => Some(fpam_diameter(width)),
            _ => None,
        }
    }

    /// Compact label such as `cPAM W60xL60` or `fPAM W20` (millimeters).
    pub fn label(&self) -> String {
        let w = (self.width() * 1000.0).round();
        match self.length() {
            Some(l) => {
                let name = match self.kind() {
                    ActuatorKind::PouchMotor => "pouch",
                    _ => "cPAM",
                };
                format!("{name} W{w}xL{}", (l * 1000.0).round())
            }
            None => format!("fPAM W{w}"),
        }
    }
}

/// Fold length used in fabrication: 8 mm per 20 mm of cPAM length.
pub fn standard_fold(length: f64) -> f64 {
    length * 8.0 / 20.0
}

/// fPAM tube diameter from its flat width.
pub fn fpam_diameter(width: f64) -> f64 {
    2.0 * width / PI
}

/// fPAM flat width from its tube diameter.
pub fn fpam_width_from_diameter(diameter: f64) -> f64 {
    diameter * PI / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub constraint: &'static str,
    pub detail: String,
}

/// Outcome of checking an [`ActuatorSpec`] against fabrication constraints.
///
/// Infeasibility is reported as data; an empty `violations` list means the
/// spec can be built. `notes` carry warnings that do not block fabrication.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    fn violate(&mut self, constraint: &'static str, detail: String) {
        self.violations.push(Violation { constraint, detail });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "feasible")?;
        } else {
            write!(f, "infeasible:")?;
            for (i, v) in self.violations.iter().enumerate() {
                let sep = if i == 0 { " " } else { "; " };
                write!(f, "{sep}{} ({})", v.constraint, v.detail)?;
            }
        }
        Ok(())
    }
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

pub fn validate_spec(spec: &ActuatorSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let w = spec.width();
    if !positive(w) {
        report.violate("w > 0", format!("w = {w}"));
    }
    match *spec {
        ActuatorSpec::PouchMotor { width, length } => {
            if !positive(length) {
                report.violate("L0 > 0", format!("L0 = {length}"));
            }
            // These narrow pouches were built but produced no measurable bending.
            if approx_mm(width, 20.0) && (approx_mm(length, 40.0) || approx_mm(length, 60.0)) {
                report.notes.push("this pouch dimension produced no measurable bending in experiments".to_string());
            }
        }
        ActuatorSpec::Cpam { width, length, fold } => {
            if !positive(length) {
                report.violate("L0 > 0", format!("L0 = {length}"));
            }
            if !positive(fold) {
                report.violate("f > 0", format!("f = {fold}"));
            }
            if fold > width / 2.0 {
                report.violate("f > w/2", format!("{} > {}", fmt_mm(fold), fmt_mm(width / 2.0)));
            }
            if positive(length) && positive(fold) {
                let nominal = length / PI;
                let rel = (fold - nominal) / nominal;
                if rel.abs() > FOLD_TOLERANCE {
                    report.violate(
                        "|f - L0/pi| <= 0.3 L0/pi",
                        format!("f = {}, L0/pi = {}", fmt_mm(fold), fmt_mm(nominal)),
                    );
                } else if rel.abs() > 1e-9 {
                    report.notes.push(format!(
                        "fold {} differs from nominal L0/pi = {}",
                        fmt_mm(fold),
                        fmt_mm(nominal)
                    ));
                }
            }
        }
        ActuatorSpec::Fpam { .. } => {}
    }
    report
}

fn approx_mm(x: f64, mm: f64) -> bool {
    (x * 1000.0 - mm).abs() < 1e-6
}

fn fmt_mm(x: f64) -> String {
    let mm = x * 1000.0;
    let s = format!("{mm:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    format!("{s} mm")
}

/// Axial force stretching the vine body, `F = (π/4) D² p`.
pub fn vine_axial_force(diameter: f64, pressure: f64) -> Result<f64, ModelError> {
    if !diameter.is_finite() || !pressure.is_finite() {
        return Err(ModelError::NonFinite("vine diameter and pressure"));
    }
    if diameter <= 0.0 {
        return Err(ModelError::InvalidInput(format!("vine diameter must be positive, got {diameter}")));
    }
    if pressure < 0.0 {
        return Err(ModelError::InvalidInput(format!("vine pressure must be non-negative, got {pressure}")));
    }
    Ok(PI / 4.0 * diameter * diameter * pressure)
}

/// The inflated vine body the actuators work against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VineBody {
    /// Body diameter, m.
    pub diameter: f64,
    /// Body gauge pressure, Pa.
    pub pressure: f64,
}

impl VineBody {
    pub fn new(diameter: f64, pressure: f64) -> Result<Self, ModelError> {
        vine_axial_force(diameter, pressure)?;
        Ok(Self { diameter, pressure })
    }

    /// The experimental setup: 80 mm body held at 1.75 kPa.
    pub fn reference() -> Self {
        Self { diameter: 0.08, pressure: 1750.0 }
    }

    pub fn axial_force(&self) -> f64 {
        PI / 4.0 * self.diameter * self.diameter * self.pressure
    }
}

/// Fitted pre-stretch and zero-stress contraction of an fPAM line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FpamStrains {
    pub eps_ps: f64,
    pub eps0: f64,
}

impl FpamStrains {
    /// Fitted values for the tested widths (20, 40, 60 mm). Other widths get
    /// the values of the nearest tested width.
    pub fn for_width(width: f64) -> Self {
        const FITTED: [(f64, f64); 3] = [(0.020, 0.203), (0.040, 0.198), (0.060, 0.207)];
        let eps_ps = FITTED
            .iter()
            .min_by(|a, b| (a.0 - width).abs().total_cmp(&(b.0 - width).abs()))
            .map(|&(_, e)| e)
            .unwrap_or(0.203);
        Self { eps_ps, eps0: 0.275 }
    }
}

/// One line of actuators running along the vine body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActuatorLine {
    pub spec: ActuatorSpec,
    /// Angular position around the body axis, rad, in [0, 2π).
    pub azimuth: f64,
    /// Number of discrete actuators in series (1 for an fPAM tube).
    pub count: usize,
    /// Center-to-center spacing of discrete actuators, m (unused for fPAM).
    pub pitch: f64,
    /// fPAM strain parameters; defaults to the fitted values for the width.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strains: Option<FpamStrains>,
}

impl ActuatorLine {
    /// Discrete actuators butted end to end (`pitch = L0`).
    pub fn contiguous(spec: ActuatorSpec, azimuth: f64, count: usize) -> Self {
        let pitch = spec.length().unwrap_or(0.0);
        let count = if spec.kind() == ActuatorKind::Fpam { 1 } else { count };
        Self { spec, azimuth, count, pitch, strains: None }
    }

    /// Length of body covered by this line; fPAM tubes cover `actuated`.
    pub fn span(&self, actuated: f64) -> f64 {
        match self.spec.kind() {
            ActuatorKind::Fpam => actuated,
            _ => self.count as f64 * self.pitch,
        }
    }

    pub fn fpam_strains(&self) -> FpamStrains {
        self.strains.unwrap_or_else(|| FpamStrains::for_width(self.spec.width()))
    }
}

/// A vine robot with its actuator layout. Lines start at the proximal end of
/// the actuated region, which sits at the distal end of the body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VineSpec {
    pub body: VineBody,
    /// Total body length, m.
    pub length: f64,
    /// Length of the region carrying actuators, m.
    pub actuated_length: f64,
    pub lines: Vec<ActuatorLine>,
}

impl VineSpec {
    pub fn validate(&self) -> Result<(), ModelError> {
        VineBody::new(self.body.diameter, self.body.pressure)?;
        if !positive(self.length) || !positive(self.actuated_length) || self.actuated_length > self.length {
            return Err(ModelError::InvalidInput(format!(
                "need 0 < actuated length ({}) <= body length ({})",
                self.actuated_length, self.length
            )));
        }
        if self.lines.is_empty() || self.lines.len() > MAX_LINES {
            return Err(ModelError::InvalidInput(format!(
                "a vine carries 1 to {MAX_LINES} actuator lines, got {}",
                self.lines.len()
            )));
        }
        for (i, line) in self.lines.iter().enumerate() {
            if !(0.0..2.0 * PI).contains(&line.azimuth) {
                return Err(ModelError::InvalidInput(format!("line {i}: azimuth {} outside [0, 2pi)", line.azimuth)));
            }
            if self.lines[..i].iter().any(|o| (o.azimuth - line.azimuth).abs() < 1e-12) {
                return Err(ModelError::InvalidInput(format!("line {i}: duplicate azimuth {}", line.azimuth)));
            }
            let report = validate_spec(&line.spec);
            if !report.is_feasible() {
                return Err(ModelError::InvalidInput(format!("line {i}: {report}")));
            }
            match line.spec {
                ActuatorSpec::Fpam { .. } => {
                    if line.count != 1 {
                        return Err(ModelError::InvalidInput(format!(
                            "line {i}: an fPAM line is a single tube (count = 1)"
                        )));
                    }
                }
                _ => {
                    let l0 = line.spec.length().unwrap_or(0.0);
                    if line.count == 0 {
                        return Err(ModelError::InvalidInput(format!("line {i}: count must be at least 1")));
                    }
                    if line.pitch < l0 * (1.0 - 1e-12) {
                        return Err(ModelError::InvalidInput(format!(
                            "line {i}: pitch {} shorter than actuator length {l0}",
                            line.pitch
                        )));
                    }
                    if line.span(self.actuated_length) > self.actuated_length * (1.0 + 1e-12) {
                        return Err(ModelError::InvalidInput(format!(
                            "line {i}: {} actuators at pitch {} do not fit in the actuated length {}",
                            line.count, line.pitch, self.actuated_length
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
