//! Closed-form force and kinematic relations for each actuator type.
//!
//! Nothing here solves an equilibrium; see [`crate::solver`] for that.
//!
//! Pouch motor and cPAM cross-sections are circular segments described by the
//! central angle `θ ∈ (0, π/2]`; `θ = π/2` is the fully inflated cylinder.
//! The fPAM is a McKibben-style tube described by its contraction `ε`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::geometry::{vine_axial_force, VineBody};

/// Volume multiplier for pouch motors with constrained sides.
pub const POUCH_VOLUME_MULTIPLIER: f64 = 2.0 / 3.0;

/// Maximum fPAM contraction.
pub const FPAM_EPS_MAX: f64 = 0.308;

/// Contraction at which the fPAM fabric carries no more pre-stretch.
pub const FPAM_EPS0: f64 = 0.275;

/// Undershoot below `ε_ps` that is clamped rather than rejected.
pub const EPS_CLAMP: f64 = 1e-9;

fn check_theta(theta: f64) -> Result<(), ModelError> {
    if theta.is_finite() && theta > 0.0 && theta <= FRAC_PI_2 {
        Ok(())
    } else {
        Err(ModelError::ThetaOutOfDomain(theta))
    }
}

/// `cos θ / θ`, strictly decreasing from +∞ to 0 on (0, π/2].
pub fn force_shape(theta: f64) -> f64 {
    if theta == FRAC_PI_2 {
        return 0.0;
    }
    theta.cos() / theta
}

/// Derivative of [`force_shape`].
pub fn force_shape_slope(theta: f64) -> f64 {
    -(theta * theta.sin() + theta.cos()) / (theta * theta)
}

/// Pouch motor pull force with the default volume multiplier.
pub fn pouch_force(length: f64, width: f64, pressure: f64, theta: f64) -> Result<f64, ModelError> {
    pouch_force_with(POUCH_VOLUME_MULTIPLIER, length, width, pressure, theta)
}

/// Pouch motor pull force `α L0 w p cos θ / θ`.
pub fn pouch_force_with(alpha: f64, length: f64, width: f64, pressure: f64, theta: f64) -> Result<f64, ModelError> {
    check_theta(theta)?;
    Ok(alpha * length * width * pressure * force_shape(theta))
}

/// Effective cPAM driving pressure: the actuator works against the
/// atmosphere on top and the body pressure underneath.
pub fn cpam_drive_pressure(p_cpam: f64, p_vine: f64) -> f64 {
    p_cpam - p_vine / 2.0
}

/// cPAM pull force `L0 w (p_cpam − p_vine/2) cos θ / θ`.
pub fn cpam_force(length: f64, width: f64, p_cpam: f64, p_vine: f64, theta: f64) -> Result<f64, ModelError> {
    check_theta(theta)?;
    let drive = cpam_drive_pressure(p_cpam, p_vine);
    if drive < 0.0 {
        return Err(ModelError::NonPositiveDrive { p_cpam, half_vine: p_vine / 2.0 });
    }
    Ok(length * width * drive * force_shape(theta))
}

/// Contracted length `L1 = L0 sin θ / θ`.
pub fn contracted_length(length: f64, theta: f64) -> Result<f64, ModelError> {
    check_theta(theta)?;
    Ok(length * sinc(theta))
}

/// `sin θ / θ`, with the removable singularity at 0 filled in.
pub fn sinc(theta: f64) -> f64 {
    if theta.abs() < 1e-4 {
        let t2 = theta * theta;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        theta.sin() / theta
    }
}

/// `1 − sin θ / θ` without cancellation for small θ.
pub fn one_minus_sinc(theta: f64) -> f64 {
    if theta.abs() < 1e-3 {
        let t2 = theta * theta;
        t2 / 6.0 - t2 * t2 / 120.0 + t2 * t2 * t2 / 5040.0
    } else {
        1.0 - theta.sin() / theta
    }
}

/// Offset of the pouch contraction axis above the body surface,
/// `h = (L1/2) tan(θ/8)`.
pub fn pouch_axis_offset(contracted: f64, theta: f64) -> f64 {
    contracted / 2.0 * (theta / 8.0).tan()
}

/// Lowering `s` of the cPAM bending axis below the body surface: the smaller
/// root of `D = (4s² + w²) / (4s)`.
pub fn cpam_axis_lowering(body_diameter: f64, width: f64) -> Result<f64, ModelError> {
    if !body_diameter.is_finite() || !width.is_finite() {
        return Err(ModelError::NonFinite("body diameter and cPAM width"));
    }
    if width < 0.0 || body_diameter <= 0.0 {
        return Err(ModelError::InvalidInput(format!("need w >= 0 and D > 0, got w = {width}, D = {body_diameter}")));
    }
    if width > body_diameter {
        return Err(ModelError::ChordTooWide { width, diameter: body_diameter });
    }
    // (D − √(D² − w²))/2 rewritten as w²/(2(D + √(D² − w²))) to keep digits as w → 0
    let root = ((body_diameter - width) * (body_diameter + width)).sqrt();
    Ok(width * width / (2.0 * (body_diameter + root)))
}

/// Fiber-angle constants of the fPAM contraction model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberConstants {
    pub alpha0: f64,
    pub a: f64,
    pub b: f64,
}

impl FiberConstants {
    /// Constants consistent with a maximum contraction `eps_max`:
    /// `α0 = −asin(√(ε² − 2ε + 2/3) / (ε − 1))`, `a = 3/tan²α0`, `b = 1/sin²α0`.
    pub fn from_max_contraction(eps_max: f64) -> Self {
        let arg = (eps_max * eps_max - 2.0 * eps_max + 2.0 / 3.0).sqrt() / (eps_max - 1.0);
        let alpha0 = -arg.asin();
        let t = alpha0.tan();
        let s = alpha0.sin();
        Self { alpha0, a: 3.0 / (t * t), b: 1.0 / (s * s) }
    }

    /// `a(1 − ε)² − b`; vanishes at the maximum contraction.
    pub fn pneumatic_factor(&self, eps: f64) -> f64 {
        self.a * (1.0 - eps) * (1.0 - eps) - self.b
    }
}

/// Calibrated parameter set of one fPAM on one vine body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FpamCalibration {
    /// Tube radius, m.
    pub r: f64,
    pub alpha0: f64,
    pub a: f64,
    pub b: f64,
    pub eps_max: f64,
    pub eps0: f64,
    pub eps_ps: f64,
    /// Elastic modulus times fabric thickness, N/m.
    pub et: f64,
}

/// Calibrate an fPAM of flat width `width`: at `ε_ps` the uninflated tube's
/// elastic pull balances the body force, which fixes `Et`.
pub fn fpam_calibrate(width: f64, body: &VineBody, eps_ps: f64, eps0: f64) -> Result<FpamCalibration, ModelError> {
    if !width.is_finite() || width <= 0.0 {
        return Err(ModelError::InvalidInput(format!("fPAM width must be positive, got {width}")));
    }
    if !eps_ps.is_finite() || !eps0.is_finite() {
        return Err(ModelError::NonFinite("fPAM strains"));
    }
    if eps0 - eps_ps < 1e-6 {
        return Err(ModelError::DegenerateCalibration(eps0 - eps_ps));
    }
    if eps_ps < 0.0 || eps0 >= FPAM_EPS_MAX {
        return Err(ModelError::InvalidInput(format!(
            "need 0 <= eps_ps < eps0 < {FPAM_EPS_MAX}, got eps_ps = {eps_ps}, eps0 = {eps0}"
        )));
    }
    let f_vine = vine_axial_force(body.diameter, body.pressure)?;
    let r = width / PI;
    let fc = FiberConstants::from_max_contraction(FPAM_EPS_MAX);
    let et = f_vine / (2.0 * PI * r * (eps0 - eps_ps));
    Ok(FpamCalibration { r, alpha0: fc.alpha0, a: fc.a, b: fc.b, eps_max: FPAM_EPS_MAX, eps0, eps_ps, et })
}

impl FpamCalibration {
    /// Map a contraction into `[ε_ps, ε_max]`, absorbing tiny undershoot.
    pub fn check_contraction(&self, eps: f64) -> Result<f64, ModelError> {
        if eps.is_finite() && eps < self.eps_ps && eps >= self.eps_ps - EPS_CLAMP {
            return Ok(self.eps_ps);
        }
        if !(eps >= self.eps_ps && eps <= self.eps_max) {
            return Err(ModelError::ContractionOutOfRange { eps, lo: self.eps_ps, hi: self.eps_max });
        }
        Ok(eps)
    }

    /// `π r² [a(1 − ε)² − b] p`.
    pub fn pneumatic_force(&self, pressure: f64, eps: f64) -> f64 {
        PI * self.r * self.r * (self.a * (1.0 - eps) * (1.0 - eps) - self.b) * pressure
    }

    /// `2π r Et (ε0 − ε)`.
    pub fn elastic_force(&self, eps: f64) -> f64 {
        2.0 * PI * self.r * self.et * (self.eps0 - eps)
    }

    /// Total pull; the elastic part only acts while pre-stretch remains.
    pub fn force(&self, pressure: f64, eps: f64) -> Result<f64, ModelError> {
        let eps = self.check_contraction(eps)?;
        Ok(self.force_unchecked(pressure, eps))
    }

    pub(crate) fn force_unchecked(&self, pressure: f64, eps: f64) -> f64 {
        let pneumatic = self.pneumatic_force(pressure, eps);
        if eps < self.eps0 {
            pneumatic + self.elastic_force(eps)
        } else {
            pneumatic
        }
    }

    pub(crate) fn force_slope(&self, pressure: f64, eps: f64) -> f64 {
        let d_pneumatic = -2.0 * PI * self.r * self.r * self.a * (1.0 - eps) * pressure;
        if eps < self.eps0 {
            d_pneumatic - 2.0 * PI * self.r * self.et
        } else {
            d_pneumatic
        }
    }

    /// Upper bound of the bending this fPAM can produce on a body of diameter
    /// `body_diameter`.
    pub fn max_bend_per_length(&self, body_diameter: f64) -> f64 {
        (self.eps_max - self.eps_ps) / (body_diameter / 2.0 + self.r)
    }
}

pub fn fpam_force(cal: &FpamCalibration, pressure: f64, eps: f64) -> Result<f64, ModelError> {
    cal.force(pressure, eps)
}

/// Bending per length `(ε − ε_ps) / (D/2 + r)`, rad/m.
pub fn fpam_bending_from_contraction(cal: &FpamCalibration, eps: f64, body_diameter: f64) -> Result<f64, ModelError> {
    let eps = cal.check_contraction(eps)?;
    Ok((eps - cal.eps_ps) / (body_diameter / 2.0 + cal.r))
}
