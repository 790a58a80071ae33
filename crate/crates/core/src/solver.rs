//! Static equilibrium of one actuator on the vine body: pressure in, bending
//! per length out.
//!
//! Pouch motors and cPAMs couple a force balance
//! `F_vine sin q = F_act(θ) sin(q/2)` with a geometric closure relating `L0`,
//! the contracted length `L1(θ)` and the segment bend `q`. For a trial `q`
//! the force balance reduces to `cos θ/θ = 2 F_vine cos(q/2) / k`, which has
//! a unique root because `cos θ/θ` is strictly decreasing on (0, π/2]. The
//! closure residual is then a scalar function of `q`: it is scanned for the
//! first sign change above `q = 0` and refined with a bracketed
//! Newton/bisection iteration.
//!
//! The fPAM needs only the axial balance `F_fpam(ε) = F_vine`, which is
//! monotone in `ε` on `[ε_ps, ε_max]`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{ModelError, SolveError};
use crate::geometry::{validate_spec, ActuatorKind, ActuatorSpec, FpamStrains, VineBody};
use crate::models::{self, force_shape, force_shape_slope, one_minus_sinc, sinc, FpamCalibration};
use crate::roots::{central_slope, newton_bisect, RootError, RootOptions};

/// Environment variable overriding the default force residual tolerance.
pub const TOLERANCE_ENV: &str = "VINEBEND_SOLVER_TOL";

/// Effective pressure below which an actuator is treated as unpressurized.
pub const ZERO_DRIVE_PA: f64 = 1.0;

const SMALL_Q: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Force residual tolerance, N.
    pub force_tol: f64,
    /// Geometric closure residual tolerance, m.
    pub length_tol: f64,
    pub max_iter: usize,
    /// Search interval for the segment bend `q`, rad.
    pub q_bracket: (f64, f64),
    /// Search interval for the central angle `θ`, rad.
    pub theta_bracket: (f64, f64),
    /// Number of subintervals used to locate the first closure root.
    pub scan_points: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            force_tol: 1e-10,
            length_tol: 1e-12,
            max_iter: 200,
            q_bracket: (1e-9, PI),
            theta_bracket: (1e-9, FRAC_PI_2),
            scan_points: 128,
        }
    }
}

impl SolverConfig {
    /// Set the force tolerance to `tol` N and the closure tolerance to
    /// `tol / 100` m, keeping the default ratio.
    pub fn with_tolerance(tol: f64) -> Self {
        Self { force_tol: tol, length_tol: tol * 1e-2, ..Self::default() }
    }

    /// Defaults, with the tolerance taken from `VINEBEND_SOLVER_TOL` if set.
    pub fn from_env() -> Result<Self, ModelError> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(v) => {
                let tol: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| ModelError::InvalidInput(format!("{TOLERANCE_ENV}='{v}' is not a number")))?;
                let cfg = Self::with_tolerance(tol);
                cfg.validate()?;
                Ok(cfg)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let pos = |x: f64| x.is_finite() && x > 0.0;
        if !pos(self.force_tol) || !pos(self.length_tol) {
            return Err(ModelError::InvalidInput("solver tolerances must be positive".into()));
        }
        if self.max_iter == 0 || self.scan_points == 0 {
            return Err(ModelError::InvalidInput("max_iter and scan_points must be positive".into()));
        }
        let (q0, q1) = self.q_bracket;
        let (t0, t1) = self.theta_bracket;
        if !(q0 > 0.0 && q0 < q1 && q1 <= PI) || !(t0 > 0.0 && t0 < t1 && t1 <= FRAC_PI_2) {
            return Err(ModelError::InvalidInput("solver brackets must be ordered and inside the model domain".into()));
        }
        Ok(())
    }
}

/// Internal deformation at equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Deformation {
    /// Central angle `θ` of a pouch motor or cPAM, rad. Zero when unpressurized.
    CentralAngle(f64),
    /// fPAM contraction `ε`.
    Contraction(f64),
}

impl Deformation {
    pub fn value(&self) -> f64 {
        match *self {
            Deformation::CentralAngle(v) | Deformation::Contraction(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    /// Force balance residual, N.
    pub force: f64,
    /// Geometric closure residual, m (pouch and cPAM only).
    pub closure: Option<f64>,
}

impl Residuals {
    const ZERO: Residuals = Residuals { force: 0.0, closure: None };

    /// Largest absolute residual.
    pub fn max_abs(&self) -> f64 {
        self.force.abs().max(self.closure.map_or(0.0, f64::abs))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SolveWarning {
    /// Several closure roots were found; the one nearest `q = 0` was taken.
    MultipleRoots { count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BendSolution {
    /// Actuator gauge pressure, Pa.
    pub pressure: f64,
    pub deformation: Deformation,
    /// Bend angle of one actuator segment, rad. `None` for the continuous fPAM.
    pub q: Option<f64>,
    /// Bending per nominal length, rad/m.
    pub bend_per_length: f64,
    pub residuals: Residuals,
    pub warnings: Vec<SolveWarning>,
}

/// A pouch motor or cPAM reduced to the quantities the equilibrium needs.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SegmentActuator {
    kind: ActuatorKind,
    length: f64,
    width: f64,
    /// Force multiplier: α for pouch motors, 1 for cPAMs.
    alpha: f64,
    /// cPAM bending axis lowering, m (0 for pouch motors).
    lowering: f64,
}

/// Everything needed to map a pressure to a [`BendSolution`] for one actuator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendModel {
    body: VineBody,
    inner: Inner,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Inner {
    Segment(SegmentActuator),
    Fpam(FpamCalibration),
}

impl BendModel {
    pub fn pouch(spec: &ActuatorSpec, body: VineBody) -> Result<Self, SolveError> {
        Self::pouch_with_alpha(spec, body, models::POUCH_VOLUME_MULTIPLIER)
    }

    /// Pouch motor model with a custom volume multiplier.
    pub fn pouch_with_alpha(spec: &ActuatorSpec, body: VineBody, alpha: f64) -> Result<Self, SolveError> {
        let ActuatorSpec::PouchMotor { width, length } = *spec else {
            return Err(ModelError::InvalidInput(format!("{} is not a pouch motor", spec.label())).into());
        };
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(ModelError::InvalidInput(format!("volume multiplier must be positive, got {alpha}")).into());
        }
        check_feasible(spec)?;
        VineBody::new(body.diameter, body.pressure)?;
        Ok(Self {
            body,
            inner: Inner::Segment(SegmentActuator {
                kind: ActuatorKind::PouchMotor,
                length,
                width,
                alpha,
                lowering: 0.0,
            }),
        })
    }

    pub fn cpam(spec: &ActuatorSpec, body: VineBody) -> Result<Self, SolveError> {
        let ActuatorSpec::Cpam { width, length, .. } = *spec else {
            return Err(ModelError::InvalidInput(format!("{} is not a cPAM", spec.label())).into());
        };
        check_feasible(spec)?;
        VineBody::new(body.diameter, body.pressure)?;
        let lowering = models::cpam_axis_lowering(body.diameter, width)?;
        Ok(Self {
            body,
            inner: Inner::Segment(SegmentActuator { kind: ActuatorKind::Cpam, length, width, alpha: 1.0, lowering }),
        })
    }

    pub fn fpam(cal: FpamCalibration, body: VineBody) -> Result<Self, SolveError> {
        VineBody::new(body.diameter, body.pressure)?;
        Ok(Self { body, inner: Inner::Fpam(cal) })
    }

    /// Build the model for any spec. fPAMs are calibrated against `body`
    /// using `strains`, or the fitted values for their width.
    pub fn from_spec(spec: &ActuatorSpec, body: VineBody, strains: Option<FpamStrains>) -> Result<Self, SolveError> {
        match *spec {
            ActuatorSpec::PouchMotor { .. } => Self::pouch(spec, body),
            ActuatorSpec::Cpam { .. } => Self::cpam(spec, body),
            ActuatorSpec::Fpam { width } => {
                let st = strains.unwrap_or_else(|| FpamStrains::for_width(width));
                let cal = models::fpam_calibrate(width, &body, st.eps_ps, st.eps0)?;
                Self::fpam(cal, body)
            }
        }
    }

    pub fn kind(&self) -> ActuatorKind {
        match self.inner {
            Inner::Segment(seg) => seg.kind,
            Inner::Fpam(_) => ActuatorKind::Fpam,
        }
    }

    pub fn body(&self) -> VineBody {
        self.body
    }

    pub fn calibration(&self) -> Option<&FpamCalibration> {
        match &self.inner {
            Inner::Fpam(cal) => Some(cal),
            Inner::Segment(_) => None,
        }
    }

    /// Uninflated actuator length; `None` for fPAMs.
    pub fn nominal_length(&self) -> Option<f64> {
        match self.inner {
            Inner::Segment(seg) => Some(seg.length),
            Inner::Fpam(_) => None,
        }
    }

    pub fn solve(&self, pressure: f64, cfg: &SolverConfig) -> Result<BendSolution, SolveError> {
        self.solve_from(pressure, cfg, None)
    }

    /// Solve with an optional previous solution used as the starting iterate.
    pub fn solve_from(
        &self,
        pressure: f64,
        cfg: &SolverConfig,
        hint: Option<&BendSolution>,
    ) -> Result<BendSolution, SolveError> {
        cfg.validate()?;
        if !pressure.is_finite() || pressure < 0.0 {
            return Err(ModelError::InvalidInput(format!(
                "actuator pressure must be finite and non-negative, got {pressure}"
            ))
            .into());
        }
        match &self.inner {
            Inner::Segment(seg) => solve_segment(seg, &self.body, pressure, cfg, hint.and_then(|h| h.q)),
            Inner::Fpam(cal) => solve_contraction(cal, &self.body, pressure, cfg, hint),
        }
    }

    /// Solve at each pressure in ascending order, warm-starting each point
    /// from the previous one.
    pub fn sweep(&self, pressures: &[f64], cfg: &SolverConfig) -> Result<Vec<BendSolution>, SolveError> {
        if let Some(i) =
            pressures.windows(2).position(|w| matches!(w[1].partial_cmp(&w[0]), None | Some(std::cmp::Ordering::Less)))
        {
            return Err(SolveError::UnsortedPressures { index: i + 1 });
        }
        let mut out: Vec<BendSolution> = Vec::with_capacity(pressures.len());
        for (index, &p) in pressures.iter().enumerate() {
            let sol = self.solve_from(p, cfg, out.last()).map_err(|e| SolveError::AtPoint {
                index,
                pressure: p,
                source: Box::new(e),
            })?;
            out.push(sol);
        }
        Ok(out)
    }
}

fn check_feasible(spec: &ActuatorSpec) -> Result<(), SolveError> {
    let report = validate_spec(spec);
    if report.is_feasible() {
        Ok(())
    } else {
        Err(SolveError::Infeasible(report))
    }
}

pub fn solve_pouch(
    spec: &ActuatorSpec,
    body: &VineBody,
    pressure: f64,
    cfg: &SolverConfig,
) -> Result<BendSolution, SolveError> {
    BendModel::pouch(spec, *body)?.solve(pressure, cfg)
}

pub fn solve_cpam(
    spec: &ActuatorSpec,
    body: &VineBody,
    pressure: f64,
    cfg: &SolverConfig,
) -> Result<BendSolution, SolveError> {
    BendModel::cpam(spec, *body)?.solve(pressure, cfg)
}

pub fn solve_fpam(
    cal: &FpamCalibration,
    body: &VineBody,
    pressure: f64,
    cfg: &SolverConfig,
) -> Result<BendSolution, SolveError> {
    BendModel::fpam(*cal, *body)?.solve(pressure, cfg)
}

pub fn sweep(model: &BendModel, pressures: &[f64], cfg: &SolverConfig) -> Result<Vec<BendSolution>, SolveError> {
    model.sweep(pressures, cfg)
}

/// `1 − q / (2 tan(q/2))`.
fn one_minus_tan_ratio(q: f64) -> f64 {
    if q < SMALL_Q {
        let q2 = q * q;
        q2 / 12.0 + q2 * q2 / 720.0
    } else {
        1.0 - q / (2.0 * (q / 2.0).tan())
    }
}

/// `1 − q / (2 sin(q/2))`.
fn one_minus_sin_ratio(q: f64) -> f64 {
    if q < SMALL_Q {
        let q2 = q * q;
        -(q2 / 24.0 + 7.0 * q2 * q2 / 5760.0)
    } else {
        1.0 - q / (2.0 * (q / 2.0).sin())
    }
}

struct SegmentSystem<'a> {
    seg: &'a SegmentActuator,
    body: &'a VineBody,
    f_vine: f64,
    /// `α L0 w p_drive`
    k: f64,
    cfg: &'a SolverConfig,
}

impl SegmentSystem<'_> {
    /// Central angle satisfying the force balance at bend `q`.
    fn theta(&self, q: f64) -> Result<f64, SolveError> {
        let target = 2.0 * self.f_vine * (q / 2.0).cos() / self.k;
        let (lo, hi) = self.cfg.theta_bracket;
        if target <= force_shape(hi) {
            return Ok(hi);
        }
        if target > force_shape(lo) {
            return Err(SolveError::NoEquilibrium { pressure: f64::NAN });
        }
        let opts = RootOptions { f_tol: 4.0 * f64::EPSILON * target, max_iter: self.cfg.max_iter };
        let guess = (1.0 / target).min(hi);
        match newton_bisect(|t| (force_shape(t) - target, force_shape_slope(t)), lo, hi, Some(guess), opts) {
            Ok(root) => Ok(root.x),
            Err(RootError::MaxIterations(root)) => Ok(root.x),
            Err(RootError::NotBracketed { .. }) => Err(SolveError::NoEquilibrium { pressure: f64::NAN }),
        }
    }

    /// Geometric closure residual `q L1 c(q) + q·arm − L0` at bend `q`.
    fn closure_at(&self, q: f64, theta: f64) -> f64 {
        let l0 = self.seg.length;
        let s = sinc(theta);
        match self.seg.kind {
            ActuatorKind::Cpam => {
                q * (self.body.diameter - self.seg.lowering) - l0 * (one_minus_sinc(theta) + s * one_minus_sin_ratio(q))
            }
            _ => {
                let h = models::pouch_axis_offset(l0 * s, theta);
                q * (self.body.diameter + h) - l0 * (one_minus_sinc(theta) + s * one_minus_tan_ratio(q))
            }
        }
    }

    fn closure(&self, q: f64) -> Result<f64, SolveError> {
        let theta = self.theta(q)?;
        Ok(self.closure_at(q, theta))
    }

    fn force_residual(&self, q: f64, theta: f64) -> f64 {
        let f_act = self.k * force_shape(theta);
        self.f_vine * q.sin() - f_act * (q / 2.0).sin()
    }
}

fn zero_segment_solution(pressure: f64) -> BendSolution {
    BendSolution {
        pressure,
        deformation: Deformation::CentralAngle(0.0),
        q: Some(0.0),
        bend_per_length: 0.0,
        residuals: Residuals { force: 0.0, closure: Some(0.0) },
        warnings: Vec::new(),
    }
}

fn solve_segment(
    seg: &SegmentActuator,
    body: &VineBody,
    pressure: f64,
    cfg: &SolverConfig,
    hint: Option<f64>,
) -> Result<BendSolution, SolveError> {
    let drive = match seg.kind {
        ActuatorKind::Cpam => models::cpam_drive_pressure(pressure, body.pressure),
        _ => pressure,
    };
    if drive < ZERO_DRIVE_PA {
        return Ok(zero_segment_solution(pressure));
    }
    let sys =
        SegmentSystem { seg, body, f_vine: body.axial_force(), k: seg.alpha * seg.length * seg.width * drive, cfg };
    let at = |e: SolveError| match e {
        SolveError::NoEquilibrium { .. } => SolveError::NoEquilibrium { pressure },
        other => other,
    };

    let (mut q_lo, q_hi) = cfg.q_bracket;
    let mut g_lo = sys.closure(q_lo).map_err(at)?;
    // very weak drive: the root can sit below the default lower bracket
    while g_lo >= 0.0 && q_lo > 1e-30 {
        q_lo *= 1e-3;
        g_lo = sys.closure(q_lo).map_err(at)?;
    }
    if g_lo >= 0.0 {
        return Err(SolveError::NoEquilibrium { pressure });
    }

    let n = cfg.scan_points;
    let q_start = cfg.q_bracket.0;
    let mut first: Option<(f64, f64)> = None;
    let mut sign_changes = 0;
    let (mut prev_q, mut prev_g) = (q_lo, g_lo);
    for i in 1..=n {
        let q = if i == n { q_hi } else { q_start + (q_hi - q_start) * i as f64 / n as f64 };
        let g = sys.closure(q).map_err(at)?;
        if (prev_g < 0.0) != (g < 0.0) {
            sign_changes += 1;
            if first.is_none() {
                first = Some((prev_q, q));
            }
        }
        prev_q = q;
        prev_g = g;
    }
    let (a, b) = first.ok_or(SolveError::NoEquilibrium { pressure })?;

    let opts = RootOptions { f_tol: cfg.length_tol * 1e-3, max_iter: cfg.max_iter };
    let mut failure: Option<SolveError> = None;
    let mut eval = |q: f64| -> (f64, f64) {
        match sys.closure(q) {
            Ok(g) => {
                let slope = central_slope(|x| sys.closure(x).unwrap_or(f64::NAN), q, a, b);
                (g, slope)
            }
            Err(e) => {
                failure.get_or_insert(e);
                (f64::NAN, f64::NAN)
            }
        }
    };
    let root = newton_bisect(&mut eval, a, b, hint, opts);
    if let Some(e) = failure {
        return Err(at(e));
    }
    let q = match root {
        Ok(r) => r.x,
        Err(RootError::MaxIterations(r)) => {
            return Err(SolveError::NonConvergence { pressure, iterations: r.iterations });
        }
        Err(RootError::NotBracketed { .. }) => return Err(SolveError::NoEquilibrium { pressure }),
    };

    let theta = sys.theta(q).map_err(at)?;
    let residuals = Residuals { force: sys.force_residual(q, theta), closure: Some(sys.closure_at(q, theta)) };
    if residuals.force.abs() > cfg.force_tol || residuals.closure.is_some_and(|c| c.abs() > cfg.length_tol) {
        return Err(SolveError::NonConvergence { pressure, iterations: cfg.max_iter });
    }
    let mut warnings = Vec::new();
    if sign_changes > 1 {
        warnings.push(SolveWarning::MultipleRoots { count: sign_changes });
    }
    Ok(BendSolution {
        pressure,
        deformation: Deformation::CentralAngle(theta),
        q: Some(q),
        bend_per_length: q / seg.length,
        residuals,
        warnings,
    })
}

fn solve_contraction(
    cal: &FpamCalibration,
    body: &VineBody,
    pressure: f64,
    cfg: &SolverConfig,
    hint: Option<&BendSolution>,
) -> Result<BendSolution, SolveError> {
    let f_vine = body.axial_force();
    let residual = |eps: f64| cal.force_unchecked(pressure, eps) - f_vine;
    let finish = |eps: f64| -> Result<BendSolution, SolveError> {
        let bend = models::fpam_bending_from_contraction(cal, eps, body.diameter)?;
        Ok(BendSolution {
            pressure,
            deformation: Deformation::Contraction(eps),
            q: None,
            bend_per_length: bend,
            residuals: Residuals { force: residual(eps), ..Residuals::ZERO },
            warnings: Vec::new(),
        })
    };

    if pressure == 0.0 && (residual(cal.eps_ps)).abs() <= cfg.force_tol {
        return finish(cal.eps_ps);
    }
    if residual(cal.eps_ps) < -cfg.force_tol {
        return Err(SolveError::NoEquilibrium { pressure });
    }
    let opts = RootOptions { f_tol: cfg.force_tol * 1e-2, max_iter: cfg.max_iter };
    let guess = hint.and_then(|h| match h.deformation {
        Deformation::Contraction(e) => Some(e),
        Deformation::CentralAngle(_) => None,
    });
    let eps = match newton_bisect(|e| (residual(e), cal.force_slope(pressure, e)), cal.eps_ps, cal.eps_max, guess, opts)
    {
        Ok(r) => r.x,
        Err(RootError::MaxIterations(r)) => {
            return Err(SolveError::NonConvergence { pressure, iterations: r.iterations })
        }
        Err(RootError::NotBracketed { .. }) => return Err(SolveError::NoEquilibrium { pressure }),
    };
    let sol = finish(eps)?;
    if sol.residuals.force.abs() > cfg.force_tol {
        return Err(SolveError::NonConvergence { pressure, iterations: cfg.max_iter });
    }
    Ok(sol)
}

/// Bending per length reached when every actuator of a contiguous line is a
/// full cylinder and the whole shortening `L0 (1 − 2/π)` turns into bending
/// about a lever arm of one body diameter, rad/m.
pub fn geometric_bend_ceiling(body_diameter: f64) -> f64 {
    (1.0 - 2.0 / PI) / body_diameter
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::FPAM_EPS0;

    fn body() -> VineBody {
        VineBody::reference()
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn pouch(w: f64, l: f64) -> BendModel {
        BendModel::pouch(&ActuatorSpec::pouch(w, l), body()).unwrap()
    }

    fn cpam(w: f64, l: f64) -> BendModel {
        BendModel::cpam(&ActuatorSpec::cpam_standard_fold(w, l), body()).unwrap()
    }

    fn fpam(w: f64) -> BendModel {
        BendModel::from_spec(&ActuatorSpec::fpam(w), body(), None).unwrap()
    }

    /// Substitute a solution back into the force balance and closure relations.
    fn check_residuals(model: &BendModel, sol: &BendSolution) {
        let f_vine = body().axial_force();
        match sol.deformation {
            Deformation::CentralAngle(theta) => {
                let q = sol.q.unwrap();
                if q == 0.0 {
                    return;
                }
                let l0 = model.nominal_length().unwrap();
                let Inner::Segment(seg) = model.inner else { unreachable!() };
                let (f_act, closure) = match seg.kind {
                    ActuatorKind::PouchMotor => {
                        let f = models::pouch_force(l0, seg.width, sol.pressure, theta).unwrap();
                        let l1 = models::contracted_length(l0, theta).unwrap();
                        let h = models::pouch_axis_offset(l1, theta);
                        (f, q * l1 / (2.0 * (q / 2.0).tan()) + q * (0.08 + h) - l0)
                    }
                    _ => {
                        let f = models::cpam_force(l0, seg.width, sol.pressure, 1750.0, theta).unwrap();
                        let l1 = models::contracted_length(l0, theta).unwrap();
                        (f, q * l1 / (2.0 * (q / 2.0).sin()) + q * (0.08 - seg.lowering) - l0)
                    }
                };
                assert!((f_vine * q.sin() - f_act * (q / 2.0).sin()).abs() < 1e-10);
                assert!(closure.abs() < 1e-12, "closure {closure}");
            }
            Deformation::Contraction(eps) => {
                let cal = model.calibration().unwrap();
                assert!((cal.force(sol.pressure, eps).unwrap() - f_vine).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_pressure_gives_no_bend() {
        for m in [pouch(0.06, 0.06), cpam(0.06, 0.06), fpam(0.04)] {
            let sol = m.solve(0.0, &cfg()).unwrap();
            assert_eq!(sol.bend_per_length, 0.0);
        }
        let sol = pouch(0.06, 0.06).solve(0.0, &cfg()).unwrap();
        assert_eq!(sol.deformation, Deformation::CentralAngle(0.0));
        assert_eq!(sol.q, Some(0.0));
        let f = fpam(0.06).solve(0.0, &cfg()).unwrap();
        assert_eq!(f.deformation, Deformation::Contraction(0.207));
    }

    #[test]
    fn cpam_needs_half_body_pressure() {
        let m = cpam(0.06, 0.06);
        assert_eq!(m.solve(875.0, &cfg()).unwrap().bend_per_length, 0.0);
        assert_eq!(m.solve(500.0, &cfg()).unwrap().bend_per_length, 0.0);
        assert!(m.solve(2000.0, &cfg()).unwrap().bend_per_length > 0.0);
    }

    #[test]
    fn pouch_60x60_rises_with_pressure() {
        let m = pouch(0.06, 0.06);
        let mut prev = 0.0;
        for kpa in [5.0, 10.0, 20.0, 30.0] {
            let sol = m.solve(kpa * 1e3, &cfg()).unwrap();
            check_residuals(&m, &sol);
            assert!(sol.bend_per_length > prev);
            prev = sol.bend_per_length;
        }
    }

    #[test]
    fn cpam_beats_pouch_at_large_size() {
        let (p, c) = (pouch(0.06, 0.06), cpam(0.06, 0.06));
        for kpa in [10.0, 15.0, 20.0, 30.0, 40.0] {
            let bp = p.solve(kpa * 1e3, &cfg()).unwrap().bend_per_length;
            let bc = c.solve(kpa * 1e3, &cfg()).unwrap().bend_per_length;
            assert!(bc > bp, "{kpa} kPa: cpam {bc} vs pouch {bp}");
            assert!(bc < geometric_bend_ceiling(0.08));
        }
    }

    #[test]
    fn fpam_bounded_and_monotone() {
        for w in [0.02, 0.04, 0.06] {
            let m = fpam(w);
            let cap = m.calibration().unwrap().max_bend_per_length(0.08);
            let mut prev = 0.0;
            for i in 0..=40 {
                let sol = m.solve(i as f64 * 1e3, &cfg()).unwrap();
                check_residuals(&m, &sol);
                assert!(sol.bend_per_length >= prev);
                assert!(sol.bend_per_length <= cap);
                prev = sol.bend_per_length;
            }
        }
        let at20 = |w| fpam(w).solve(2e4, &cfg()).unwrap().bend_per_length;
        assert!(at20(0.04) > at20(0.02));
        assert!(at20(0.06) > at20(0.02));
    }

    #[test]
    fn mismatched_fpam_calibration_has_no_equilibrium() {
        let cal = models::fpam_calibrate(0.04, &body(), 0.198, FPAM_EPS0).unwrap();
        let heavier = VineBody::new(0.08, 3500.0).unwrap();
        let err = solve_fpam(&cal, &heavier, 0.0, &cfg()).unwrap_err();
        assert!(matches!(err, SolveError::NoEquilibrium { .. }));
    }

    #[test]
    fn weak_drive_resolves_tiny_bends() {
        let m = pouch(0.02, 0.02);
        let sol = m.solve(1.5, &cfg()).unwrap();
        assert!(sol.bend_per_length > 0.0 && sol.bend_per_length < 1e-6);
        check_residuals(&m, &sol);
    }

    #[test]
    fn unloaded_body_fully_inflates() {
        let m = BendModel::pouch(&ActuatorSpec::pouch(0.04, 0.04), VineBody::new(0.08, 0.0).unwrap()).unwrap();
        let sol = m.solve(1e4, &cfg()).unwrap();
        assert_eq!(sol.deformation, Deformation::CentralAngle(FRAC_PI_2));
    }

    #[test]
    fn rejects_infeasible_and_wrong_kind() {
        let bad = ActuatorSpec::cpam_standard_fold(0.02, 0.04);
        assert!(matches!(BendModel::cpam(&bad, body()), Err(SolveError::Infeasible(_))));
        assert!(BendModel::pouch(&ActuatorSpec::fpam(0.02), body()).is_err());
        assert!(pouch(0.04, 0.04).solve(-1.0, &cfg()).is_err());
        assert!(pouch(0.04, 0.04).solve(f64::NAN, &cfg()).is_err());
    }

    #[test]
    fn sweep_matches_pointwise() {
        let m = cpam(0.04, 0.04);
        let ps: Vec<f64> = (0..=40).map(|i| i as f64 * 1e3).collect();
        let swept = m.sweep(&ps, &cfg()).unwrap();
        for (p, s) in ps.iter().zip(&swept) {
            let single = m.solve(*p, &cfg()).unwrap();
            assert!((single.bend_per_length - s.bend_per_length).abs() < 1e-9);
        }
        assert!(m.sweep(&[], &cfg()).unwrap().is_empty());
        assert!(matches!(m.sweep(&[2e3, 1e3], &cfg()), Err(SolveError::UnsortedPressures { index: 1 })));
    }

    #[test]
    fn sweep_errors_carry_index() {
        let m = pouch(0.04, 0.04);
        let err = m.sweep(&[0.0, 1e3, f64::INFINITY], &cfg()).unwrap_err();
        assert!(matches!(err, SolveError::AtPoint { index: 2, .. }), "{err:?}");
    }

    #[test]
    fn deterministic() {
        let m = pouch(0.06, 0.04);
        let a = m.solve(12_345.0, &cfg()).unwrap();
        let b = m.solve(12_345.0, &cfg()).unwrap();
        assert_eq!(a.bend_per_length.to_bits(), b.bend_per_length.to_bits());
    }

    #[test]
    fn config_validation_and_env() {
        let mut c = cfg();
        c.q_bracket = (1.0, 0.5);
        assert!(c.validate().is_err());
        let t = SolverConfig::with_tolerance(1e-8);
        assert_eq!(t.force_tol, 1e-8);
        assert_eq!(t.length_tol, 1e-10);
    }

    #[test]
    fn custom_volume_multiplier_slows_rise() {
        let spec = ActuatorSpec::pouch(0.06, 0.06);
        let full = BendModel::pouch_with_alpha(&spec, body(), 1.0).unwrap().solve(1e4, &cfg()).unwrap();
        let default = BendModel::pouch(&spec, body()).unwrap().solve(1e4, &cfg()).unwrap();
        assert!(full.bend_per_length > default.bend_per_length);
    }

    #[test]
    fn small_angle_ratios() {
        for q in [1e-6f64, 5e-5, 2e-4, 1e-2] {
            let exact_tan = 1.0 - q / (2.0 * (q / 2.0).tan());
            let exact_sin = 1.0 - q / (2.0 * (q / 2.0).sin());
            assert!((one_minus_tan_ratio(q) - exact_tan).abs() < 1e-12);
            assert!((one_minus_sin_ratio(q) - exact_sin).abs() < 1e-12);
        }
    }
}
