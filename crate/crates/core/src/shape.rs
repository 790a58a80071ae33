//! Whole-robot shape from per-line pressures.
//!
//! Each actuator line bends the body toward its own azimuth. Lines acting on
//! the same stretch of body are combined by adding their curvature vectors in
//! the cross-section plane, and the resulting piecewise constant curvature
//! arcs are chained from the base. The base frame is the identity at the
//! origin with the body growing along +z; azimuth 0 points along +x.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{Rotation3, Unit, Vector3};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{ModelError, ShapeError};
use crate::geometry::{ActuatorKind, ActuatorLine, VineSpec};
use crate::models::sinc;
use crate::solver::{BendModel, SolverConfig};

/// A constant-curvature arc of the body centerline.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SegmentCurvature {
    /// Curvature magnitude, 1/m.
    pub kappa: f64,
    /// Azimuth of the bending direction, rad, in [0, 2π).
    pub phi: f64,
    /// Arc length, m.
    pub length: f64,
}

impl SegmentCurvature {
    pub fn straight(length: f64) -> Self {
        Self { kappa: 0.0, phi: 0.0, length }
    }
}

/// Add the bending of several lines acting on one stretch of body.
///
/// Each `(bend_per_length, azimuth)` pair is a curvature vector pointing
/// toward the line's azimuth; the result carries the magnitude and direction
/// of their sum. A vanishing sum gets `phi = 0`.
pub fn superpose(line_bends: &[(f64, f64)], length: f64) -> SegmentCurvature {
    let (mut x, mut y) = (0.0, 0.0);
    for &(b, az) in line_bends {
        x += b * az.cos();
        y += b * az.sin();
    }
    let kappa = x.hypot(y);
    let scale = line_bends.iter().map(|(b, _)| b.abs()).fold(0.0, f64::max);
    if kappa <= 1e-14 * scale || kappa == 0.0 {
        return SegmentCurvature { kappa, phi: 0.0, length };
    }
    SegmentCurvature { kappa, phi: y.atan2(x).rem_euclid(2.0 * PI), length }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    /// Arc length from the base, m.
    pub s: f64,
    pub position: Vector3<f64>,
    pub orientation: Rotation3<f64>,
}

impl Frame {
    /// Unit tangent of the centerline (local +z).
    pub fn tangent(&self) -> Vector3<f64> {
        self.orientation * Vector3::z()
    }
}

impl Serialize for Frame {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let m = self.orientation.matrix();
        let rows: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]));
        let mut st = serializer.serialize_struct("Frame", 3)?;
        st.serialize_field("s_m", &self.s)?;
        st.serialize_field("position_m", &[self.position.x, self.position.y, self.position.z])?;
        st.serialize_field("rotation", &rows)?;
        st.end()
    }
}

/// Frames at the segment boundaries plus the segments that produced them.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RobotPose {
    pub frames: Vec<Frame>,
    pub segments: Vec<SegmentCurvature>,
}

/// Transform across one constant-curvature arc, in the arc's start frame.
fn arc_transform(seg: &SegmentCurvature, ds: f64) -> (Vector3<f64>, Rotation3<f64>) {
    let angle = seg.kappa * ds;
    let (sp, cp) = seg.phi.sin_cos();
    // (1 − cos x)/κ = ds·sin(x/2)·sinc(x/2),  sin(x)/κ = ds·sinc(x)
    let lateral = ds * (angle / 2.0).sin() * sinc(angle / 2.0);
    let axial = ds * sinc(angle);
    let offset = Vector3::new(lateral * cp, lateral * sp, axial);
    let axis = Unit::new_unchecked(Vector3::new(-sp, cp, 0.0));
    (offset, Rotation3::from_axis_angle(&axis, angle))
}

/// Chain constant-curvature arcs from an identity base frame.
pub fn forward_kinematics(segments: &[SegmentCurvature]) -> Result<RobotPose, ModelError> {
    if segments.is_empty() {
        return Err(ModelError::InvalidInput("at least one segment is required".into()));
    }
    let mut frame = Frame { s: 0.0, position: Vector3::zeros(), orientation: Rotation3::identity() };
    let mut frames = Vec::with_capacity(segments.len() + 1);
    frames.push(frame);
    for (i, seg) in segments.iter().enumerate() {
        if !seg.kappa.is_finite() || !seg.length.is_finite() || seg.length <= 0.0 || seg.kappa < 0.0 {
            return Err(ModelError::InvalidInput(format!("segment {i}: need kappa >= 0 and length > 0")));
        }
        let (offset, rot) = arc_transform(seg, seg.length);
        frame = Frame {
            s: frame.s + seg.length,
            position: frame.position + frame.orientation * offset,
            orientation: frame.orientation * rot,
        };
        frames.push(frame);
    }
    Ok(RobotPose { frames, segments: segments.to_vec() })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PolylinePoint {
    pub s: f64,
    pub position: [f64; 3],
}

impl RobotPose {
    pub fn tip(&self) -> &Frame {
        self.frames.last().expect("pose has at least the base frame")
    }

    /// Total turning of the tangent between base and tip, rad.
    pub fn heading_change(&self) -> f64 {
        angle_between(&Vector3::z(), &self.tip().tangent())
    }

    /// Centerline length recovered from consecutive frames: each chord is
    /// scaled back to its arc using the turning angle between the tangents.
    /// Assumes no single segment turns by π or more.
    pub fn arc_length(&self) -> f64 {
        self.frames
            .windows(2)
            .map(|w| {
                let chord = (w[1].position - w[0].position).norm();
                let turn = angle_between(&w[0].tangent(), &w[1].tangent());
                chord / sinc(turn / 2.0)
            })
            .sum()
    }

    /// Points along the centerline, `per_segment` sub-steps per arc.
    pub fn polyline(&self, per_segment: usize) -> Vec<PolylinePoint> {
        let n = per_segment.max(1);
        let mut out = Vec::with_capacity(self.segments.len() * n + 1);
        let p = |f: &Frame, s: f64, v: Vector3<f64>| PolylinePoint { s: f.s + s, position: [v.x, v.y, v.z] };
        out.push(p(&self.frames[0], 0.0, self.frames[0].position));
        for (seg, start) in self.segments.iter().zip(&self.frames) {
            for k in 1..=n {
                let ds = seg.length * k as f64 / n as f64;
                let (offset, _) = arc_transform(seg, ds);
                out.push(p(start, ds, start.position + start.orientation * offset));
            }
        }
        out
    }
}

fn angle_between(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Write a polyline as `s_m,x_m,y_m,z_m` CSV.
pub fn write_polyline_csv<W: Write>(mut out: W, points: &[PolylinePoint]) -> std::io::Result<()> {
    writeln!(out, "s_m,x_m,y_m,z_m")?;
    for pt in points {
        writeln!(out, "{},{},{},{}", pt.s, pt.position[0], pt.position[1], pt.position[2])?;
    }
    Ok(())
}

/// Curvature a line produces along its span: the per-actuator bend smeared
/// over the pitch for discrete actuators.
pub fn line_curvature(line: &ActuatorLine, bend_per_length: f64) -> f64 {
    match line.spec.length() {
        Some(l0) if line.spec.kind() != ActuatorKind::Fpam && line.pitch > 0.0 => bend_per_length * l0 / line.pitch,
        _ => bend_per_length,
    }
}

/// Solve every line at its pressure and return the curvature it produces.
pub fn line_curvatures(vine: &VineSpec, line_pressures: &[f64], cfg: &SolverConfig) -> Result<Vec<f64>, ShapeError> {
    vine.validate()?;
    if line_pressures.len() != vine.lines.len() {
        return Err(ShapeError::PressureCount { expected: vine.lines.len(), got: line_pressures.len() });
    }
    vine.lines
        .iter()
        .zip(line_pressures)
        .enumerate()
        .map(|(i, (line, &p))| {
            let model = BendModel::from_spec(&line.spec, vine.body, Some(line.fpam_strains()))
                .map_err(|source| ShapeError::Line { line: i, source })?;
            let sol = model.solve(p, cfg).map_err(|source| ShapeError::Line { line: i, source })?;
            Ok(line_curvature(line, sol.bend_per_length))
        })
        .collect()
}

/// Split the body into stretches with a constant set of active lines and
/// superpose the lines on each.
pub fn body_segments(vine: &VineSpec, curvatures: &[f64]) -> Vec<SegmentCurvature> {
    let base = vine.length - vine.actuated_length;
    let ends: Vec<f64> = vine.lines.iter().map(|l| base + l.span(vine.actuated_length)).collect();
    let mut cuts = vec![0.0, base, vine.length];
    cuts.extend(ends.iter().copied());
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    cuts.windows(2)
        .filter(|w| w[1] - w[0] > 1e-12)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            let active: Vec<(f64, f64)> = vine
                .lines
                .iter()
                .zip(curvatures)
                .zip(&ends)
                .filter(|(_, &end)| mid > base && mid < end)
                .map(|((line, &k), _)| (k, line.azimuth))
                .collect();
            superpose(&active, w[1] - w[0])
        })
        .collect()
}

pub fn shape_from_pressures(
    vine: &VineSpec,
    line_pressures: &[f64],
    cfg: &SolverConfig,
) -> Result<RobotPose, ShapeError> {
    let curvatures = line_curvatures(vine, line_pressures, cfg)?;
    let segments = body_segments(vine, &curvatures);
    Ok(forward_kinematics(&segments)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ActuatorSpec, VineBody};
    use crate::units::deg_per_cm_to_rad_per_m;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn cpam_vine(azimuths: &[f64]) -> VineSpec {
        let spec = ActuatorSpec::cpam_standard_fold(0.06, 0.06);
        VineSpec {
            body: VineBody::reference(),
            length: 0.42,
            actuated_length: 0.36,
            lines: azimuths.iter().map(|&az| ActuatorLine::contiguous(spec, az, 6)).collect(),
        }
    }

    #[test]
    fn single_line_superposition() {
        let s = superpose(&[(1.3, 0.0)], 0.1);
        assert_eq!((s.kappa, s.phi), (1.3, 0.0));
        let s = superpose(&[(1.3, 2.0)], 0.1);
        assert_relative_eq!(s.kappa, 1.3, max_relative = 1e-15);
        assert_relative_eq!(s.phi, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn antagonists_and_triad_cancel() {
        assert!(superpose(&[(2.0, 0.0), (2.0, PI)], 0.1).kappa < 1e-12);
        let triad = [(2.0, 0.0), (2.0, 2.0 * PI / 3.0), (2.0, 4.0 * PI / 3.0)];
        let s = superpose(&triad, 0.1);
        assert!(s.kappa < 1e-12);
        assert_eq!(s.phi, 0.0);
    }

    #[test]
    fn straight_segment() {
        let pose = forward_kinematics(&[SegmentCurvature::straight(0.42)]).unwrap();
        let tip = pose.tip().position;
        assert!((tip - Vector3::new(0.0, 0.0, 0.42)).norm() < 1e-15);
    }

    #[test]
    fn quarter_circle() {
        let pose = forward_kinematics(&[SegmentCurvature { kappa: FRAC_PI_2 / 0.3, phi: 0.0, length: 0.3 }]).unwrap();
        let r = 0.3 / FRAC_PI_2;
        let tip = pose.tip();
        assert!((tip.position - Vector3::new(r, 0.0, r)).norm() < 1e-14);
        assert!((tip.tangent() - Vector3::x()).norm() < 1e-14);
        assert_relative_eq!(pose.heading_change(), FRAC_PI_2, max_relative = 1e-14);
    }

    #[test]
    fn demonstration_turn() {
        let kappa = deg_per_cm_to_rad_per_m(2.0);
        let segs = vec![SegmentCurvature { kappa, phi: 1.0, length: 0.045 }; 10];
        let pose = forward_kinematics(&segs).unwrap();
        assert!((pose.heading_change().to_degrees() - 90.0).abs() < 0.1);
    }

    #[test]
    fn empty_or_bad_segments() {
        assert!(forward_kinematics(&[]).is_err());
        assert!(forward_kinematics(&[SegmentCurvature { kappa: -1.0, phi: 0.0, length: 0.1 }]).is_err());
        assert!(forward_kinematics(&[SegmentCurvature::straight(0.0)]).is_err());
    }

    #[test]
    fn polyline_endpoints_match_frames() {
        let segs = [
            SegmentCurvature { kappa: 3.0, phi: 0.5, length: 0.2 },
            SegmentCurvature { kappa: 1.0, phi: 4.0, length: 0.1 },
        ];
        let pose = forward_kinematics(&segs).unwrap();
        let pts = pose.polyline(8);
        assert_eq!(pts.len(), 17);
        let last = pts.last().unwrap();
        let tip = pose.tip().position;
        assert!((Vector3::from(last.position) - tip).norm() < 1e-14);
        assert_relative_eq!(last.s, 0.3, max_relative = 1e-15);
    }

    #[test]
    fn zero_pressures_give_straight_robot() {
        let vine = cpam_vine(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        let pose = shape_from_pressures(&vine, &[0.0; 3], &SolverConfig::default()).unwrap();
        assert!((pose.tip().position - Vector3::new(0.0, 0.0, 0.42)).norm() < 1e-12);
    }

    #[test]
    fn single_line_is_planar() {
        let az = 1.1;
        let vine = cpam_vine(&[az]);
        let pose = shape_from_pressures(&vine, &[1.5e4], &SolverConfig::default()).unwrap();
        let normal = Vector3::new(-az.sin(), az.cos(), 0.0);
        for pt in pose.polyline(10) {
            assert!(Vector3::from(pt.position).dot(&normal).abs() < 1e-9);
        }
        assert!(pose.heading_change() > 0.5);
    }

    #[test]
    fn orthogonal_lines_bend_at_45_degrees() {
        let vine = cpam_vine(&[0.0, FRAC_PI_2]);
        let pose = shape_from_pressures(&vine, &[1e4, 1e4], &SolverConfig::default()).unwrap();
        let bent = pose.segments.iter().find(|s| s.kappa > 0.0).unwrap();
        assert_relative_eq!(bent.phi, PI / 4.0, max_relative = 1e-12);
        let tip = pose.tip().position;
        assert_relative_eq!(tip.x, tip.y, max_relative = 1e-12);
    }

    #[test]
    fn balanced_triad_stays_straight() {
        let vine = cpam_vine(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        let pose = shape_from_pressures(&vine, &[1.2e4; 3], &SolverConfig::default()).unwrap();
        assert!(pose.tip().position.xy().norm() < 1e-12);
    }

    #[test]
    fn partial_lines_split_the_body() {
        let mut vine = cpam_vine(&[0.0, PI]);
        vine.lines[1].count = 3;
        let curv = [2.0, 2.0];
        let segs = body_segments(&vine, &curv);
        // base, both lines, first line alone
        assert_eq!(segs.len(), 3);
        assert_eq!(segs[0].kappa, 0.0);
        assert!(segs[1].kappa < 1e-12);
        assert_relative_eq!(segs[2].kappa, 2.0);
        assert_relative_eq!(segs.iter().map(|s| s.length).sum::<f64>(), 0.42, max_relative = 1e-15);
    }

    #[test]
    fn pitch_smears_bending() {
        let spec = ActuatorSpec::pouch(0.04, 0.04);
        let mut line = ActuatorLine::contiguous(spec, 0.0, 4);
        assert_eq!(line_curvature(&line, 2.0), 2.0);
        line.pitch = 0.08;
        assert_eq!(line_curvature(&line, 2.0), 1.0);
        let f = ActuatorLine::contiguous(ActuatorSpec::fpam(0.04), 0.0, 1);
        assert_eq!(line_curvature(&f, 2.0), 2.0);
    }

    #[test]
    fn pressure_count_and_line_errors() {
        let vine = cpam_vine(&[0.0]);
        let cfg = SolverConfig::default();
        assert!(matches!(shape_from_pressures(&vine, &[1.0, 2.0], &cfg), Err(ShapeError::PressureCount { .. })));
        assert!(matches!(shape_from_pressures(&vine, &[-5.0], &cfg), Err(ShapeError::Line { line: 0, .. })));
    }

    fn segs_strategy() -> impl Strategy<Value = Vec<SegmentCurvature>> {
        prop::collection::vec((0.0f64..30.0, 0.0f64..(2.0 * PI), 1e-3f64..0.1), 100..130)
            .prop_map(|v| v.into_iter().map(|(kappa, phi, length)| SegmentCurvature { kappa, phi, length }).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn arc_length_is_conserved(segs in segs_strategy()) {
            let pose = forward_kinematics(&segs).unwrap();
            let total: f64 = segs.iter().map(|s| s.length).sum();
            prop_assert!(((pose.arc_length() - total) / total).abs() < 1e-9);
            prop_assert!(((pose.tip().s - total) / total).abs() < 1e-12);
        }

        #[test]
        fn frames_stay_orthonormal(segs in segs_strategy()) {
            let pose = forward_kinematics(&segs).unwrap();
            for f in &pose.frames {
                let m = f.orientation.matrix();
                let drift = (m.transpose() * m - nalgebra::Matrix3::identity()).abs().max();
                prop_assert!(drift < 1e-8);
            }
            for w in pose.frames.windows(2) {
                let seg_len = w[1].s - w[0].s;
                prop_assert!((w[1].position - w[0].position).norm() <= seg_len * (1.0 + 1e-12));
            }
        }

        #[test]
        fn superposition_is_rotation_equivariant(
            bends in prop::collection::vec((0.0f64..5.0, 0.0f64..(2.0 * PI)), 1..6),
            delta in 0.0f64..(2.0 * PI),
        ) {
            let a = superpose(&bends, 1.0);
            let rotated: Vec<(f64, f64)> = bends.iter().map(|&(b, az)| (b, az + delta)).collect();
            let b = superpose(&rotated, 1.0);
            prop_assert!((a.kappa - b.kappa).abs() < 1e-12 * (1.0 + a.kappa));
            if a.kappa > 1e-6 {
                let diff = (b.phi - a.phi - delta).rem_euclid(2.0 * PI);
                prop_assert!(diff.min(2.0 * PI - diff) < 1e-9);
            }
        }

        #[test]
        fn equal_azimuths_stay_planar(
            kappas in prop::collection::vec(0.0f64..20.0, 2..40),
            phi in 0.0f64..(2.0 * PI),
        ) {
            let segs: Vec<_> = kappas.iter().map(|&kappa| SegmentCurvature { kappa, phi, length: 0.02 }).collect();
            let pose = forward_kinematics(&segs).unwrap();
            let normal = Vector3::new(-phi.sin(), phi.cos(), 0.0);
            for f in &pose.frames {
                prop_assert!(f.position.dot(&normal).abs() < 1e-9);
            }
        }
    }
}
