//! Measured reference data and model-vs-experiment comparison.
//!
//! * the eversion pressure table for every fabricated dimension
//! * reference model errors reported for the fabricated dimensions
//! * bend curve CSV files (`pressure_kpa,bend_deg_per_cm`)
//! * the mean normalized absolute error between a model and a bend curve

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{DataError, SolveError};
use crate::geometry::{ActuatorKind, ActuatorSpec, VineBody};
use crate::solver::{BendModel, SolverConfig};
use crate::units::{deg_per_cm_to_rad_per_m, kpa_to_pa, pa_to_kpa, rad_per_m_to_deg_per_cm};

/// Header of the eversion table CSV export.
pub const EVERSION_CSV_HEADER: &str = "kind,w_mm,l0_mm,p0_kpa,p15_kpa,flag";

/// Header of bend curve CSV files.
pub const BEND_CSV_HEADER: &str = "pressure_kpa,bend_deg_per_cm";

/// Data points bending less than this (0.05 °/cm) are left out of the error
/// metric, rad/m.
pub fn default_skip_threshold() -> f64 {
    deg_per_cm_to_rad_per_m(0.05)
}

/// Eversion pressures of one fabricated dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EversionEntry {
    /// Pressures in hundredths of a kPa (10 Pa), as tabulated.
    Measured { p0_ckpa: u32, p15_ckpa: u32 },
    /// Geometrically infeasible, never built.
    NotFeasible,
    /// Built, but produced no bending.
    NoBend,
}

impl EversionEntry {
    /// `(p0, p15)` in pascals: eversion pressure with deflated actuators and
    /// with actuators at 15 kPa.
    pub fn pressures(&self) -> Option<(f64, f64)> {
        match *self {
            EversionEntry::Measured { p0_ckpa, p15_ckpa } => Some((p0_ckpa as f64 * 10.0, p15_ckpa as f64 * 10.0)),
            _ => None,
        }
    }

    pub fn flag(&self) -> &'static str {
        match self {
            EversionEntry::Measured { .. } => "",
            EversionEntry::NotFeasible => "nf",
            EversionEntry::NoBend => "nb",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EversionRecord {
    pub kind: ActuatorKind,
    pub w_mm: u32,
    /// `None` for fPAMs.
    pub l0_mm: Option<u32>,
    pub entry: EversionEntry,
}

const fn m(kind: ActuatorKind, w_mm: u32, l0_mm: u32, p0_ckpa: u32, p15_ckpa: u32) -> EversionRecord {
    EversionRecord { kind, w_mm, l0_mm: Some(l0_mm), entry: EversionEntry::Measured { p0_ckpa, p15_ckpa } }
}

const fn flagged(kind: ActuatorKind, w_mm: u32, l0_mm: u32, entry: EversionEntry) -> EversionRecord {
    EversionRecord { kind, w_mm, l0_mm: Some(l0_mm), entry }
}

const fn tube(w_mm: u32, p0_ckpa: u32, p15_ckpa: u32) -> EversionRecord {
    EversionRecord { kind: ActuatorKind::Fpam, w_mm, l0_mm: None, entry: EversionEntry::Measured { p0_ckpa, p15_ckpa } }
}

use ActuatorKind::{Cpam, PouchMotor};
use EversionEntry::{NoBend, NotFeasible};

/// Body eversion pressures for every fabricated actuator dimension.
pub static EVERSION_TABLE: [EversionRecord; 21] = [
    m(PouchMotor, 20, 20, 130, 114),
    flagged(PouchMotor, 20, 40, NoBend),
    flagged(PouchMotor, 20, 60, NoBend),
    m(PouchMotor, 40, 20, 132, 132),
    m(PouchMotor, 40, 40, 126, 152),
    m(PouchMotor, 40, 60, 126, 170),
    m(PouchMotor, 60, 20, 142, 184),
    m(PouchMotor, 60, 40, 154, 192),
    m(PouchMotor, 60, 60, 176, 172),
    m(Cpam, 20, 20, 122, 162),
    flagged(Cpam, 20, 40, NotFeasible),
    flagged(Cpam, 20, 60, NotFeasible),
    m(Cpam, 40, 20, 162, 216),
    m(Cpam, 40, 40, 156, 156),
    flagged(Cpam, 40, 60, NotFeasible),
    m(Cpam, 60, 20, 156, 232),
    m(Cpam, 60, 40, 170, 274),
    m(Cpam, 60, 60, 156, 302),
    tube(20, 60, 66),
    tube(40, 60, 126),
    tube(60, 66, 144),
];

fn to_mm(x: f64) -> Option<u32> {
    let mm = x * 1000.0;
    let r = mm.round();
    ((mm - r).abs() < 1e-6 && r > 0.0 && r < u32::MAX as f64).then_some(r as u32)
}

/// Look up a fabricated dimension (meters). `length` is ignored for fPAMs.
pub fn eversion_lookup(
    kind: ActuatorKind,
    width: f64,
    length: Option<f64>,
) -> Result<&'static EversionRecord, DataError> {
    let describe = || match length {
        Some(l) if kind != ActuatorKind::Fpam => format!("{kind} w = {width} m, L0 = {l} m"),
        _ => format!("{kind} w = {width} m"),
    };
    let w = to_mm(width).ok_or_else(|| DataError::UnknownDimension(describe()))?;
    let l = match kind {
        ActuatorKind::Fpam => None,
        _ => Some(length.and_then(to_mm).ok_or_else(|| DataError::UnknownDimension(describe()))?),
    };
    EVERSION_TABLE
        .iter()
        .find(|r| r.kind == kind && r.w_mm == w && r.l0_mm == l)
        .ok_or_else(|| DataError::UnknownDimension(describe()))
}

fn fmt_ckpa(c: u32) -> String {
    format!("{}.{:02}", c / 100, c % 100)
}

/// The eversion table as CSV, one row per fabricated dimension.
pub fn eversion_csv(records: &[EversionRecord]) -> String {
    let mut out = String::new();
    out.push_str(EVERSION_CSV_HEADER);
    out.push('\n');
    for r in records {
        let l0 = r.l0_mm.map(|l| l.to_string()).unwrap_or_default();
        let (p0, p15) = match r.entry {
            EversionEntry::Measured { p0_ckpa, p15_ckpa } => (fmt_ckpa(p0_ckpa), fmt_ckpa(p15_ckpa)),
            _ => (String::new(), String::new()),
        };
        let _ = writeln!(out, "{},{},{l0},{p0},{p15},{}", r.kind, r.w_mm, r.entry.flag());
    }
    out
}

fn parse_ckpa(s: &str) -> Option<u32> {
    let (int, frac) = s.split_once('.')?;
    if frac.len() != 2 {
        return None;
    }
    Some(int.parse::<u32>().ok()? * 100 + frac.parse::<u32>().ok()?)
}

/// Parse an eversion table CSV as written by [`eversion_csv`].
pub fn parse_eversion_csv(text: &str) -> Result<Vec<EversionRecord>, DataError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == EVERSION_CSV_HEADER => {}
        _ => return Err(DataError::Parse { line: 1, message: format!("expected header '{EVERSION_CSV_HEADER}'") }),
    }
    lines
        .map(|(i, line)| {
            let lineno = i as u64 + 1;
            let bad = |message: String| DataError::Parse { line: lineno, message };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(bad(format!("expected 6 fields, got {}", f.len())));
            }
            let kind: ActuatorKind = f[0].parse().map_err(bad)?;
            let w_mm = f[1].parse().map_err(|_| bad(format!("bad width '{}'", f[1])))?;
            let l0_mm = if f[2].is_empty() {
                None
            } else {
                Some(f[2].parse().map_err(|_| bad(format!("bad length '{}'", f[2])))?)
            };
            let entry = match (f[5], f[3], f[4]) {
                ("", p0, p15) => EversionEntry::Measured {
                    p0_ckpa: parse_ckpa(p0).ok_or_else(|| bad(format!("bad pressure '{p0}'")))?,
                    p15_ckpa: parse_ckpa(p15).ok_or_else(|| bad(format!("bad pressure '{p15}'")))?,
                },
                ("nf", "", "") => EversionEntry::NotFeasible,
                ("nb", "", "") => EversionEntry::NoBend,
                (flag, _, _) => return Err(bad(format!("unexpected flag '{flag}' or pressures on a flagged row"))),
            };
            Ok(EversionRecord { kind, w_mm, l0_mm, entry })
        })
        .collect()
}

/// Model error reported for a fabricated dimension, kept for reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceModelError {
    pub kind: ActuatorKind,
    pub w_mm: u32,
    pub l0_mm: Option<u32>,
    pub e: f64,
}

const fn rme(kind: ActuatorKind, w_mm: u32, l0_mm: Option<u32>, e: f64) -> ReferenceModelError {
    ReferenceModelError { kind, w_mm, l0_mm, e }
}

/// Reported model errors against the measured bend curves. Those curves are
/// not shipped, so these values cannot be recomputed here.
pub static REFERENCE_MODEL_ERRORS: [ReferenceModelError; 16] = [
    rme(PouchMotor, 20, Some(20), 0.177),
    rme(PouchMotor, 40, Some(20), 0.205),
    rme(PouchMotor, 40, Some(40), 0.196),
    rme(PouchMotor, 40, Some(60), 0.797),
    rme(PouchMotor, 60, Some(20), 0.132),
    rme(PouchMotor, 60, Some(40), 0.199),
    rme(PouchMotor, 60, Some(60), 0.355),
    rme(Cpam, 20, Some(20), 0.483),
    rme(Cpam, 40, Some(20), 0.255),
    rme(Cpam, 40, Some(40), 0.169),
    rme(Cpam, 60, Some(20), 0.435),
    rme(Cpam, 60, Some(40), 0.113),
    rme(Cpam, 60, Some(60), 0.102),
    rme(ActuatorKind::Fpam, 20, None, 0.034),
    rme(ActuatorKind::Fpam, 40, None, 0.019),
    rme(ActuatorKind::Fpam, 60, None, 0.170),
];

/// Fabricated dimensions that were built and bend: the default candidate set.
pub fn fabricated_specs() -> Vec<ActuatorSpec> {
    EVERSION_TABLE
        .iter()
        .filter(|r| matches!(r.entry, EversionEntry::Measured { .. }))
        .map(|r| ActuatorSpec::from_mm(r.kind, r.w_mm as f64, r.l0_mm.unwrap_or(0) as f64))
        .collect()
}

/// Every dimension in the fabrication grid, including crossed-out ones.
pub fn dimension_grid() -> Vec<ActuatorSpec> {
    EVERSION_TABLE.iter().map(|r| ActuatorSpec::from_mm(r.kind, r.w_mm as f64, r.l0_mm.unwrap_or(0) as f64)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BendPoint {
    /// Actuator pressure, Pa.
    pub pressure: f64,
    /// Bending per length, rad/m.
    pub bend: f64,
}

/// A measured (or generated) pressure-to-bending curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BendDataset {
    pub points: Vec<BendPoint>,
    pub source: String,
    pub actuator: Option<ActuatorSpec>,
    pub body: Option<VineBody>,
}

impl BendDataset {
    pub fn new(points: Vec<BendPoint>, source: impl Into<String>) -> Result<Self, DataError> {
        if points.is_empty() {
            return Err(DataError::EmptyDataset);
        }
        for (i, p) in points.iter().enumerate() {
            let bad = |message: String| DataError::Parse { line: i as u64 + 2, message };
            if !p.pressure.is_finite() || !p.bend.is_finite() || p.bend < 0.0 {
                return Err(bad(format!("point {i}: pressure and bend must be finite, bend >= 0")));
            }
            if i > 0 && p.pressure <= points[i - 1].pressure {
                return Err(bad(format!("point {i}: pressure not strictly increasing")));
            }
        }
        Ok(Self { points, source: source.into(), actuator: None, body: None })
    }

    pub fn with_setup(mut self, actuator: ActuatorSpec, body: VineBody) -> Self {
        self.actuator = Some(actuator);
        self.body = Some(body);
        self
    }

    /// Same curve with every bend multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for p in &mut out.points {
            p.bend *= factor;
        }
        out
    }
}

/// Read a bend curve. Leading `#` lines are skipped, the header must start
/// with `pressure_kpa,bend_deg_per_cm`, and extra columns are ignored.
/// Line numbers in errors count every physical line of the file.
pub fn read_bend_csv<R: Read>(reader: R, source: &str) -> Result<BendDataset, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut points = Vec::new();
    let mut header_seen = false;
    for rec in rdr.records() {
        let rec =
            rec.map_err(|e| DataError::Parse { line: e.position().map_or(0, |p| p.line()), message: e.to_string() })?;
        let line = rec.position().map_or(0, |p| p.line());
        if !header_seen {
            if rec.get(0) != Some("pressure_kpa") || rec.get(1) != Some("bend_deg_per_cm") {
                return Err(DataError::Parse { line, message: format!("expected header '{BEND_CSV_HEADER}'") });
            }
            header_seen = true;
            continue;
        }
        if rec.len() < 2 {
            return Err(DataError::Parse { line, message: format!("expected at least 2 fields, got {}", rec.len()) });
        }
        let num = |i: usize, what: &str| -> Result<f64, DataError> {
            let s = &rec[i];
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| DataError::Parse { line, message: format!("bad {what} '{s}'") })
        };
        let p_kpa = num(0, "pressure")?;
        let b_deg = num(1, "bend")?;
        if b_deg < 0.0 {
            return Err(DataError::Parse { line, message: format!("negative bend {b_deg}") });
        }
        if let Some(prev) = points.last().map(|p: &(f64, f64, u64)| p.0) {
            if p_kpa <= prev {
                return Err(DataError::Parse {
                    line,
                    message: format!("pressure {p_kpa} kPa does not increase (previous {prev} kPa)"),
                });
            }
        }
        points.push((p_kpa, b_deg, line));
    }
    if !header_seen {
        return Err(DataError::Parse { line: 1, message: format!("expected header '{BEND_CSV_HEADER}'") });
    }
    if points.is_empty() {
        return Err(DataError::EmptyDataset);
    }
    let points = points
        .into_iter()
        .map(|(p, b, _)| BendPoint { pressure: kpa_to_pa(p), bend: deg_per_cm_to_rad_per_m(b) })
        .collect();
    BendDataset::new(points, source)
}

pub fn load_bend_csv(path: impl AsRef<Path>) -> Result<BendDataset, DataError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    read_bend_csv(std::io::BufReader::new(file), &path.display().to_string())
}

/// Write a bend curve in display units with shortest round-trip decimals.
pub fn write_bend_csv<W: Write>(mut out: W, dataset: &BendDataset) -> std::io::Result<()> {
    writeln!(out, "{BEND_CSV_HEADER}")?;
    for p in &dataset.points {
        writeln!(out, "{},{}", pa_to_kpa(p.pressure), rad_per_m_to_deg_per_cm(p.bend))?;
    }
    Ok(())
}

pub fn save_bend_csv(dataset: &BendDataset, path: impl AsRef<Path>) -> Result<(), DataError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_bend_csv(&mut file, dataset)?;
    file.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointError {
    pub pressure: f64,
    pub data: f64,
    pub model: f64,
    /// `|model − data| / data`
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    /// Mean normalized absolute error.
    pub e: f64,
    pub used: usize,
    pub skipped: usize,
    /// Bend cutoff applied to the data, rad/m.
    pub threshold: f64,
    pub points: Vec<PointError>,
}

/// Mean of `|model(p) − data(p)| / data(p)` over the points whose measured
/// bend is at least `skip_threshold`.
pub fn model_error<F>(dataset: &BendDataset, mut model_curve: F, skip_threshold: f64) -> Result<ErrorReport, DataError>
where
    F: FnMut(f64) -> Result<f64, SolveError>,
{
    let kept: Vec<&BendPoint> = dataset.points.iter().filter(|p| p.bend >= skip_threshold && p.bend > 0.0).collect();
    if kept.is_empty() {
        return Err(DataError::EmptyAfterFilter { threshold: skip_threshold });
    }
    let mut points = Vec::with_capacity(kept.len());
    for p in &kept {
        let model = model_curve(p.pressure).map_err(|source| DataError::Model { pressure: p.pressure, source })?;
        points.push(PointError {
            pressure: p.pressure,
            data: p.bend,
            model,
            relative: (model - p.bend).abs() / p.bend,
        });
    }
    let e = points.iter().map(|p| p.relative).sum::<f64>() / points.len() as f64;
    Ok(ErrorReport {
        e,
        used: points.len(),
        skipped: dataset.points.len() - points.len(),
        threshold: skip_threshold,
        points,
    })
}

/// [`model_error`] against a solver model. The model is swept over every
/// pressure of the dataset, so a curve produced by the same sweep matches
/// exactly.
pub fn model_error_for(
    dataset: &BendDataset,
    model: &BendModel,
    cfg: &SolverConfig,
    skip_threshold: f64,
) -> Result<ErrorReport, DataError> {
    let pressures: Vec<f64> = dataset.points.iter().map(|p| p.pressure).collect();
    let solved = model.sweep(&pressures, cfg).map_err(|source| {
        let pressure = match &source {
            SolveError::AtPoint { pressure, .. } => *pressure,
            _ => f64::NAN,
        };
        DataError::Model { pressure, source }
    })?;
    let mut it = dataset.points.iter().zip(solved);
    model_error(
        dataset,
        |p| {
            let (_, sol) = it.find(|(pt, _)| pt.pressure == p).expect("pressure from the same dataset");
            Ok(sol.bend_per_length)
        },
        skip_threshold,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ds(points: &[(f64, f64)]) -> BendDataset {
        BendDataset::new(points.iter().map(|&(pressure, bend)| BendPoint { pressure, bend }).collect(), "test").unwrap()
    }

    #[test]
    fn eversion_examples() {
        let f = eversion_lookup(ActuatorKind::Fpam, 0.020, None).unwrap();
        assert_eq!(f.entry.pressures(), Some((600.0, 660.0)));
        let c = eversion_lookup(ActuatorKind::Cpam, 0.060, Some(0.060)).unwrap();
        assert_eq!(c.entry.pressures(), Some((1560.0, 3020.0)));
        let p = eversion_lookup(ActuatorKind::PouchMotor, 0.020, Some(0.040)).unwrap();
        assert_eq!(p.entry, EversionEntry::NoBend);
        let n = eversion_lookup(ActuatorKind::Cpam, 0.040, Some(0.060)).unwrap();
        assert_eq!(n.entry, EversionEntry::NotFeasible);
        // fPAM ignores length
        assert!(eversion_lookup(ActuatorKind::Fpam, 0.060, Some(0.5)).is_ok());
    }

    #[test]
    fn eversion_unknown_dimension() {
        for (kind, w, l) in [
            (ActuatorKind::Cpam, 0.050, Some(0.060)),
            (ActuatorKind::PouchMotor, 0.060, None),
            (ActuatorKind::PouchMotor, 0.0605, Some(0.060)),
            (ActuatorKind::Fpam, 0.030, None),
        ] {
            assert!(matches!(eversion_lookup(kind, w, l), Err(DataError::UnknownDimension(_))));
        }
    }

    #[test]
    fn eversion_extremes() {
        let deflated = EVERSION_TABLE.iter().filter_map(|r| r.entry.pressures()).map(|p| p.0).fold(0.0, f64::max);
        let inflated = EVERSION_TABLE.iter().filter_map(|r| r.entry.pressures()).map(|p| p.1).fold(0.0, f64::max);
        assert_eq!(deflated, 1760.0);
        assert_eq!(inflated, 3020.0);
    }

    #[test]
    fn eversion_csv_round_trip() {
        let text = eversion_csv(&EVERSION_TABLE);
        assert!(text.contains("\nfpam,20,,0.60,0.66,\n"));
        assert!(text.contains("\npouch,20,40,,,nb\n"));
        assert!(text.contains("\ncpam,60,60,1.56,3.02,\n"));
        let parsed = parse_eversion_csv(&text).unwrap();
        assert_eq!(parsed, EVERSION_TABLE.to_vec());
        assert_eq!(eversion_csv(&parsed), text);
    }

    #[test]
    fn eversion_csv_errors() {
        assert!(parse_eversion_csv("kind,w\n").is_err());
        let bad = format!("{EVERSION_CSV_HEADER}\nfpam,20,,0.6,0.66,\n");
        assert!(matches!(parse_eversion_csv(&bad), Err(DataError::Parse { line: 2, .. })));
        let bad = format!("{EVERSION_CSV_HEADER}\npouch,20,40,1.00,,nb\n");
        assert!(parse_eversion_csv(&bad).is_err());
    }

    #[test]
    fn default_candidates() {
        let specs = fabricated_specs();
        assert_eq!(specs.len(), 16);
        assert!(specs.iter().all(|s| crate::validate_spec(s).is_feasible()));
        assert_eq!(dimension_grid().len(), 21);
    }

    #[test]
    fn error_metric_examples() {
        let data = ds(&[(1e3, 0.5), (2e3, 1.0), (3e3, 2.0)]);
        let same = model_error(&data, |p| Ok(data.points.iter().find(|q| q.pressure == p).unwrap().bend), 0.0).unwrap();
        assert_eq!(same.e, 0.0);
        let above =
            model_error(&data, |p| Ok(1.1 * data.points.iter().find(|q| q.pressure == p).unwrap().bend), 0.0).unwrap();
        assert!((above.e - 0.1).abs() < 1e-12);
    }

    #[test]
    fn error_metric_manual_five_points() {
        // data 1, 2, 4, 5, 8; model 1.2, 1.5, 4, 6, 7
        // relative: 0.2, 0.25, 0, 0.2, 0.125 -> mean 0.155
        let data = ds(&[(1e3, 1.0), (2e3, 2.0), (3e3, 4.0), (4e3, 5.0), (5e3, 8.0)]);
        let model = [1.2, 1.5, 4.0, 6.0, 7.0];
        let mut i = 0;
        let r = model_error(
            &data,
            |_| {
                i += 1;
                Ok(model[i - 1])
            },
            0.0,
        )
        .unwrap();
        assert!((r.e - 0.155).abs() < 1e-12);
        assert_eq!(r.used, 5);
    }

    #[test]
    fn error_metric_skips_small_bends() {
        let data = ds(&[(0.0, 0.0), (1e3, 0.01), (2e3, 1.0), (3e3, 2.0)]);
        let r = model_error(&data, |_| Ok(1.5), default_skip_threshold()).unwrap();
        assert_eq!((r.used, r.skipped), (2, 2));
        assert!((r.e - 0.375).abs() < 1e-15);
        let tiny = ds(&[(0.0, 0.0), (1e3, 0.01)]);
        assert!(matches!(model_error(&tiny, |_| Ok(1.0), 0.05), Err(DataError::EmptyAfterFilter { .. })));
    }

    #[test]
    fn bend_csv_round_trip() {
        let text = "pressure_kpa,bend_deg_per_cm\n0,0\n0.5,0.01\n1.25,0.3\n10,1.7\n";
        let data = read_bend_csv(text.as_bytes(), "mem").unwrap();
        assert_eq!(data.points.len(), 4);
        assert_eq!(data.points[2].pressure, 1250.0);
        let mut out = Vec::new();
        write_bend_csv(&mut out, &data).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), text);
        let again = read_bend_csv(out.as_slice(), "mem").unwrap();
        assert_eq!(again, data);
    }

    #[test]
    fn bend_csv_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("curve.csv");
        let data = ds(&[(0.0, 0.0), (1234.5, 0.123_456_789), (40_000.0, 4.4)]);
        save_bend_csv(&data, &path).unwrap();
        let back = load_bend_csv(&path).unwrap();
        for (a, b) in data.points.iter().zip(&back.points) {
            assert!((a.pressure - b.pressure).abs() <= 1e-15 * a.pressure.abs());
            assert!((a.bend - b.bend).abs() <= 1e-15 * a.bend.abs());
        }
        // a second pass is exact
        save_bend_csv(&back, &path).unwrap();
        assert_eq!(load_bend_csv(&path).unwrap().points, back.points);
    }

    #[test]
    fn bend_csv_reports_line_numbers() {
        let text = "pressure_kpa,bend_deg_per_cm\n0,0\n1,0.1\n2,0.2\n3,0.3\n4,0.4\n3.5,0.5\n";
        match read_bend_csv(text.as_bytes(), "mem") {
            Err(DataError::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
        let text = "pressure_kpa,bend_deg_per_cm\n0,0\n1,abc\n";
        assert!(matches!(read_bend_csv(text.as_bytes(), "m"), Err(DataError::Parse { line: 3, .. })));
        let text = "# comment\npressure_kpa,bend_deg_per_cm,theta\n0,0,0\n1,-0.5,0\n";
        assert!(matches!(read_bend_csv(text.as_bytes(), "m"), Err(DataError::Parse { line: 4, .. })));
    }

    #[test]
    fn bend_csv_header_and_empty() {
        assert!(matches!(
            read_bend_csv("pressure_kpa,bend_deg_per_cm\n".as_bytes(), "m"),
            Err(DataError::EmptyDataset)
        ));
        assert!(matches!(read_bend_csv("p,b\n1,2\n".as_bytes(), "m"), Err(DataError::Parse { line: 1, .. })));
        assert!(read_bend_csv("".as_bytes(), "m").is_err());
    }

    #[test]
    fn bend_csv_accepts_sweep_output() {
        let text =
            "# vinebend 0.1.0 sweep\npressure_kpa,bend_deg_per_cm,theta_or_eps,residual\n0,0,0,0\n0.5,0.1,0.3,1e-15\n";
        let data = read_bend_csv(text.as_bytes(), "m").unwrap();
        assert_eq!(data.points.len(), 2);
    }

    proptest! {
        #[test]
        fn error_metric_scale_and_unit_invariant(
            bends in prop::collection::vec((0.1f64..5.0, 0.5f64..1.5), 1..20),
            scale in 0.01f64..100.0,
        ) {
            let data = ds(&bends.iter().enumerate().map(|(i, &(b, _))| ((i + 1) as f64 * 1e3, b)).collect::<Vec<_>>());
            let model: Vec<f64> = bends.iter().map(|&(b, f)| b * f).collect();
            let e = model_error(&data, |p| Ok(model[(p / 1e3) as usize - 1]), 0.0).unwrap().e;

            let scaled = data.scaled(scale);
            let e_scaled = model_error(&scaled, |p| Ok(scale * model[(p / 1e3) as usize - 1]), 0.0).unwrap().e;
            prop_assert!((e - e_scaled).abs() < 1e-12);

            let deg = data.scaled(rad_per_m_to_deg_per_cm(1.0));
            let e_deg = model_error(&deg, |p| Ok(rad_per_m_to_deg_per_cm(model[(p / 1e3) as usize - 1])), 0.0).unwrap().e;
            prop_assert!((e - e_deg).abs() < 1e-12);
        }
    }
}
