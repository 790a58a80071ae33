mod config;
mod output;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use vinebend::dataset::{self, BendDataset};
use vinebend::design::{self, DesignQuery, Weights};
use vinebend::models::fpam_calibrate;
use vinebend::shape::{shape_from_pressures, write_polyline_csv};
use vinebend::units::{deg_per_cm_to_rad_per_m, kpa_to_pa, m_to_mm, mm_to_m, pa_to_kpa, rad_per_m_to_deg_per_cm};
use vinebend::{
    validate_spec, ActuatorKind, ActuatorSpec, BendModel, BendSolution, DataError, ModelError, ShapeError, SolveError,
    SolverConfig, VineBody,
};

use config::{actuator_spec, fpam_strains, VineConfig};
use output::{emit, json_envelope, Format, Metadata};

/// Pressure-to-bending models for pneumatic vine robot actuators.
///
/// Command-line quantities use mm, kPa and °/cm; everything is computed in SI.
/// Exit codes: 0 ok, 2 usage or infeasible input, 3 solver failure, 4 data
/// or output failure.
#[derive(Debug, Parser)]
#[command(name = "vinebend", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bending over a range of actuator pressures.
    Sweep(SweepArgs),
    /// Equilibrium at one actuator pressure.
    Solve(SolveArgs),
    /// Robot centerline for a JSON actuator layout and per-line pressures.
    Shape(ShapeArgs),
    /// Mean normalized error between a bend curve CSV and the model.
    FitError(FitErrorArgs),
    /// fPAM fiber constants and fabric stiffness.
    Calibrate(CalibrateArgs),
    /// Rank actuator types and dimensions for weighted priorities.
    Design(DesignArgs),
    /// Measured eversion pressures.
    Eversion(EversionArgs),
    /// Check an actuator or a layout file for feasibility.
    Validate(ValidateArgs),
}

#[derive(Debug, Args, Serialize)]
struct ActuatorArgs {
    /// pouch, cpam or fpam
    #[arg(long, value_parser = parse_kind)]
    kind: ActuatorKind,
    /// Flat width, mm.
    #[arg(long)]
    w: f64,
    /// Nominal length, mm (pouch and cPAM).
    #[arg(long)]
    l0: Option<f64>,
    /// cPAM fold length, mm. Defaults to 8 mm per 20 mm of length.
    #[arg(long)]
    f: Option<f64>,
    /// Pouch motor volume multiplier.
    #[arg(long)]
    alpha: Option<f64>,
    /// fPAM contraction at the body's pressure.
    #[arg(long)]
    eps_ps: Option<f64>,
    /// fPAM contraction at zero fabric stress.
    #[arg(long)]
    eps0: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
struct VineArgs {
    /// Body diameter, mm.
    #[arg(long, default_value_t = 80.0)]
    dvine: f64,
    /// Body pressure, kPa.
    #[arg(long, default_value_t = 1.75)]
    pvine: f64,
}

#[derive(Debug, Args, Serialize)]
struct OutArgs {
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    #[serde(skip)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args, Serialize)]
struct SweepArgs {
    #[command(flatten)]
    actuator: ActuatorArgs,
    #[command(flatten)]
    vine: VineArgs,
    /// First pressure, kPa.
    #[arg(long, default_value_t = 0.0)]
    pmin: f64,
    /// Last pressure, kPa.
    #[arg(long)]
    pmax: f64,
    /// Pressure step, kPa.
    #[arg(long, default_value_t = 0.5)]
    step: f64,
    /// Also write a gnuplot script plotting the CSV output.
    #[arg(long)]
    #[serde(skip)]
    gnuplot_stub: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct SolveArgs {
    #[command(flatten)]
    actuator: ActuatorArgs,
    #[command(flatten)]
    vine: VineArgs,
    /// Actuator pressure, kPa.
    #[arg(long)]
    p: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct ShapeArgs {
    /// JSON layout file.
    #[arg(long)]
    config: PathBuf,
    /// One pressure per line, kPa, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pressures: Vec<f64>,
    /// Polyline points per constant-curvature segment.
    #[arg(long, default_value_t = 16)]
    points_per_segment: usize,
    /// Also write a gnuplot script plotting the CSV output.
    #[arg(long)]
    #[serde(skip)]
    gnuplot_stub: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct FitErrorArgs {
    /// Bend curve CSV (pressure_kpa,bend_deg_per_cm).
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    actuator: ActuatorArgs,
    #[command(flatten)]
    vine: VineArgs,
    /// Points bending less than this are skipped, °/cm.
    #[arg(long, default_value_t = 0.05)]
    threshold: f64,
    /// Also write per-point errors to this CSV.
    #[arg(long)]
    #[serde(skip)]
    residuals: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct CalibrateArgs {
    /// Flat width, mm.
    #[arg(long)]
    w: f64,
    #[command(flatten)]
    vine: VineArgs,
    #[arg(long)]
    eps_ps: Option<f64>,
    #[arg(long)]
    eps0: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct DesignArgs {
    /// Priority weight as name=value; names are bending, eversion, speed, force.
    #[arg(long = "weight", value_parser = parse_weight)]
    weights: Vec<(String, f64)>,
    /// Actuator pressure for comparing bending, kPa.
    #[arg(long, default_value_t = 15.0)]
    budget: f64,
    /// Extra candidate as kind:WxL in mm (fpam:W for tubes).
    #[arg(long = "candidate", value_parser = parse_candidate)]
    candidates: Vec<ActuatorSpec>,
    #[command(flatten)]
    vine: VineArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
struct EversionArgs {
    #[arg(long, value_parser = parse_kind, required_unless_present = "all")]
    kind: Option<ActuatorKind>,
    /// Flat width, mm.
    #[arg(long, required_unless_present = "all")]
    w: Option<f64>,
    /// Nominal length, mm (pouch and cPAM).
    #[arg(long)]
    l0: Option<f64>,
    /// Export the whole table.
    #[arg(long, conflicts_with_all = ["kind", "w", "l0"])]
    all: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// JSON layout file to check instead of a single actuator.
    #[arg(long, conflicts_with_all = ["kind", "w", "l0", "f"])]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_kind, required_unless_present = "config")]
    kind: Option<ActuatorKind>,
    #[arg(long, required_unless_present = "config")]
    w: Option<f64>,
    #[arg(long)]
    l0: Option<f64>,
    #[arg(long)]
    f: Option<f64>,
}

fn parse_kind(s: &str) -> Result<ActuatorKind, String> {
    s.parse()
}

fn parse_weight(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let k = k.trim().to_ascii_lowercase();
    if !["bending", "eversion", "speed", "force"].contains(&k.as_str()) {
        return Err(format!("unknown priority '{k}' (bending, eversion, speed, force)"));
    }
    let v: f64 = v.trim().parse().map_err(|_| format!("bad weight value '{v}'"))?;
    Ok((k, v))
}

fn parse_candidate(s: &str) -> Result<ActuatorSpec, String> {
    let (kind, dims) = s.split_once(':').ok_or_else(|| format!("expected kind:WxL, got '{s}'"))?;
    let kind: ActuatorKind = kind.parse()?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad dimension '{t}'"));
    match (kind, dims.split_once(['x', 'X'])) {
        (ActuatorKind::Fpam, None) => Ok(ActuatorSpec::fpam(mm_to_m(num(dims)?))),
        (ActuatorKind::Fpam, Some(_)) => Err("fpam candidates take only a width".into()),
        (_, Some((w, l))) => actuator_spec(kind, num(w)?, Some(num(l)?), None).map_err(|e| e.to_string()),
        (_, None) => Err(format!("{kind} candidates need WxL")),
    }
}

/// A failure carrying its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Solver(String),
    Data(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Data(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Solver(m) | Failure::Data(m) => m,
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn root_cause(e: &SolveError) -> &SolveError {
    match e {
        SolveError::AtPoint { source, .. } => root_cause(source),
        other => other,
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match root_cause(&e) {
            SolveError::Infeasible(_) | SolveError::Model(_) | SolveError::UnsortedPressures { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Solver(e.to_string()),
        }
    }
}

impl From<ShapeError> for Failure {
    fn from(e: ShapeError) -> Self {
        match &e {
            ShapeError::Line { source, .. } if matches!(Failure::from(source.clone()), Failure::Solver(_)) => {
                Failure::Solver(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<DataError> for Failure {
    fn from(e: DataError) -> Self {
        match e {
            DataError::EmptyAfterFilter { .. } => Failure::Data(e.to_string()),
            DataError::Model { ref source, .. } => match Failure::from(source.clone()) {
                Failure::Usage(_) => Failure::Usage(e.to_string()),
                _ => Failure::Solver(e.to_string()),
            },
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    emit(path, text).map_err(|e| Failure::Data(format!("cannot write output: {e}")))
}

fn solver_config() -> Result<SolverConfig, Failure> {
    Ok(SolverConfig::from_env()?)
}

impl VineArgs {
    fn body(&self) -> Result<VineBody, Failure> {
        Ok(VineBody::new(mm_to_m(self.dvine), kpa_to_pa(self.pvine))?)
    }
}

impl ActuatorArgs {
    fn spec(&self) -> Result<ActuatorSpec, Failure> {
        Ok(actuator_spec(self.kind, self.w, self.l0, self.f)?)
    }

    /// Feasibility-checked model; notes go to stderr.
    fn model(&self, body: VineBody) -> Result<(ActuatorSpec, BendModel), Failure> {
        let spec = self.spec()?;
        let report = validate_spec(&spec);
        if !report.is_feasible() {
            return Err(Failure::Usage(report.to_string()));
        }
        for note in &report.notes {
            eprintln!("note: {note}");
        }
        let model = match (spec, self.alpha) {
            (ActuatorSpec::PouchMotor { .. }, Some(a)) => BendModel::pouch_with_alpha(&spec, body, a)?,
            (ActuatorSpec::Fpam { width }, _) => {
                BendModel::from_spec(&spec, body, Some(fpam_strains(width, self.eps_ps, self.eps0)))?
            }
            _ => BendModel::from_spec(&spec, body, None)?,
        };
        Ok((spec, model))
    }
}

const BEND_UNITS: &str =
    "pressure kPa, bend deg/cm, theta rad (pouch, cPAM) or contraction (fPAM), residual N or m; computed in SI";

#[derive(Serialize)]
struct SolutionRow {
    pressure_kpa: f64,
    bend_deg_per_cm: f64,
    theta_or_eps: f64,
    residual: f64,
    pressure_pa: f64,
    bend_rad_per_m: f64,
    q_rad: Option<f64>,
    warnings: Vec<String>,
}

fn solution_row(pressure_kpa: f64, s: &BendSolution) -> SolutionRow {
    SolutionRow {
        pressure_kpa,
        bend_deg_per_cm: rad_per_m_to_deg_per_cm(s.bend_per_length),
        theta_or_eps: s.deformation.value(),
        residual: s.residuals.max_abs(),
        pressure_pa: s.pressure,
        bend_rad_per_m: s.bend_per_length,
        q_rad: s.q,
        warnings: s.warnings.iter().map(|w| format!("{w:?}")).collect(),
    }
}

fn solution_csv(meta: &Metadata, rows: &[SolutionRow]) -> String {
    let mut s = meta.csv_comment();
    s.push_str("pressure_kpa,bend_deg_per_cm,theta_or_eps,residual\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{:e}", r.pressure_kpa, r.bend_deg_per_cm, r.theta_or_eps, r.residual);
    }
    s
}

fn sweep_pressures(pmin: f64, pmax: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if !(pmin.is_finite() && pmax.is_finite() && step.is_finite()) || pmin < 0.0 || pmax < pmin || step <= 0.0 {
        return Err(Failure::Usage(format!("need 0 <= pmin <= pmax and step > 0 (got {pmin}, {pmax}, {step})")));
    }
    let n = ((pmax - pmin) / step + 1e-9).floor() as usize + 1;
    if n > 1_000_000 {
        return Err(Failure::Usage(format!("{n} sweep points is too many")));
    }
    Ok((0..n).map(|i| pmin + i as f64 * step).collect())
}

fn gnuplot_script(data: &Path, xcol: usize, ycol: usize, xlabel: &str, ylabel: &str, title: &str) -> String {
    format!(
        "set datafile separator ','\nset key autotitle columnhead\nset xlabel '{xlabel}'\nset ylabel '{ylabel}'\n\
         set grid\nplot '{}' using {xcol}:{ycol} with linespoints title '{title}'\n",
        data.display()
    )
}

fn cmd_sweep(a: &SweepArgs) -> Result<(), Failure> {
    let cfg = solver_config()?;
    let body = a.vine.body()?;
    let (spec, model) = a.actuator.model(body)?;
    let kpa = sweep_pressures(a.pmin, a.pmax, a.step)?;
    let pa: Vec<f64> = kpa.iter().map(|&p| kpa_to_pa(p)).collect();
    let sols = model.sweep(&pa, &cfg)?;
    let rows: Vec<SolutionRow> = kpa.iter().zip(&sols).map(|(&p, s)| solution_row(p, s)).collect();
    let meta = Metadata::new("sweep", a, json!({ "display": BEND_UNITS, "actuator": spec.label() }));
    let format = a.out.format.unwrap_or(Format::Csv);
    let text = match format {
        Format::Csv => solution_csv(&meta, &rows),
        Format::Json => json_envelope(&meta, &json!({ "actuator": spec, "rows": rows })),
    };
    write_out(a.out.output.as_deref(), &text)?;
    if let Some(stub) = &a.gnuplot_stub {
        let data = a
            .out
            .output
            .as_deref()
            .filter(|_| format == Format::Csv)
            .ok_or_else(|| Failure::Usage("--gnuplot-stub needs CSV written to --output".into()))?;
        let script = gnuplot_script(data, 1, 2, "pressure (kPa)", "bending per length (deg/cm)", &spec.label());
        write_out(Some(stub), &script)?;
    }
    Ok(())
}

fn cmd_solve(a: &SolveArgs) -> Result<(), Failure> {
    let cfg = solver_config()?;
    let body = a.vine.body()?;
    let (spec, model) = a.actuator.model(body)?;
    if !(a.p.is_finite() && a.p >= 0.0) {
        return Err(Failure::Usage(format!("pressure must be >= 0, got {}", a.p)));
    }
    let sol = model.solve(kpa_to_pa(a.p), &cfg)?;
    let row = solution_row(a.p, &sol);
    let meta = Metadata::new("solve", a, json!({ "display": BEND_UNITS, "actuator": spec.label() }));
    let text = match a.out.format.unwrap_or(Format::Json) {
        Format::Csv => solution_csv(&meta, &[row]),
        Format::Json => {
            json_envelope(&meta, &json!({ "actuator": spec, "solution": row, "deformation": sol.deformation }))
        }
    };
    write_out(a.out.output.as_deref(), &text)
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_config(path: &Path) -> Result<VineConfig, Failure> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_shape(a: &ShapeArgs) -> Result<(), Failure> {
    let cfg = solver_config()?;
    let config = load_config(&a.config)?;
    let vine = config.to_spec()?;
    if a.points_per_segment == 0 {
        return Err(Failure::Usage("--points-per-segment must be positive".into()));
    }
    let pressures: Vec<f64> = a.pressures.iter().map(|&p| kpa_to_pa(p)).collect();
    let pose = shape_from_pressures(&vine, &pressures, &cfg)?;
    let points = pose.polyline(a.points_per_segment);
    let meta = Metadata::new(
        "shape",
        &json!({ "config": config, "pressures_kpa": a.pressures, "points_per_segment": a.points_per_segment }),
        json!({ "display": "positions m, arc length m, base frame +z along the body, azimuth 0 along +x" }),
    );
    let format = a.out.format.unwrap_or(Format::Csv);
    let text = match format {
        Format::Csv => {
            let mut buf = meta.csv_comment().into_bytes();
            write_polyline_csv(&mut buf, &points).map_err(|e| Failure::Data(e.to_string()))?;
            String::from_utf8(buf).map_err(|e| Failure::Data(e.to_string()))?
        }
        Format::Json => {
            let tip = pose.tip();
            json_envelope(
                &meta,
                &json!({
                    "frames": pose.frames,
                    "segments": pose.segments,
                    "tip_m": [tip.position.x, tip.position.y, tip.position.z],
                    "heading_change_deg": pose.heading_change().to_degrees(),
                    "polyline": points,
                }),
            )
        }
    };
    write_out(a.out.output.as_deref(), &text)?;
    if let Some(stub) = &a.gnuplot_stub {
        let data = a
            .out
            .output
            .as_deref()
            .filter(|_| format == Format::Csv)
            .ok_or_else(|| Failure::Usage("--gnuplot-stub needs CSV written to --output".into()))?;
        let script = format!("{}set size ratio -1\n", gnuplot_script(data, 2, 4, "x (m)", "z (m)", "centerline"));
        write_out(Some(stub), &script)?;
    }
    Ok(())
}

fn cmd_fit_error(a: &FitErrorArgs) -> Result<(), Failure> {
    let cfg = solver_config()?;
    let body = a.vine.body()?;
    let (spec, model) = a.actuator.model(body)?;
    let data: BendDataset = dataset::load_bend_csv(&a.data).map_err(|e| match e {
        DataError::Io(io) => Failure::Usage(format!("cannot read {}: {io}", a.data.display())),
        DataError::Parse { line, message } => Failure::Usage(format!("{}: line {line}: {message}", a.data.display())),
        other => other.into(),
    })?;
    let data = data.with_setup(spec, body);
    let threshold = deg_per_cm_to_rad_per_m(a.threshold);
    let report = dataset::model_error_for(&data, &model, &cfg, threshold)?;
    if let Some(path) = &a.residuals {
        let mut s = String::from("pressure_kpa,data_deg_per_cm,model_deg_per_cm,relative_error\n");
        for p in &report.points {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                pa_to_kpa(p.pressure),
                rad_per_m_to_deg_per_cm(p.data),
                rad_per_m_to_deg_per_cm(p.model),
                p.relative
            );
        }
        write_out(Some(path), &s)?;
    }
    let meta = Metadata::new(
        "fit-error",
        a,
        json!({ "display": "e dimensionless, threshold deg/cm", "actuator": spec.label() }),
    );
    let text = match a.out.format.unwrap_or(Format::Csv) {
        Format::Csv => format!(
            "{}e,used,skipped,threshold_deg_per_cm\n{},{},{},{}\n",
            meta.csv_comment(),
            report.e,
            report.used,
            report.skipped,
            a.threshold
        ),
        Format::Json => json_envelope(&meta, &report),
    };
    write_out(a.out.output.as_deref(), &text)
}

fn cmd_calibrate(a: &CalibrateArgs) -> Result<(), Failure> {
    let body = a.vine.body()?;
    let width = mm_to_m(a.w);
    let st = fpam_strains(width, a.eps_ps, a.eps0);
    let cal = fpam_calibrate(width, &body, st.eps_ps, st.eps0)?;
    let max_bend = cal.max_bend_per_length(body.diameter);
    let meta = Metadata::new("calibrate", a, json!({ "display": "r mm, alpha0 rad, Et N/m, bend deg/cm" }));
    let text = match a.out.format.unwrap_or(Format::Csv) {
        Format::Csv => format!(
            "{}w_mm,r_mm,alpha0_rad,a,b,eps_max,eps0,eps_ps,et_n_per_m,max_bend_deg_per_cm\n{},{},{},{},{},{},{},{},{},{}\n",
            meta.csv_comment(),
            a.w,
            m_to_mm(cal.r),
            cal.alpha0,
            cal.a,
            cal.b,
            cal.eps_max,
            cal.eps0,
            cal.eps_ps,
            cal.et,
            rad_per_m_to_deg_per_cm(max_bend)
        ),
        Format::Json => json_envelope(&meta, &json!({ "calibration": cal, "max_bend_rad_per_m": max_bend })),
    };
    write_out(a.out.output.as_deref(), &text)
}

fn cmd_design(a: &DesignArgs) -> Result<(), Failure> {
    let cfg = solver_config()?;
    let body = a.vine.body()?;
    let mut weights = Weights::default();
    for (k, v) in &a.weights {
        match k.as_str() {
            "bending" => weights.bending = *v,
            "eversion" => weights.eversion = *v,
            "speed" => weights.speed = *v,
            _ => weights.force = *v,
        }
    }
    if a.weights.is_empty() {
        weights = Weights { bending: 0.25, eversion: 0.25, speed: 0.25, force: 0.25 };
    }
    let query =
        DesignQuery { body, weights, pressure_budget: kpa_to_pa(a.budget), extra_candidates: a.candidates.clone() };
    let rec = design::recommend(&query, &cfg)?;
    let meta = Metadata::new(
        "design",
        a,
        json!({ "display": "dimensions mm, bend deg/cm at the budget, eversion kPa, scores in [0, 1]" }),
    );
    let text = match a.out.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = meta.csv_comment();
            for n in &rec.notes {
                let _ = writeln!(s, "# note: {n}");
            }
            for x in &rec.excluded {
                let _ = writeln!(s, "# excluded: {}: {}", x.label, x.reason);
            }
            s.push_str("rank,label,kind,w_mm,l0_mm,bend_deg_per_cm,eversion_kpa,score_bending,score_eversion,score_speed,score_force,composite\n");
            for (i, c) in rec.ranked.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    i + 1,
                    c.label,
                    c.spec.kind(),
                    m_to_mm(c.spec.width()),
                    c.spec.length().map(|l| m_to_mm(l).to_string()).unwrap_or_default(),
                    rad_per_m_to_deg_per_cm(c.bend_per_length),
                    pa_to_kpa(c.eversion_pressure),
                    c.scores.bending,
                    c.scores.eversion,
                    c.scores.speed,
                    c.scores.force,
                    c.composite
                );
            }
            for c in rec.ranked.iter().filter(|c| !c.warnings.is_empty()) {
                for w in &c.warnings {
                    eprintln!("warning: {}: {w}", c.label);
                }
            }
            s
        }
        Format::Json => json_envelope(&meta, &rec),
    };
    write_out(a.out.output.as_deref(), &text)
}

fn cmd_eversion(a: &EversionArgs) -> Result<(), Failure> {
    let records: Vec<_> = if a.all {
        dataset::EVERSION_TABLE.to_vec()
    } else {
        let (Some(kind), Some(w)) = (a.kind, a.w) else {
            return Err(Failure::Usage("--kind and --w are required without --all".into()));
        };
        vec![*dataset::eversion_lookup(kind, mm_to_m(w), a.l0.map(mm_to_m))?]
    };
    let meta = Metadata::new("eversion", a, json!({ "display": "pressures kPa; nf = not feasible, nb = no bending" }));
    let text = match a.out.format.unwrap_or(Format::Csv) {
        Format::Csv => format!("{}{}", meta.csv_comment(), dataset::eversion_csv(&records)),
        Format::Json => json_envelope(&meta, &records),
    };
    write_out(a.out.output.as_deref(), &text)
}

fn cmd_validate(a: &ValidateArgs) -> Result<(), Failure> {
    if let Some(path) = &a.config {
        load_config(path)?.to_spec()?;
        println!("feasible");
        return Ok(());
    }
    let (Some(kind), Some(w)) = (a.kind, a.w) else {
        return Err(Failure::Usage("--kind and --w are required".into()));
    };
    let report = validate_spec(&actuator_spec(kind, w, a.l0, a.f)?);
    if !report.is_feasible() {
        return Err(Failure::Usage(report.to_string()));
    }
    println!("{report}");
    for n in &report.notes {
        println!("note: {n}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Shape(a) => cmd_shape(a),
        Command::FitError(a) => cmd_fit_error(a),
        Command::Calibrate(a) => cmd_calibrate(a),
        Command::Design(a) => cmd_design(a),
        Command::Eversion(a) => cmd_eversion(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
