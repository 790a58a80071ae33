//! Rank actuator types and dimensions for a set of priorities.
//!
//! Bending is scored from the model at the pressure budget and eversion from
//! the measured table. Response speed and force output are only known as
//! orderings (fPAM > pouch > cPAM for speed, smaller is faster; cPAM > pouch >
//! fPAM for force, larger is stronger), so they are scored by dense rank.
//! The composite is a plain weighted sum; it is a convention of this tool,
//! not a measured quantity.

use std::cmp::Ordering;

use serde::Serialize;

use crate::dataset::{fabricated_specs, EversionEntry, EVERSION_TABLE};
use crate::error::ModelError;
use crate::geometry::{validate_spec, ActuatorKind, ActuatorSpec, VineBody};
use crate::solver::{BendModel, SolverConfig};
use crate::units::{kpa_to_pa, m_to_mm};

pub const DEFAULT_PRESSURE_BUDGET: f64 = 15_000.0;

pub const COMPOSITE_NOTE: &str = "composite = weighted sum of per-criterion scores (tool convention)";

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Weights {
    pub bending: f64,
    pub eversion: f64,
    pub speed: f64,
    pub force: f64,
}

impl Weights {
    pub fn only_bending() -> Self {
        Self { bending: 1.0, ..Self::default() }
    }

    pub fn only_eversion() -> Self {
        Self { eversion: 1.0, ..Self::default() }
    }

    pub fn only_speed() -> Self {
        Self { speed: 1.0, ..Self::default() }
    }

    pub fn only_force() -> Self {
        Self { force: 1.0, ..Self::default() }
    }

    fn as_array(&self) -> [f64; 4] {
        [self.bending, self.eversion, self.speed, self.force]
    }

    /// Check each weight lies in [0, 1] and rescale them to sum to one.
    pub fn normalized(&self) -> Result<Self, ModelError> {
        let w = self.as_array();
        if w.iter().any(|x| !x.is_finite() || !(0.0..=1.0).contains(x)) {
            return Err(ModelError::InvalidInput(format!("weights must lie in [0, 1], got {w:?}")));
        }
        let sum: f64 = w.iter().sum();
        if sum <= 0.0 {
            return Err(ModelError::InvalidInput("at least one weight must be positive".into()));
        }
        Ok(Self { bending: w[0] / sum, eversion: w[1] / sum, speed: w[2] / sum, force: w[3] / sum })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignQuery {
    pub body: VineBody,
    pub weights: Weights,
    /// Actuator pressure at which bending is compared, Pa.
    pub pressure_budget: f64,
    /// Scored alongside the fabricated dimensions.
    pub extra_candidates: Vec<ActuatorSpec>,
}

impl DesignQuery {
    pub fn new(body: VineBody, weights: Weights) -> Self {
        Self { body, weights, pressure_budget: DEFAULT_PRESSURE_BUDGET, extra_candidates: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scores {
    pub bending: f64,
    pub eversion: f64,
    pub speed: f64,
    pub force: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedCandidate {
    pub spec: ActuatorSpec,
    pub label: String,
    /// Model bending at the pressure budget, rad/m.
    pub bend_per_length: f64,
    /// Deflated-actuator eversion pressure used for scoring, Pa.
    pub eversion_pressure: f64,
    pub scores: Scores,
    pub composite: f64,
    pub rationale: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Excluded {
    pub label: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignRecommendation {
    pub weights: Weights,
    pub pressure_budget: f64,
    pub ranked: Vec<RankedCandidate>,
    pub excluded: Vec<Excluded>,
    pub notes: Vec<String>,
}

impl DesignRecommendation {
    pub fn best(&self) -> Option<&RankedCandidate> {
        self.ranked.first()
    }
}

/// Raw per-candidate inputs to the scoring step.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateInput {
    pub spec: ActuatorSpec,
    pub bend: f64,
    /// Measured dimension standing in for this spec in the table-based criteria.
    pub proxy: ActuatorSpec,
    pub eversion_pressure: f64,
    pub warnings: Vec<String>,
}

fn dims_mm(spec: &ActuatorSpec) -> (f64, f64) {
    (m_to_mm(spec.width()), spec.length().map_or(0.0, m_to_mm))
}

/// Size used for the within-type orderings: area for segments, width for tubes.
fn size(spec: &ActuatorSpec) -> f64 {
    let (w, l) = dims_mm(spec);
    match spec.kind() {
        ActuatorKind::Fpam => w,
        _ => w * l,
    }
}

fn speed_kind_rank(kind: ActuatorKind) -> u8 {
    match kind {
        ActuatorKind::Fpam => 0,
        ActuatorKind::PouchMotor => 1,
        ActuatorKind::Cpam => 2,
    }
}

fn force_kind_rank(kind: ActuatorKind) -> u8 {
    match kind {
        ActuatorKind::Cpam => 0,
        ActuatorKind::PouchMotor => 1,
        ActuatorKind::Fpam => 2,
    }
}

/// Dense-rank scores in [0, 1]; the smallest key scores 1.
fn dense_rank_scores(keys: &[(u8, f64)]) -> Vec<f64> {
    let mut distinct: Vec<(u8, f64)> = keys.to_vec();
    distinct.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    distinct.dedup();
    let top = (distinct.len() - 1).max(1) as f64;
    keys.iter()
        .map(|k| {
            let r = distinct.iter().position(|d| d == k).unwrap_or(0) as f64;
            1.0 - r / top
        })
        .collect()
}

struct Neighbor {
    spec: ActuatorSpec,
    p0: f64,
    exact: bool,
}

/// Nearest measured dimension of the same kind, by Euclidean distance in mm.
fn nearest_measured(spec: &ActuatorSpec) -> Option<Neighbor> {
    let (w, l) = dims_mm(spec);
    EVERSION_TABLE
        .iter()
        .filter(|r| r.kind == spec.kind())
        .filter_map(|r| {
            let (p0, _) = r.entry.pressures()?;
            let lr = r.l0_mm.unwrap_or(0) as f64;
            let d = (r.w_mm as f64 - w).hypot(if spec.kind() == ActuatorKind::Fpam { 0.0 } else { lr - l });
            Some((ActuatorSpec::from_mm(r.kind, r.w_mm as f64, lr), p0, d))
        })
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .map(|(spec, p0, d)| Neighbor { spec, p0, exact: d < 1e-6 })
}

fn tie_break(a: &ActuatorSpec, b: &ActuatorSpec) -> Ordering {
    let (wa, la) = dims_mm(a);
    let (wb, lb) = dims_mm(b);
    a.kind().cmp(&b.kind()).then(wb.total_cmp(&wa)).then(lb.total_cmp(&la))
}

/// Score and order already-evaluated candidates.
pub fn rank(inputs: Vec<CandidateInput>, weights: &Weights) -> Result<Vec<RankedCandidate>, ModelError> {
    let w = weights.normalized()?;
    if inputs.is_empty() {
        return Ok(Vec::new());
    }
    let max_bend = inputs.iter().map(|c| c.bend).fold(0.0, f64::max);
    let min_ev = inputs.iter().map(|c| c.eversion_pressure).fold(f64::INFINITY, f64::min);
    let speed = dense_rank_scores(
        &inputs.iter().map(|c| (speed_kind_rank(c.proxy.kind()), size(&c.proxy))).collect::<Vec<_>>(),
    );
    let force = dense_rank_scores(
        &inputs.iter().map(|c| (force_kind_rank(c.proxy.kind()), -size(&c.proxy))).collect::<Vec<_>>(),
    );

    let mut out: Vec<RankedCandidate> = inputs
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let scores = Scores {
                bending: if max_bend > 0.0 { c.bend / max_bend } else { 0.0 },
                eversion: min_ev / c.eversion_pressure,
                speed: speed[i],
                force: force[i],
            };
            let composite = w.bending * scores.bending
                + w.eversion * scores.eversion
                + w.speed * scores.speed
                + w.force * scores.force;
            let rationale = format!(
                "bending {:.3} rad/m, eversion {:.2} kPa, speed rank {:.2}, force rank {:.2}",
                c.bend,
                c.eversion_pressure / 1000.0,
                scores.speed,
                scores.force
            );
            RankedCandidate {
                label: c.spec.label(),
                spec: c.spec,
                bend_per_length: c.bend,
                eversion_pressure: c.eversion_pressure,
                scores,
                composite,
                rationale,
                warnings: c.warnings,
            }
        })
        .collect();
    out.sort_by(|a, b| b.composite.total_cmp(&a.composite).then_with(|| tie_break(&a.spec, &b.spec)));
    Ok(out)
}

/// Rank the fabricated dimensions plus any extra candidates for `query`.
/// Candidates that are infeasible or fail to solve are listed as excluded.
pub fn recommend(query: &DesignQuery, cfg: &SolverConfig) -> Result<DesignRecommendation, ModelError> {
    let weights = query.weights.normalized()?;
    if !(query.pressure_budget.is_finite() && query.pressure_budget > 0.0) {
        return Err(ModelError::InvalidInput(format!(
            "pressure budget must be positive, got {}",
            query.pressure_budget
        )));
    }
    VineBody::new(query.body.diameter, query.body.pressure)?;

    let mut inputs = Vec::new();
    let mut excluded = Vec::new();
    for spec in fabricated_specs().into_iter().chain(query.extra_candidates.iter().copied()) {
        let label = spec.label();
        let report = validate_spec(&spec);
        if !report.is_feasible() {
            excluded.push(Excluded { label, reason: report.to_string() });
            continue;
        }
        let Some(near) = nearest_measured(&spec) else {
            excluded.push(Excluded { label, reason: "no measured dimension of this kind".into() });
            continue;
        };
        let mut warnings = Vec::new();
        if !near.exact {
            warnings.push(format!(
                "eversion, speed and force scored from nearest measured dimension {}",
                near.spec.label()
            ));
        }
        let bend = BendModel::from_spec(&spec, query.body, None).and_then(|m| m.solve(query.pressure_budget, cfg));
        match bend {
            Ok(sol) => inputs.push(CandidateInput {
                spec,
                bend: sol.bend_per_length,
                proxy: near.spec,
                eversion_pressure: near.p0,
                warnings,
            }),
            Err(e) => excluded.push(Excluded { label, reason: e.to_string() }),
        }
    }
    let ranked = rank(inputs, &weights)?;
    let mut notes = vec![COMPOSITE_NOTE.to_string()];
    let skipped: Vec<String> = EVERSION_TABLE
        .iter()
        .filter(|r| matches!(r.entry, EversionEntry::NoBend))
        .map(|r| ActuatorSpec::from_mm(r.kind, r.w_mm as f64, r.l0_mm.unwrap_or(0) as f64).label())
        .collect();
    notes.push(format!("not candidates (built but did not bend): {}", skipped.join(", ")));
    notes.push(format!(
        "eversion scored from deflated-actuator pressures; bending at {} kPa",
        query.pressure_budget / kpa_to_pa(1.0)
    ));
    Ok(DesignRecommendation { weights, pressure_budget: query.pressure_budget, ranked, excluded, notes })
}
