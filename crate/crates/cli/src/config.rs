//! JSON vine layout. Every dimensional key carries its unit.

use serde::{Deserialize, Serialize};
use vinebend::geometry::FpamStrains;
use vinebend::units::{deg_to_rad, kpa_to_pa, mm_to_m};
use vinebend::{ActuatorKind, ActuatorLine, ActuatorSpec, ModelError, VineBody, VineSpec};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VineConfig {
    pub dvine_mm: f64,
    pub pvine_kpa: f64,
    pub length_mm: f64,
    /// Defaults to the whole body.
    #[serde(default)]
    pub actuated_length_mm: Option<f64>,
    pub lines: Vec<LineConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineConfig {
    pub kind: ActuatorKind,
    pub w_mm: f64,
    #[serde(default)]
    pub l0_mm: Option<f64>,
    /// cPAM fold; defaults to the standard fold for the length.
    #[serde(default)]
    pub f_mm: Option<f64>,
    pub azimuth_deg: f64,
    /// Defaults to as many actuators as fit the actuated length.
    #[serde(default)]
    pub count: Option<usize>,
    /// Defaults to L0.
    #[serde(default)]
    pub pitch_mm: Option<f64>,
    #[serde(default)]
    pub eps_ps: Option<f64>,
    #[serde(default)]
    pub eps0: Option<f64>,
}

pub fn actuator_spec(
    kind: ActuatorKind,
    w_mm: f64,
    l0_mm: Option<f64>,
    f_mm: Option<f64>,
) -> Result<ActuatorSpec, ModelError> {
    let need_l0 = || l0_mm.ok_or_else(|| ModelError::InvalidInput(format!("{kind} needs an L0 length")));
    Ok(match kind {
        ActuatorKind::Fpam => ActuatorSpec::fpam(mm_to_m(w_mm)),
        ActuatorKind::PouchMotor => ActuatorSpec::pouch(mm_to_m(w_mm), mm_to_m(need_l0()?)),
        ActuatorKind::Cpam => {
            let l0 = mm_to_m(need_l0()?);
            match f_mm {
                Some(f) => ActuatorSpec::cpam(mm_to_m(w_mm), l0, mm_to_m(f)),
                None => ActuatorSpec::cpam_standard_fold(mm_to_m(w_mm), l0),
            }
        }
    })
}

pub fn fpam_strains(width: f64, eps_ps: Option<f64>, eps0: Option<f64>) -> FpamStrains {
    let fitted = FpamStrains::for_width(width);
    FpamStrains { eps_ps: eps_ps.unwrap_or(fitted.eps_ps), eps0: eps0.unwrap_or(fitted.eps0) }
}

impl VineConfig {
    pub fn to_spec(&self) -> Result<VineSpec, ModelError> {
        let body = VineBody::new(mm_to_m(self.dvine_mm), kpa_to_pa(self.pvine_kpa))?;
        let length = mm_to_m(self.length_mm);
        let actuated_length = self.actuated_length_mm.map_or(length, mm_to_m);
        let lines = self
            .lines
            .iter()
            .map(|l| {
                let spec = actuator_spec(l.kind, l.w_mm, l.l0_mm, l.f_mm)?;
                let azimuth = deg_to_rad(l.azimuth_deg).rem_euclid(std::f64::consts::TAU);
                let mut line = ActuatorLine::contiguous(spec, azimuth, 1);
                if let Some(p) = l.pitch_mm {
                    line.pitch = mm_to_m(p);
                }
                if spec.kind() != ActuatorKind::Fpam {
                    line.count =
                        l.count.unwrap_or_else(|| ((actuated_length / line.pitch + 1e-9).floor() as usize).max(1));
                } else if l.eps_ps.is_some() || l.eps0.is_some() {
                    line.strains = Some(fpam_strains(spec.width(), l.eps_ps, l.eps0));
                }
                Ok(line)
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        let vine = VineSpec { body, length, actuated_length, lines };
        vine.validate()?;
        Ok(vine)
    }
}
