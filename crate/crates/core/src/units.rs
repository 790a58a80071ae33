//! Conversions between SI and the display units used in files and on the
//! command line (mm, kPa, °/cm).
//!
//! Everything inside the crate is SI. These helpers are only meant for I/O
//! boundaries.

use std::f64::consts::PI;

pub fn mm_to_m(mm: f64) -> f64 {
    mm / 1000.0
}

pub fn m_to_mm(m: f64) -> f64 {
    m * 1000.0
}

pub fn kpa_to_pa(kpa: f64) -> f64 {
    kpa * 1000.0
}

pub fn pa_to_kpa(pa: f64) -> f64 {
    pa / 1000.0
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg.to_radians()
}

/// Bending per length in rad/m to °/cm.
pub fn rad_per_m_to_deg_per_cm(b: f64) -> f64 {
    b * 180.0 / PI / 100.0
}

/// Bending per length in °/cm to rad/m.
pub fn deg_per_cm_to_rad_per_m(b: f64) -> f64 {
    b * 100.0 * PI / 180.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bending_units() {
        // 1 rad/m = 0.5729... °/cm
        assert!((rad_per_m_to_deg_per_cm(1.0) - 0.572_957_795_130_823_2).abs() < 1e-15);
        let b = 2.6;
        assert!((rad_per_m_to_deg_per_cm(deg_per_cm_to_rad_per_m(b)) - b).abs() < 1e-14);
    }
}
