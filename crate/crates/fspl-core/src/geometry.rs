//! Actuator-array geometry solver.
//!
//! An array of `n` inflatable pouches of active width `w_a` and height `h_a`
//! is sewn along a strip of active length `a_l`. The pouch dimensions follow
//! from the actuator count, the target full-inflation bend angle and the
//! cross-section of the limb the arrays must fit into:
//!
//! ```text
//! w_a = r · h_a                                   (aspect ratio r ≥ 1)
//! s_p = (a_l − 2 · a_l / n) / n                   (spacing between pouches)
//! h_a = s_p · π / (2 · (1 − sin(θ_n / 2n)))       (θ_n in degrees)
//! w_a ≤ R_c / (√3/6 + 1/r) − 2·s_l − f_l          (width ceiling)
//! ```
//!
//! All lengths are in millimetres; SI conversions happen at module
//! boundaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constraint set for the array design. Defaults are the prototype
/// limb's values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignConstraints {
    /// Circumradius of the limb cross-section, R_c (mm).
    pub circumradius_mm: f64,
    /// Heat-seam width, s_l (mm).
    pub seam_width_mm: f64,
    /// Pneumatic fitting diameter, f_l (mm).
    pub fitting_diameter_mm: f64,
    /// Active array length, a_l (mm).
    pub active_length_mm: f64,
    /// Target full-inflation array angle, θ_n (degrees).
    pub full_inflation_angle_deg: f64,
    /// Minimum pouch spacing from sewing limits, s_p min (mm).
    pub min_spacing_mm: f64,
    /// Minimum actuator count for useful tip force.
    pub min_actuators: u32,
    /// Maximum working pressure (MPa).
    pub max_pressure_mpa: f64,
}

impl Default for DesignConstraints {
    fn default() -> Self {
        Self {
            circumradius_mm: 50.0,
            seam_width_mm: 5.0,
            fitting_diameter_mm: 6.23,
            active_length_mm: 160.0,
            full_inflation_angle_deg: 180.0,
            min_spacing_mm: 7.5,
            min_actuators: 8,
            max_pressure_mpa: 0.345,
        }
    }
}

impl DesignConstraints {
    pub fn validate(&self) -> Result<()> {
        let lengths = [
            ("r_c_mm", self.circumradius_mm),
            ("s_l_mm", self.seam_width_mm),
            ("f_l_mm", self.fitting_diameter_mm),
            ("a_l_mm", self.active_length_mm),
            ("s_p_min_mm", self.min_spacing_mm),
        ];
        for (key, v) in lengths {
            if !(v > 0.0) {
                return Err(Error::validation(format!("{key} must be positive, got {v}")));
            }
        }
        if !(self.full_inflation_angle_deg > 0.0 && self.full_inflation_angle_deg <= 360.0) {
            return Err(Error::validation(format!(
                "theta_n_deg must be in (0, 360], got {}",
                self.full_inflation_angle_deg
            )));
        }
        if self.min_actuators < 1 {
            return Err(Error::validation("n_min must be at least 1"));
        }
        if !(self.max_pressure_mpa > 0.0) {
            return Err(Error::validation("p_max_mpa must be positive"));
        }
        Ok(())
    }
}

/// A solved array design with its feasibility verdict. `active_width_mm` is
/// always `r · h_a`; when it exceeds the ceiling the design is flagged, not
/// clamped, so sweeps see true feasibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    /// Actuator count n.
    pub actuator_count: u32,
    /// Width/height ratio r.
    pub aspect_ratio: f64,
    /// Pouch spacing s_p (mm).
    pub spacing_mm: f64,
    /// Active pouch height h_a (mm).
    pub active_height_mm: f64,
    /// Active pouch width w_a = r·h_a (mm).
    pub active_width_mm: f64,
    /// Largest admissible width for this ratio (mm).
    pub width_ceiling_mm: f64,
    /// Inradius of the triangular cross-section implied by the pouch face (mm).
    pub inradius_mm: f64,
    /// Full-inflation array angle the design was solved for (degrees).
    pub full_inflation_angle_deg: f64,
    pub feasible: bool,
    /// First failed constraint, when infeasible.
    pub violation: Option<String>,
}

/// Pouch spacing s_p = (a_l − 2·(a_l/n)) / n. Needs n ≥ 3 to be positive.
pub fn spacing(n: u32, active_length_mm: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain(format!(
            "spacing undefined for n = {n} (need n ≥ 3)"
        )));
    }
    let a = active_length_mm;
    let n = f64::from(n);
    Ok((a - 2.0 * (a / n)) / n)
}

/// Active height h_a = s_p·π / (2·(1 − sin(θ_n/(2n)))), θ_n in degrees.
pub fn active_height(n: u32, theta_n_deg: f64, active_length_mm: f64) -> Result<f64> {
    if !(theta_n_deg > 0.0) {
        return Err(Error::domain("theta_n must be positive"));
    }
    let s_p = spacing(n, active_length_mm)?;
    let half_angle_deg = theta_n_deg / (2.0 * f64::from(n));
    if half_angle_deg >= 90.0 {
        return Err(Error::domain(format!(
            "denominator nonpositive: θ_n/(2n) = {half_angle_deg}° ≥ 90°"
        )));
    }
    let denom = 2.0 * (1.0 - half_angle_deg.to_radians().sin());
    Ok(s_p * std::f64::consts::PI / denom)
}

/// Largest admissible active width for ratio `r`:
/// R_c/(√3/6 + 1/r) − 2·s_l − f_l. May be ≤ 0 for tight constraint sets;
/// callers flag that as infeasible rather than erroring.
pub fn width_ceiling(r: f64, circumradius_mm: f64, seam_width_mm: f64, fitting_diameter_mm: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain("aspect ratio must be positive"));
    }
    let inv = 3.0_f64.sqrt() / 6.0 + 1.0 / r;
    Ok(circumradius_mm / inv - 2.0 * seam_width_mm - fitting_diameter_mm)
}

/// Solves the full design for `(n, r)` and records which constraint, if any,
/// fails first (spacing, then width ceiling, then minimum count).
pub fn solve_design(n: u32, r: f64, c: &DesignConstraints) -> Result<ArrayGeometry> {
    c.validate()?;
    if !(r >= 1.0) {
        return Err(Error::domain(format!("aspect ratio must be ≥ 1.0, got {r}")));
    }
    let s_p = spacing(n, c.active_length_mm)?;
    let h_a = active_height(n, c.full_inflation_angle_deg, c.active_length_mm)?;
    let w_a = r * h_a;
    let ceiling = width_ceiling(r, c.circumradius_mm, c.seam_width_mm, c.fitting_diameter_mm)?;
    let inradius = 3.0_f64.sqrt() / 6.0 * (w_a + 2.0 * c.seam_width_mm + c.fitting_diameter_mm);

    let violation = if s_p < c.min_spacing_mm {
        Some("s_p < s_p_min".to_string())
    } else if w_a > ceiling {
        Some("w_a > w_a_ceiling".to_string())
    } else if n < c.min_actuators {
        Some("n < n_min".to_string())
    } else {
        None
    };

    Ok(ArrayGeometry {
        actuator_count: n,
        aspect_ratio: r,
        spacing_mm: s_p,
        active_height_mm: h_a,
        active_width_mm: w_a,
        width_ceiling_mm: ceiling,
        inradius_mm: inradius,
        full_inflation_angle_deg: c.full_inflation_angle_deg,
        feasible: violation.is_none(),
        violation,
    })
}

/// Largest n with spacing(n) ≥ s_p_min, found by exact integer scan from
/// max(3, n_min) upward. Spacing is strictly decreasing in n, so the first
/// n that drops below the bound ends the scan.
pub fn max_feasible_n(c: &DesignConstraints) -> Result<u32> {
    c.validate()?;
    let start = c.min_actuators.max(3);
    if spacing(start, c.active_length_mm)? < c.min_spacing_mm {
        return Err(Error::Infeasible(format!(
            "constraint set infeasible: spacing({start}) = {:.4} mm < {} mm",
            spacing(start, c.active_length_mm)?,
            c.min_spacing_mm
        )));
    }
    let mut n = start;
    loop {
        let next = n + 1;
        if spacing(next, c.active_length_mm)? < c.min_spacing_mm {
            return Ok(n);
        }
        n = next;
    }
}
