//! Calibrated static force and moment models, and the (n, r) design sweep.
//!
//! Two separate models cover the two bench tests that characterize a limb
//! component. A blocked *contact* test presses the inflating array flat
//! against a plate; its force scales with pressure times pouch face area.
//! A cantilever *bending* test loads the tip of a horizontally mounted
//! component; its tip force is limited by the base joint moment, so a single
//! moment calibration predicts blocked forces at any length via τ/L. The two
//! measurements are physically different and deliberately not unified: the
//! array contact datum implies a base moment (~28 N·m) inconsistent with the
//! bending datum (~8.6 N·m).
//!
//! Both models are linear in pressure: the simplest law consistent with the
//! endpoint calibrations this toolkit is gated on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{max_feasible_n, solve_design, ArrayGeometry, DesignConstraints};

/// Standard gravity used throughout (m/s²).
pub const GRAVITY_M_S2: f64 = 9.81;

/// Blocked contact force surrogate F = c_a · P · w_a · h_a (SI units).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactForceModel {
    /// Dimensionless calibration coefficient c_a.
    pub coefficient: f64,
    /// Pressure the model was calibrated at (MPa).
    pub calibration_pressure_mpa: f64,
    /// Array geometry the calibration applies to.
    pub geometry: ArrayGeometry,
}

/// Fits c_a so the model reproduces `force_n` at `pressure_mpa` for the
/// given (feasible) array geometry.
pub fn calibrate_contact(
    force_n: f64,
    pressure_mpa: f64,
    geometry: &ArrayGeometry,
) -> Result<ContactForceModel> {
    if !(force_n > 0.0) {
        return Err(Error::domain("calibration force must be positive"));
    }
    if !(pressure_mpa > 0.0) {
        return Err(Error::domain("calibration pressure must be positive"));
    }
    if !geometry.feasible {
        return Err(Error::domain(
            "contact calibration requires a feasible geometry",
        ));
    }
    let area_m2 = (geometry.active_width_mm / 1000.0) * (geometry.active_height_mm / 1000.0);
    let coefficient = force_n / (pressure_mpa * 1e6 * area_m2);
    Ok(ContactForceModel {
        coefficient,
        calibration_pressure_mpa: pressure_mpa,
        geometry: geometry.clone(),
    })
}

/// Blocked contact force at `pressure_mpa`. The pressure must not exceed the
/// fabric's mean burst strength.
pub fn contact_force(
    model: &ContactForceModel,
    pressure_mpa: f64,
    burst_mean_mpa: f64,
) -> Result<f64> {
    if !(pressure_mpa >= 0.0) {
        return Err(Error::domain("pressure must be non-negative"));
    }
    if pressure_mpa > burst_mean_mpa {
        return Err(Error::domain(format!(
            "pressure {pressure_mpa} MPa exceeds burst strength {burst_mean_mpa} MPa"
        )));
    }
    let area_m2 =
        (model.geometry.active_width_mm / 1000.0) * (model.geometry.active_height_mm / 1000.0);
    Ok(model.coefficient * pressure_mpa * 1e6 * area_m2)
}

/// Cantilever base-moment model: τ(P) = τ_cal · P / P_cal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentModel {
    /// Base moment at the calibration pressure (N·m).
    pub tau_cal_nm: f64,
    /// Calibration pressure (MPa).
    pub calibration_pressure_mpa: f64,
    /// Length of the component the calibration was taken on (m).
    pub length_m: f64,
}

impl MomentModel {
    /// Base moment at `pressure_mpa` (N·m).
    pub fn tau(&self, pressure_mpa: f64) -> f64 {
        self.tau_cal_nm * pressure_mpa / self.calibration_pressure_mpa
    }
}

/// Calibrates the base moment from a blocked tip force measured on a
/// straight cantilever of the given length: τ = F · L.
pub fn calibrate_moment(
    blocked_tip_force_n: f64,
    pressure_mpa: f64,
    length_m: f64,
) -> Result<MomentModel> {
    for (what, v) in [
        ("blocked tip force", blocked_tip_force_n),
        ("pressure", pressure_mpa),
        ("length", length_m),
    ] {
        if !(v > 0.0) {
            return Err(Error::domain(format!("{what} must be positive, got {v}")));
        }
    }
    Ok(MomentModel {
        tau_cal_nm: blocked_tip_force_n * length_m,
        calibration_pressure_mpa: pressure_mpa,
        length_m,
    })
}

/// Tip force of a straight cantilever of length `length_m`, limited by the
/// base joint: τ(P) / L.
pub fn predict_blocked_force(model: &MomentModel, pressure_mpa: f64, length_m: f64) -> Result<f64> {
    if !(pressure_mpa > 0.0) {
        return Err(Error::domain("pressure must be positive"));
    }
    if !(length_m > 0.0) {
        return Err(Error::domain("length must be positive"));
    }
    Ok(model.tau(pressure_mpa) / length_m)
}

/// Largest tip mass a uniformly heavy arm of mass `arm_mass_kg` can hold in
/// the horizontal configuration: max(0, (τ(P) − m_arm·g·L/2) / (g·L)).
pub fn static_payload_estimate(
    model: &MomentModel,
    pressure_mpa: f64,
    length_m: f64,
    arm_mass_kg: f64,
) -> Result<f64> {
    if !(pressure_mpa > 0.0) || !(length_m > 0.0) || !(arm_mass_kg >= 0.0) {
        return Err(Error::domain(
            "payload estimate needs positive pressure and length, non-negative arm mass",
        ));
    }
    let tau = model.tau(pressure_mpa);
    let arm_moment = arm_mass_kg * GRAVITY_M_S2 * length_m / 2.0;
    Ok(((tau - arm_moment) / (GRAVITY_M_S2 * length_m)).max(0.0))
}

/// One evaluated sweep cell. `score` is present only for feasible designs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub geometry: ArrayGeometry,
    pub score: Option<f64>,
}

/// Sweep outcome: rows sorted by score (feasible first, descending), and the
/// winning (n, r) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub best_n: u32,
    pub best_r: f64,
}

/// Trend-encoding design score: n · g(r), with g rising to a peak at
/// r = 2 and declining linearly past it. This is a qualitative surrogate for
/// the observed tip-force trends (more actuators help; wider pouches help
/// until contact slippage sets in past r = 2), not a physics prediction.
pub fn default_scorer(geometry: &ArrayGeometry) -> Result<f64> {
    if !geometry.feasible {
        return Err(Error::domain("score is defined for feasible designs only"));
    }
    let r = geometry.aspect_ratio;
    let g = if r <= 2.0 { r / 2.0 } else { 1.0 - 0.25 * (r - 2.0) };
    Ok(f64::from(geometry.actuator_count) * g)
}

/// Evaluates every (n, r) with n from n_min to the largest manufacturable
/// count and r over `r_grid`. Rows are ordered: feasible rows by score
/// descending (ties to larger n, then smaller r), then infeasible rows by
/// (n, r). Errors if nothing is feasible.
pub fn sweep_designs(
    c: &DesignConstraints,
    r_grid: &[f64],
    scorer: impl Fn(&ArrayGeometry) -> Result<f64>,
) -> Result<SweepResult> {
    if r_grid.is_empty() {
        return Err(Error::domain("ratio grid is empty"));
    }
    if let Some(bad) = r_grid.iter().find(|r| !(**r >= 1.0)) {
        return Err(Error::domain(format!("ratio grid value {bad} is below 1.0")));
    }
    let n_max = max_feasible_n(c)?;
    let n_min = c.min_actuators.max(3);

    let mut rows = Vec::new();
    for n in n_min..=n_max {
        for &r in r_grid {
            let geometry = solve_design(n, r, c)?;
            let score = if geometry.feasible {
                Some(scorer(&geometry)?)
            } else {
                None
            };
            rows.push(SweepRow { geometry, score });
        }
    }

    rows.sort_by(|a, b| match (a.score, b.score) {
        (Some(sa), Some(sb)) => sb
            .partial_cmp(&sa)
            .unwrap()
            .then(b.geometry.actuator_count.cmp(&a.geometry.actuator_count))
            .then(a.geometry.aspect_ratio.partial_cmp(&b.geometry.aspect_ratio).unwrap()),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a
            .geometry
            .actuator_count
            .cmp(&b.geometry.actuator_count)
            .then(a.geometry.aspect_ratio.partial_cmp(&b.geometry.aspect_ratio).unwrap()),
    });

    let best = rows
        .first()
        .filter(|row| row.score.is_some())
        .ok_or_else(|| Error::Infeasible("empty feasible set".to_string()))?;

    Ok(SweepResult {
        best_n: best.geometry.actuator_count,
        best_r: best.geometry.aspect_ratio,
        rows,
    })
}

/// The ratio grid used by the reference sweep: 1.0 to 3.5 in steps of 0.5.
pub fn default_ratio_grid() -> Vec<f64> {
    vec![1.0, 1.5, 2.0, 2.5, 3.0, 3.5]
}
