//! Constant-curvature kinematics of a multi-segment limb.
//!
//! Each active segment is idealized as a circular arc whose curvature and
//! bending plane follow linearly from its three array pressures, saturating
//! at the segment's maximum bend angle. Segments are chained through short
//! rigid connectors. The reachable workspace is estimated by sampling
//! pressure commands and taking hull metrics of the resulting tip cloud.
//!
//! Frames: each segment's local +z is its axial direction; array azimuths
//! live in the local x–y cross-section plane. The default mounting pose
//! turns local +z into world +X (limb horizontal), local +y into world +Z
//! (up). Gravity is ignored here; this module is pure geometry.

use nalgebra::{Matrix3, Rotation3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod hull;

pub use hull::{convex_hull_volume, hull_metrics, WorkspaceReport};

/// Whether inflating an array bends the segment away from that array's face
/// (pouches elongate the inflated side) or toward it. A single switch so the
/// convention can be flipped against bench observations.
pub const BEND_AWAY_FROM_INFLATED_ARRAY: bool = true;

/// One active segment: arc length, bend saturation, pressure limit and the
/// azimuths of its three array normals in the segment cross-section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub arc_length_m: f64,
    pub theta_max_deg: f64,
    pub p_max_mpa: f64,
    pub array_azimuths_deg: [f64; 3],
}

impl Default for SegmentSpec {
    fn default() -> Self {
        Self {
            arc_length_m: 0.16,
            theta_max_deg: 180.0,
            p_max_mpa: 0.345,
            array_azimuths_deg: [90.0, 210.0, 330.0],
        }
    }
}

impl SegmentSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.arc_length_m > 0.0) {
            return Err(Error::validation("segment arc length must be positive"));
        }
        if !(self.theta_max_deg > 0.0 && self.theta_max_deg <= 360.0) {
            return Err(Error::validation("theta_max must be in (0, 360] degrees"));
        }
        if !(self.p_max_mpa > 0.0) {
            return Err(Error::validation("segment p_max must be positive"));
        }
        for (i, a) in self.array_azimuths_deg.iter().enumerate() {
            for b in &self.array_azimuths_deg[i + 1..] {
                if (a - b).abs() < 1e-9 {
                    return Err(Error::validation("array azimuths must be pairwise distinct"));
                }
            }
        }
        Ok(())
    }
}

/// Rigid transform (orthonormal rotation + translation).
#[derive(Debug, Clone, PartialEq)]
pub struct Pose {
    pub rotation: Rotation3<f64>,
    pub translation: Vector3<f64>,
}

impl Pose {
    pub fn identity() -> Self {
        Self {
            rotation: Rotation3::identity(),
            translation: Vector3::zeros(),
        }
    }

    /// `self` then `next`, i.e. `next` expressed in `self`'s frame.
    pub fn compose(&self, next: &Pose) -> Pose {
        Pose {
            rotation: self.rotation * next.rotation,
            translation: self.rotation * next.translation + self.translation,
        }
    }

    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }
}

/// Default mounting pose: limb axis horizontal along world +X, local +y
/// (the 90° azimuth) pointing up along world +Z.
pub fn horizontal_mount() -> Pose {
    let m = Matrix3::new(
        0.0, 0.0, 1.0, //
        1.0, 0.0, 0.0, //
        0.0, 1.0, 0.0,
    );
    Pose {
        rotation: Rotation3::from_matrix_unchecked(m),
        translation: Vector3::zeros(),
    }
}

/// Multi-segment limb description. Connector lengths interleave with the
/// segments (one more connector than segments: base mount, inter-segment
/// gaps, tip mount).
#[derive(Debug, Clone, PartialEq)]
pub struct LimbSpec {
    pub segments: Vec<SegmentSpec>,
    pub connector_lengths_m: Vec<f64>,
    pub total_length_m: f64,
    pub total_mass_kg: f64,
    pub base_frame: Pose,
}

impl Default for LimbSpec {
    fn default() -> Self {
        // 0.59 m limb: three 0.16 m segments, remaining 0.11 m split over
        // four rigid connectors.
        Self {
            segments: vec![SegmentSpec::default(); 3],
            connector_lengths_m: vec![0.0275; 4],
            total_length_m: 0.59,
            total_mass_kg: 1.1,
            base_frame: horizontal_mount(),
        }
    }
}

impl LimbSpec {
    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::validation("limb needs at least one segment"));
        }
        if self.connector_lengths_m.len() != self.segments.len() + 1 {
            return Err(Error::validation(format!(
                "expected {} connector lengths, got {}",
                self.segments.len() + 1,
                self.connector_lengths_m.len()
            )));
        }
        for s in &self.segments {
            s.validate()?;
        }
        if self.connector_lengths_m.iter().any(|l| *l < 0.0) {
            return Err(Error::validation("connector lengths must be non-negative"));
        }
        let sum: f64 = self.segments.iter().map(|s| s.arc_length_m).sum::<f64>()
            + self.connector_lengths_m.iter().sum::<f64>();
        if (sum - self.total_length_m).abs() > 1e-6 {
            return Err(Error::validation(format!(
                "segment and connector lengths sum to {sum} m, declared total is {} m",
                self.total_length_m
            )));
        }
        Ok(())
    }
}

/// Per-segment array pressures (MPa), one triple per segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureCommand {
    pub pressures_mpa: Vec<[f64; 3]>,
}

/// Constant-curvature arc parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcParams {
    /// Curvature (1/m), ≥ 0.
    pub kappa: f64,
    /// Bending-plane azimuth (radians, in the local cross-section).
    pub psi: f64,
    /// Arc length (m).
    pub ell: f64,
}

/// Curvature below which an arc is treated as a straight translation.
pub const STRAIGHT_KAPPA: f64 = 1e-9;

/// Maps a pressure triple to the segment's arc. Each array contributes a
/// bend proportional to its pressure, directed away from (or toward, see
/// [`BEND_AWAY_FROM_INFLATED_ARRAY`]) its azimuth; the resultant is clamped
/// at the segment's maximum bend angle.
pub fn segment_arc(pressures_mpa: &[f64; 3], spec: &SegmentSpec) -> Result<ArcParams> {
    spec.validate()?;
    for (i, p) in pressures_mpa.iter().enumerate() {
        if !(*p >= 0.0 && *p <= spec.p_max_mpa) {
            return Err(Error::domain(format!(
                "array {i} pressure {p} MPa outside [0, {}]",
                spec.p_max_mpa
            )));
        }
    }
    let theta_max = spec.theta_max_deg.to_radians();
    let sign = if BEND_AWAY_FROM_INFLATED_ARRAY { -1.0 } else { 1.0 };
    let mut bx = 0.0;
    let mut by = 0.0;
    for (p, az) in pressures_mpa.iter().zip(&spec.array_azimuths_deg) {
        let w = sign * theta_max * p / spec.p_max_mpa;
        let az = az.to_radians();
        bx += w * az.cos();
        by += w * az.sin();
    }
    let mut angle = bx.hypot(by);
    if angle > theta_max {
        angle = theta_max;
    }
    let psi = if angle > 0.0 { by.atan2(bx) } else { 0.0 };
    Ok(ArcParams {
        kappa: angle / spec.arc_length_m,
        psi,
        ell: spec.arc_length_m,
    })
}

/// Rigid transform across one constant-curvature arc: rotate the bending
/// plane to azimuth ψ, advance along a circle of radius 1/κ by θ = κ·ℓ,
/// rotate back. Near-zero curvature degenerates to an axial translation.
pub fn arc_transform(arc: &ArcParams) -> Pose {
    if arc.kappa < STRAIGHT_KAPPA {
        return Pose {
            rotation: Rotation3::identity(),
            translation: Vector3::new(0.0, 0.0, arc.ell),
        };
    }
    let theta = arc.kappa * arc.ell;
    let radius = 1.0 / arc.kappa;
    let plane = Rotation3::from_axis_angle(&Vector3::z_axis(), arc.psi);
    let bend = Rotation3::from_axis_angle(&Vector3::y_axis(), theta);
    let t_plane = Vector3::new(radius * (1.0 - theta.cos()), 0.0, radius * theta.sin());
    Pose {
        rotation: plane * bend * plane.inverse(),
        translation: plane * t_plane,
    }
}

fn axial_translation(ell: f64) -> Pose {
    Pose {
        rotation: Rotation3::identity(),
        translation: Vector3::new(0.0, 0.0, ell),
    }
}

/// Points per segment arc in the sampled backbone.
pub const BACKBONE_POINTS_PER_SEGMENT: usize = 20;

/// Composes the limb transform for a pressure command. Returns the tip pose
/// and a backbone polyline (world frame) sampled along connectors and arcs.
pub fn forward_kinematics(
    limb: &LimbSpec,
    cmd: &PressureCommand,
) -> Result<(Pose, Vec<Vector3<f64>>)> {
    limb.validate()?;
    if cmd.pressures_mpa.len() != limb.segments.len() {
        return Err(Error::domain(format!(
            "command has {} segment triples, limb has {} segments",
            cmd.pressures_mpa.len(),
            limb.segments.len()
        )));
    }

    let mut pose = limb.base_frame.clone();
    let mut backbone = vec![pose.translation];

    for (i, segment) in limb.segments.iter().enumerate() {
        pose = pose.compose(&axial_translation(limb.connector_lengths_m[i]));
        backbone.push(pose.translation);

        let arc = segment_arc(&cmd.pressures_mpa[i], segment)?;
        for k in 1..=BACKBONE_POINTS_PER_SEGMENT {
            let f = k as f64 / BACKBONE_POINTS_PER_SEGMENT as f64;
            let partial = ArcParams {
                kappa: arc.kappa,
                psi: arc.psi,
                ell: arc.ell * f,
            };
            backbone.push(pose.compose(&arc_transform(&partial)).translation);
        }
        pose = pose.compose(&arc_transform(&arc));
    }

    let last = *limb.connector_lengths_m.last().expect("validated above");
    pose = pose.compose(&axial_translation(last));
    backbone.push(pose.translation);

    Ok((pose, backbone))
}

/// Draws `n_samples` pressure commands uniformly over the per-segment
/// pressure cubes and returns the tip positions. Each sample's generator is
/// keyed by (seed, sample index), so the cloud is reproducible bit-for-bit
/// regardless of evaluation order.
pub fn sample_workspace(limb: &LimbSpec, n_samples: usize, seed: u64) -> Result<Vec<Vector3<f64>>> {
    limb.validate()?;
    if n_samples == 0 {
        return Err(Error::domain("n_samples must be at least 1"));
    }
    let mut points = Vec::with_capacity(n_samples);
    for index in 0..n_samples {
        let cmd = sample_command(limb, seed, index as u64);
        let (tip, _) = forward_kinematics(limb, &cmd)?;
        points.push(tip.translation);
    }
    Ok(points)
}

/// The pressure command for one workspace sample.
pub fn sample_command(limb: &LimbSpec, seed: u64, index: u64) -> PressureCommand {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let pressures = limb
        .segments
        .iter()
        .map(|s| {
            [
                rng.gen_range(0.0..=s.p_max_mpa),
                rng.gen_range(0.0..=s.p_max_mpa),
                rng.gen_range(0.0..=s.p_max_mpa),
            ]
        })
        .collect();
    PressureCommand {
        pressures_mpa: pressures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn limb() -> LimbSpec {
        LimbSpec::default()
    }

    fn zero_cmd(limb: &LimbSpec) -> PressureCommand {
        PressureCommand {
            pressures_mpa: vec![[0.0; 3]; limb.segments.len()],
        }
    }

    #[test]
    fn zero_pressure_is_straight() {
        let arc = segment_arc(&[0.0; 3], &SegmentSpec::default()).unwrap();
        assert_relative_eq!(arc.kappa, 0.0);
    }

    #[test]
    fn single_array_bend() {
        let spec = SegmentSpec::default();
        let arc = segment_arc(&[spec.p_max_mpa, 0.0, 0.0], &spec).unwrap();
        assert_relative_eq!(arc.kappa, PI / 0.16, max_relative = 1e-12);
        assert_relative_eq!(arc.psi, -PI / 2.0, max_relative = 1e-12);
        assert!((arc.kappa - 19.63).abs() < 0.01);
    }

    #[test]
    fn symmetric_pressures_cancel() {
        let spec = SegmentSpec::default();
        let p = spec.p_max_mpa;
        let arc = segment_arc(&[p, p, p], &spec).unwrap();
        assert!(arc.kappa < 1e-12, "kappa = {}", arc.kappa);
    }

    #[test]
    fn out_of_range_pressure_rejected() {
        let spec = SegmentSpec::default();
        assert!(segment_arc(&[-0.1, 0.0, 0.0], &spec).is_err());
        assert!(segment_arc(&[0.4, 0.0, 0.0], &spec).is_err());
    }

    #[test]
    fn straight_arc_translates() {
        let pose = arc_transform(&ArcParams {
            kappa: 0.0,
            psi: 0.0,
            ell: 0.16,
        });
        assert_relative_eq!(pose.translation, Vector3::new(0.0, 0.0, 0.16));
        assert_relative_eq!(pose.rotation.matrix(), Rotation3::identity().matrix());
    }

    #[test]
    fn semicircle_tip() {
        let pose = arc_transform(&ArcParams {
            kappa: PI / 0.16,
            psi: 0.0,
            ell: 0.16,
        });
        let expected = 2.0 * 0.16 / PI;
        assert!((pose.translation - Vector3::new(expected, 0.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn quarter_circle_tip() {
        let pose = arc_transform(&ArcParams {
            kappa: (PI / 2.0) / 0.16,
            psi: 0.0,
            ell: 0.16,
        });
        let r = 0.16 / (PI / 2.0);
        assert!((pose.translation - Vector3::new(r, 0.0, r)).norm() < 1e-6);
    }

    #[test]
    fn zero_pressure_tip_at_full_length() {
        let limb = limb();
        let (tip, backbone) = forward_kinematics(&limb, &zero_cmd(&limb)).unwrap();
        let expected = Vector3::new(0.59, 0.0, 0.0);
        assert!((tip.translation - expected).norm() < 1e-9);
        assert!(backbone.len() >= 3 * BACKBONE_POINTS_PER_SEGMENT);
    }

    #[test]
    fn command_size_mismatch_rejected() {
        let limb = limb();
        let cmd = PressureCommand {
            pressures_mpa: vec![[0.0; 3]; 2],
        };
        assert!(forward_kinematics(&limb, &cmd).is_err());
    }

    #[test]
    fn cyclic_array_permutation_rotates_tip_120_degrees() {
        let limb = limb();
        let cmd = PressureCommand {
            pressures_mpa: vec![
                [0.2, 0.05, 0.11],
                [0.0, 0.3, 0.1],
                [0.33, 0.0, 0.21],
            ],
        };
        let rotated = PressureCommand {
            pressures_mpa: cmd
                .pressures_mpa
                .iter()
                .map(|[a, b, c]| [*c, *a, *b])
                .collect(),
        };
        let (t1, _) = forward_kinematics(&limb, &cmd).unwrap();
        let (t2, _) = forward_kinematics(&limb, &rotated).unwrap();
        let rot = Rotation3::from_axis_angle(&Vector3::x_axis(), 2.0 * PI / 3.0);
        assert!((rot * t1.translation - t2.translation).norm() < 1e-9);
        assert!((t1.translation.norm() - t2.translation.norm()).abs() < 1e-9);
    }

    #[test]
    fn proximal_bend_composes_with_straight_remainder() {
        let limb = limb();
        let p = limb.segments[0].p_max_mpa;
        let cmd = PressureCommand {
            pressures_mpa: vec![[p, 0.0, 0.0], [0.0; 3], [0.0; 3]],
        };
        let (tip, _) = forward_kinematics(&limb, &cmd).unwrap();

        // hand-composed: base, connector, bent arc, then 0.43 m of straight
        let arc = segment_arc(&[p, 0.0, 0.0], &limb.segments[0]).unwrap();
        let remainder = 0.0275 + 0.16 + 0.0275 + 0.16 + 0.0275;
        let expected = horizontal_mount()
            .compose(&axial_translation(0.0275))
            .compose(&arc_transform(&arc))
            .compose(&axial_translation(remainder));
        assert!((tip.translation - expected.translation).norm() < 1e-9);
    }

    #[test]
    fn workspace_sampling_is_deterministic() {
        let limb = limb();
        let a = sample_workspace(&limb, 64, 42).unwrap();
        let b = sample_workspace(&limb, 64, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_workspace(&limb, 64, 43).unwrap();
        assert_ne!(a, c);
        // single sample works
        let single = sample_workspace(&limb, 1, 42).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0], a[0]);
    }

    #[test]
    fn workspace_rejects_zero_samples() {
        assert!(sample_workspace(&limb(), 0, 42).is_err());
    }

    #[test]
    fn sampled_points_respect_reach_bound() {
        let limb = limb();
        let pts = sample_workspace(&limb, 2000, 7).unwrap();
        for p in pts {
            assert!(p.norm() <= limb.total_length_m + 1e-9);
        }
    }

    #[test]
    fn per_index_streams_are_order_independent() {
        let limb = limb();
        let full = sample_workspace(&limb, 16, 9).unwrap();
        // regenerate sample 11 in isolation
        let cmd = sample_command(&limb, 9, 11);
        let (tip, _) = forward_kinematics(&limb, &cmd).unwrap();
        assert_eq!(tip.translation, full[11]);
    }

    proptest! {
        #[test]
        fn bend_never_exceeds_saturation(
            p1 in 0.0f64..0.345, p2 in 0.0f64..0.345, p3 in 0.0f64..0.345,
        ) {
            let spec = SegmentSpec::default();
            let arc = segment_arc(&[p1, p2, p3], &spec).unwrap();
            prop_assert!(arc.kappa * arc.ell <= PI + 1e-12);
        }

        #[test]
        fn tip_within_reach(
            p in proptest::collection::vec(0.0f64..0.345, 9),
        ) {
            let limb = LimbSpec::default();
            let cmd = PressureCommand {
                pressures_mpa: vec![
                    [p[0], p[1], p[2]],
                    [p[3], p[4], p[5]],
                    [p[6], p[7], p[8]],
                ],
            };
            let (tip, _) = forward_kinematics(&limb, &cmd).unwrap();
            prop_assert!(tip.translation.norm() <= 0.59 + 1e-9);
        }
    }
}
