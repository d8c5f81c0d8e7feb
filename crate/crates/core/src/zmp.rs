//! Zero moment point of the seven point masses and the support-region test.
//!
//! With rotational inertia neglected the ZMP of point masses `m_i` at
//! `(x_i, y_i, z_i)` is
//!
//! ```text
//! x_zmp = Σ m_i (z̈_i + g) x_i − Σ m_i ẍ_i z_i
//!         ────────────────────────────────────
//!                 Σ m_i (z̈_i + g)
//! ```
//!
//! and likewise for `y`. Accelerations come from finite differences of the
//! sampled mass positions.

use crate::error::{PtaError, Result};
use crate::kinematics::{MassState, RobotParams, Vec3};
use crate::trajectory::{concatenate, Phase, Sample, StepTrajectory};

/// Denominators below this (kg·cm/s²) are treated as free fall.
const SINGULAR_DENOMINATOR: f64 = 1e-9;

/// Second time derivative of a uniformly sampled series.
///
/// Central differences inside, second-order one-sided differences at the
/// two ends.
pub fn second_derivative(values: &[f64], dt: f64) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 3 {
        return Err(PtaError::TooFewSamples(n));
    }
    let h2 = dt * dt;
    let mut out = Vec::with_capacity(n);
    if n == 3 {
        let a = (values[0] - 2.0 * values[1] + values[2]) / h2;
        return Ok(vec![a; 3]);
    }
    out.push((2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h2);
    for w in values.windows(3) {
        out.push((w[0] - 2.0 * w[1] + w[2]) / h2);
    }
    out.push((2.0 * values[n - 1] - 5.0 * values[n - 2] + 4.0 * values[n - 3] - values[n - 4]) / h2);
    Ok(out)
}

/// Accelerations of every mass at every sample.
pub fn mass_accelerations(samples: &[Sample], dt: f64) -> Result<Vec<[Vec3; 7]>> {
    if samples.len() < 3 {
        return Err(PtaError::TooFewSamples(samples.len()));
    }
    let mut out = vec![[Vec3::default(); 7]; samples.len()];
    for i in 0..7 {
        let series = |f: fn(&Vec3) -> f64| -> Vec<f64> {
            samples.iter().map(|s| f(&s.masses.positions[i])).collect()
        };
        let ax = second_derivative(&series(|p| p.x), dt)?;
        let ay = second_derivative(&series(|p| p.y), dt)?;
        let az = second_derivative(&series(|p| p.z), dt)?;
        for (k, acc) in out.iter_mut().enumerate() {
            acc[i] = Vec3::new(ax[k], ay[k], az[k]);
        }
    }
    Ok(out)
}

/// ZMP `(x, y)` of the masses for given accelerations.
pub fn zmp_at(state: &MassState, accelerations: &[Vec3; 7], robot: &RobotParams) -> Result<(f64, f64)> {
    let g = robot.gravity;
    let mut den = 0.0;
    let mut num_x = 0.0;
    let mut num_y = 0.0;
    for ((p, a), m) in state.positions.iter().zip(accelerations).zip(robot.masses) {
        let vertical = m * (a.z + g);
        den += vertical;
        num_x += vertical * p.x - m * a.x * p.z;
        num_y += vertical * p.y - m * a.y * p.z;
    }
    if !den.is_finite() || den.abs() < SINGULAR_DENOMINATOR {
        return Err(PtaError::SingularZmp(den));
    }
    Ok((num_x / den, num_y / den))
}

/// Axis-aligned region the ZMP must stay strictly inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportRegion {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

/// Outcome of a region test. Margins are signed distances to the four
/// edges, positive inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCheck {
    pub inside: bool,
    /// `[x_min side, x_max side, y_min side, y_max side]`.
    pub margins: [f64; 4],
}

impl RegionCheck {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl SupportRegion {
    pub fn around(center: (f64, f64), half_extents: (f64, f64)) -> Self {
        Self {
            x_min: center.0 - half_extents.0,
            x_max: center.0 + half_extents.0,
            y_min: center.1 - half_extents.1,
            y_max: center.1 + half_extents.1,
        }
    }

    /// Bounding box of two regions.
    pub fn hull(&self, other: &Self) -> Self {
        Self {
            x_min: self.x_min.min(other.x_min),
            x_max: self.x_max.max(other.x_max),
            y_min: self.y_min.min(other.y_min),
            y_max: self.y_max.max(other.y_max),
        }
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))
    }

    pub fn check(&self, zmp: (f64, f64)) -> RegionCheck {
        let margins = [
            zmp.0 - self.x_min,
            self.x_max - zmp.0,
            zmp.1 - self.y_min,
            self.y_max - zmp.1,
        ];
        RegionCheck {
            inside: margins.iter().all(|&m| m > 0.0),
            margins,
        }
    }
}

/// Single-foot test with the default ±5 cm × ±4 cm rectangle.
pub fn in_support_region(zmp: (f64, f64), support_center: (f64, f64)) -> RegionCheck {
    let (hx, hy) = RobotParams::default().support_half_extents();
    let dx = zmp.0 - support_center.0;
    let dy = zmp.1 - support_center.1;
    let margins = [dx + hx, hx - dx, dy + hy, hy - dy];
    RegionCheck {
        inside: margins.iter().all(|&m| m > 0.0),
        margins,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZmpSample {
    pub t: f64,
    pub x_zmp: f64,
    pub y_zmp: f64,
    pub x_s: f64,
    pub y_s: f64,
    pub phase: Phase,
    pub in_region: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZmpTrace {
    pub samples: Vec<ZmpSample>,
}

impl ZmpTrace {
    pub fn violations(&self) -> impl Iterator<Item = &ZmpSample> {
        self.samples.iter().filter(|s| !s.in_region)
    }

    pub fn single_support_violations(&self) -> impl Iterator<Item = &ZmpSample> {
        self.violations().filter(|s| s.phase == Phase::Single)
    }

    pub fn first_single_support_violation(&self) -> Option<&ZmpSample> {
        self.single_support_violations().next()
    }

    /// Smallest single-support margin over the trace.
    pub fn worst_single_support_margin(&self) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.phase == Phase::Single)
            .map(|s| s.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

/// The region that applies at a sample: the stance foot in single support,
/// the bounding box of both feet in double support.
pub fn region_for(sample: &Sample, robot: &RobotParams) -> SupportRegion {
    let half = robot.support_half_extents();
    let stance = SupportRegion::around((sample.support_foot.x, sample.support_foot.y), half);
    match sample.phase {
        Phase::Single => stance,
        Phase::Double => {
            stance.hull(&SupportRegion::around((sample.swing_foot.x, sample.swing_foot.y), half))
        }
    }
}

/// ZMP trace of a uniformly sampled sequence.
pub fn trace(samples: &[Sample], robot: &RobotParams, dt: f64) -> Result<ZmpTrace> {
    let acc = mass_accelerations(samples, dt)?;
    let samples = samples
        .iter()
        .zip(&acc)
        .map(|(s, a)| {
            let (x_zmp, y_zmp) = zmp_at(&s.masses, a, robot)?;
            let region = region_for(s, robot);
            let check = region.check((x_zmp, y_zmp));
            let (x_s, y_s) = region.center();
            Ok(ZmpSample {
                t: s.t,
                x_zmp,
                y_zmp,
                x_s,
                y_s,
                phase: s.phase,
                in_region: check.inside,
                margin: check.min_margin(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ZmpTrace { samples })
}

/// ZMP trace of a whole walk, differentiated across step seams.
pub fn trace_walk(steps: &[StepTrajectory], robot: &RobotParams) -> Result<ZmpTrace> {
    let Some(first) = steps.first() else {
        return Ok(ZmpTrace::default());
    };
    trace(&concatenate(steps), robot, first.dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::Side;
    use crate::sim::TerrainProfile;
    use crate::trajectory::{generate_walk, solve_sample, GaitParams};
    use proptest::prelude::*;

    fn robot() -> RobotParams {
        RobotParams::default()
    }

    #[test]
    fn differences_on_polynomials() {
        let dt = 0.005;
        let ramp: Vec<f64> = (0..50).map(|i| 3.0 + 2.0 * i as f64 * dt).collect();
        assert!(second_derivative(&ramp, dt).unwrap().iter().all(|a| a.abs() < 1e-6));
        let quad: Vec<f64> = (0..50).map(|i| 0.5 * 7.0 * (i as f64 * dt).powi(2)).collect();
        assert!(second_derivative(&quad, dt).unwrap().iter().all(|a| (a - 7.0).abs() < 1e-6));
        assert_eq!(second_derivative(&[1.0, 2.0], dt), Err(PtaError::TooFewSamples(2)));
    }

    #[test]
    fn differences_on_hip_height_cubic() {
        let mut step = GaitParams::default().nominal_step().unwrap();
        step.z_hs = 30.0;
        step.z_he = 30.5;
        let dt = 0.005;
        let n = 400;
        let z: Vec<f64> = (0..=n).map(|i| step.hip_z(i as f64 * dt).unwrap()).collect();
        let acc = second_derivative(&z, dt).unwrap();
        // z = 30 + 0.375 t² − 0.125 t³ for T_s = 2.
        for (i, a) in acc.iter().enumerate() {
            let t = i as f64 * dt;
            assert!((a - (0.75 - 0.75 * t)).abs() < 1e-3, "t = {t}");
        }
    }

    fn still(positions: [Vec3; 7]) -> MassState {
        MassState { positions }
    }

    #[test]
    fn static_zmp_is_com_projection() {
        let mut positions = [Vec3::default(); 7];
        for (i, p) in positions.iter_mut().enumerate() {
            *p = Vec3::new(i as f64 * 1.5 - 3.0, 0.3 * i as f64, 5.0 + i as f64);
        }
        let state = still(positions);
        let com = state.center_of_mass(&robot());
        let (x, y) = zmp_at(&state, &[Vec3::default(); 7], &robot()).unwrap();
        assert!((x - com.x).abs() < 1e-12 && (y - com.y).abs() < 1e-12);
    }

    #[test]
    fn single_and_two_mass_cases() {
        let mut r = robot();
        r.masses = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
        let mut positions = [Vec3::default(); 7];
        positions[3] = Vec3::new(2.0, 0.0, 20.0);
        assert_eq!(zmp_at(&still(positions), &[Vec3::default(); 7], &r).unwrap().0, 2.0);

        // Masses 1 kg at (0, 0, 10) at rest and 2 kg at (4, 0, 20) with
        // ẍ = 100, z̈ = 19: x = (2·1000·4 − 2·100·20) / (981 + 2000) = 4000 / 2981.
        r.masses = [1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        positions[0] = Vec3::new(0.0, 0.0, 10.0);
        positions[1] = Vec3::new(4.0, 0.0, 20.0);
        let mut acc = [Vec3::default(); 7];
        acc[1] = Vec3::new(100.0, 0.0, 19.0);
        let (x, _) = zmp_at(&still(positions), &acc, &r).unwrap();
        assert!((x - 4000.0 / 2981.0).abs() < 1e-12);
    }

    #[test]
    fn free_fall_is_singular() {
        let acc = [Vec3::new(0.0, 0.0, -981.0); 7];
        assert!(matches!(
            zmp_at(&still([Vec3::default(); 7]), &acc, &robot()),
            Err(PtaError::SingularZmp(_))
        ));
    }

    #[test]
    fn region_examples() {
        let c = in_support_region((1.0, 2.0), (1.0, 2.0));
        assert!(c.inside);
        assert_eq!(c.margins, [5.0, 5.0, 4.0, 4.0]);
        assert!(!in_support_region((5.0, 0.0), (0.0, 0.0)).inside);
        assert!(!in_support_region((0.0, -4.0), (0.0, 0.0)).inside);
        assert!(in_support_region((4.9, -3.9), (0.0, 0.0)).inside);
        let hull = SupportRegion::around((0.0, -5.0), (5.0, 4.0)).hull(&SupportRegion::around((10.0, 5.0), (5.0, 4.0)));
        assert_eq!(hull, SupportRegion { x_min: -5.0, x_max: 15.0, y_min: -9.0, y_max: 9.0 });
    }

    #[test]
    fn held_pose_traces_to_com() {
        let r = robot();
        let hip = Vec3::new(1.0, -7.0, 28.0);
        let support = Vec3::new(0.0, r.lane_y(Side::Right), 0.0);
        let swing = Vec3::new(3.0, r.lane_y(Side::Left), 1.0);
        let s = solve_sample(0.0, Phase::Single, hip, support, swing, Side::Right, &r).unwrap();
        let samples: Vec<Sample> = (0..5).map(|i| Sample { t: i as f64 * 0.005, ..s }).collect();
        let tr = trace(&samples, &r, 0.005).unwrap();
        let com = s.masses.center_of_mass(&r);
        for z in &tr.samples {
            assert!((z.x_zmp - com.x).abs() < 1e-9 && (z.y_zmp - com.y).abs() < 1e-9);
            assert!(z.in_region);
        }
    }

    #[test]
    fn default_flat_walk_stays_inside() {
        let r = robot();
        let walk = generate_walk(&GaitParams::default(), &r, &TerrainProfile::flat(), 4).unwrap();
        let tr = trace_walk(&walk, &r).unwrap();
        assert_eq!(tr.violations().count(), 0, "worst margin {}", tr.worst_single_support_margin());
        for w in tr.samples.windows(2) {
            assert!(w[1].t > w[0].t);
        }
    }

    proptest! {
        #[test]
        fn translation_equivariant(dx in -50.0..50.0f64, seed in 0u64..1000) {
            let mut positions = [Vec3::default(); 7];
            let mut acc = [Vec3::default(); 7];
            for i in 0..7 {
                let k = (seed as f64 + i as f64) * 0.37;
                positions[i] = Vec3::new(k.sin() * 10.0, k.cos() * 5.0, 5.0 + 3.0 * i as f64);
                acc[i] = Vec3::new((2.0 * k).cos() * 50.0, k.sin() * 30.0, (3.0 * k).sin() * 40.0);
            }
            let base = zmp_at(&still(positions), &acc, &robot()).unwrap();
            let shifted: [Vec3; 7] = positions.map(|p| p + Vec3::new(dx, 0.0, 0.0));
            let moved = zmp_at(&still(shifted), &acc, &robot()).unwrap();
            prop_assert!((moved.0 - base.0 - dx).abs() < 1e-9);
            prop_assert!((moved.1 - base.1).abs() < 1e-12);
        }
    }
}
