//! Polynomial hip and swing-foot trajectories and their realization as
//! sampled steps.
//!
//! One step is a single-support phase of length `T_s` followed by a
//! double-support phase of length `T - T_s`. During single support the hip
//! and the swing foot follow cubic Hermite pieces whose boundary positions
//! and velocities are set per step; touchdown velocity of the swing foot is
//! zero by construction. During double support both feet stay put, the hip
//! keeps its forward velocity and shifts its weight laterally onto the foot
//! that will carry the next step.

use crate::error::{PtaError, Result};
use crate::hermite::HermiteSegment;
use crate::kinematics::{
    ik_frontal, ik_sagittal, mass_positions, JointAngles, MassState, Planar, Pose, RobotParams, Side, Vec3,
};
use crate::sim::TerrainProfile;

/// Forward offset of the Table-1 robot's centre of mass from its hip during
/// single support; the default hip path is shifted back by this much so the
/// CoM travels symmetrically over the stance foot.
pub const COM_LEAD: f64 = 3.2;

/// Gait tuning shared by every step of a walk. Times in s, lengths in cm.
#[derive(Debug, Clone, PartialEq)]
pub struct GaitParams {
    /// Full step period `T`.
    pub step_period: f64,
    /// Single-support period `T_s`.
    pub single_support: f64,
    /// Junction time `T_1` of the two hip-x pieces.
    pub hip_mid_time: f64,
    /// Swing-foot apex time `T_m`.
    pub apex_time: f64,
    /// Step length `L_s`: distance between successive footholds.
    pub step_length: f64,
    /// Hip height above the ground under the support foot.
    pub hip_height: f64,
    /// Swing apex clearance above the higher of the two footholds.
    pub swing_clearance: f64,
    /// Hip distance ahead of the support sole at the end of single support.
    pub hip_lead: f64,
    pub v_xhs: f64,
    pub v_xhe: f64,
    pub v_zhs: f64,
    pub v_zhe: f64,
    /// Initial hip-x acceleration `a_0`.
    pub a0: f64,
    /// Lateral pelvis offset toward the support foot at the ends of single
    /// support.
    pub y_hs: f64,
    /// Peak lateral offset, reached at `T_2 = T_s / 2`.
    pub y_he: f64,
    pub v_yhs: f64,
    /// Sampling interval.
    pub dt: f64,
}

impl Default for GaitParams {
    fn default() -> Self {
        Self::with_timing(2.0, 10.0)
    }
}

impl GaitParams {
    /// Gait for a given single-support period and step length.
    ///
    /// `T = 1.25 T_s`, `T_1 = T_m = T_s / 2`, and the hip cruises at
    /// `L_s / T` so that with the midpoint junction the hip-x cubic
    /// degenerates to constant velocity on flat ground.
    ///
    /// The lateral sway (`y_hs` = 5, `y_he` = 6.5) is sized for the Table-1
    /// robot: the swing leg stays on its own lane, so the CoM only follows
    /// the pelvis about halfway.
    pub fn with_timing(single_support: f64, step_length: f64) -> Self {
        let step_period = 1.25 * single_support;
        let cruise = step_length / step_period;
        Self {
            step_period,
            single_support,
            hip_mid_time: 0.5 * single_support,
            apex_time: 0.5 * single_support,
            step_length,
            hip_height: 28.0,
            swing_clearance: 2.0,
            hip_lead: 0.5 * cruise * single_support - COM_LEAD,
            v_xhs: cruise,
            v_xhe: cruise,
            v_zhs: 0.0,
            v_zhe: 0.0,
            a0: 0.0,
            y_hs: 5.0,
            y_he: 6.5,
            v_yhs: 0.0,
            dt: 0.005,
        }
    }

    pub fn frontal_half_period(&self) -> f64 {
        0.5 * self.single_support
    }

    pub fn double_support(&self) -> f64 {
        self.step_period - self.single_support
    }

    /// Distance from the hip to the support sole at the start of single
    /// support in a steady walk.
    pub fn hip_trail(&self) -> f64 {
        self.step_length - self.v_xhe * self.double_support() - self.hip_lead
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("step_period", self.step_period),
            ("single_support", self.single_support),
            ("hip_mid_time", self.hip_mid_time),
            ("apex_time", self.apex_time),
            ("step_length", self.step_length),
            ("hip_height", self.hip_height),
            ("swing_clearance", self.swing_clearance),
            ("hip_lead", self.hip_lead),
            ("v_xhs", self.v_xhs),
            ("v_xhe", self.v_xhe),
            ("v_zhs", self.v_zhs),
            ("v_zhe", self.v_zhe),
            ("a0", self.a0),
            ("y_hs", self.y_hs),
            ("y_he", self.y_he),
            ("v_yhs", self.v_yhs),
            ("dt", self.dt),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(PtaError::NonFinite(name));
        }
        let bad = |msg: &str| Err(PtaError::InvalidGait(msg.into()));
        if !(self.hip_mid_time > 0.0 && self.hip_mid_time < self.single_support) {
            return bad("need 0 < T_1 < T_s");
        }
        if !(self.apex_time > 0.0 && self.apex_time < self.single_support) {
            return bad("need 0 < T_m < T_s");
        }
        if self.single_support > self.step_period {
            return bad("need T_s <= T");
        }
        if self.step_length <= 0.0 || self.hip_height <= 0.0 {
            return bad("step length and hip height must be positive");
        }
        if self.swing_clearance <= 0.0 {
            return bad("swing clearance must be positive so the foot leaves the ground");
        }
        if self.dt <= 0.0 {
            return bad("dt must be positive");
        }
        for (name, span) in [("T_s", self.single_support), ("T", self.step_period)] {
            let n = span / self.dt;
            if (n - n.round()).abs() > 1e-6 || n.round() < 2.0 {
                return Err(PtaError::InvalidGait(format!(
                    "{name} = {span} s must be a whole multiple (>= 2) of dt = {} s",
                    self.dt
                )));
            }
        }
        Ok(())
    }

    /// Boundary set of the nominal flat-ground step in the hip-start frame.
    pub fn nominal_step(&self) -> Result<PtaStep> {
        let start = StepStart::initial(self, &RobotParams::default(), &TerrainProfile::flat(), Side::Right);
        PtaStep::plan(self, &start, &TerrainProfile::flat())
    }
}

/// World-frame state at the start of a step's single-support phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStart {
    pub t0: f64,
    pub support: Side,
    pub support_sole: Vec3,
    pub swing_sole: Vec3,
    pub hip: Vec3,
    pub hip_vx: f64,
}

impl StepStart {
    /// Start already in stride, with the support sole at the world origin
    /// and the hip `hip_trail` behind it.
    pub fn initial(gait: &GaitParams, robot: &RobotParams, terrain: &TerrainProfile, support: Side) -> Self {
        Self::in_stride(gait, robot, terrain, support, gait.hip_trail(), gait.v_xhs)
    }

    /// Start with the support sole at the origin, the swing sole one step
    /// length behind and the hip `trail` behind the support sole.
    pub fn in_stride(
        gait: &GaitParams,
        robot: &RobotParams,
        terrain: &TerrainProfile,
        support: Side,
        trail: f64,
        hip_vx: f64,
    ) -> Self {
        let swing_x = -gait.step_length;
        let support_z = terrain.height(0.0);
        Self {
            t0: 0.0,
            support,
            support_sole: Vec3::new(0.0, robot.lane_y(support), support_z),
            swing_sole: Vec3::new(swing_x, robot.lane_y(support.other()), terrain.height(swing_x)),
            hip: Vec3::new(-trail, support.sign() * gait.y_hs, gait.hip_height + support_z),
            hip_vx,
        }
    }
}

/// Boundary conditions of one single-support phase, in a frame whose x
/// origin is the hip at the step start and whose time origin is `kT`.
/// Lateral offsets are measured toward the support foot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtaStep {
    pub single_support: f64,
    pub hip_mid_time: f64,
    pub apex_time: f64,
    pub x_hs: f64,
    pub x_h1: f64,
    pub x_he: f64,
    pub v_xhs: f64,
    pub v_xhe: f64,
    pub a0: f64,
    pub z_hs: f64,
    pub z_he: f64,
    pub v_zhs: f64,
    pub v_zhe: f64,
    pub x_fs: f64,
    pub x_fe: f64,
    pub z_fs: f64,
    /// Absolute apex height of the swing foot.
    pub z_fm: f64,
    pub z_fe: f64,
    pub y_hs: f64,
    pub y_he: f64,
    pub v_yhs: f64,
}

impl PtaStep {
    /// Plans the step that starts from `start`, landing `L_s` ahead of the
    /// support sole at the height `terrain` reports there.
    pub fn plan(gait: &GaitParams, start: &StepStart, terrain: &TerrainProfile) -> Result<Self> {
        gait.validate()?;
        let landing_x = start.support_sole.x + gait.step_length;
        let z_fe = terrain.height(landing_x);
        let z_fs = start.swing_sole.z;
        let x_he = start.support_sole.x + gait.hip_lead - start.hip.x;
        let step = Self {
            single_support: gait.single_support,
            hip_mid_time: gait.hip_mid_time,
            apex_time: gait.apex_time,
            x_hs: 0.0,
            x_h1: 0.5 * x_he,
            x_he,
            v_xhs: start.hip_vx,
            v_xhe: gait.v_xhe,
            a0: gait.a0,
            z_hs: start.hip.z,
            z_he: gait.hip_height + z_fe,
            v_zhs: gait.v_zhs,
            v_zhe: gait.v_zhe,
            x_fs: start.swing_sole.x - start.hip.x,
            x_fe: landing_x - start.hip.x,
            z_fs,
            z_fm: z_fs.max(z_fe) + gait.swing_clearance,
            z_fe,
            y_hs: gait.y_hs,
            y_he: gait.y_he,
            v_yhs: gait.v_yhs,
        };
        step.validate()?;
        Ok(step)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hip_mid_time > 0.0 && self.hip_mid_time < self.single_support) {
            return Err(PtaError::InvalidGait("need 0 < T_1 < T_s".into()));
        }
        if !(self.apex_time > 0.0 && self.apex_time < self.single_support) {
            return Err(PtaError::InvalidGait("need 0 < T_m < T_s".into()));
        }
        if self.z_fm <= self.z_fs.max(self.z_fe) {
            return Err(PtaError::InvalidGait(format!(
                "swing apex {} cm must exceed both footholds ({} and {} cm)",
                self.z_fm, self.z_fs, self.z_fe
            )));
        }
        Ok(())
    }

    pub fn frontal_half_period(&self) -> f64 {
        0.5 * self.single_support
    }

    fn window(&self, tau: f64) -> Result<()> {
        if (0.0..=self.single_support).contains(&tau) {
            Ok(())
        } else {
            Err(PtaError::OutsideWindow {
                t: tau,
                start: 0.0,
                end: self.single_support,
            })
        }
    }

    /// Vertical hip position, a single cubic over the whole phase.
    pub fn hip_z(&self, tau: f64) -> Result<f64> {
        self.window(tau)?;
        let ts = self.single_support;
        let dz = self.z_he - self.z_hs;
        let c2 = (3.0 * dz - 2.0 * self.v_zhs * ts - self.v_zhe * ts) / (ts * ts);
        let c3 = (-2.0 * dz + (self.v_zhs + self.v_zhe) * ts) / (ts * ts * ts);
        Ok(self.z_hs + self.v_zhs * tau + c2 * tau * tau + c3 * tau * tau * tau)
    }

    pub fn hip_z_velocity(&self, tau: f64) -> Result<f64> {
        self.window(tau)?;
        let ts = self.single_support;
        let dz = self.z_he - self.z_hs;
        let c2 = (3.0 * dz - 2.0 * self.v_zhs * ts - self.v_zhe * ts) / (ts * ts);
        let c3 = (-2.0 * dz + (self.v_zhs + self.v_zhe) * ts) / (ts * ts * ts);
        Ok(self.v_zhs + 2.0 * c2 * tau + 3.0 * c3 * tau * tau)
    }

    fn hip_x_first_cubic(&self) -> f64 {
        let t1 = self.hip_mid_time;
        (self.x_h1 - self.x_hs - self.v_xhs * t1 - 0.5 * self.a0 * t1 * t1) / (t1 * t1 * t1)
    }

    /// Hip-x velocity at the junction `T_1`, taken from the first piece so
    /// that the two pieces join with matching slope.
    pub fn v_xh1(&self) -> f64 {
        let t1 = self.hip_mid_time;
        self.v_xhs + self.a0 * t1 + 3.0 * self.hip_x_first_cubic() * t1 * t1
    }

    fn hip_x_second(&self) -> (f64, f64, f64) {
        let d = self.single_support - self.hip_mid_time;
        let v1 = self.v_xh1();
        let c2 = (3.0 * (self.x_he - self.x_h1) - 2.0 * v1 * d - self.v_xhe * d) / (d * d);
        let c3 = (2.0 * (self.x_h1 - self.x_he) + (v1 + self.v_xhe) * d) / (d * d * d);
        (v1, c2, c3)
    }

    /// Forward hip position: a cubic with prescribed initial acceleration up
    /// to `T_1`, then a Hermite piece to the end of single support.
    pub fn hip_x(&self, tau: f64) -> Result<f64> {
        self.window(tau)?;
        let t1 = self.hip_mid_time;
        if tau <= t1 {
            let c3 = self.hip_x_first_cubic();
            Ok(self.x_hs + self.v_xhs * tau + 0.5 * self.a0 * tau * tau + c3 * tau * tau * tau)
        } else {
            let s = tau - t1;
            let (v1, c2, c3) = self.hip_x_second();
            Ok(self.x_h1 + v1 * s + c2 * s * s + c3 * s * s * s)
        }
    }

    pub fn hip_x_velocity(&self, tau: f64) -> Result<f64> {
        self.window(tau)?;
        let t1 = self.hip_mid_time;
        if tau <= t1 {
            let c3 = self.hip_x_first_cubic();
            Ok(self.v_xhs + self.a0 * tau + 3.0 * c3 * tau * tau)
        } else {
            let s = tau - t1;
            let (v1, c2, c3) = self.hip_x_second();
            Ok(v1 + 2.0 * c2 * s + 3.0 * c3 * s * s)
        }
    }

    pub fn swing_x(&self, tau: f64) -> Result<f64> {
        self.window(tau)?;
        let ts = self.single_support;
        let d = self.x_fe - self.x_fs;
        let r = tau / ts;
        Ok(self.x_fs + 3.0 * d * r * r - 2.0 * d * r * r * r)
    }

    pub fn swing_x_velocity(&self, tau: f64) -> Result<f64> {
        self.window(tau)?;
        let ts = self.single_support;
        let d = self.x_fe - self.x_fs;
        let r = tau / ts;
        Ok(6.0 * d * r * (1.0 - r) / ts)
    }

    /// Swing-foot height: rise to the apex at `T_m`, then descend onto the
    /// landing height, with zero vertical velocity at all three knots.
    pub fn swing_z(&self, tau: f64) -> Result<f64> {
        self.window(tau)?;
        let (base, target, r) = self.swing_z_piece(tau);
        let d = target - base;
        Ok(base + 3.0 * d * r * r - 2.0 * d * r * r * r)
    }

    pub fn swing_z_velocity(&self, tau: f64) -> Result<f64> {
        self.window(tau)?;
        let (base, target, r) = self.swing_z_piece(tau);
        let span = if tau <= self.apex_time {
            self.apex_time
        } else {
            self.single_support - self.apex_time
        };
        Ok(6.0 * (target - base) * r * (1.0 - r) / span)
    }

    fn swing_z_piece(&self, tau: f64) -> (f64, f64, f64) {
        let tm = self.apex_time;
        if tau <= tm {
            (self.z_fs, self.z_fm, tau / tm)
        } else {
            (self.z_fm, self.z_fe, (tau - tm) / (self.single_support - tm))
        }
    }

    /// Lateral pelvis offset toward the support foot: out to `y_he` by
    /// `T_2` and back to `y_hs` by `T_s`. The return piece is written in
    /// time since `T_2`.
    pub fn hip_y(&self, tau: f64) -> Result<f64> {
        self.window(tau)?;
        let t2 = self.frontal_half_period();
        if tau <= t2 {
            let dy = self.y_he - self.y_hs;
            let c2 = (3.0 * dy - 2.0 * self.v_yhs * t2) / (t2 * t2);
            let c3 = (-2.0 * dy + self.v_yhs * t2) / (t2 * t2 * t2);
            Ok(self.y_hs + self.v_yhs * tau + c2 * tau * tau + c3 * tau * tau * tau)
        } else {
            let s = tau - t2;
            let d = self.single_support - t2;
            let dy = self.y_hs - self.y_he;
            Ok(self.y_he + 3.0 * dy * s * s / (d * d) - 2.0 * dy * s * s * s / (d * d * d))
        }
    }

    pub fn hip_y_velocity(&self, tau: f64) -> Result<f64> {
        self.window(tau)?;
        let t2 = self.frontal_half_period();
        if tau <= t2 {
            let dy = self.y_he - self.y_hs;
            let c2 = (3.0 * dy - 2.0 * self.v_yhs * t2) / (t2 * t2);
            let c3 = (-2.0 * dy + self.v_yhs * t2) / (t2 * t2 * t2);
            Ok(self.v_yhs + 2.0 * c2 * tau + 3.0 * c3 * tau * tau)
        } else {
            let s = tau - t2;
            let d = self.single_support - t2;
            let dy = self.y_hs - self.y_he;
            Ok(6.0 * dy * s * (d - s) / (d * d * d))
        }
    }
}

/// A planned single-support phase in world coordinates.
pub trait SingleSupportPlan {
    fn duration(&self) -> f64;
    fn hip(&self, tau: f64) -> Result<Vec3>;
    fn hip_velocity(&self, tau: f64) -> Result<Vec3>;
    /// Swing sole position (x, z); its lateral position stays on its lane.
    fn swing_sole(&self, tau: f64) -> Result<Planar>;
}

/// Produces one single-support plan per step from the current state.
pub trait GaitGenerator {
    fn name(&self) -> &'static str;
    fn gait(&self) -> &GaitParams;
    /// `terrain` is what the generator believes the ground looks like.
    fn plan(&self, start: &StepStart, terrain: &TerrainProfile) -> Result<Box<dyn SingleSupportPlan>>;

    /// Steady-state start of a walk for this generator.
    fn initial_start(&self, robot: &RobotParams, terrain: &TerrainProfile, support: Side) -> StepStart {
        StepStart::initial(self.gait(), robot, terrain, support)
    }
}

/// The polynomial generator.
#[derive(Debug, Clone, Default)]
pub struct Pta {
    pub gait: GaitParams,
}

impl Pta {
    pub fn new(gait: GaitParams) -> Self {
        Self { gait }
    }
}

/// A [`PtaStep`] anchored in the world.
#[derive(Debug, Clone, Copy)]
pub struct PtaPlan {
    pub step: PtaStep,
    pub origin_x: f64,
    pub side_sign: f64,
}

impl SingleSupportPlan for PtaPlan {
    fn duration(&self) -> f64 {
        self.step.single_support
    }

    fn hip(&self, tau: f64) -> Result<Vec3> {
        Ok(Vec3::new(
            self.origin_x + self.step.hip_x(tau)?,
            self.side_sign * self.step.hip_y(tau)?,
            self.step.hip_z(tau)?,
        ))
    }

    fn hip_velocity(&self, tau: f64) -> Result<Vec3> {
        Ok(Vec3::new(
            self.step.hip_x_velocity(tau)?,
            self.side_sign * self.step.hip_y_velocity(tau)?,
            self.step.hip_z_velocity(tau)?,
        ))
    }

    fn swing_sole(&self, tau: f64) -> Result<Planar> {
        Ok(Planar::new(self.origin_x + self.step.swing_x(tau)?, self.step.swing_z(tau)?))
    }
}

impl GaitGenerator for Pta {
    fn name(&self) -> &'static str {
        "pta"
    }

    fn gait(&self) -> &GaitParams {
        &self.gait
    }

    fn plan(&self, start: &StepStart, terrain: &TerrainProfile) -> Result<Box<dyn SingleSupportPlan>> {
        Ok(Box::new(PtaPlan {
            step: PtaStep::plan(&self.gait, start, terrain)?,
            origin_x: start.hip.x,
            side_sign: start.support.sign(),
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Single,
    Double,
}

/// One sampled instant of a walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// World time (s).
    pub t: f64,
    pub phase: Phase,
    pub hip: Vec3,
    pub swing_foot: Vec3,
    pub support_foot: Vec3,
    pub angles: JointAngles,
    pub masses: MassState,
}

/// Uniformly sampled step: single support, then double support.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTrajectory {
    pub step_index: usize,
    pub support: Side,
    pub dt: f64,
    pub samples: Vec<Sample>,
    /// Pose at the end of double support, equal to the next step's first
    /// sample. Not part of `samples`.
    pub end: Sample,
}

impl StepTrajectory {
    pub fn single_support_samples(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(|s| s.phase == Phase::Single)
    }

    /// Start state for the step that follows this one.
    pub fn next_start(&self, hip_vx: f64) -> StepStart {
        StepStart {
            t0: self.end.t,
            support: self.support.other(),
            support_sole: self.end.swing_foot,
            swing_sole: self.end.support_foot,
            hip: self.end.hip,
            hip_vx,
        }
    }
}

/// Solves IK and FK for one instant.
pub fn solve_sample(
    t: f64,
    phase: Phase,
    hip: Vec3,
    support_sole: Vec3,
    swing_sole: Vec3,
    support: Side,
    robot: &RobotParams,
) -> Result<Sample> {
    let located = |e: PtaError| match e {
        PtaError::Unreachable { deficit } => PtaError::UnreachableAt { t, deficit },
        other => other,
    };
    let sagittal =
        ik_sagittal(hip.planar(), support_sole.planar(), swing_sole.planar(), robot).map_err(located)?;
    let support_height = hip.z - (support_sole.z + robot.support_foot_link());
    let swing_height = hip.z - (swing_sole.z + robot.swing_foot_link());
    let frontal = ik_frontal(hip.y, support_height, swing_height, robot).map_err(located)?;
    let angles = JointAngles { sagittal, frontal };
    let pose = Pose {
        support_side: support,
        support_sole,
        swing_sole,
        angles,
    };
    Ok(Sample {
        t,
        phase,
        hip,
        swing_foot: swing_sole,
        support_foot: support_sole,
        angles,
        masses: mass_positions(&pose, robot),
    })
}

fn whole_steps(span: f64, dt: f64) -> usize {
    (span / dt).round() as usize
}

/// Samples the single-support phase at `dt`, including both endpoints.
///
/// The endpoints are contact instants and are labelled double support.
pub fn sample_single_support(
    plan: &dyn SingleSupportPlan,
    start: &StepStart,
    robot: &RobotParams,
    dt: f64,
) -> Result<Vec<Sample>> {
    let n = whole_steps(plan.duration(), dt);
    let swing_lane = robot.lane_y(start.support.other());
    (0..=n)
        .map(|i| {
            let tau = if i == n { plan.duration() } else { i as f64 * dt };
            let sole = plan.swing_sole(tau)?;
            // At lift-off both soles are still on the ground.
            let phase = if i == 0 { Phase::Double } else { Phase::Single };
            solve_sample(
                start.t0 + tau,
                phase,
                plan.hip(tau)?,
                start.support_sole,
                Vec3::new(sole.x, swing_lane, sole.z),
                start.support,
                robot,
            )
        })
        .collect()
}

/// Closes a step at the contact sample `last_single` and appends the
/// double-support phase.
///
/// The landing sole is placed at `landing`. During double support the hip
/// moves forward at its velocity at `last_single`, holds its height and
/// shifts laterally along a Hermite piece onto the next support foot.
#[allow(clippy::too_many_arguments)]
pub fn finish_step(
    mut single: Vec<Sample>,
    last_single: usize,
    landing: Vec3,
    hip_velocity: Vec3,
    start: &StepStart,
    gait: &GaitParams,
    robot: &RobotParams,
    step_index: usize,
) -> Result<StepTrajectory> {
    single.truncate(last_single + 1);
    let last = *single.last().ok_or(PtaError::TooFewSamples(0))?;
    let dt = gait.dt;
    let n = whole_steps(gait.double_support(), dt);
    let duration = gait.double_support();
    let next_y = start.support.other().sign() * gait.y_hs;
    let lateral = HermiteSegment::over_duration(last.hip.y, next_y, hip_velocity.y, 0.0, duration)?;

    let hip_at = |j: usize| -> Vec3 {
        let s = if j == n { duration } else { j as f64 * dt };
        Vec3::new(
            last.hip.x + hip_velocity.x * s,
            lateral.eval_unchecked(s / duration),
            last.hip.z,
        )
    };
    let t_at = |j: usize| if j == n { last.t + duration } else { last.t + j as f64 * dt };

    // Both feet touch the ground at the contact sample. It keeps the
    // planned pose so single-support accelerations never see the contact;
    // the foot settles onto `landing` from the next sample on.
    let mut samples = single;
    let last_index = samples.len() - 1;
    samples[last_index].phase = Phase::Double;
    for j in 1..n {
        samples.push(solve_sample(
            t_at(j),
            Phase::Double,
            hip_at(j),
            start.support_sole,
            landing,
            start.support,
            robot,
        )?);
    }
    let end = solve_sample(t_at(n), Phase::Double, hip_at(n), start.support_sole, landing, start.support, robot)?;
    Ok(StepTrajectory {
        step_index,
        support: start.support,
        dt,
        samples,
        end,
    })
}

/// Full nominal step: plans with `terrain`, lands exactly on the plan.
pub fn realize_step(
    generator: &dyn GaitGenerator,
    start: &StepStart,
    robot: &RobotParams,
    terrain: &TerrainProfile,
    step_index: usize,
) -> Result<StepTrajectory> {
    let plan = generator.plan(start, terrain)?;
    let gait = generator.gait();
    let single = sample_single_support(plan.as_ref(), start, robot, gait.dt)?;
    let last = single.len() - 1;
    let landing = single[last].swing_foot;
    let velocity = plan.hip_velocity(plan.duration())?;
    finish_step(single, last, landing, velocity, start, gait, robot, step_index)
}

/// Walks `n_steps` steps with any generator, alternating support sides and
/// landing every step where the plan puts it.
pub fn walk_with(
    generator: &dyn GaitGenerator,
    robot: &RobotParams,
    terrain: &TerrainProfile,
    n_steps: usize,
    first_support: Side,
) -> Result<Vec<StepTrajectory>> {
    robot.validate()?;
    generator.gait().validate()?;
    let mut start = generator.initial_start(robot, terrain, first_support);
    let mut steps = Vec::with_capacity(n_steps);
    for k in 0..n_steps {
        let step = realize_step(generator, &start, robot, terrain, k)?;
        let dt = generator.gait().dt;
        let n = step.samples.len();
        let hip_vx = if n > 0 {
            (step.end.hip.x - step.samples[n - 1].hip.x) / dt
        } else {
            generator.gait().v_xhs
        };
        start = step.next_start(hip_vx);
        steps.push(step);
    }
    Ok(steps)
}

/// PTA walk of `n_steps` steps starting on the right foot.
pub fn generate_walk(
    gait: &GaitParams,
    robot: &RobotParams,
    terrain: &TerrainProfile,
    n_steps: usize,
) -> Result<Vec<StepTrajectory>> {
    walk_with(&Pta::new(gait.clone()), robot, terrain, n_steps, Side::Right)
}

/// Step `k` of a PTA walk whose first step is supported by `first_support`.
pub fn generate_step(
    gait: &GaitParams,
    robot: &RobotParams,
    terrain: &TerrainProfile,
    k: usize,
    first_support: Side,
) -> Result<StepTrajectory> {
    let mut walk = walk_with(&Pta::new(gait.clone()), robot, terrain, k + 1, first_support)?;
    Ok(walk.pop().expect("walk has k + 1 steps"))
}

/// Concatenates a walk into one sample sequence, closing with the final pose.
pub fn concatenate(steps: &[StepTrajectory]) -> Vec<Sample> {
    let mut all: Vec<Sample> = steps.iter().flat_map(|s| s.samples.iter().copied()).collect();
    if let Some(last) = steps.last() {
        all.push(last.end);
    }
    all
}
