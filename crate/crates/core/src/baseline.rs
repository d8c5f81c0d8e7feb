//! Linear inverted pendulum gait used as the comparison opponent.
//!
//! The centre of mass rides at a constant height `z_c` over the stance
//! sole and follows `x(t) = x0 cosh(t/Tc) + Tc v0 sinh(t/Tc)` with
//! `Tc = sqrt(z_c / g)`. The swing foot moves at constant forward speed
//! under a parabolic arc, so it reaches the ground with a nonzero velocity.
//! The lateral sway is the same as the polynomial generator's.

use crate::error::{PtaError, Result};
use crate::kinematics::{Planar, RobotParams, Side, Vec3};
use crate::sim::TerrainProfile;
use crate::trajectory::{
    walk_with, GaitGenerator, GaitParams, PtaStep, SingleSupportPlan, StepStart, StepTrajectory, COM_LEAD,
};

#[derive(Debug, Clone, PartialEq)]
pub struct LipmParams {
    /// Timing, step length, swing clearance and lateral sway.
    pub gait: GaitParams,
    /// Pendulum height (cm).
    pub z_c: f64,
    pub gravity: f64,
}

impl Default for LipmParams {
    fn default() -> Self {
        Self::from_gait(GaitParams::default())
    }
}

impl LipmParams {
    pub fn from_gait(gait: GaitParams) -> Self {
        let z_c = gait.hip_height;
        Self {
            gait,
            z_c,
            gravity: RobotParams::default().gravity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.gait.validate()?;
        if !(self.z_c > 0.0 && self.z_c.is_finite()) {
            return Err(PtaError::InvalidGait(format!("pendulum height must be positive, got {}", self.z_c)));
        }
        if !(self.gravity > 0.0 && self.gravity.is_finite()) {
            return Err(PtaError::InvalidGait("gravity must be positive".into()));
        }
        Ok(())
    }

    pub fn time_constant(&self) -> f64 {
        (self.z_c / self.gravity).sqrt()
    }

    /// Half-width `d` of the steady orbit, which runs from `-d` to `d`
    /// around the stance sole during single support.
    ///
    /// Single support covers `2d`; double support continues at the orbit's
    /// boundary speed `v0 = d coth(T_s / 2Tc) / Tc`; together they make one
    /// step length.
    pub fn orbit_half_width(&self) -> f64 {
        let tc = self.time_constant();
        let coth = 1.0 / (0.5 * self.gait.single_support / tc).tanh();
        self.gait.step_length / (2.0 + coth * self.gait.double_support() / tc)
    }

    pub fn orbit_speed(&self) -> f64 {
        let tc = self.time_constant();
        let coth = 1.0 / (0.5 * self.gait.single_support / tc).tanh();
        self.orbit_half_width() * coth / tc
    }

    fn window(&self, t: f64) -> Result<()> {
        if (0.0..=self.gait.single_support).contains(&t) {
            Ok(())
        } else {
            Err(PtaError::OutsideWindow {
                t,
                start: 0.0,
                end: self.gait.single_support,
            })
        }
    }
}

/// Pendulum position relative to the pivot from its initial state.
pub fn lipm_hip_x(t: f64, params: &LipmParams, x0: f64, v0: f64) -> Result<f64> {
    params.window(t)?;
    let tc = params.time_constant();
    Ok(x0 * (t / tc).cosh() + tc * v0 * (t / tc).sinh())
}

/// Swing sole on a straight line in x and a parabola in z whose midpoint
/// sits `clearance` above the higher foothold.
pub fn lipm_swing_foot(t: f64, params: &LipmParams, from: Planar, to: Planar) -> Result<Planar> {
    params.window(t)?;
    let s = t / params.gait.single_support;
    let (base, bump) = arc(params, from, to);
    Ok(Planar::new(
        from.x + (to.x - from.x) * s,
        base + (to.z - from.z) * s + 4.0 * bump * s * (1.0 - s),
    ))
}

fn arc(params: &LipmParams, from: Planar, to: Planar) -> (f64, f64) {
    let bump = from.z.max(to.z) + params.gait.swing_clearance - 0.5 * (from.z + to.z);
    (from.z, bump)
}

/// `sinh(a) / sinh(b)` for `0 <= a <= b`, `b > 0`, without overflow.
fn sinh_ratio(a: f64, b: f64) -> f64 {
    (a - b).exp() * (-(-2.0 * a).exp_m1()) / (-(-2.0 * b).exp_m1())
}

/// `cosh(a) / sinh(b)` for `0 <= a <= b`, `b > 0`, without overflow.
fn cosh_sinh_ratio(a: f64, b: f64) -> f64 {
    (a - b).exp() * (1.0 + (-2.0 * a).exp()) / (-(-2.0 * b).exp_m1())
}

/// One single-support phase of the pendulum gait.
///
/// The pendulum state is taken from where the hip actually is, and the
/// orbit is the one that reaches `d` ahead of the pivot at the end of
/// single support. The hip trails the pendulum by [`COM_LEAD`].
#[derive(Debug, Clone, Copy)]
pub struct LipmPlan {
    pub pivot_x: f64,
    pub x0: f64,
    pub x_end: f64,
    pub tc: f64,
    pub single_support: f64,
    pub hip_z: f64,
    pub swing_from: Planar,
    pub swing_to: Planar,
    pub bump: f64,
    pub frontal: PtaStep,
    pub side_sign: f64,
}

impl LipmPlan {
    pub fn new(params: &LipmParams, start: &StepStart, terrain: &TerrainProfile) -> Result<Self> {
        params.validate()?;
        let landing_x = start.support_sole.x + params.gait.step_length;
        let swing_from = start.swing_sole.planar();
        let swing_to = Planar::new(landing_x, terrain.height(landing_x));
        let (_, bump) = arc(params, swing_from, swing_to);
        Ok(Self {
            pivot_x: start.support_sole.x,
            x0: start.hip.x + COM_LEAD - start.support_sole.x,
            x_end: params.orbit_half_width(),
            tc: params.time_constant(),
            single_support: params.gait.single_support,
            hip_z: start.hip.z,
            swing_from,
            swing_to,
            bump,
            frontal: PtaStep::plan(&params.gait, start, terrain)?,
            side_sign: start.support.sign(),
        })
    }

    /// Initial pendulum velocity of this orbit.
    pub fn v0(&self) -> f64 {
        let b = self.single_support / self.tc;
        (self.x_end - self.x0 * b.cosh()) / (self.tc * b.sinh())
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

    /// Pendulum position relative to the pivot, in two-point form.
    pub fn pendulum_x(&self, tau: f64) -> Result<f64> {
        self.window(tau)?;
        let b = self.single_support / self.tc;
        let a = tau / self.tc;
        Ok(self.x0 * sinh_ratio(b - a, b) + self.x_end * sinh_ratio(a, b))
    }

    pub fn pendulum_velocity(&self, tau: f64) -> Result<f64> {
        self.window(tau)?;
        let b = self.single_support / self.tc;
        let a = tau / self.tc;
        Ok((self.x_end * cosh_sinh_ratio(a, b) - self.x0 * cosh_sinh_ratio(b - a, b)) / self.tc)
    }
}

impl SingleSupportPlan for LipmPlan {
    fn duration(&self) -> f64 {
        self.single_support
    }

    fn hip(&self, tau: f64) -> Result<Vec3> {
        Ok(Vec3::new(
            self.pivot_x + self.pendulum_x(tau)? - COM_LEAD,
            self.side_sign * self.frontal.hip_y(tau)?,
            self.hip_z,
        ))
    }

    fn hip_velocity(&self, tau: f64) -> Result<Vec3> {
        Ok(Vec3::new(
            self.pendulum_velocity(tau)?,
            self.side_sign * self.frontal.hip_y_velocity(tau)?,
            0.0,
        ))
    }

    fn swing_sole(&self, tau: f64) -> Result<Planar> {
        self.window(tau)?;
        let s = tau / self.single_support;
        let (from, to) = (self.swing_from, self.swing_to);
        Ok(Planar::new(
            from.x + (to.x - from.x) * s,
            from.z + (to.z - from.z) * s + 4.0 * self.bump * s * (1.0 - s),
        ))
    }
}

/// The pendulum generator.
#[derive(Debug, Clone, Default)]
pub struct Lipm {
    pub params: LipmParams,
}

impl Lipm {
    pub fn new(params: LipmParams) -> Self {
        Self { params }
    }
}

impl GaitGenerator for Lipm {
    fn name(&self) -> &'static str {
        "lipm"
    }

    fn gait(&self) -> &GaitParams {
        &self.params.gait
    }

    fn plan(&self, start: &StepStart, terrain: &TerrainProfile) -> Result<Box<dyn SingleSupportPlan>> {
        Ok(Box::new(LipmPlan::new(&self.params, start, terrain)?))
    }

    fn initial_start(&self, robot: &RobotParams, terrain: &TerrainProfile, support: Side) -> StepStart {
        let trail = self.params.orbit_half_width() + COM_LEAD;
        StepStart::in_stride(&self.params.gait, robot, terrain, support, trail, self.params.orbit_speed())
    }
}

/// Pendulum walk of `n_steps` steps starting on the right foot.
pub fn generate_lipm_walk(
    params: &LipmParams,
    robot: &RobotParams,
    terrain: &TerrainProfile,
    n_steps: usize,
) -> Result<Vec<StepTrajectory>> {
    walk_with(&Lipm::new(params.clone()), robot, terrain, n_steps, Side::Right)
}

/// Step `k` of a pendulum walk.
pub fn generate_lipm_step(
    params: &LipmParams,
    robot: &RobotParams,
    terrain: &TerrainProfile,
    k: usize,
    first_support: Side,
) -> Result<StepTrajectory> {
    let mut walk = walk_with(&Lipm::new(params.clone()), robot, terrain, k + 1, first_support)?;
    Ok(walk.pop().expect("walk has k + 1 steps"))
}
