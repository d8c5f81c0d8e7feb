//! Seven-mass biped model: parameters, forward and inverse kinematics.
//!
//! The sagittal chain runs from the support sole upward and back down to the
//! swing sole:
//!
//! ```text
//! l4 torso            (m4)
//!  |
//! hip ------------+
//!  | l3 thigh (m3)  | l5 thigh (m5)
//! knee              knee
//!  | l2 shank (m2)  | l6 shank (m6)
//! ankle             ankle
//!  | l1 foot (m1)   | l7 foot (m7)
//! support sole      swing sole
//! ```
//!
//! Each mass sits at the midpoint of its link. The foot links stay vertical
//! whenever the soles are flat. Link angles are measured from the vertical,
//! positive toward +x. Knees always bend forward.
//!
//! The frontal plane is solved independently: both legs roll about their
//! ankles so that the pelvis sits at a lateral offset while staying level.
//! Lateral mass positions follow from that roll as a shear of the sagittal
//! solution, so sagittal heights are untouched.

use std::f64::consts::FRAC_PI_4;
use std::ops::{Add, Mul, Sub};

use crate::error::{PtaError, Result};

/// Minimum slack kept from the boundary of the leg workspace (cm).
pub const REACH_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn planar(self) -> Planar {
        Planar::new(self.x, self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Point in the sagittal (x–z) plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Planar {
    pub x: f64,
    pub z: f64,
}

impl Planar {
    pub const fn new(x: f64, z: f64) -> Self {
        Self { x, z }
    }

    pub fn distance(self, o: Planar) -> f64 {
        (self.x - o.x).hypot(self.z - o.z)
    }

    fn offset(self, length: f64, angle: f64) -> Planar {
        Planar::new(self.x + length * angle.sin(), self.z + length * angle.cos())
    }

    fn midpoint(self, o: Planar) -> Planar {
        Planar::new(0.5 * (self.x + o.x), 0.5 * (self.z + o.z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// +1 for the left (+y) side, -1 for the right.
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Physical robot description. Masses in kg, lengths in cm, gravity in cm/s².
#[derive(Debug, Clone, PartialEq)]
pub struct RobotParams {
    /// `m1..m7`, indexed by link.
    pub masses: [f64; 7],
    /// `l1..l7`: support foot link, support shank, support thigh, torso,
    /// swing thigh, swing shank, swing foot link.
    pub links: [f64; 7],
    /// Lateral distance between the two hip joints.
    pub hip_width: f64,
    pub foot_length: f64,
    pub foot_width: f64,
    pub foot_sub1: f64,
    pub foot_sub2: f64,
    pub gravity: f64,
}

impl Default for RobotParams {
    /// A 2.055 kg robot with 10–11 cm links.
    fn default() -> Self {
        Self {
            masses: [0.2, 0.3, 0.3, 0.455, 0.3, 0.3, 0.2],
            links: [10.0, 11.0, 11.0, 10.0, 11.0, 11.0, 10.0],
            hip_width: 11.2,
            foot_length: 10.0,
            foot_width: 8.0,
            foot_sub1: 5.0,
            foot_sub2: 4.0,
            gravity: 981.0,
        }
    }
}

impl RobotParams {
    pub fn validate(&self) -> Result<()> {
        let named = self
            .masses
            .iter()
            .chain(&self.links)
            .chain([
                &self.hip_width,
                &self.foot_length,
                &self.foot_width,
                &self.foot_sub1,
                &self.foot_sub2,
                &self.gravity,
            ]);
        if named.clone().any(|v| !v.is_finite()) {
            return Err(PtaError::InvalidRobot("all parameters must be finite".into()));
        }
        if named.clone().any(|&v| v <= 0.0) {
            return Err(PtaError::InvalidRobot(
                "masses, lengths and gravity must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Half extents `(x, y)` of the support rectangle around a sole center.
    pub fn support_half_extents(&self) -> (f64, f64) {
        (0.5 * self.foot_length, 0.5 * self.foot_width)
    }

    /// Lateral position of a foot's lane.
    pub fn lane_y(&self, side: Side) -> f64 {
        side.sign() * 0.5 * self.hip_width
    }

    pub fn support_foot_link(&self) -> f64 {
        self.links[0]
    }

    pub fn support_shank(&self) -> f64 {
        self.links[1]
    }

    pub fn support_thigh(&self) -> f64 {
        self.links[2]
    }

    pub fn torso(&self) -> f64 {
        self.links[3]
    }

    pub fn swing_thigh(&self) -> f64 {
        self.links[4]
    }

    pub fn swing_shank(&self) -> f64 {
        self.links[5]
    }

    pub fn swing_foot_link(&self) -> f64 {
        self.links[6]
    }
}

/// Relative joint angles of the sagittal chain (rad).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SagittalAngles {
    /// Tilt of the support foot link from vertical; zero with a flat sole.
    pub foot_tilt: f64,
    pub ankle: f64,
    /// Flexion, non-negative on the knee-forward branch.
    pub knee: f64,
    pub hip: f64,
    pub swing_hip: f64,
    pub swing_knee: f64,
    pub swing_ankle: f64,
}

impl SagittalAngles {
    pub fn to_array(self) -> [f64; 7] {
        [
            self.foot_tilt,
            self.ankle,
            self.knee,
            self.hip,
            self.swing_hip,
            self.swing_knee,
            self.swing_ankle,
        ]
    }

    /// Same pose reflected through the vertical axis of the support sole.
    pub fn mirrored(self) -> Self {
        let a = self.to_array();
        Self {
            foot_tilt: -a[0],
            ankle: -a[1],
            knee: -a[2],
            hip: -a[3],
            swing_hip: -a[4],
            swing_knee: -a[5],
            swing_ankle: -a[6],
        }
    }
}

/// Roll angles of the frontal chain (rad).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrontalAngles {
    pub support_ankle_roll: f64,
    pub support_hip_roll: f64,
    pub torso_roll: f64,
    pub swing_hip_roll: f64,
    pub swing_ankle_roll: f64,
}

impl FrontalAngles {
    pub fn to_array(self) -> [f64; 5] {
        [
            self.support_ankle_roll,
            self.support_hip_roll,
            self.torso_roll,
            self.swing_hip_roll,
            self.swing_ankle_roll,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointAngles {
    pub sagittal: SagittalAngles,
    pub frontal: FrontalAngles,
}

/// Angles of one leg as produced by [`ik_leg_sagittal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegAngles {
    pub hip: f64,
    pub knee: f64,
    pub ankle: f64,
}

/// Joint locations and mass midpoints of the sagittal chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SagittalChain {
    pub support_sole: Planar,
    pub support_ankle: Planar,
    pub support_knee: Planar,
    pub hip: Planar,
    pub torso_top: Planar,
    pub swing_knee: Planar,
    pub swing_ankle: Planar,
    pub swing_sole: Planar,
    pub masses: [Planar; 7],
}

pub fn fk_sagittal(angles: &SagittalAngles, params: &RobotParams, anchor: Planar) -> SagittalChain {
    let l = &params.links;
    let a1 = angles.foot_tilt;
    let a2 = a1 + angles.ankle;
    let a3 = a2 - angles.knee;
    let a4 = a3 + angles.hip;
    let b5 = a4 - angles.swing_hip;
    let b6 = b5 + angles.swing_knee;
    let b7 = b6 - angles.swing_ankle;

    let support_ankle = anchor.offset(l[0], a1);
    let support_knee = support_ankle.offset(l[1], a2);
    let hip = support_knee.offset(l[2], a3);
    let torso_top = hip.offset(l[3], a4);
    let swing_knee = hip.offset(-l[4], b5);
    let swing_ankle = swing_knee.offset(-l[5], b6);
    let swing_sole = swing_ankle.offset(-l[6], b7);

    SagittalChain {
        support_sole: anchor,
        support_ankle,
        support_knee,
        hip,
        torso_top,
        swing_knee,
        swing_ankle,
        swing_sole,
        masses: [
            anchor.midpoint(support_ankle),
            support_ankle.midpoint(support_knee),
            support_knee.midpoint(hip),
            hip.midpoint(torso_top),
            hip.midpoint(swing_knee),
            swing_knee.midpoint(swing_ankle),
            swing_ankle.midpoint(swing_sole),
        ],
    }
}

/// Two-link leg inverse kinematics on the knee-forward branch.
///
/// `ankle` is the ankle joint, i.e. the lower end of the shank. The returned
/// `ankle` angle keeps the foot link vertical and `hip` keeps the torso
/// upright.
pub fn ik_leg_sagittal(hip: Planar, ankle: Planar, thigh_len: f64, shank_len: f64) -> Result<LegAngles> {
    if ![hip.x, hip.z, ankle.x, ankle.z, thigh_len, shank_len]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(PtaError::NonFinite("leg target"));
    }
    if thigh_len <= 0.0 || shank_len <= 0.0 {
        return Err(PtaError::InvalidRobot("leg links must be positive".into()));
    }
    let dx = hip.x - ankle.x;
    let dz = hip.z - ankle.z;
    let r = dx.hypot(dz);
    let max_reach = thigh_len + shank_len - REACH_EPS;
    let min_reach = (thigh_len - shank_len).abs() + REACH_EPS;
    if r > max_reach {
        return Err(PtaError::Unreachable { deficit: r - max_reach });
    }
    if r < min_reach {
        return Err(PtaError::Unreachable { deficit: min_reach - r });
    }

    // Twice the triangle area via Heron, which stays accurate near full
    // extension where acos loses precision.
    let (a, b, c) = (thigh_len, shank_len, r);
    let area2 = 0.5 * ((a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c)).max(0.0).sqrt();

    let knee_interior = (2.0 * area2).atan2(a * a + b * b - c * c);
    let knee = std::f64::consts::PI - knee_interior;
    let ankle_offset = (2.0 * area2).atan2(b * b + c * c - a * a);

    let direction = dx.atan2(dz);
    let shank_angle = direction + ankle_offset;
    let thigh_angle = shank_angle - knee;

    Ok(LegAngles {
        hip: -thigh_angle,
        knee,
        ankle: shank_angle,
    })
}

/// Solves both legs for a hip position and two flat soles.
pub fn ik_sagittal(
    hip: Planar,
    support_sole: Planar,
    swing_sole: Planar,
    params: &RobotParams,
) -> Result<SagittalAngles> {
    let support_ankle = Planar::new(support_sole.x, support_sole.z + params.support_foot_link());
    let swing_ankle = Planar::new(swing_sole.x, swing_sole.z + params.swing_foot_link());
    let support = ik_leg_sagittal(hip, support_ankle, params.support_thigh(), params.support_shank())?;
    let swing = ik_leg_sagittal(hip, swing_ankle, params.swing_thigh(), params.swing_shank())?;
    Ok(SagittalAngles {
        foot_tilt: 0.0,
        ankle: support.ankle,
        knee: support.knee,
        hip: support.hip,
        swing_hip: swing.hip,
        swing_knee: swing.knee,
        swing_ankle: swing.ankle,
    })
}

/// Frontal roll solve for a lateral pelvis offset.
///
/// `support_height` and `swing_height` are the vertical distances from each
/// ankle up to the hip. Each leg rolls by `atan2(offset, height)`, which is
/// `asin(offset / frontal_leg_length)` for the leg's projected length.
pub fn ik_frontal(
    pelvis_offset: f64,
    support_height: f64,
    swing_height: f64,
    _params: &RobotParams,
) -> Result<FrontalAngles> {
    if ![pelvis_offset, support_height, swing_height].iter().all(|v| v.is_finite()) {
        return Err(PtaError::NonFinite("frontal target"));
    }
    let roll = |height: f64| -> Result<f64> {
        if height <= 0.0 {
            return Err(PtaError::Unreachable { deficit: -height });
        }
        let reach = height * FRAC_PI_4.tan();
        if pelvis_offset.abs() > reach {
            return Err(PtaError::Unreachable {
                deficit: pelvis_offset.abs() - reach,
            });
        }
        Ok(pelvis_offset.atan2(height))
    };
    let support = roll(support_height)?;
    let swing = roll(swing_height)?;
    Ok(FrontalAngles {
        support_ankle_roll: support,
        support_hip_roll: -support,
        torso_roll: 0.0,
        swing_hip_roll: -swing,
        swing_ankle_roll: swing,
    })
}

/// Pelvis offset implied by the support leg's roll.
pub fn fk_frontal(angles: &FrontalAngles, support_height: f64) -> f64 {
    support_height * angles.support_ankle_roll.tan()
}

/// A full-body configuration: where the soles are and how the joints sit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub support_side: Side,
    pub support_sole: Vec3,
    pub swing_sole: Vec3,
    pub angles: JointAngles,
}

/// Positions of the seven point masses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassState {
    pub positions: [Vec3; 7],
}

impl MassState {
    pub fn center_of_mass(&self, params: &RobotParams) -> Vec3 {
        let total = params.total_mass();
        self.positions
            .iter()
            .zip(params.masses)
            .fold(Vec3::default(), |acc, (p, m)| acc + *p * m)
            * (1.0 / total)
    }
}

/// Full 3-D mass positions: sagittal FK composed with the frontal roll.
pub fn mass_positions(pose: &Pose, params: &RobotParams) -> MassState {
    let chain = fk_sagittal(&pose.angles.sagittal, params, pose.support_sole.planar());
    let f = &pose.angles.frontal;
    let support_lane = pose.support_sole.y;
    let swing_lane = pose.swing_sole.y;
    let support_shear = f.support_ankle_roll.tan();
    let swing_shear = f.swing_ankle_roll.tan();

    let lateral = |i: usize, p: Planar| -> f64 {
        match i {
            0 => support_lane,
            1 | 2 => support_lane + (p.z - chain.support_ankle.z) * support_shear,
            3 => {
                let pelvis = support_lane
                    + (chain.hip.z - chain.support_ankle.z) * support_shear
                    - pose.support_side.sign() * 0.5 * params.hip_width;
                pelvis + 0.5 * params.torso() * f.torso_roll.sin()
            }
            4 | 5 => swing_lane + (p.z - chain.swing_ankle.z) * swing_shear,
            _ => swing_lane,
        }
    };

    let mut positions = [Vec3::default(); 7];
    for (i, p) in chain.masses.iter().enumerate() {
        positions[i] = Vec3::new(p.x, lateral(i, *p), p.z);
    }
    MassState { positions }
}
