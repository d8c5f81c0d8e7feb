//! Swing-foot touchdown detection and a point-mass impact estimate.
//!
//! The full impact map needs the robot's inertia matrices, which are not
//! available. Instead the swing foot (mass 7) is treated as a free point
//! mass `m_eff` that stops dead at contact: the impulse is
//! `J = m_eff · |v⁻|` and the mean reaction force over a contact time `tau`
//! is `F_R = J / tau`. This keeps the property the comparison relies on,
//! `F_R` growing strictly with the pre-impact speed.

use crate::error::{PtaError, Result};
use crate::kinematics::{Planar, Vec3};
use crate::sim::TerrainProfile;
use crate::trajectory::Sample;

/// Heights within this distance of the ground count as contact (cm).
pub const CONTACT_TOLERANCE: f64 = 1e-9;

/// Index of the swing-foot mass.
const FOOT_MASS: usize = 6;

/// First ground contact of the swing sole after lift-off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Touchdown {
    /// First sample at or below the ground.
    pub index: usize,
    /// Contact time interpolated between `index - 1` and `index`.
    pub t_impact: f64,
    /// Position of `t_impact` within that interval, in `(0, 1]`.
    pub fraction: f64,
}

/// Finds where the swing sole first comes down onto `terrain`.
///
/// The sole has to clear the ground first, so the lift-off samples of a
/// step do not count as contact.
pub fn detect_touchdown(samples: &[Sample], terrain: &TerrainProfile) -> Result<Touchdown> {
    let gap = |s: &Sample| s.swing_foot.z - terrain.height(s.swing_foot.x);
    let mut airborne = false;
    for (i, s) in samples.iter().enumerate() {
        let g = gap(s);
        if !airborne {
            airborne = g > CONTACT_TOLERANCE;
            continue;
        }
        if g <= CONTACT_TOLERANCE {
            let prev = &samples[i - 1];
            let g0 = gap(prev);
            let fraction = ((g0 - CONTACT_TOLERANCE) / (g0 - g)).clamp(0.0, 1.0);
            let fraction = if fraction == 0.0 { f64::MIN_POSITIVE } else { fraction };
            return Ok(Touchdown {
                index: i,
                t_impact: prev.t + fraction * (s.t - prev.t),
                fraction,
            });
        }
    }
    Err(PtaError::NoTouchdown)
}

fn backward_velocity(samples: &[Sample], i: usize) -> Vec3 {
    let p = |k: usize| samples[k].masses.positions[FOOT_MASS];
    let dt = samples[i].t - samples[i - 1].t;
    if i >= 2 {
        (p(i) * 3.0 - p(i - 1) * 4.0 + p(i - 2)) * (1.0 / (2.0 * dt))
    } else {
        (p(i) - p(i - 1)) * (1.0 / dt)
    }
}

/// Velocity of mass 7 at the moment of contact (ẋ, ż), cm/s.
///
/// Backward second-order differences at the two samples bracketing
/// `t_impact`, interpolated linearly in time.
pub fn pre_impact_velocity(samples: &[Sample], touchdown: &Touchdown) -> Result<Planar> {
    let i = touchdown.index;
    if i == 0 || i >= samples.len() {
        return Err(PtaError::NoPreImpactHistory);
    }
    let after = backward_velocity(samples, i);
    let v = if i >= 2 {
        let before = backward_velocity(samples, i - 1);
        before + (after - before) * touchdown.fraction
    } else {
        after
    };
    Ok(Planar::new(v.x, v.z))
}

/// Impulse (kg·cm/s) and mean reaction force (N) for a dead stop.
pub fn impact_force(speed: f64, m_eff: f64, tau: f64) -> Result<(f64, f64)> {
    if !(m_eff > 0.0 && m_eff.is_finite()) {
        return Err(PtaError::InvalidImpact(format!("effective mass must be positive, got {m_eff}")));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(PtaError::InvalidImpact(format!("contact time must be positive, got {tau}")));
    }
    if !(speed >= 0.0 && speed.is_finite()) {
        return Err(PtaError::InvalidImpact(format!("speed must be finite and non-negative, got {speed}")));
    }
    let impulse = m_eff * speed;
    let force = m_eff * (speed / 100.0) / tau;
    Ok((impulse, force))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpactModel {
    /// Effective mass (kg); defaults to the foot-link mass.
    pub m_eff: f64,
    /// Contact duration (s).
    pub tau: f64,
}

impl Default for ImpactModel {
    fn default() -> Self {
        Self { m_eff: 0.2, tau: 0.01 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpactReport {
    pub t_impact: f64,
    /// Pre-impact velocity of mass 7 (ẋ, ż), cm/s.
    pub v_pre: Planar,
    pub speed_pre: f64,
    /// kg·cm/s.
    pub impulse: f64,
    /// N.
    pub force: f64,
    pub m_eff: f64,
    pub tau: f64,
}

impl ImpactModel {
    pub fn report(&self, samples: &[Sample], touchdown: &Touchdown) -> Result<ImpactReport> {
        let v_pre = pre_impact_velocity(samples, touchdown)?;
        let speed_pre = v_pre.x.hypot(v_pre.z);
        let (impulse, force) = impact_force(speed_pre, self.m_eff, self.tau)?;
        Ok(ImpactReport {
            t_impact: touchdown.t_impact,
            v_pre,
            speed_pre,
            impulse,
            force,
            m_eff: self.m_eff,
            tau: self.tau,
        })
    }
}
