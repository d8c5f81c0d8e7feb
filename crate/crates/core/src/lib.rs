//! Walking trajectories for a seven-mass planar-plus-roll biped.
//!
//! Hip and swing-foot paths are built from cubic Hermite pieces
//! ([`trajectory`]), mapped to joint angles and mass positions
//! ([`kinematics`]), checked for dynamic balance through the zero moment
//! point ([`zmp`]) and scored by the swing-foot impact at touchdown
//! ([`impact`]). [`baseline`] provides a linear inverted pendulum gait for
//! comparison and [`sim`] runs both over stepped terrain.

pub mod baseline;
pub mod cli;
pub mod error;
pub mod hermite;
pub mod impact;
pub mod kinematics;
pub mod sim;
pub mod trajectory;
pub mod zmp;

pub use error::{PtaError, Result};
