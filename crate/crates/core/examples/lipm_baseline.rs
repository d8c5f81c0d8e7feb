//! The linear inverted pendulum gait used as a baseline.

use biped_pta::baseline::{generate_lipm_walk, LipmParams};
use biped_pta::kinematics::RobotParams;
use biped_pta::sim::{experiment_gait, TerrainProfile};
use biped_pta::zmp::trace_walk;

fn main() -> biped_pta::Result<()> {
    let params = LipmParams::from_gait(experiment_gait());
    let robot = RobotParams::default();
    println!(
        "z_c = {} cm, T_c = {:.4} s, orbit half width {:.3} cm, orbit speed {:.3} cm/s",
        params.z_c,
        params.time_constant(),
        params.orbit_half_width(),
        params.orbit_speed()
    );
    let walk = generate_lipm_walk(&params, &robot, &TerrainProfile::flat(), 3)?;
    let dt = params.gait.dt;
    for step in &walk {
        let n = (params.gait.single_support / dt).round() as usize;
        let (a, b, c) = (step.samples[n - 2].swing_foot, step.samples[n - 1].swing_foot, step.samples[n].swing_foot);
        println!(
            "step {}: hip {:6.2} -> {:6.2}, touchdown speed {:.3} cm/s",
            step.step_index,
            step.samples[0].hip.x,
            step.end.hip.x,
            ((c * 3.0 - b * 4.0 + a) * (0.5 / dt)).norm()
        );
    }
    let trace = trace_walk(&walk, &robot)?;
    println!("smallest single-support ZMP margin {:.3} cm", trace.worst_single_support_margin());
    Ok(())
}
