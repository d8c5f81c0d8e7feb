//! A five-step walk on flat ground with the default gait.

use biped_pta::kinematics::RobotParams;
use biped_pta::sim::TerrainProfile;
use biped_pta::trajectory::{generate_walk, GaitParams, Phase};

fn main() -> biped_pta::Result<()> {
    let gait = GaitParams::default();
    let robot = RobotParams::default();
    println!(
        "T_s = {} s, T = {} s, L_s = {} cm, hip cruise {:.2} cm/s",
        gait.single_support, gait.step_period, gait.step_length, gait.v_xhs
    );
    let walk = generate_walk(&gait, &robot, &TerrainProfile::flat(), 5)?;
    for step in &walk {
        let first = &step.samples[0];
        let single = step.samples.iter().filter(|s| s.phase == Phase::Single).count();
        println!(
            "step {} ({:?} support): {} samples, {} single support, hip x {:6.2} -> {:6.2}, swing foot lands at {:6.2}",
            step.step_index,
            step.support,
            step.samples.len(),
            single,
            first.hip.x,
            step.end.hip.x,
            step.end.swing_foot.x
        );
    }
    let last = &walk[walk.len() - 1].samples;
    let n = (gait.single_support / gait.dt).round() as usize;
    let (a, b, c) = (last[n - 2].swing_foot, last[n - 1].swing_foot, last[n].swing_foot);
    let velocity = (c * 3.0 - b * 4.0 + a) * (0.5 / gait.dt);
    println!("swing-foot speed at touchdown: {:.2e} cm/s", velocity.norm());
    Ok(())
}
