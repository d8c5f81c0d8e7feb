//! ZMP of a walk against the stance-foot region, for a comfortable and a
//! much too fast gait.

use biped_pta::kinematics::RobotParams;
use biped_pta::sim::TerrainProfile;
use biped_pta::trajectory::{generate_walk, GaitParams};
use biped_pta::zmp::trace_walk;

fn report(label: &str, gait: &GaitParams) -> biped_pta::Result<()> {
    let robot = RobotParams::default();
    let walk = generate_walk(gait, &robot, &TerrainProfile::flat(), 4)?;
    let trace = trace_walk(&walk, &robot)?;
    println!(
        "{label}: {} samples, {} single-support violations, smallest margin {:.3} cm",
        trace.samples.len(),
        trace.single_support_violations().count(),
        trace.worst_single_support_margin()
    );
    if let Some(v) = trace.first_single_support_violation() {
        println!(
            "  first at t = {:.3} s: ZMP ({:.2}, {:.2}) vs stance foot ({:.2}, {:.2})",
            v.t, v.x_zmp, v.y_zmp, v.x_s, v.y_s
        );
    }
    Ok(())
}

fn main() -> biped_pta::Result<()> {
    report("T_s = 2 s", &GaitParams::default())?;
    report("T_s = 0.3 s", &GaitParams::with_timing(0.3, 10.0))
}
