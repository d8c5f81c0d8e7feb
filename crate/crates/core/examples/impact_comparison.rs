//! One blind step onto ground that rises 1 cm, for both generators.

use biped_pta::impact::ImpactModel;
use biped_pta::kinematics::RobotParams;
use biped_pta::sim::{compare, experiment_gait, raised_step_terrain, GeneratorKind};

fn main() -> biped_pta::Result<()> {
    let gait = experiment_gait();
    let generators: Vec<_> = GeneratorKind::ALL.iter().map(|k| k.build(&gait)).collect();
    let refs: Vec<_> = generators.iter().map(|g| g.as_ref()).collect();
    let rows = compare(&refs, &RobotParams::default(), &raised_step_terrain(), &ImpactModel::default())?;
    println!("{:<6} {:>9} {:>9} {:>9} {:>11} {:>8}", "gen", "t (s)", "v_x", "v_z", "speed", "F_R (N)");
    for r in rows {
        println!(
            "{:<6} {:>9.3} {:>9.3} {:>9.3} {:>11.3} {:>8.4}",
            r.generator, r.t_impact, r.v_x, r.v_z, r.speed_pre, r.force
        );
    }
    Ok(())
}
