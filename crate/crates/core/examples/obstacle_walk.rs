//! Twenty steps across 2 cm blocks, with ZMP monitoring.

use biped_pta::kinematics::RobotParams;
use biped_pta::sim::{experiment_gait, obstacle_terrain, run_experiment_2, GeneratorKind};

fn main() -> biped_pta::Result<()> {
    let gait = experiment_gait();
    let robot = RobotParams::default();
    let ground = obstacle_terrain();
    println!("blocks: {:?}", ground.segments());
    for kind in GeneratorKind::ALL {
        let report = run_experiment_2(kind.build(&gait).as_ref(), &robot, &ground, 20)?;
        println!(
            "{kind}: {:?}, {} steps, mean touchdown speed {:.3} cm/s, mean F_R {:.4} N, smallest margin {:.3} cm",
            report.outcome,
            report.completed_steps,
            report.mean_speed().unwrap_or(f64::NAN),
            report.mean_force().unwrap_or(f64::NAN),
            report.zmp.worst_single_support_margin()
        );
        for (step, impact) in report.steps.iter().zip(&report.impacts).take(8) {
            println!(
                "  step {:2}: stance at x = {:6.2} (z {:.0}), touchdown t = {:7.3} s, speed {:.3} cm/s",
                step.step_index, step.samples[0].support_foot.x, step.samples[0].support_foot.z, impact.t_impact, impact.speed_pre
            );
        }
    }
    Ok(())
}
