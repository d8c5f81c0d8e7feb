//! Joint angles for a hip position and two soles, checked by running the
//! chain forward again.

use biped_pta::kinematics::{fk_frontal, fk_sagittal, ik_frontal, ik_sagittal, Planar, RobotParams};

fn main() -> biped_pta::Result<()> {
    let robot = RobotParams::default();
    let support = Planar::new(0.0, 0.0);
    let swing = Planar::new(-6.0, 2.5);
    let hip = Planar::new(1.5, 28.0);

    let angles = ik_sagittal(hip, support, swing, &robot)?;
    println!("sagittal angles (rad): {:?}", angles);
    let chain = fk_sagittal(&angles, &robot, support);
    println!(
        "forward check: hip ({:.9}, {:.9}), swing sole ({:.9}, {:.9})",
        chain.hip.x, chain.hip.z, chain.swing_sole.x, chain.swing_sole.z
    );
    for (i, m) in chain.masses.iter().enumerate() {
        println!("  m{} at ({:7.3}, {:7.3})", i + 1, m.x, m.z);
    }

    let support_height = hip.z - robot.support_foot_link();
    let swing_height = hip.z - swing.z - robot.swing_foot_link();
    let roll = ik_frontal(5.0, support_height, swing_height, &robot)?;
    println!("frontal rolls (rad): {:?}", roll);
    println!("pelvis offset from the rolls: {:.9} cm", fk_frontal(&roll, support_height));

    match ik_sagittal(Planar::new(0.0, 40.0), support, swing, &robot) {
        Ok(_) => println!("unexpectedly reachable"),
        Err(e) => println!("a 40 cm hip is out of reach: {e}"),
    }
    Ok(())
}
