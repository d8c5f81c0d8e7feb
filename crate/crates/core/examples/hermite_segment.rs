//! A single cubic Hermite segment: boundary values in, positions and
//! derivatives out.

use biped_pta::hermite::HermiteSegment;

fn main() -> biped_pta::Result<()> {
    // Hip height over a 2 s phase: 28 cm to 29 cm, starting at rest and
    // ending while still rising at 0.2 cm/s.
    let duration = 2.0;
    let segment = HermiteSegment::over_duration(28.0, 29.0, 0.0, 0.2, duration)?;
    println!("coefficients [a, b, c, d] = {:?}", segment.coeffs);
    println!("{:>6} {:>10} {:>12}", "t (s)", "z (cm)", "dz/dt (cm/s)");
    for k in 0..=8 {
        let u = k as f64 / 8.0;
        let z = segment.eval(u)?;
        let v = segment.eval_deriv(u)? / duration;
        println!("{:>6.2} {:>10.4} {:>12.4}", u * duration, z, v);
    }
    Ok(())
}
