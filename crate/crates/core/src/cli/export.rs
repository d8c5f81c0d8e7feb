//! CSV and summary writers.
//!
//! Comma separated, no quoting, `.` decimals printed with six places, LF
//! line endings and a fixed header per file kind. Files are written to a
//! temporary name and renamed into place.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::impact::ImpactReport;
use crate::sim::{ComparisonRow, ExperimentReport, Outcome};
use crate::trajectory::{Phase, Sample, StepTrajectory};
use crate::zmp::ZmpTrace;

const SAGITTAL: [&str; 7] = [
    "q_foot_tilt",
    "q_ankle",
    "q_knee",
    "q_hip",
    "q_swing_hip",
    "q_swing_knee",
    "q_swing_ankle",
];
const FRONTAL: [&str; 5] = ["r_support_ankle", "r_support_hip", "r_torso", "r_swing_hip", "r_swing_ankle"];

pub const ZMP_HEADER: &str = "t,x_zmp,y_zmp,x_s,y_s,in_region";
pub const IMPACT_HEADER: &str = "step,t_impact,v_x,v_z,speed_pre,impulse,force";
pub const COMPARE_HEADER: &str = "generator,t_impact,v_x,v_z,speed_pre,impulse,force";

/// Six-decimal rendering without a sign on zero.
pub fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        s[1..].to_string()
    } else {
        s
    }
}

pub fn trajectory_header() -> String {
    let mut cols: Vec<String> = ["t", "hip_x", "hip_y", "hip_z", "foot_x", "foot_z"].map(String::from).to_vec();
    cols.extend(SAGITTAL.iter().chain(FRONTAL.iter()).map(|s| s.to_string()));
    for i in 1..=7 {
        for axis in ["x", "y", "z"] {
            cols.push(format!("m{i}_{axis}"));
        }
    }
    cols.extend(["foot_y", "support_x", "support_y", "support_z", "step", "phase"].map(String::from));
    cols.join(",")
}

fn trajectory_row(out: &mut String, s: &Sample, step: usize) {
    let mut fields = vec![s.t, s.hip.x, s.hip.y, s.hip.z, s.swing_foot.x, s.swing_foot.z];
    fields.extend(s.angles.sagittal.to_array());
    fields.extend(s.angles.frontal.to_array());
    for p in s.masses.positions {
        fields.extend([p.x, p.y, p.z]);
    }
    fields.extend([s.swing_foot.y, s.support_foot.x, s.support_foot.y, s.support_foot.z]);
    let phase = match s.phase {
        Phase::Single => "single",
        Phase::Double => "double",
    };
    let body: Vec<String> = fields.into_iter().map(num).collect();
    let _ = writeln!(out, "{},{step},{phase}", body.join(","));
}

/// One step's samples.
pub fn step_csv(step: &StepTrajectory) -> String {
    let mut out = trajectory_header() + "\n";
    for s in &step.samples {
        trajectory_row(&mut out, s, step.step_index);
    }
    out
}

/// Every step back to back, closed by the final pose.
pub fn walk_csv(steps: &[StepTrajectory]) -> String {
    let mut out = trajectory_header() + "\n";
    for step in steps {
        for s in &step.samples {
            trajectory_row(&mut out, s, step.step_index);
        }
    }
    if let Some(last) = steps.last() {
        trajectory_row(&mut out, &last.end, last.step_index);
    }
    out
}

pub fn zmp_csv(trace: &ZmpTrace) -> String {
    let mut out = format!("{ZMP_HEADER}\n");
    for z in &trace.samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(z.t),
            num(z.x_zmp),
            num(z.y_zmp),
            num(z.x_s),
            num(z.y_s),
            u8::from(z.in_region)
        );
    }
    out
}

pub fn impacts_csv(impacts: &[ImpactReport]) -> String {
    let mut out = format!("{IMPACT_HEADER}\n");
    for (k, r) in impacts.iter().enumerate() {
        let _ = writeln!(
            out,
            "{k},{},{},{},{},{},{}",
            num(r.t_impact),
            num(r.v_pre.x),
            num(r.v_pre.z),
            num(r.speed_pre),
            num(r.impulse),
            num(r.force)
        );
    }
    out
}

pub fn compare_csv(rows: &[ComparisonRow]) -> String {
    let mut out = format!("{COMPARE_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.generator,
            num(r.t_impact),
            num(r.v_x),
            num(r.v_z),
            num(r.speed_pre),
            num(r.impulse),
            num(r.force)
        );
    }
    out
}

fn describe(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Completed => "completed".into(),
        Outcome::ZmpViolation { step, t } => format!("zmp violation in step {step} at t = {t:.3} s"),
        Outcome::Unreachable { step, error } => format!("unreachable in step {step}: {error}"),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |v| format!("{v:.3}"))
}

/// Touchdown table followed by the walk outcome table.
pub fn summary(title: &str, reports: &[ExperimentReport]) -> String {
    let mut out = format!("{title}\n\n");
    let _ = writeln!(out, "{:<8} {:>10} {:>12} {:>14} {:>10}", "gen", "t_impact", "speed_pre", "impulse", "F_R");
    let _ = writeln!(out, "{:<8} {:>10} {:>12} {:>14} {:>10}", "", "s", "cm/s", "kg cm/s", "N");
    for r in reports {
        match r.impacts.first() {
            Some(i) => {
                let _ = writeln!(
                    out,
                    "{:<8} {:>10.3} {:>12.3} {:>14.4} {:>10.4}",
                    r.generator, i.t_impact, i.speed_pre, i.impulse, i.force
                );
            }
            None => {
                let _ = writeln!(out, "{:<8} {:>10} {:>12} {:>14} {:>10}", r.generator, "-", "-", "-", "-");
            }
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<8} {:>6} {:>10} {:>12} {:>10} {:>12}  outcome",
        "gen", "steps", "touchdowns", "mean speed", "mean F_R", "min margin"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<8} {:>6} {:>10} {:>12} {:>10} {:>12.3}  {}",
            r.generator,
            format!("{}/{}", r.completed_steps, r.requested_steps),
            r.impacts.len(),
            opt(r.mean_speed()),
            opt(r.mean_force()),
            r.zmp.worst_single_support_margin(),
            describe(&r.outcome)
        );
    }
    out
}

pub fn compare_table(rows: &[ComparisonRow]) -> String {
    let mut out = format!("{:<8} {:>10} {:>10} {:>10} {:>12} {:>10}\n", "gen", "t_impact", "v_x", "v_z", "speed_pre", "F_R");
    for r in rows {
        let _ = writeln!(
            out,
            "{:<8} {:>10.3} {:>10.3} {:>10.3} {:>12.3} {:>10.4}",
            r.generator, r.t_impact, r.v_x, r.v_z, r.speed_pre, r.force
        );
    }
    out
}

/// Writes `contents` to `dir/name` through a temporary file.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> io::Result<()> {
    let tmp = dir.join(format!(".{name}.tmp"));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, dir.join(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_six_places_and_no_negative_zero() {
        assert_eq!(num(1.0), "1.000000");
        assert_eq!(num(-0.0), "0.000000");
        assert_eq!(num(-1e-9), "0.000000");
        assert_eq!(num(-2.5), "-2.500000");
    }

    #[test]
    fn trajectory_header_is_stable() {
        let header = trajectory_header();
        assert_eq!(header.split(',').count(), 6 + 12 + 21 + 6);
        assert!(header.starts_with("t,hip_x,hip_y,hip_z,foot_x,foot_z,q_foot_tilt"));
        assert!(header.contains("m7_z,foot_y"));
    }
}
