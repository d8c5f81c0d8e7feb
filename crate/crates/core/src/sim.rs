//! Terrain, walk execution and the two terrain experiments.
//!
//! A walk is executed against the real ground while the generator plans
//! against what it believes the ground to be. When the swing sole meets the
//! real ground before the plan says so, the step is cut at contact, the
//! foot settles where it struck, and the next step starts from there.

use std::fmt;
use std::str::FromStr;

use crate::baseline::{Lipm, LipmParams};
use crate::error::{PtaError, Result};
use crate::impact::{detect_touchdown, ImpactModel, ImpactReport};
use crate::kinematics::{RobotParams, Side, Vec3};
use crate::trajectory::{
    concatenate, finish_step, sample_single_support, GaitGenerator, GaitParams, Pta, StepStart, StepTrajectory,
};
use crate::zmp::{trace, ZmpSample, ZmpTrace};

/// Piecewise-constant ground height.
///
/// Each `(x_start, height)` pair sets the height from `x_start` (inclusive)
/// up to the next pair's start. Ground before the first pair is at zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TerrainProfile {
    segments: Vec<(f64, f64)>,
}

impl TerrainProfile {
    pub fn flat() -> Self {
        Self::default()
    }

    pub fn new(segments: Vec<(f64, f64)>) -> Result<Self> {
        for &(x, h) in &segments {
            if !x.is_finite() || !h.is_finite() {
                return Err(PtaError::InvalidTerrain(format!("non-finite segment ({x}, {h})")));
            }
            if h < 0.0 {
                return Err(PtaError::InvalidTerrain(format!("negative height {h} at x = {x}")));
            }
        }
        if let Some(w) = segments.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(PtaError::InvalidTerrain(format!(
                "segment starts must increase strictly ({} then {})",
                w[0].0, w[1].0
            )));
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }

    pub fn height(&self, x: f64) -> f64 {
        let idx = self.segments.partition_point(|&(start, _)| start <= x);
        if idx == 0 {
            0.0
        } else {
            self.segments[idx - 1].1
        }
    }

    pub fn is_flat(&self) -> bool {
        self.segments.iter().all(|&(_, h)| h == 0.0)
    }
}


/// Ground raised by 1 cm from 6 cm ahead of the stance sole.
pub fn raised_step_terrain() -> TerrainProfile {
    TerrainProfile::new(vec![(6.0, 1.0)]).expect("valid profile")
}

/// 2 cm blocks, 10 cm long with 5 cm gaps, between x = 15 and x = 50.
/// The last block is clipped at 50.
pub fn obstacle_terrain() -> TerrainProfile {
    obstacle_field(2.0)
}

/// The obstacle field with blocks of a given height.
pub fn obstacle_field(height: f64) -> TerrainProfile {
    TerrainProfile::new(vec![
        (15.0, height),
        (25.0, 0.0),
        (30.0, height),
        (40.0, 0.0),
        (45.0, height),
        (50.0, 0.0),
    ])
    .expect("valid profile")
}

/// Gait of both experiments: 5 s single support, 10 cm steps, 4 cm
/// swing clearance.
pub fn experiment_gait() -> GaitParams {
    let mut gait = GaitParams::with_timing(5.0, 10.0);
    gait.swing_clearance = 4.0;
    gait
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Pta,
    Lipm,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 2] = [GeneratorKind::Pta, GeneratorKind::Lipm];

    pub fn build(self, gait: &GaitParams) -> Box<dyn GaitGenerator> {
        match self {
            GeneratorKind::Pta => Box::new(Pta::new(gait.clone())),
            GeneratorKind::Lipm => Box::new(Lipm::new(LipmParams::from_gait(gait.clone()))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Pta => "pta",
            GeneratorKind::Lipm => "lipm",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pta" => Ok(GeneratorKind::Pta),
            "lipm" => Ok(GeneratorKind::Lipm),
            other => Err(format!("unknown generator `{other}` (expected pta or lipm)")),
        }
    }
}

/// Conditions of one walk.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// The ground the generator plans against.
    pub planning: TerrainProfile,
    /// The ground the feet actually meet.
    pub ground: TerrainProfile,
    pub n_steps: usize,
    /// End the walk at the first single-support ZMP violation.
    pub stop_on_violation: bool,
    pub impact: ImpactModel,
    pub first_support: Side,
}

impl Scenario {
    /// Walk over `ground` without knowing about it.
    pub fn blind(ground: TerrainProfile, n_steps: usize) -> Self {
        Self {
            planning: TerrainProfile::flat(),
            ground,
            n_steps,
            stop_on_violation: true,
            impact: ImpactModel::default(),
            first_support: Side::Right,
        }
    }

    /// Walk over `ground` with the generator planning against it.
    pub fn known(ground: TerrainProfile, n_steps: usize) -> Self {
        Self { planning: ground.clone(), ..Self::blind(ground, n_steps) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Completed,
    /// The ZMP left the stance-foot region during single support.
    ZmpViolation { step: usize, t: f64 },
    /// The generator asked for a pose the legs cannot reach.
    Unreachable { step: usize, error: PtaError },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub generator: String,
    pub requested_steps: usize,
    /// Steps finished before the walk ended.
    pub completed_steps: usize,
    pub outcome: Outcome,
    /// Executed steps, including the one in which the walk ended.
    pub steps: Vec<StepTrajectory>,
    /// Touchdowns that happened before the walk ended, one per step.
    pub impacts: Vec<ImpactReport>,
    pub zmp: ZmpTrace,
    pub single_support_violations: usize,
}

impl ExperimentReport {
    pub fn mean_speed(&self) -> Option<f64> {
        mean(self.impacts.iter().map(|r| r.speed_pre))
    }

    pub fn mean_force(&self) -> Option<f64> {
        mean(self.impacts.iter().map(|r| r.force))
    }

    pub fn first_violation(&self) -> Option<&ZmpSample> {
        self.zmp.first_single_support_violation()
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// One executed step: its samples and its touchdown.
fn execute_step(
    generator: &dyn GaitGenerator,
    start: &StepStart,
    robot: &RobotParams,
    scenario: &Scenario,
    index: usize,
) -> Result<(StepTrajectory, ImpactReport)> {
    let gait = generator.gait();
    let plan = generator.plan(start, &scenario.planning)?;
    let single = sample_single_support(plan.as_ref(), start, robot, gait.dt)?;
    let touchdown = detect_touchdown(&single, &scenario.ground)?;
    let impact = scenario.impact.report(&single, &touchdown)?;
    let contact = single[touchdown.index];
    let landing = Vec3::new(
        contact.swing_foot.x,
        contact.swing_foot.y,
        scenario.ground.height(contact.swing_foot.x),
    );
    let velocity = plan.hip_velocity((contact.t - start.t0).clamp(0.0, plan.duration()))?;
    let step = finish_step(single, touchdown.index, landing, velocity, start, gait, robot, index)?;
    Ok((step, impact))
}

/// Runs a walk, tracing the ZMP as it goes.
pub fn execute_walk(
    generator: &dyn GaitGenerator,
    robot: &RobotParams,
    scenario: &Scenario,
) -> Result<ExperimentReport> {
    robot.validate()?;
    generator.gait().validate()?;
    let dt = generator.gait().dt;
    let mut start = generator.initial_start(robot, &scenario.ground, scenario.first_support);
    let mut steps: Vec<StepTrajectory> = Vec::with_capacity(scenario.n_steps);
    let mut impacts = Vec::with_capacity(scenario.n_steps);
    let mut outcome = Outcome::Completed;
    let mut zmp = ZmpTrace::default();

    for k in 0..scenario.n_steps {
        let (step, impact) = match execute_step(generator, &start, robot, scenario, k) {
            Ok(done) => done,
            Err(error @ (PtaError::UnreachableAt { .. } | PtaError::Unreachable { .. })) => {
                outcome = Outcome::Unreachable { step: k, error };
                break;
            }
            Err(other) => return Err(other),
        };
        let hip_vx = (step.end.hip.x - step.samples[step.samples.len() - 1].hip.x) / dt;
        start = step.next_start(hip_vx);
        steps.push(step);
        impacts.push(impact);

        // Single-support samples of every finished step have both
        // neighbours by now, so their accelerations are final.
        zmp = trace(&concatenate(&steps), robot, dt)?;
        if scenario.stop_on_violation {
            if let Some(v) = zmp.first_single_support_violation() {
                let step = steps.iter().rposition(|s| s.samples[0].t <= v.t).unwrap_or(0);
                outcome = Outcome::ZmpViolation { step, t: v.t };
                break;
            }
        }
    }

    let completed_steps = match &outcome {
        Outcome::Completed => steps.len(),
        Outcome::ZmpViolation { step, .. } | Outcome::Unreachable { step, .. } => *step,
    };
    if let Outcome::ZmpViolation { t, .. } = outcome {
        impacts.retain(|r| r.t_impact < t);
    }
    let single_support_violations = zmp.single_support_violations().count();
    Ok(ExperimentReport {
        generator: generator.name().to_string(),
        requested_steps: scenario.n_steps,
        completed_steps,
        outcome,
        steps,
        impacts,
        zmp,
        single_support_violations,
    })
}

/// One blind step onto ground that rises 1 cm ahead of the stance foot.
pub fn run_experiment_1(
    generator: &dyn GaitGenerator,
    robot: &RobotParams,
    ground: &TerrainProfile,
) -> Result<ExperimentReport> {
    execute_walk(generator, robot, &Scenario::blind(ground.clone(), 1))
}

/// A walk across the obstacle field, ended by the first single-support
/// ZMP violation. Footholds are planned on the real ground; strikes on
/// block edges along the way still cut steps short.
pub fn run_experiment_2(
    generator: &dyn GaitGenerator,
    robot: &RobotParams,
    ground: &TerrainProfile,
    n_steps: usize,
) -> Result<ExperimentReport> {
    execute_walk(generator, robot, &Scenario::known(ground.clone(), n_steps))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub generator: String,
    pub t_impact: f64,
    pub v_x: f64,
    pub v_z: f64,
    pub speed_pre: f64,
    pub impulse: f64,
    pub force: f64,
}

/// Touchdown of a single blind step for each generator, sorted by
/// ascending pre-impact speed.
pub fn compare(
    generators: &[&dyn GaitGenerator],
    robot: &RobotParams,
    ground: &TerrainProfile,
    impact: &ImpactModel,
) -> Result<Vec<ComparisonRow>> {
    let mut rows = generators
        .iter()
        .map(|g| {
            let scenario = Scenario { impact: *impact, ..Scenario::blind(ground.clone(), 1) };
            let report = execute_walk(*g, robot, &scenario)?;
            let impact = report.impacts.first().copied().ok_or(PtaError::NoTouchdown)?;
            Ok(ComparisonRow {
                generator: report.generator,
                t_impact: impact.t_impact,
                v_x: impact.v_pre.x,
                v_z: impact.v_pre.z,
                speed_pre: impact.speed_pre,
                impulse: impact.impulse,
                force: impact.force,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.speed_pre.total_cmp(&b.speed_pre).then_with(|| a.force.total_cmp(&b.force)));
    Ok(rows)
}
