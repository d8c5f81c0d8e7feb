//! Flat `key = value` run configuration.
//!
//! ```text
//! # gait
//! single_support = 5
//! step_length = 10
//! swing_clearance = 4
//! generator = lipm
//! terrain = (15,2),(25,0),(30,2),(40,0)
//! ```
//!
//! Setting `single_support` or `step_length` re-derives the dependent gait
//! timing and boundary velocities first; every other gait key then
//! overrides a single field. `terrain` also accepts `flat`, `raised_step`
//! and `obstacles`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::impact::ImpactModel;
use crate::kinematics::RobotParams;
use crate::sim::{obstacle_terrain, raised_step_terrain, GeneratorKind, TerrainProfile};
use crate::trajectory::GaitParams;

use super::CliError;

const GAIT_KEYS: [&str; 17] = [
    "step_period",
    "single_support",
    "hip_mid_time",
    "apex_time",
    "step_length",
    "hip_height",
    "swing_clearance",
    "hip_lead",
    "v_xhs",
    "v_xhe",
    "v_zhs",
    "v_zhe",
    "a0",
    "y_hs",
    "y_he",
    "v_yhs",
    "dt",
];

const ROBOT_KEYS: [&str; 19] = [
    "m1", "m2", "m3", "m4", "m5", "m6", "m7", "l1", "l2", "l3", "l4", "l5", "l6", "l7", "hip_width", "foot_length",
    "foot_width", "foot_sub1", "foot_sub2",
];

/// Parsed configuration file. Everything is optional; each command fills
/// the gaps with its own defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    gait: BTreeMap<&'static str, f64>,
    robot: BTreeMap<&'static str, f64>,
    pub gravity: Option<f64>,
    pub generator: Option<GeneratorKind>,
    pub terrain: Option<TerrainProfile>,
    pub steps: Option<usize>,
    pub m_eff: Option<f64>,
    pub tau: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut config = Self::default();
        let mut seen = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`, got `{line}`", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.contains(&key) {
                return Err(CliError::Config(format!("line {}: `{key}` is set twice", n + 1)));
            }
            seen.push(key);
            config.set(key, value)?;
        }
        Ok(config)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if let Some(k) = GAIT_KEYS.iter().find(|k| **k == key) {
            self.gait.insert(k, number(key, value)?);
            return Ok(());
        }
        if let Some(k) = ROBOT_KEYS.iter().find(|k| **k == key) {
            self.robot.insert(k, number(key, value)?);
            return Ok(());
        }
        match key {
            "gravity" => self.gravity = Some(number(key, value)?),
            "m_eff" => self.m_eff = Some(number(key, value)?),
            "tau" => self.tau = Some(number(key, value)?),
            "steps" => {
                self.steps = Some(
                    value
                        .parse()
                        .map_err(|_| CliError::Config(format!("`steps`: expected a whole number, got `{value}`")))?,
                )
            }
            "generator" => self.generator = Some(value.parse().map_err(|e| CliError::Config(format!("`generator`: {e}")))?),
            "terrain" => self.terrain = Some(parse_terrain(value)?),
            other => return Err(CliError::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// `base` with this file's gait keys applied.
    pub fn gait(&self, base: GaitParams) -> GaitParams {
        let ts = self.gait.get("single_support");
        let length = self.gait.get("step_length");
        let mut gait = if ts.is_some() || length.is_some() {
            let mut g = GaitParams::with_timing(
                *ts.unwrap_or(&base.single_support),
                *length.unwrap_or(&base.step_length),
            );
            g.swing_clearance = base.swing_clearance;
            g.dt = base.dt;
            g
        } else {
            base
        };
        for (key, value) in &self.gait {
            *gait_field(&mut gait, key) = *value;
        }
        gait
    }

    pub fn robot(&self) -> RobotParams {
        let mut robot = RobotParams::default();
        for (key, value) in &self.robot {
            let slot = match *key {
                "hip_width" => &mut robot.hip_width,
                "foot_length" => &mut robot.foot_length,
                "foot_width" => &mut robot.foot_width,
                "foot_sub1" => &mut robot.foot_sub1,
                "foot_sub2" => &mut robot.foot_sub2,
                indexed => {
                    let i = indexed[1..].parse::<usize>().expect("robot keys are m1..m7 and l1..l7") - 1;
                    if indexed.starts_with('m') {
                        &mut robot.masses[i]
                    } else {
                        &mut robot.links[i]
                    }
                }
            };
            *slot = *value;
        }
        if let Some(g) = self.gravity {
            robot.gravity = g;
        }
        robot
    }

    pub fn impact(&self) -> ImpactModel {
        let default = ImpactModel::default();
        ImpactModel {
            m_eff: self.m_eff.unwrap_or(default.m_eff),
            tau: self.tau.unwrap_or(default.tau),
        }
    }
}

fn gait_field<'a>(gait: &'a mut GaitParams, key: &str) -> &'a mut f64 {
    match key {
        "step_period" => &mut gait.step_period,
        "single_support" => &mut gait.single_support,
        "hip_mid_time" => &mut gait.hip_mid_time,
        "apex_time" => &mut gait.apex_time,
        "step_length" => &mut gait.step_length,
        "hip_height" => &mut gait.hip_height,
        "swing_clearance" => &mut gait.swing_clearance,
        "hip_lead" => &mut gait.hip_lead,
        "v_xhs" => &mut gait.v_xhs,
        "v_xhe" => &mut gait.v_xhe,
        "v_zhs" => &mut gait.v_zhs,
        "v_zhe" => &mut gait.v_zhe,
        "a0" => &mut gait.a0,
        "y_hs" => &mut gait.y_hs,
        "y_he" => &mut gait.y_he,
        "v_yhs" => &mut gait.v_yhs,
        "dt" => &mut gait.dt,
        other => unreachable!("`{other}` is not a gait key"),
    }
}

fn number(key: &str, value: &str) -> Result<f64, CliError> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::Config(format!("`{key}`: expected a finite number, got `{value}`"))),
    }
}

/// `flat`, `raised_step`, `obstacles`, or a list like `(15,2),(25,0)`.
pub fn parse_terrain(value: &str) -> Result<TerrainProfile, CliError> {
    let bad = |why: String| CliError::Config(format!("`terrain`: {why}"));
    match value {
        "" | "flat" => return Ok(TerrainProfile::flat()),
        "raised_step" => return Ok(raised_step_terrain()),
        "obstacles" => return Ok(obstacle_terrain()),
        _ => {}
    }
    let compact: String = value.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| bad(format!("expected `(x,height),...`, got `{value}`")))?;
    let segments = inner
        .split("),(")
        .map(|pair| {
            let (x, h) = pair.split_once(',').ok_or_else(|| bad(format!("bad pair `({pair})`")))?;
            Ok((number("terrain", x)?, number("terrain", h)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    TerrainProfile::new(segments).map_err(|e| bad(e.to_string()))
}
