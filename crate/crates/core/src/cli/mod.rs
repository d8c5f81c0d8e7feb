//! The `pta` command line.
//!
//! Exit status is 0 on success, 2 for a bad command line or configuration
//! and 3 when generation or simulation fails.

pub mod config;
pub mod export;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::PtaError;
use crate::impact::ImpactModel;
use crate::kinematics::{RobotParams, Side};
use crate::sim::{
    compare, execute_walk, experiment_gait, obstacle_terrain, raised_step_terrain, ExperimentReport, GeneratorKind,
    Scenario, TerrainProfile,
};
use crate::trajectory::{walk_with, GaitParams, StepTrajectory};
use crate::zmp::trace_walk;

pub use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Run(#[from] PtaError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Run(_) | CliError::Io { .. } => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pta", version, about = "Biped walking trajectories, ZMP traces and terrain experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Key-value configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true, value_name = "pta|lipm")]
    pub generator: Option<GeneratorKind>,
    /// Number of steps to walk.
    #[arg(long, global = true, value_name = "N")]
    pub steps: Option<usize>,
    /// Sampling interval.
    #[arg(long, global = true, value_name = "SECONDS")]
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Write per-step and whole-walk trajectory CSVs.
    Generate,
    /// Write the ZMP trace of a walk.
    Zmp,
    /// Run the raised-step (1) or obstacle-field (2) experiment.
    Experiment {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
    /// Compare touchdown impacts of the generators on the raised step.
    Compare,
}

/// Everything a command needs, validated.
#[derive(Debug, Clone)]
pub struct Settings {
    pub robot: RobotParams,
    pub gait: GaitParams,
    /// Generators to run; one unless a command compares several.
    pub generators: Vec<GeneratorKind>,
    pub terrain: TerrainProfile,
    pub steps: usize,
    pub impact: ImpactModel,
    pub out: PathBuf,
}

impl Settings {
    pub fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let config = match &cli.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let (base, terrain, steps) = match cli.command {
            Command::Generate | Command::Zmp => (GaitParams::default(), TerrainProfile::flat(), 3),
            Command::Experiment { which: 1 } | Command::Compare => (experiment_gait(), raised_step_terrain(), 1),
            Command::Experiment { .. } => (experiment_gait(), obstacle_terrain(), 20),
        };
        let mut gait = config.gait(base);
        if let Some(dt) = cli.dt {
            gait.dt = dt;
        }
        let generator = cli.generator.or(config.generator);
        let generators = match (cli.command, generator) {
            (Command::Experiment { .. } | Command::Compare, None) => GeneratorKind::ALL.to_vec(),
            (_, g) => vec![g.unwrap_or(GeneratorKind::Pta)],
        };
        let steps = match cli.command {
            Command::Experiment { which: 1 } | Command::Compare => 1,
            _ => cli.steps.or(config.steps).unwrap_or(steps),
        };
        let settings = Self {
            robot: config.robot(),
            gait,
            generators,
            terrain: config.terrain.clone().unwrap_or(terrain),
            steps,
            impact: config.impact(),
            out: cli.out.clone(),
        };
        settings.validate()?;
        Ok(settings)
    }

    fn validate(&self) -> Result<(), CliError> {
        let config = |e: PtaError| CliError::Config(e.to_string());
        self.robot.validate().map_err(config)?;
        self.gait.validate().map_err(config)?;
        for kind in &self.generators {
            kind.build(&self.gait).gait().validate().map_err(config)?;
        }
        if self.steps == 0 {
            return Err(CliError::Config("`steps` must be at least 1".into()));
        }
        crate::impact::impact_force(0.0, self.impact.m_eff, self.impact.tau).map_err(config)?;
        Ok(())
    }

    fn walk(&self, kind: GeneratorKind) -> Result<Vec<StepTrajectory>, CliError> {
        let generator = kind.build(&self.gait);
        Ok(walk_with(generator.as_ref(), &self.robot, &self.terrain, self.steps, Side::Right)?)
    }
}

struct Output<'a> {
    dir: &'a Path,
    written: Vec<String>,
}

impl<'a> Output<'a> {
    fn create(dir: &'a Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
        Ok(Self { dir, written: Vec::new() })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        export::write_atomic(self.dir, name, contents)
            .map_err(|source| CliError::Io { path: self.dir.join(name), source })?;
        self.written.push(name.to_string());
        Ok(())
    }
}

pub fn cmd_generate(settings: &Settings) -> Result<Vec<String>, CliError> {
    let steps = settings.walk(settings.generators[0])?;
    let mut out = Output::create(&settings.out)?;
    for step in &steps {
        out.write(&format!("step_{:03}.csv", step.step_index), &export::step_csv(step))?;
    }
    out.write("walk.csv", &export::walk_csv(&steps))?;
    Ok(out.written)
}

pub fn cmd_zmp(settings: &Settings) -> Result<Vec<String>, CliError> {
    let steps = settings.walk(settings.generators[0])?;
    let trace = trace_walk(&steps, &settings.robot)?;
    let mut out = Output::create(&settings.out)?;
    out.write("zmp.csv", &export::zmp_csv(&trace))?;
    let violations = trace.single_support_violations().count();
    println!(
        "{} samples, {violations} single-support violations, min margin {:.3} cm",
        trace.samples.len(),
        trace.worst_single_support_margin()
    );
    Ok(out.written)
}

pub fn run_experiment(settings: &Settings, which: u8) -> Result<Vec<ExperimentReport>, CliError> {
    settings
        .generators
        .iter()
        .map(|kind| {
            let scenario = if which == 1 {
                Scenario::blind(settings.terrain.clone(), 1)
            } else {
                Scenario::known(settings.terrain.clone(), settings.steps)
            };
            let scenario = Scenario { impact: settings.impact, ..scenario };
            Ok(execute_walk(kind.build(&settings.gait).as_ref(), &settings.robot, &scenario)?)
        })
        .collect()
}

pub fn cmd_experiment(settings: &Settings, which: u8) -> Result<Vec<String>, CliError> {
    let reports = run_experiment(settings, which)?;
    let mut out = Output::create(&settings.out)?;
    for r in &reports {
        let stem = format!("experiment{which}_{}", r.generator);
        out.write(&format!("{stem}_impacts.csv"), &export::impacts_csv(&r.impacts))?;
        out.write(&format!("{stem}_zmp.csv"), &export::zmp_csv(&r.zmp))?;
        out.write(&format!("{stem}_walk.csv"), &export::walk_csv(&r.steps))?;
    }
    let title = match which {
        1 => "Experiment 1: one blind step onto raised ground",
        _ => "Experiment 2: walk across the obstacle field",
    };
    let text = export::summary(title, &reports);
    out.write(&format!("experiment{which}_summary.txt"), &text)?;
    print!("{text}");
    Ok(out.written)
}

pub fn cmd_compare(settings: &Settings) -> Result<Vec<String>, CliError> {
    let generators: Vec<_> = settings.generators.iter().map(|k| k.build(&settings.gait)).collect();
    let refs: Vec<_> = generators.iter().map(|g| g.as_ref()).collect();
    let rows = compare(&refs, &settings.robot, &settings.terrain, &settings.impact)?;
    let mut out = Output::create(&settings.out)?;
    out.write("compare.csv", &export::compare_csv(&rows))?;
    print!("{}", export::compare_table(&rows));
    Ok(out.written)
}

pub fn execute(cli: &Cli) -> Result<Vec<String>, CliError> {
    let settings = Settings::resolve(cli)?;
    match cli.command {
        Command::Generate => cmd_generate(&settings),
        Command::Zmp => cmd_zmp(&settings),
        Command::Experiment { which } => cmd_experiment(&settings, which),
        Command::Compare => cmd_compare(&settings),
    }
}

/// Parses `args`, runs the command and maps the result to an exit status.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(written) => {
            eprintln!("wrote {} file(s) to {}", written.len(), cli.out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
