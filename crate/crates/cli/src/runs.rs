//! Fully resolved run configurations, serialized as sidecar files so any
//! output can be regenerated from its sidecar alone.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use vmplace::baselines::{GaParams, PsoParams};
use vmplace::experiments::ScenarioConfig;
use vmplace::lamocs::SolverParams;
use vmplace::GeneratorConfig;

use crate::commands::CliError;
use crate::{GeneratorFlags, SolverFlags};

/// Sidecar file name inside output directories.
pub const SIDECAR: &str = "config.toml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverArg {
    Lamocs,
    Ga,
    Pso,
    Brute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenRun {
    pub pms: usize,
    pub vms: usize,
    pub seed: u64,
    pub generator: GeneratorConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRun {
    pub instance: PathBuf,
    pub instance_hash: String,
    pub solver: SolverArg,
    pub front: bool,
    pub lamocs: SolverParams,
    pub ga: GaParams,
    pub pso: PsoParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareRun {
    pub instance: PathBuf,
    pub instance_hash: String,
    pub repetitions: usize,
    pub seed: u64,
    pub lamocs: SolverParams,
    pub ga: GaParams,
    pub pso: PsoParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    VmCount,
    PopulationSize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRun {
    pub mode: SweepMode,
    /// Population sizes of a population-size sweep.
    pub pop_sizes: Vec<usize>,
    /// VM count of a population-size sweep.
    pub fixed_vm_count: usize,
    pub scenario: ScenarioConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParetoRun {
    pub instance: PathBuf,
    pub instance_hash: String,
    pub at: Vec<usize>,
    pub lamocs: SolverParams,
}

/// One command's effective configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Run {
    Gen(GenRun),
    Solve(SolveRun),
    Compare(CompareRun),
    Sweep(SweepRun),
    Pareto(ParetoRun),
}

impl Run {
    fn name(&self) -> &'static str {
        match self {
            Run::Gen(_) => "gen",
            Run::Solve(_) => "solve",
            Run::Compare(_) => "compare",
            Run::Sweep(_) => "sweep",
            Run::Pareto(_) => "pareto",
        }
    }
}

// TOML integers are signed 64-bit.
fn check_seed(seed: u64) -> Result<u64, CliError> {
    if seed > i64::MAX as u64 {
        Err(CliError::Usage(format!("seed {seed} exceeds {}", i64::MAX)))
    } else {
        Ok(seed)
    }
}

pub fn load(path: &Path) -> Result<Run, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn save(run: &Run, path: &Path) -> Result<(), CliError> {
    let text = toml::to_string(run)
        .map_err(|e| CliError::Usage(format!("cannot serialize config: {e}")))?;
    fs::write(path, text).map_err(|e| CliError::Io(path.to_owned(), e))
}

macro_rules! loader {
    ($fn:ident, $variant:ident, $ty:ty) => {
        /// Loads a sidecar that must belong to this command.
        pub fn $fn(path: Option<&Path>) -> Result<Option<$ty>, CliError> {
            let Some(path) = path else { return Ok(None) };
            match load(path)? {
                Run::$variant(r) => Ok(Some(r)),
                other => Err(CliError::Usage(format!(
                    "{} holds a `{}` configuration",
                    path.display(),
                    other.name()
                ))),
            }
        }
    };
}

loader!(load_gen, Gen, GenRun);
loader!(load_solve, Solve, SolveRun);
loader!(load_compare, Compare, CompareRun);
loader!(load_sweep, Sweep, SweepRun);
loader!(load_pareto, Pareto, ParetoRun);

pub fn apply_generator(flags: &GeneratorFlags, g: &mut GeneratorConfig) {
    if let Some(v) = flags.threshold {
        g.cpu_threshold = v;
    }
    if let Some(v) = flags.load_fraction {
        g.load_fraction = v;
    }
    if let Some(v) = flags.mem_load_fraction {
        g.mem_load_fraction = v;
    }
    if let Some(v) = flags.idle_ratio {
        g.idle_ratio = v;
    }
}

/// Overrides solver parameters with any flags given; `seed` goes to all three.
pub fn apply_solver(
    flags: &SolverFlags,
    seed: Option<u64>,
    lamocs: &mut SolverParams,
    ga: &mut GaParams,
    pso: &mut PsoParams,
) -> Result<(), CliError> {
    if let Some(s) = seed {
        let s = check_seed(s)?;
        lamocs.seed = s;
        ga.seed = s;
        pso.seed = s;
    }
    if let Some(p) = flags.pop {
        lamocs.population_size = p;
        ga.population_size = p;
        pso.population_size = p;
    }
    if let Some(c) = flags.cycles {
        lamocs.max_cycles = c;
        ga.max_cycles = c;
        pso.max_cycles = c;
    }
    if let Some(v) = flags.pa {
        lamocs.pa = v;
    }
    if let Some(v) = flags.levy_beta {
        lamocs.levy_beta = v;
    }
    if let Some(v) = flags.penalty {
        lamocs.penalty_factor = v;
    }
    if let Some(v) = flags.reward {
        lamocs.reward_factor = v;
    }
    if flags.step_scale.is_some() {
        lamocs.step_scale = flags.step_scale;
    }
    if let Some(v) = flags.crossover_rate {
        ga.crossover_rate = v;
    }
    if flags.mutation_rate.is_some() {
        ga.mutation_rate = flags.mutation_rate;
    }
    if let Some(v) = flags.tournament {
        ga.tournament_size = v;
    }
    if let Some(v) = flags.inertia {
        pso.inertia = v;
    }
    if let Some(v) = flags.cognitive {
        pso.cognitive = v;
    }
    if let Some(v) = flags.social {
        pso.social = v;
    }
    if flags.max_velocity.is_some() {
        pso.max_velocity = flags.max_velocity;
    }
    Ok(())
}

pub fn seed_flag(seed: Option<u64>) -> Result<Option<u64>, CliError> {
    seed.map(check_seed).transpose()
}
