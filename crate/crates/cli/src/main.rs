//! `vmplace` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 no feasible
//! solution found, 4 I/O error.

mod commands;
mod runs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::runs::SolverArg;

#[derive(Parser)]
#[command(
    name = "vmplace",
    version,
    about = "Energy-aware virtual machine placement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Solve one instance with one solver.
    Solve(SolveArgs),
    /// Run every solver repeatedly on one instance.
    Compare(CompareArgs),
    /// Sweep VM counts or population sizes over generated instances.
    Sweep(SweepArgs),
    /// Dump the LAMOCS Pareto archive at selected cycles.
    Pareto(ParetoArgs),
    /// Summarize a records CSV and optionally regenerate plot data.
    Report(ReportArgs),
}

#[derive(Args)]
pub struct GenArgs {
    /// Number of physical machines.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub pms: Option<u64>,
    /// Number of virtual machines.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub vms: Option<u64>,
    /// Generator seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Instance file to write; a `.config.toml` sidecar is written next to it.
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub generator: GeneratorFlags,
    /// Re-run from a sidecar config; other flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Default)]
pub struct GeneratorFlags {
    /// Per-machine CPU cap as a fraction of capacity [default: 0.95].
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Minimum total VM CPU demand as a fraction of total capacity [default: 0.9].
    #[arg(long)]
    pub load_fraction: Option<f64>,
    /// Maximum total VM memory as a fraction of total memory [default: 0.5].
    #[arg(long)]
    pub mem_load_fraction: Option<f64>,
    /// Idle power as a fraction of busy power [default: 0.6].
    #[arg(long)]
    pub idle_ratio: Option<f64>,
}

#[derive(Args, Default)]
pub struct SolverFlags {
    /// Population size for every solver [default: 100].
    #[arg(long)]
    pub pop: Option<usize>,
    /// Cycles for every solver; GA and PSO get the matching evaluation budget [default: 500].
    #[arg(long)]
    pub cycles: Option<usize>,
    /// LAMOCS abandon fraction [default: 0.25].
    #[arg(long)]
    pub pa: Option<f64>,
    /// LAMOCS Lévy exponent in (1, 2] [default: 1.5].
    #[arg(long)]
    pub levy_beta: Option<f64>,
    /// LAMOCS automata penalty factor b [default: 0.5].
    #[arg(long)]
    pub penalty: Option<f64>,
    /// LAMOCS automata reward factor a [default: 0.5].
    #[arg(long)]
    pub reward: Option<f64>,
    /// LAMOCS Lévy step multiplier in key space [default: 1/n].
    #[arg(long)]
    pub step_scale: Option<f64>,
    /// GA crossover probability [default: 0.9].
    #[arg(long)]
    pub crossover_rate: Option<f64>,
    /// GA per-gene mutation probability [default: 1/n].
    #[arg(long)]
    pub mutation_rate: Option<f64>,
    /// GA tournament size [default: 2].
    #[arg(long)]
    pub tournament: Option<usize>,
    /// PSO inertia weight [default: 0.7].
    #[arg(long)]
    pub inertia: Option<f64>,
    /// PSO cognitive coefficient [default: 1.5].
    #[arg(long)]
    pub cognitive: Option<f64>,
    /// PSO social coefficient [default: 1.5].
    #[arg(long)]
    pub social: Option<f64>,
    /// PSO velocity clamp [default: m/2].
    #[arg(long)]
    pub max_velocity: Option<f64>,
}

#[derive(Args)]
pub struct SolveArgs {
    /// Instance file.
    pub instance: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub solver: Option<SolverArg>,
    /// Solver seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub params: SolverFlags,
    /// Also write the final Pareto front (`front.dat`).
    #[arg(long)]
    pub front: bool,
    /// Output directory.
    #[arg(short, long, default_value = "vmplace-out")]
    pub output: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct CompareArgs {
    /// Instance file.
    pub instance: Option<PathBuf>,
    /// Runs per solver [default: 10].
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// Base seed for the solver seeds [default: 1].
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub params: SolverFlags,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(short, long, default_value = "vmplace-out")]
    pub output: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    /// VM counts to sweep [default: 20,40,60,80,100].
    #[arg(long, value_delimiter = ',')]
    pub vm_counts: Option<Vec<usize>>,
    /// Sweep these population sizes at `--fixed-vms` instead of VM counts.
    #[arg(long, value_delimiter = ',')]
    pub pop_sizes: Option<Vec<usize>>,
    /// VM count of the population-size sweep [default: 100].
    #[arg(long)]
    pub fixed_vms: Option<usize>,
    /// Fixed machine count; by default ceil(pms-per-vm × VMs).
    #[arg(long)]
    pub pms: Option<usize>,
    /// Machines per VM when `--pms` is absent [default: 0.4].
    #[arg(long)]
    pub pms_per_vm: Option<f64>,
    /// Instances per x value [default: 10].
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// Base seed [default: 1].
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub params: SolverFlags,
    #[command(flatten)]
    pub generator: GeneratorFlags,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(short, long, default_value = "vmplace-out")]
    pub output: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct ParetoArgs {
    /// Instance file.
    pub instance: Option<PathBuf>,
    /// Cycles after which to dump the archive [default: 100,500].
    #[arg(long, value_delimiter = ',')]
    pub at: Option<Vec<usize>>,
    /// Solver seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub params: SolverFlags,
    #[arg(short, long, default_value = "vmplace-out")]
    pub output: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum AxisArg {
    Vms,
    Pop,
}

#[derive(Args)]
pub struct ReportArgs {
    /// Records CSV written by `sweep` or `compare`.
    pub records: PathBuf,
    /// Grouping variable.
    #[arg(long, value_enum, default_value = "vms")]
    pub axis: AxisArg,
    /// Directory to write plot data into.
    #[arg(long)]
    pub plots: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Solve(a) => commands::solve(a),
        Command::Compare(a) => commands::compare(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Pareto(a) => commands::pareto(a),
        Command::Report(a) => commands::report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
