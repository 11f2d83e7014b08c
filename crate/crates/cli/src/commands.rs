use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use vmplace::baselines::{ga_solve, pso_solve, GaParams, PsoParams};
use vmplace::experiments::{
    aggregate, emit_csv, emit_plot_data, emit_time_plot, emit_timings, read_csv, run_comparison,
    run_popsize_sweep, run_vm_sweep, snapshot_pareto, write_snapshot, Axis, ExperimentRecord,
    ScenarioConfig, SolverKind,
};
use vmplace::instance::{content_hash, generate_instance, read_instance, write_instance};
use vmplace::lamocs::{self, brute_force, SolverParams};
use vmplace::objectives::metrics;
use vmplace::{PlacementProblem, Solution};

use crate::runs::{
    self, CompareRun, GenRun, ParetoRun, Run, SolveRun, SolverArg, SweepMode, SweepRun, SIDECAR,
};
use crate::{AxisArg, CompareArgs, GenArgs, ParetoArgs, ReportArgs, SolveArgs, SweepArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Core(vmplace::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(..) => 4,
            CliError::Core(e) => match e.root() {
                vmplace::Error::NoFeasibleSolution => 3,
                vmplace::Error::Io { .. } => 4,
                vmplace::Error::Csv(c) if c.is_io_error() => 4,
                _ => 2,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<vmplace::Error> for CliError {
    fn from(e: vmplace::Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn required<T>(value: Option<T>, what: &str) -> Result<T> {
    value.ok_or_else(|| CliError::Usage(format!("{what} is required (or pass --config)")))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_owned(), e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_owned(), e))
}

/// Reads an instance; when re-running from a sidecar, checks its content
/// hash against the recorded one.
fn load_instance(
    flag: Option<PathBuf>,
    recorded: Option<(&Path, &str)>,
) -> Result<(PathBuf, PlacementProblem, String)> {
    let path = match (flag, recorded) {
        (Some(p), _) => p,
        (None, Some((p, _))) => p.to_owned(),
        (None, None) => {
            return Err(CliError::Usage(
                "an instance file is required (or pass --config)".into(),
            ))
        }
    };
    let problem = read_instance(&path)?;
    let hash = content_hash(&problem);
    if let Some((_, expected)) = recorded {
        if expected != hash {
            return Err(CliError::Usage(format!(
                "{} does not match the recorded instance hash {expected}",
                path.display()
            )));
        }
    }
    let path = fs::canonicalize(&path).map_err(|e| CliError::Io(path.clone(), e))?;
    Ok((path, problem, hash))
}

pub fn gen(a: GenArgs) -> Result<()> {
    let base = runs::load_gen(a.config.as_deref())?;
    let mut run = GenRun {
        pms: required(
            a.pms.map(|v| v as usize).or(base.as_ref().map(|b| b.pms)),
            "--pms",
        )?,
        vms: required(
            a.vms.map(|v| v as usize).or(base.as_ref().map(|b| b.vms)),
            "--vms",
        )?,
        seed: runs::seed_flag(a.seed)?
            .or(base.as_ref().map(|b| b.seed))
            .unwrap_or(0),
        generator: base.map(|b| b.generator).unwrap_or_default(),
    };
    runs::apply_generator(&a.generator, &mut run.generator);
    let problem = generate_instance(run.pms, run.vms, run.seed, &run.generator)?;
    write_instance(&problem, &a.output)?;
    let mut sidecar = a.output.clone().into_os_string();
    sidecar.push(".config.toml");
    runs::save(&Run::Gen(run.clone()), Path::new(&sidecar))?;

    let capacity = problem.total_cpu_capacity();
    let demand = problem.total_cpu_demand();
    println!("seed = {}", run.seed);
    println!("physical machines = {}", problem.n_pms());
    println!("virtual machines = {}", problem.n_vms());
    println!("total cpu capacity = {capacity:.4}");
    println!("total cpu demand = {demand:.4}");
    println!("load ratio = {:.4}", demand / capacity);
    println!("instance hash = {}", content_hash(&problem));
    println!("wrote {}", a.output.display());
    Ok(())
}

#[derive(Serialize)]
struct SolveSummary<'a> {
    solver: SolverArg,
    seed: u64,
    instance_hash: &'a str,
    feasible: bool,
    energy: f64,
    waste: f64,
    neg_utilization: f64,
    active_servers: usize,
    mean_cpu_utilization: f64,
    load_balance: f64,
    total_power: f64,
    evaluations: u64,
}

fn front_text(front: &[Solution]) -> String {
    let mut points: Vec<_> = front.iter().map(|s| s.objectives).collect();
    points.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.waste.total_cmp(&b.waste))
            .then(a.neg_utilization.total_cmp(&b.neg_utilization))
    });
    let mut text = String::from("# energy waste neg_utilization\n");
    for p in points {
        text.push_str(&format!("{} {} {}\n", p.energy, p.waste, p.neg_utilization));
    }
    text
}

pub fn solve(a: SolveArgs) -> Result<()> {
    let base = runs::load_solve(a.config.as_deref())?;
    let recorded = base
        .as_ref()
        .map(|b| (b.instance.as_path(), b.instance_hash.as_str()));
    let (path, problem, hash) = load_instance(a.instance, recorded)?;
    let mut run = match base {
        Some(b) => b,
        None => SolveRun {
            instance: PathBuf::new(),
            instance_hash: String::new(),
            solver: SolverArg::Lamocs,
            front: false,
            lamocs: SolverParams::default(),
            ga: GaParams::default(),
            pso: PsoParams::default(),
        },
    };
    run.instance = path;
    run.instance_hash = hash;
    run.solver = a.solver.unwrap_or(run.solver);
    run.front |= a.front;
    runs::apply_solver(
        &a.params,
        a.seed,
        &mut run.lamocs,
        &mut run.ga,
        &mut run.pso,
    )?;

    let start = Instant::now();
    let (seed, front, best, evaluations) = match run.solver {
        SolverArg::Lamocs => {
            let r = lamocs::solve(&problem, &run.lamocs)?;
            (run.lamocs.seed, r.pareto_front, r.best, r.evaluations)
        }
        SolverArg::Ga => {
            let r = ga_solve(&problem, &run.ga)?;
            (run.ga.seed, r.pareto_front, r.best, r.evaluations)
        }
        SolverArg::Pso => {
            let r = pso_solve(&problem, &run.pso)?;
            (run.pso.seed, r.pareto_front, r.best, r.evaluations)
        }
        SolverArg::Brute => {
            let b = brute_force(&problem)?;
            let count = (problem.n_pms() as u64).pow(problem.n_vms() as u32);
            (run.lamocs.seed, vec![b.clone()], b, count)
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    let row = metrics(&problem, &best.placement, elapsed)?;

    create_dir(&a.output)?;
    let mut placement = String::from("vm,pm\n");
    for (i, j) in best.placement.0.iter().enumerate() {
        placement.push_str(&format!("{i},{j}\n"));
    }
    write_text(&a.output.join("placement.csv"), &placement)?;
    let summary = SolveSummary {
        solver: run.solver,
        seed,
        instance_hash: &run.instance_hash,
        feasible: best.feasible,
        energy: best.objectives.energy,
        waste: best.objectives.waste,
        neg_utilization: best.objectives.neg_utilization,
        active_servers: row.active_servers,
        mean_cpu_utilization: row.mean_cpu_utilization,
        load_balance: row.load_balance,
        total_power: row.total_power,
        evaluations,
    };
    let summary_text = toml::to_string(&summary).map_err(|e| CliError::Usage(e.to_string()))?;
    write_text(&a.output.join("summary.toml"), &summary_text)?;
    if run.front {
        write_text(&a.output.join("front.dat"), &front_text(&front))?;
    }
    runs::save(&Run::Solve(run.clone()), &a.output.join(SIDECAR))?;

    println!("solver = {}", solver_name(run.solver));
    println!("seed = {seed}");
    println!("best energy = {}", best.objectives.energy);
    println!("waste = {}", best.objectives.waste);
    println!("active servers = {}", row.active_servers);
    println!("pareto front size = {}", front.len());
    println!("evaluations = {evaluations}");
    println!("elapsed = {elapsed:.3} s");
    println!("wrote {}", a.output.display());
    Ok(())
}

fn solver_name(s: SolverArg) -> &'static str {
    match s {
        SolverArg::Lamocs => "lamocs",
        SolverArg::Ga => "ga",
        SolverArg::Pso => "pso",
        SolverArg::Brute => "brute",
    }
}

fn emit_all(records: &[ExperimentRecord], dir: &Path, axis: Axis) -> Result<()> {
    create_dir(dir)?;
    emit_csv(records, dir.join("records.csv"))?;
    emit_timings(records, dir.join("timings.csv"))?;
    emit_plot_data(records, dir, axis)?;
    emit_time_plot(records, dir, axis)?;
    Ok(())
}

// Records read back from CSV carry no timings, so the time column is optional.
fn print_summary(records: &[ExperimentRecord], axis: Axis, with_time: bool) {
    let energy = aggregate(records, axis, |m| m.energy);
    let waste = aggregate(records, axis, |m| m.waste);
    let active = aggregate(records, axis, |m| m.active_servers as f64);
    let time = aggregate(records, axis, |m| m.processing_time);
    let mut header = format!(
        "{:>16} {:>7} {:>26} {:>14} {:>8}",
        axis.name(),
        "solver",
        "energy (mean ± std)",
        "waste (mean)",
        "servers"
    );
    if with_time {
        header.push_str(&format!(" {:>9}", "time (s)"));
    }
    println!("{header}");
    for (x, by_solver) in &energy {
        for (s, (e_mean, e_std)) in by_solver {
            let mut line = format!(
                "{x:>16} {:>7} {:>26} {:>14.4} {:>8.2}",
                s.name(),
                format!("{e_mean:.2} ± {e_std:.2}"),
                waste[x][s].0,
                active[x][s].0,
            );
            if with_time {
                line.push_str(&format!(" {:>9.3}", time[x][s].0));
            }
            println!("{line}");
        }
    }
}

pub fn compare(a: CompareArgs) -> Result<()> {
    let base = runs::load_compare(a.config.as_deref())?;
    let recorded = base
        .as_ref()
        .map(|b| (b.instance.as_path(), b.instance_hash.as_str()));
    let (path, problem, hash) = load_instance(a.instance, recorded)?;
    let mut run = match base {
        Some(b) => b,
        None => {
            let d = ScenarioConfig::default();
            CompareRun {
                instance: PathBuf::new(),
                instance_hash: String::new(),
                repetitions: d.repetitions,
                seed: d.base_seed,
                lamocs: d.lamocs,
                ga: d.ga,
                pso: d.pso,
            }
        }
    };
    run.instance = path;
    run.instance_hash = hash;
    run.repetitions = a.repetitions.unwrap_or(run.repetitions);
    run.seed = runs::seed_flag(a.seed)?.unwrap_or(run.seed);
    runs::apply_solver(&a.params, None, &mut run.lamocs, &mut run.ga, &mut run.pso)?;

    let config = ScenarioConfig {
        repetitions: run.repetitions,
        base_seed: run.seed,
        lamocs: run.lamocs.clone(),
        ga: run.ga.clone(),
        pso: run.pso.clone(),
        ..Default::default()
    };
    let records = run_comparison(&problem, &config, a.jobs)?;
    emit_all(&records, &a.output, Axis::VmCount)?;
    runs::save(&Run::Compare(run.clone()), &a.output.join(SIDECAR))?;

    println!("seed = {}", run.seed);
    println!("repetitions = {}", run.repetitions);
    print_summary(&records, Axis::VmCount, true);
    println!("wrote {}", a.output.display());
    Ok(())
}

pub fn sweep(a: SweepArgs) -> Result<()> {
    let base = runs::load_sweep(a.config.as_deref())?;
    let mut run = base.unwrap_or_else(|| SweepRun {
        mode: SweepMode::VmCount,
        pop_sizes: vec![50, 100, 200],
        fixed_vm_count: 100,
        scenario: ScenarioConfig::default(),
    });
    match (a.vm_counts, a.pop_sizes) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--vm-counts and --pop-sizes are exclusive".into(),
            ));
        }
        (Some(v), None) => {
            run.mode = SweepMode::VmCount;
            run.scenario.vm_counts = v;
        }
        (None, Some(p)) => {
            run.mode = SweepMode::PopulationSize;
            run.pop_sizes = p;
        }
        (None, None) => {}
    }
    run.fixed_vm_count = a.fixed_vms.unwrap_or(run.fixed_vm_count);
    let sc = &mut run.scenario;
    if a.pms.is_some() {
        sc.pm_count = a.pms;
    }
    sc.pms_per_vm = a.pms_per_vm.unwrap_or(sc.pms_per_vm);
    sc.repetitions = a.repetitions.unwrap_or(sc.repetitions);
    sc.base_seed = runs::seed_flag(a.seed)?.unwrap_or(sc.base_seed);
    runs::apply_generator(&a.generator, &mut sc.generator);
    runs::apply_solver(&a.params, None, &mut sc.lamocs, &mut sc.ga, &mut sc.pso)?;
    sc.validate()?;

    let (records, axis) = match run.mode {
        SweepMode::VmCount => (run_vm_sweep(&run.scenario, a.jobs)?, Axis::VmCount),
        SweepMode::PopulationSize => (
            run_popsize_sweep(&run.scenario, &run.pop_sizes, run.fixed_vm_count, a.jobs)?,
            Axis::PopulationSize,
        ),
    };
    emit_all(&records, &a.output, axis)?;
    runs::save(&Run::Sweep(run.clone()), &a.output.join(SIDECAR))?;

    println!("seed = {}", run.scenario.base_seed);
    println!("records = {}", records.len());
    print_summary(&records, axis, true);
    println!("wrote {}", a.output.display());
    Ok(())
}

pub fn pareto(a: ParetoArgs) -> Result<()> {
    let base = runs::load_pareto(a.config.as_deref())?;
    let recorded = base
        .as_ref()
        .map(|b| (b.instance.as_path(), b.instance_hash.as_str()));
    let (path, problem, hash) = load_instance(a.instance, recorded)?;
    let mut run = base.unwrap_or_else(|| ParetoRun {
        instance: PathBuf::new(),
        instance_hash: String::new(),
        at: vec![100, 500],
        lamocs: SolverParams::default(),
    });
    run.instance = path;
    run.instance_hash = hash;
    run.at = a.at.unwrap_or(run.at);
    let (mut ga, mut pso) = (GaParams::default(), PsoParams::default());
    runs::apply_solver(&a.params, a.seed, &mut run.lamocs, &mut ga, &mut pso)?;

    let (snapshots, _) = snapshot_pareto(&problem, &run.lamocs, &run.at)?;
    create_dir(&a.output)?;
    for snap in &snapshots {
        write_snapshot(
            snap,
            a.output.join(format!("front_cycle_{}.dat", snap.cycle)),
        )?;
    }
    runs::save(&Run::Pareto(run.clone()), &a.output.join(SIDECAR))?;

    println!("seed = {}", run.lamocs.seed);
    for snap in &snapshots {
        let min = snap
            .points
            .iter()
            .map(|p| p.energy)
            .fold(f64::INFINITY, f64::min);
        println!(
            "cycle {}: {} non-dominated points, min energy {min}",
            snap.cycle,
            snap.points.len()
        );
    }
    println!("wrote {}", a.output.display());
    Ok(())
}

pub fn report(a: ReportArgs) -> Result<()> {
    let records = read_csv(&a.records)?;
    if records.is_empty() {
        return Err(CliError::Usage(format!(
            "{} holds no records",
            a.records.display()
        )));
    }
    let axis = match a.axis {
        AxisArg::Vms => Axis::VmCount,
        AxisArg::Pop => Axis::PopulationSize,
    };
    let solvers: Vec<SolverKind> = {
        let mut s: Vec<_> = records.iter().map(|r| r.solver).collect();
        s.dedup();
        s
    };
    println!("records = {}", records.len());
    println!(
        "solvers = {}",
        solvers
            .iter()
            .map(|s| s.name())
            .collect::<Vec<_>>()
            .join(",")
    );
    let seeds: std::collections::BTreeSet<u64> = records.iter().map(|r| r.seed).collect();
    println!(
        "seeds = {}",
        seeds
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    print_summary(&records, axis, false);
    if let Some(dir) = a.plots {
        create_dir(&dir)?;
        emit_plot_data(&records, &dir, axis)?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}
