//! Experiment harness: VM-count sweeps, population-size sweeps and Pareto
//! snapshots across LAMOCS, GA and PSO, with CSV and columnar plot output.
//!
//! # Output formats
//!
//! The records CSV (UTF-8, LF, RFC 4180 quoting) has the fixed header
//!
//! ```text
//! solver,vm_count,pm_count,population_size,repetition,seed,instance_hash,
//! energy,waste,active_servers,mean_cpu_utilization,load_balance,total_power,evaluations
//! ```
//!
//! (one line). Wall-clock processing time is not reproducible, so it lives in
//! a separate timings CSV with header
//! `solver,vm_count,population_size,repetition,processing_time`.
//!
//! Plot files are whitespace-separated columns, one file per metric:
//! `# <axis> lamocs_mean lamocs_std ga_mean ga_std pso_mean pso_std`, one row
//! per x value, means and population standard deviations over repetitions.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::baselines::{ga_solve, pso_solve, GaParams, PsoParams};
use crate::error::{Error, Result};
use crate::instance::{
    content_hash, generate_instance, validate_placement, GeneratorConfig, PlacementProblem,
};
use crate::lamocs::{self, solve_with_observer, SolverParams};
use crate::objectives::{mean_std, metrics, MetricsRow, ObjectiveVector};
use crate::search::SolveResult;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Lamocs,
    Ga,
    Pso,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [SolverKind::Lamocs, SolverKind::Ga, SolverKind::Pso];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Lamocs => "lamocs",
            SolverKind::Ga => "ga",
            SolverKind::Pso => "pso",
        }
    }

    fn tag(self) -> u64 {
        self as u64
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lamocs" => Ok(SolverKind::Lamocs),
            "ga" => Ok(SolverKind::Ga),
            "pso" => Ok(SolverKind::Pso),
            other => Err(Error::InvalidConfig(format!("unknown solver {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub vm_counts: Vec<usize>,
    /// Fixed machine count; when absent it is `ceil(pms_per_vm · vm_count)`.
    pub pm_count: Option<usize>,
    pub pms_per_vm: f64,
    pub repetitions: usize,
    pub base_seed: u64,
    pub generator: GeneratorConfig,
    pub lamocs: SolverParams,
    pub ga: GaParams,
    pub pso: PsoParams,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            vm_counts: vec![20, 40, 60, 80, 100],
            pm_count: None,
            pms_per_vm: 0.4,
            repetitions: 10,
            base_seed: 1,
            generator: GeneratorConfig::default(),
            lamocs: SolverParams::default(),
            ga: GaParams::default(),
            pso: PsoParams::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1".into());
        }
        if self.vm_counts.is_empty() || self.vm_counts.contains(&0) {
            return bad("vm_counts must be nonempty and positive".into());
        }
        if self.vm_counts.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!(
                "vm_counts {:?} must be strictly ascending",
                self.vm_counts
            ));
        }
        if self.pm_count == Some(0) {
            return bad("pm_count must be positive".into());
        }
        if self.pm_count.is_none() && (self.pms_per_vm.is_nan() || self.pms_per_vm <= 0.0) {
            return bad(format!("pms_per_vm {} must be positive", self.pms_per_vm));
        }
        self.generator.validate()?;
        self.lamocs.validate()?;
        self.ga.validate()?;
        self.pso.validate()?;
        Ok(())
    }

    pub fn pm_count_for(&self, vm_count: usize) -> usize {
        self.pm_count
            .unwrap_or_else(|| ((self.pms_per_vm * vm_count as f64).ceil() as usize).max(1))
    }

    pub fn instance_seed(&self, vm_count: usize, repetition: usize) -> u64 {
        seed::derive(self.base_seed, &[vm_count as u64, repetition as u64])
    }

    pub fn instance(&self, vm_count: usize, repetition: usize) -> Result<PlacementProblem> {
        generate_instance(
            self.pm_count_for(vm_count),
            vm_count,
            self.instance_seed(vm_count, repetition),
            &self.generator,
        )
    }
}

/// One solver run on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub solver: SolverKind,
    pub vm_count: usize,
    pub pm_count: usize,
    pub population_size: usize,
    pub repetition: usize,
    /// Seed the instance was generated from.
    pub seed: u64,
    pub instance_hash: String,
    pub metrics: MetricsRow,
    pub evaluations: u64,
    /// Whether the returned placement passed `validate_placement`.
    pub feasible: bool,
}

/// Runs `solver` with its configured parameters, overriding population size
/// and seed.
pub fn run_solver(
    solver: SolverKind,
    problem: &PlacementProblem,
    config: &ScenarioConfig,
    population_size: usize,
    seed: u64,
) -> Result<SolveResult> {
    match solver {
        SolverKind::Lamocs => lamocs::solve(
            problem,
            &SolverParams {
                population_size,
                seed,
                ..config.lamocs.clone()
            },
        ),
        SolverKind::Ga => ga_solve(
            problem,
            &GaParams {
                population_size,
                seed,
                ..config.ga.clone()
            },
        ),
        SolverKind::Pso => pso_solve(
            problem,
            &PsoParams {
                population_size,
                seed,
                ..config.pso.clone()
            },
        ),
    }
}

fn default_population(config: &ScenarioConfig, solver: SolverKind) -> usize {
    match solver {
        SolverKind::Lamocs => config.lamocs.population_size,
        SolverKind::Ga => config.ga.population_size,
        SolverKind::Pso => config.pso.population_size,
    }
}

struct Task {
    vm_count: usize,
    repetition: usize,
    /// `None` runs every solver at its configured population size.
    population_sizes: Option<Vec<usize>>,
}

fn run_task(
    config: &ScenarioConfig,
    task: &Task,
    fixed: Option<&PlacementProblem>,
) -> Result<Vec<ExperimentRecord>> {
    let instance_seed = config.instance_seed(task.vm_count, task.repetition);
    let generated;
    let problem = match fixed {
        Some(p) => p,
        None => {
            generated = config.instance(task.vm_count, task.repetition)?;
            &generated
        }
    };
    let hash = content_hash(problem);
    let mut out = Vec::new();
    for solver in SolverKind::ALL {
        let sizes = match &task.population_sizes {
            Some(s) => s.clone(),
            None => vec![default_population(config, solver)],
        };
        for pop in sizes {
            let solver_seed = seed::derive(instance_seed, &[solver.tag(), pop as u64]);
            let result = run_solver(solver, problem, config, pop, solver_seed)?;
            let placement = &result.best.placement;
            let report = validate_placement(problem, placement)?;
            out.push(ExperimentRecord {
                solver,
                vm_count: task.vm_count,
                pm_count: problem.n_pms(),
                population_size: pop,
                repetition: task.repetition,
                seed: instance_seed,
                instance_hash: hash.clone(),
                metrics: metrics(problem, placement, result.elapsed)?,
                evaluations: result.evaluations,
                feasible: report.feasible,
            });
        }
    }
    Ok(out)
}

fn run_tasks(
    config: &ScenarioConfig,
    tasks: Vec<Task>,
    fixed: Option<&PlacementProblem>,
    jobs: usize,
) -> Result<Vec<ExperimentRecord>> {
    config.validate()?;
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Result<Vec<ExperimentRecord>>)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1).min(tasks.len()) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(task) = tasks.get(k) else { break };
                let r = run_task(config, task, fixed).map_err(|e| Error::Scenario {
                    vm_count: task.vm_count,
                    repetition: task.repetition,
                    source: Box::new(e),
                });
                results.lock().expect("worker panicked").push((k, r));
            });
        }
    });
    let mut results = results.into_inner().expect("worker panicked");
    results.sort_by_key(|(k, _)| *k);
    let mut records = Vec::new();
    for (_, r) in results {
        records.extend(r?);
    }
    sort_records(&mut records);
    Ok(records)
}

/// Orders records by solver, VM count, population size, repetition.
pub fn sort_records(records: &mut [ExperimentRecord]) {
    records.sort_by(|a, b| {
        (a.solver, a.vm_count, a.population_size, a.repetition).cmp(&(
            b.solver,
            b.vm_count,
            b.population_size,
            b.repetition,
        ))
    });
}

/// Every solver on the same instance for each `vm_count × repetition`.
pub fn run_vm_sweep(config: &ScenarioConfig, jobs: usize) -> Result<Vec<ExperimentRecord>> {
    let tasks = config
        .vm_counts
        .iter()
        .flat_map(|&vm_count| {
            (0..config.repetitions).map(move |repetition| Task {
                vm_count,
                repetition,
                population_sizes: None,
            })
        })
        .collect();
    run_tasks(config, tasks, None, jobs)
}

/// Every solver `config.repetitions` times on one given instance. The
/// `seed` column holds the per-repetition seed the solver seeds derive from.
pub fn run_comparison(
    problem: &PlacementProblem,
    config: &ScenarioConfig,
    jobs: usize,
) -> Result<Vec<ExperimentRecord>> {
    problem.validate()?;
    let tasks = (0..config.repetitions)
        .map(|repetition| Task {
            vm_count: problem.n_vms(),
            repetition,
            population_sizes: None,
        })
        .collect();
    run_tasks(config, tasks, Some(problem), jobs)
}

/// Every solver at each population size on one instance per repetition.
pub fn run_popsize_sweep(
    config: &ScenarioConfig,
    pop_sizes: &[usize],
    vm_count: usize,
    jobs: usize,
) -> Result<Vec<ExperimentRecord>> {
    if pop_sizes.is_empty() {
        return Err(Error::InvalidConfig("pop_sizes must be nonempty".into()));
    }
    let tasks = (0..config.repetitions)
        .map(|repetition| Task {
            vm_count,
            repetition,
            population_sizes: Some(pop_sizes.to_vec()),
        })
        .collect();
    run_tasks(config, tasks, None, jobs)
}

/// The archive's objective vectors after one cycle, sorted by energy.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoSnapshot {
    pub cycle: usize,
    pub points: Vec<ObjectiveVector>,
}

/// Runs LAMOCS and captures the archive after each requested cycle.
pub fn snapshot_pareto(
    problem: &PlacementProblem,
    params: &SolverParams,
    at_cycles: &[usize],
) -> Result<(Vec<ParetoSnapshot>, SolveResult)> {
    if let Some(&c) = at_cycles.iter().find(|&&c| c == 0 || c > params.max_cycles) {
        return Err(Error::InvalidConfig(format!(
            "snapshot cycle {c} outside 1..={}",
            params.max_cycles
        )));
    }
    let mut snapshots = Vec::new();
    let result = solve_with_observer(problem, params, |cycle, archive| {
        if at_cycles.contains(&cycle) {
            let mut points: Vec<ObjectiveVector> =
                archive.members().iter().map(|s| s.objectives).collect();
            points.sort_by(|a, b| {
                a.energy
                    .total_cmp(&b.energy)
                    .then(a.waste.total_cmp(&b.waste))
                    .then(a.neg_utilization.total_cmp(&b.neg_utilization))
            });
            snapshots.push(ParetoSnapshot { cycle, points });
        }
    })?;
    Ok((snapshots, result))
}

pub fn write_snapshot(snapshot: &ParetoSnapshot, path: impl AsRef<Path>) -> Result<()> {
    let mut text = format!(
        "# cycle {}\n# energy waste neg_utilization\n",
        snapshot.cycle
    );
    for p in &snapshot.points {
        writeln!(text, "{} {} {}", p.energy, p.waste, p.neg_utilization).unwrap();
    }
    write_file(path.as_ref(), &text)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub const CSV_HEADER: [&str; 14] = [
    "solver",
    "vm_count",
    "pm_count",
    "population_size",
    "repetition",
    "seed",
    "instance_hash",
    "energy",
    "waste",
    "active_servers",
    "mean_cpu_utilization",
    "load_balance",
    "total_power",
    "evaluations",
];

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    solver: SolverKind,
    vm_count: usize,
    pm_count: usize,
    population_size: usize,
    repetition: usize,
    seed: u64,
    instance_hash: String,
    energy: f64,
    waste: f64,
    active_servers: usize,
    mean_cpu_utilization: f64,
    load_balance: f64,
    total_power: f64,
    evaluations: u64,
}

#[derive(Debug, Serialize)]
struct TimingRow {
    solver: SolverKind,
    vm_count: usize,
    population_size: usize,
    repetition: usize,
    processing_time: f64,
}

fn require_records(records: &[ExperimentRecord]) -> Result<()> {
    if records.is_empty() {
        Err(Error::InvalidConfig("no records to emit".into()))
    } else {
        Ok(())
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

/// Writes the reproducible records CSV.
pub fn emit_csv(records: &[ExperimentRecord], path: impl AsRef<Path>) -> Result<()> {
    require_records(records)?;
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    for r in records {
        w.serialize(CsvRow {
            solver: r.solver,
            vm_count: r.vm_count,
            pm_count: r.pm_count,
            population_size: r.population_size,
            repetition: r.repetition,
            seed: r.seed,
            instance_hash: r.instance_hash.clone(),
            energy: r.metrics.energy,
            waste: r.metrics.waste,
            active_servers: r.metrics.active_servers,
            mean_cpu_utilization: r.metrics.mean_cpu_utilization,
            load_balance: r.metrics.load_balance,
            total_power: r.metrics.total_power,
            evaluations: r.evaluations,
        })?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes wall-clock processing times.
pub fn emit_timings(records: &[ExperimentRecord], path: impl AsRef<Path>) -> Result<()> {
    require_records(records)?;
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    for r in records {
        w.serialize(TimingRow {
            solver: r.solver,
            vm_count: r.vm_count,
            population_size: r.population_size,
            repetition: r.repetition,
            processing_time: r.metrics.processing_time,
        })?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a records CSV back. Processing time is not stored there and reads as 0.
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<ExperimentRecord>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Error::Parse {
            path: Some(path.to_owned()),
            line: Some(1),
            message: format!("unexpected header {header:?}"),
        });
    }
    rdr.deserialize::<CsvRow>()
        .map(|row| {
            let r = row?;
            Ok(ExperimentRecord {
                solver: r.solver,
                vm_count: r.vm_count,
                pm_count: r.pm_count,
                population_size: r.population_size,
                repetition: r.repetition,
                seed: r.seed,
                instance_hash: r.instance_hash,
                metrics: MetricsRow {
                    energy: r.energy,
                    waste: r.waste,
                    active_servers: r.active_servers,
                    mean_cpu_utilization: r.mean_cpu_utilization,
                    load_balance: r.load_balance,
                    processing_time: 0.0,
                    total_power: r.total_power,
                },
                evaluations: r.evaluations,
                feasible: true,
            })
        })
        .collect()
}

/// Independent variable of a plot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    VmCount,
    PopulationSize,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::VmCount => "vm_count",
            Axis::PopulationSize => "population_size",
        }
    }

    fn of(self, r: &ExperimentRecord) -> usize {
        match self {
            Axis::VmCount => r.vm_count,
            Axis::PopulationSize => r.population_size,
        }
    }
}

/// Reads one metric out of a row.
pub type MetricFn = fn(&MetricsRow) -> f64;

/// Metric extractors for the plot files.
pub const PLOT_METRICS: [(&str, MetricFn); 6] = [
    ("energy", |m| m.energy),
    ("waste", |m| m.waste),
    ("active_servers", |m| m.active_servers as f64),
    ("mean_cpu_utilization", |m| m.mean_cpu_utilization),
    ("load_balance", |m| m.load_balance),
    ("total_power", |m| m.total_power),
];

/// Mean and standard deviation per x value and solver.
pub fn aggregate(
    records: &[ExperimentRecord],
    axis: Axis,
    metric: impl Fn(&MetricsRow) -> f64,
) -> BTreeMap<usize, BTreeMap<SolverKind, (f64, f64)>> {
    let mut groups: BTreeMap<usize, BTreeMap<SolverKind, Vec<f64>>> = BTreeMap::new();
    for r in records {
        groups
            .entry(axis.of(r))
            .or_default()
            .entry(r.solver)
            .or_default()
            .push(metric(&r.metrics));
    }
    groups
        .into_iter()
        .map(|(x, by_solver)| {
            let stats = by_solver
                .into_iter()
                .map(|(s, v)| (s, mean_std(&v)))
                .collect();
            (x, stats)
        })
        .collect()
}

fn plot_text(
    records: &[ExperimentRecord],
    axis: Axis,
    metric: impl Fn(&MetricsRow) -> f64,
) -> String {
    let mut text = format!("# {}", axis.name());
    for s in SolverKind::ALL {
        write!(text, " {s}_mean {s}_std").unwrap();
    }
    text.push('\n');
    for (x, stats) in aggregate(records, axis, metric) {
        write!(text, "{x}").unwrap();
        for s in SolverKind::ALL {
            match stats.get(&s) {
                Some((mean, std)) => write!(text, " {mean} {std}").unwrap(),
                None => text.push_str(" nan nan"),
            }
        }
        text.push('\n');
    }
    text
}

/// Writes `<metric>_vs_<axis>.dat` into `dir` for every reproducible metric.
pub fn emit_plot_data(
    records: &[ExperimentRecord],
    dir: impl AsRef<Path>,
    axis: Axis,
) -> Result<()> {
    require_records(records)?;
    let dir = dir.as_ref();
    for (name, metric) in PLOT_METRICS {
        let path = dir.join(format!("{name}_vs_{}.dat", axis.name()));
        write_file(&path, &plot_text(records, axis, metric))?;
    }
    Ok(())
}

/// Writes `processing_time_vs_<axis>.dat`.
pub fn emit_time_plot(
    records: &[ExperimentRecord],
    dir: impl AsRef<Path>,
    axis: Axis,
) -> Result<()> {
    require_records(records)?;
    let path = dir
        .as_ref()
        .join(format!("processing_time_vs_{}.dat", axis.name()));
    write_file(&path, &plot_text(records, axis, |m| m.processing_time))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ScenarioConfig {
        let mut c = ScenarioConfig {
            vm_counts: vec![5, 10],
            repetitions: 2,
            ..Default::default()
        };
        c.lamocs.population_size = 8;
        c.lamocs.max_cycles = 5;
        c.ga.population_size = 8;
        c.ga.max_cycles = 5;
        c.pso.population_size = 8;
        c.pso.max_cycles = 5;
        c
    }

    #[test]
    fn config_validation() {
        assert!(ScenarioConfig::default().validate().is_ok());
        let c = ScenarioConfig {
            vm_counts: vec![40, 20],
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let c = ScenarioConfig {
            repetitions: 0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn derived_pm_counts() {
        let c = ScenarioConfig::default();
        let counts: Vec<usize> = c.vm_counts.iter().map(|&v| c.pm_count_for(v)).collect();
        assert_eq!(counts, vec![8, 16, 24, 32, 40]);
        let fixed = ScenarioConfig {
            pm_count: Some(40),
            ..Default::default()
        };
        assert_eq!(fixed.pm_count_for(20), 40);
    }

    #[test]
    fn sweep_cardinality_order_and_shared_instances() {
        let c = tiny();
        let records = run_vm_sweep(&c, 2).unwrap();
        assert_eq!(records.len(), 2 * 2 * 3);
        let mut sorted = records.clone();
        sort_records(&mut sorted);
        assert_eq!(sorted, records);
        for vm in [5, 10] {
            for rep in 0..2 {
                let hashes: Vec<&str> = records
                    .iter()
                    .filter(|r| r.vm_count == vm && r.repetition == rep)
                    .map(|r| r.instance_hash.as_str())
                    .collect();
                assert_eq!(hashes.len(), 3);
                assert!(hashes.iter().all(|h| *h == hashes[0]));
            }
        }
        assert!(records.iter().all(|r| r.feasible));
    }

    #[test]
    fn jobs_do_not_change_results() {
        let c = tiny();
        let strip = |mut rs: Vec<ExperimentRecord>| {
            rs.iter_mut().for_each(|r| r.metrics.processing_time = 0.0);
            rs
        };
        assert_eq!(
            strip(run_vm_sweep(&c, 1).unwrap()),
            strip(run_vm_sweep(&c, 3).unwrap())
        );
    }

    #[test]
    fn errors_carry_coordinates() {
        let c = ScenarioConfig {
            vm_counts: vec![20],
            pm_count: Some(40),
            repetitions: 1,
            ..tiny()
        };
        match run_vm_sweep(&c, 1) {
            Err(Error::Scenario {
                vm_count: 20,
                repetition: 0,
                source,
            }) => assert!(matches!(*source, Error::GenerationInfeasible { .. })),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn comparison_runs_every_solver_per_repetition() {
        let p = generate_instance(3, 5, 42, &GeneratorConfig::default()).unwrap();
        let records = run_comparison(&p, &tiny(), 2).unwrap();
        assert_eq!(records.len(), 2 * 3);
        let hash = content_hash(&p);
        assert!(records
            .iter()
            .all(|r| r.instance_hash == hash && r.vm_count == 5 && r.feasible));
    }

    #[test]
    fn snapshot_cycle_bounds() {
        let p = generate_instance(3, 5, 42, &GeneratorConfig::default()).unwrap();
        let params = SolverParams {
            population_size: 8,
            max_cycles: 10,
            ..Default::default()
        };
        assert!(snapshot_pareto(&p, &params, &[0]).is_err());
        assert!(snapshot_pareto(&p, &params, &[11]).is_err());
        let (snaps, _) = snapshot_pareto(&p, &params, &[1, 10]).unwrap();
        assert_eq!(
            snaps.iter().map(|s| s.cycle).collect::<Vec<_>>(),
            vec![1, 10]
        );
    }

    #[test]
    fn empty_records_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(emit_csv(&[], dir.path().join("x.csv")).is_err());
    }
}
