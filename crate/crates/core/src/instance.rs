//! Problem data model, feasibility checks, the seeded instance generator and
//! the on-disk instance format.
//!
//! # File format
//!
//! Instances are stored as TOML, one document per instance:
//!
//! ```toml
//! format_version = 1
//! cpu_threshold = 0.95
//! alpha = 1.0
//! beta = 1.0
//!
//! [[pm]]
//! id = 0
//! cpu_capacity = 11.3   # GHz
//! mem_capacity = 20.1   # GB
//! p_idle = 150.0        # W
//! p_busy = 250.0        # W
//!
//! [[vm]]
//! id = 0
//! cpu_demand = 3.2      # GHz
//! mem_demand = 6.0      # GB
//! ```
//!
//! `id` must equal the zero-based position of the entry. Floats are written
//! in shortest round-trip form, so a read after a write reproduces every
//! field bit for bit.

use std::fs;
use std::path::Path;

use rand::Rng as _;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::seed;

pub const FORMAT_VERSION: u32 = 1;

/// Default share of a machine's CPU that placements may allocate.
pub const DEFAULT_CPU_THRESHOLD: f64 = 0.95;

/// Retry budget of [`generate_instance`].
pub const MAX_GENERATION_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalMachine {
    pub id: usize,
    /// GHz.
    pub cpu_capacity: f64,
    /// GB.
    pub mem_capacity: f64,
    /// Watts drawn while powered on and idle.
    pub p_idle: f64,
    /// Watts drawn at full CPU utilization.
    pub p_busy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VirtualMachine {
    pub id: usize,
    /// GHz.
    pub cpu_demand: f64,
    /// GB.
    pub mem_demand: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacementProblem {
    pub pms: Vec<PhysicalMachine>,
    pub vms: Vec<VirtualMachine>,
    /// Fraction of each machine's CPU capacity that may be allocated.
    pub cpu_threshold: f64,
    /// Weight of the processing term of the utilization objective.
    pub alpha: f64,
    /// Weight of the memory term of the utilization objective.
    pub beta: f64,
}

impl PlacementProblem {
    /// Builds a problem with unit objective weights, checking every invariant.
    pub fn new(
        pms: Vec<PhysicalMachine>,
        vms: Vec<VirtualMachine>,
        cpu_threshold: f64,
    ) -> Result<Self> {
        let problem = Self {
            pms,
            vms,
            cpu_threshold,
            alpha: 1.0,
            beta: 1.0,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn with_weights(mut self, alpha: f64, beta: f64) -> Result<Self> {
        self.alpha = alpha;
        self.beta = beta;
        self.validate()?;
        Ok(self)
    }

    pub fn n_pms(&self) -> usize {
        self.pms.len()
    }

    pub fn n_vms(&self) -> usize {
        self.vms.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidProblem(msg));
        if self.pms.is_empty() {
            return bad("at least one physical machine is required".into());
        }
        if self.vms.is_empty() {
            return bad("at least one virtual machine is required".into());
        }
        if !(self.cpu_threshold > 0.0 && self.cpu_threshold <= 1.0) {
            return bad(format!(
                "cpu_threshold {} not in (0, 1]",
                self.cpu_threshold
            ));
        }
        if !(self.alpha >= 0.0 && self.beta >= 0.0 && self.alpha + self.beta > 0.0) {
            return bad(format!(
                "weights alpha={} beta={} must be nonnegative with a positive sum",
                self.alpha, self.beta
            ));
        }
        for (j, pm) in self.pms.iter().enumerate() {
            if pm.id != j {
                return bad(format!("pm at position {j} has id {}", pm.id));
            }
            if !(pm.cpu_capacity > 0.0 && pm.mem_capacity > 0.0) {
                return bad(format!("pm {j} has nonpositive capacity"));
            }
            if !(pm.p_idle >= 0.0 && pm.p_idle <= pm.p_busy) {
                return bad(format!(
                    "pm {j} power profile p_idle={} p_busy={} violates 0 <= p_idle <= p_busy",
                    pm.p_idle, pm.p_busy
                ));
            }
        }
        for (i, vm) in self.vms.iter().enumerate() {
            if vm.id != i {
                return bad(format!("vm at position {i} has id {}", vm.id));
            }
            if !(vm.cpu_demand > 0.0 && vm.mem_demand > 0.0) {
                return bad(format!("vm {i} has nonpositive demand"));
            }
        }
        Ok(())
    }

    /// Usable CPU of machine `j` after the threshold is applied.
    pub fn cpu_limit(&self, j: usize) -> f64 {
        self.cpu_threshold * self.pms[j].cpu_capacity
    }

    pub fn total_cpu_capacity(&self) -> f64 {
        self.pms.iter().map(|p| p.cpu_capacity).sum()
    }

    pub fn total_cpu_demand(&self) -> f64 {
        self.vms.iter().map(|v| v.cpu_demand).sum()
    }

    /// Checks that `placement` has one in-range machine index per VM.
    pub fn check_placement(&self, placement: &Placement) -> Result<()> {
        if placement.len() != self.n_vms() {
            return Err(Error::DimensionMismatch {
                expected: self.n_vms(),
                actual: placement.len(),
            });
        }
        match placement.0.iter().find(|&&j| j >= self.n_pms()) {
            Some(&j) => Err(Error::IndexOutOfRange {
                index: j,
                len: self.n_pms(),
            }),
            None => Ok(()),
        }
    }
}

/// Dense assignment vector: entry `i` is the machine hosting VM `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Placement(pub Vec<usize>);

impl Placement {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// VMs hosted on each of `m` machines, in VM order.
    pub fn hosted_sets(&self, m: usize) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); m];
        for (i, &j) in self.0.iter().enumerate() {
            sets[j].push(i);
        }
        sets
    }
}

/// Per-machine allocated CPU (GHz) and memory (GB).
#[derive(Debug, Clone, PartialEq)]
pub struct MachineLoads {
    pub cpu: Vec<f64>,
    pub mem: Vec<f64>,
}

impl MachineLoads {
    /// Sums demands per machine. The caller guarantees in-range indices.
    pub fn compute(problem: &PlacementProblem, assignment: &[usize]) -> Self {
        let m = problem.n_pms();
        let mut cpu = vec![0.0; m];
        let mut mem = vec![0.0; m];
        for (vm, &j) in problem.vms.iter().zip(assignment) {
            cpu[j] += vm.cpu_demand;
            mem[j] += vm.mem_demand;
        }
        Self { cpu, mem }
    }

    pub fn cpu_overloaded(&self, problem: &PlacementProblem, j: usize) -> bool {
        self.cpu[j] > problem.cpu_limit(j)
    }

    pub fn mem_overloaded(&self, problem: &PlacementProblem, j: usize) -> bool {
        self.mem[j] > problem.pms[j].mem_capacity
    }

    pub fn fits(&self, problem: &PlacementProblem, j: usize, vm: &VirtualMachine) -> bool {
        self.cpu[j] + vm.cpu_demand <= problem.cpu_limit(j)
            && self.mem[j] + vm.mem_demand <= problem.pms[j].mem_capacity
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub overloaded_cpu: Vec<usize>,
    pub overloaded_mem: Vec<usize>,
}

pub fn validate_placement(
    problem: &PlacementProblem,
    placement: &Placement,
) -> Result<FeasibilityReport> {
    problem.check_placement(placement)?;
    let loads = MachineLoads::compute(problem, placement.as_slice());
    let overloaded_cpu: Vec<usize> = (0..problem.n_pms())
        .filter(|&j| loads.cpu_overloaded(problem, j))
        .collect();
    let overloaded_mem: Vec<usize> = (0..problem.n_pms())
        .filter(|&j| loads.mem_overloaded(problem, j))
        .collect();
    Ok(FeasibilityReport {
        feasible: overloaded_cpu.is_empty() && overloaded_mem.is_empty(),
        overloaded_cpu,
        overloaded_mem,
    })
}

/// First-fit decreasing on CPU demand. VMs are taken largest first and each is
/// put on the first machine, in decreasing CPU capacity order, that can take
/// it on both resources with the threshold applied. `None` if some VM fits
/// nowhere.
pub fn first_fit_decreasing(problem: &PlacementProblem) -> Option<Placement> {
    let mut vm_order: Vec<usize> = (0..problem.n_vms()).collect();
    vm_order.sort_by(|&a, &b| {
        problem.vms[b]
            .cpu_demand
            .total_cmp(&problem.vms[a].cpu_demand)
            .then(a.cmp(&b))
    });
    let mut pm_order: Vec<usize> = (0..problem.n_pms()).collect();
    pm_order.sort_by(|&a, &b| {
        problem.pms[b]
            .cpu_capacity
            .total_cmp(&problem.pms[a].cpu_capacity)
            .then(a.cmp(&b))
    });

    let mut loads = MachineLoads {
        cpu: vec![0.0; problem.n_pms()],
        mem: vec![0.0; problem.n_pms()],
    };
    let mut assignment = vec![0; problem.n_vms()];
    for &i in &vm_order {
        let vm = &problem.vms[i];
        let j = *pm_order.iter().find(|&&j| loads.fits(problem, j, vm))?;
        loads.cpu[j] += vm.cpu_demand;
        loads.mem[j] += vm.mem_demand;
        assignment[i] = j;
    }
    Some(Placement(assignment))
}

/// Parameters of the random instance generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorConfig {
    /// PM CPU capacity interval, GHz.
    pub cpu_range: [f64; 2],
    /// PM memory capacity interval, GB.
    pub mem_range: [f64; 2],
    /// Minimum ratio of total VM CPU demand to total PM CPU capacity.
    pub load_fraction: f64,
    /// Upper bound on total VM memory over total PM memory.
    pub mem_load_fraction: f64,
    /// PM busy power interval, W.
    pub power_range: [f64; 2],
    /// p_idle / p_busy.
    pub idle_ratio: f64,
    /// Lower bound of a raw VM demand draw, as a fraction of the mean PM capacity.
    pub demand_floor: f64,
    pub cpu_threshold: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            cpu_range: [4.0, 16.0],
            mem_range: [8.0, 32.0],
            load_fraction: 0.9,
            mem_load_fraction: 0.5,
            power_range: [200.0, 300.0],
            idle_ratio: 0.6,
            demand_floor: 0.05,
            cpu_threshold: DEFAULT_CPU_THRESHOLD,
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        for (name, [lo, hi]) in [
            ("cpu_range", self.cpu_range),
            ("mem_range", self.mem_range),
            ("power_range", self.power_range),
        ] {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return bad(format!("{name} [{lo}, {hi}] must satisfy 0 < lo <= hi"));
            }
        }
        if !(self.load_fraction > 0.0 && self.load_fraction < 1.0) {
            return bad(format!(
                "load_fraction {} not in (0, 1)",
                self.load_fraction
            ));
        }
        if !(self.mem_load_fraction > 0.0 && self.mem_load_fraction <= 1.0) {
            return bad(format!(
                "mem_load_fraction {} not in (0, 1]",
                self.mem_load_fraction
            ));
        }
        if !(self.idle_ratio > 0.0 && self.idle_ratio <= 1.0) {
            return bad(format!("idle_ratio {} not in (0, 1]", self.idle_ratio));
        }
        if !(self.demand_floor > 0.0 && self.demand_floor < 1.0) {
            return bad(format!("demand_floor {} not in (0, 1)", self.demand_floor));
        }
        if !(self.cpu_threshold > 0.0 && self.cpu_threshold <= 1.0) {
            return bad(format!(
                "cpu_threshold {} not in (0, 1]",
                self.cpu_threshold
            ));
        }
        if !(self.alpha >= 0.0 && self.beta >= 0.0 && self.alpha + self.beta > 0.0) {
            return bad("alpha and beta must be nonnegative with a positive sum".into());
        }
        Ok(())
    }
}

const RESCALE_ROUNDS: usize = 64;
// Demands stay strictly below the mean capacity.
const MEAN_CAP: f64 = 1.0 - 1e-6;
// Pushes the scaled CPU total just past the target despite rounding.
const TARGET_NUDGE: f64 = 1.0 + 1e-9;

/// Generates a random instance whose total CPU demand is at least
/// `load_fraction` of the total CPU capacity and which first-fit decreasing
/// can pack. Deterministic in `(n_pms, n_vms, seed, config)`.
pub fn generate_instance(
    n_pms: usize,
    n_vms: usize,
    seed: u64,
    config: &GeneratorConfig,
) -> Result<PlacementProblem> {
    if n_pms == 0 || n_vms == 0 {
        return Err(Error::InvalidConfig(format!(
            "need at least one pm and one vm (got {n_pms} pms, {n_vms} vms)"
        )));
    }
    config.validate()?;
    for attempt in 0..MAX_GENERATION_ATTEMPTS {
        let mut rng = seed::rng(seed::derive(seed, &[attempt as u64]));
        if let Some(problem) = try_generate(n_pms, n_vms, config, &mut rng) {
            if first_fit_decreasing(&problem).is_some() {
                return Ok(problem);
            }
        }
    }
    Err(Error::GenerationInfeasible {
        attempts: MAX_GENERATION_ATTEMPTS,
    })
}

fn uniform(rng: &mut seed::Rng, [lo, hi]: [f64; 2]) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

fn try_generate(
    n_pms: usize,
    n_vms: usize,
    config: &GeneratorConfig,
    rng: &mut seed::Rng,
) -> Option<PlacementProblem> {
    let pms: Vec<PhysicalMachine> = (0..n_pms)
        .map(|id| {
            let cpu_capacity = uniform(rng, config.cpu_range);
            let mem_capacity = uniform(rng, config.mem_range);
            let p_busy = uniform(rng, config.power_range);
            PhysicalMachine {
                id,
                cpu_capacity,
                mem_capacity,
                p_idle: config.idle_ratio * p_busy,
                p_busy,
            }
        })
        .collect();

    let total_cpu: f64 = pms.iter().map(|p| p.cpu_capacity).sum();
    let total_mem: f64 = pms.iter().map(|p| p.mem_capacity).sum();
    let cpu_cap = total_cpu / n_pms as f64 * MEAN_CAP;
    let mem_cap = total_mem / n_pms as f64 * MEAN_CAP;

    let mut cpu: Vec<f64> = (0..n_vms)
        .map(|_| uniform(rng, [config.demand_floor * cpu_cap, cpu_cap]))
        .collect();
    let mut mem: Vec<f64> = (0..n_vms)
        .map(|_| uniform(rng, [config.demand_floor * mem_cap, mem_cap]))
        .collect();

    let cpu_target = config.load_fraction * total_cpu * TARGET_NUDGE;
    for _ in 0..RESCALE_ROUNDS {
        let sum: f64 = cpu.iter().sum();
        if sum >= cpu_target && sum <= total_cpu {
            break;
        }
        let factor = cpu_target / sum;
        for d in cpu.iter_mut() {
            *d = (*d * factor).min(cpu_cap);
        }
    }
    let cpu_sum: f64 = cpu.iter().sum();
    if cpu_sum < config.load_fraction * total_cpu || cpu_sum > total_cpu {
        return None;
    }

    let mem_budget = config.mem_load_fraction * total_mem;
    let mem_sum: f64 = mem.iter().sum();
    if mem_sum > mem_budget {
        let factor = mem_budget / mem_sum;
        mem.iter_mut().for_each(|d| *d *= factor);
    }

    let vms = cpu
        .into_iter()
        .zip(mem)
        .enumerate()
        .map(|(id, (cpu_demand, mem_demand))| VirtualMachine {
            id,
            cpu_demand,
            mem_demand,
        })
        .collect();
    PlacementProblem::new(pms, vms, config.cpu_threshold)
        .and_then(|p| p.with_weights(config.alpha, config.beta))
        .ok()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    format_version: u32,
    cpu_threshold: f64,
    alpha: f64,
    beta: f64,
    pm: Vec<PhysicalMachine>,
    vm: Vec<VirtualMachine>,
}

pub fn to_toml_string(problem: &PlacementProblem) -> String {
    let file = InstanceFile {
        format_version: FORMAT_VERSION,
        cpu_threshold: problem.cpu_threshold,
        alpha: problem.alpha,
        beta: problem.beta,
        pm: problem.pms.clone(),
        vm: problem.vms.clone(),
    };
    toml::to_string(&file).expect("instance fields are always representable in TOML")
}

pub fn from_toml_str(text: &str) -> Result<PlacementProblem> {
    let parse_err = |line, message| Error::Parse {
        path: None,
        line,
        message,
    };
    let file: InstanceFile = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|span| text[..span.start].matches('\n').count() + 1);
        parse_err(line, e.message().to_owned())
    })?;
    if file.format_version != FORMAT_VERSION {
        return Err(parse_err(
            None,
            format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                file.format_version
            ),
        ));
    }
    let problem = PlacementProblem {
        pms: file.pm,
        vms: file.vm,
        cpu_threshold: file.cpu_threshold,
        alpha: file.alpha,
        beta: file.beta,
    };
    problem
        .validate()
        .map_err(|e| parse_err(None, e.to_string()))?;
    Ok(problem)
}

pub fn write_instance(problem: &PlacementProblem, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_toml_string(problem)).map_err(|e| Error::io(path, e))
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<PlacementProblem> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_toml_str(&text).map_err(|e| match e {
        Error::Parse { line, message, .. } => Error::Parse {
            path: Some(path.to_owned()),
            line,
            message,
        },
        other => other,
    })
}

/// SHA-256 of the canonical serialization, lowercase hex.
pub fn content_hash(problem: &PlacementProblem) -> String {
    hex::encode(Sha256::digest(to_toml_string(problem).as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(id: usize, cpu: f64, mem: f64) -> PhysicalMachine {
        PhysicalMachine {
            id,
            cpu_capacity: cpu,
            mem_capacity: mem,
            p_idle: 150.0,
            p_busy: 250.0,
        }
    }

    fn vm(id: usize, cpu: f64, mem: f64) -> VirtualMachine {
        VirtualMachine {
            id,
            cpu_demand: cpu,
            mem_demand: mem,
        }
    }

    #[test]
    fn lone_vms_on_large_machines_are_feasible() {
        let p = PlacementProblem::new(
            vec![pm(0, 100.0, 100.0), pm(1, 100.0, 100.0)],
            vec![vm(0, 1.0, 1.0), vm(1, 1.0, 1.0)],
            0.9,
        )
        .unwrap();
        let report = validate_placement(&p, &Placement(vec![0, 1])).unwrap();
        assert!(report.feasible);
        assert!(report.overloaded_cpu.is_empty() && report.overloaded_mem.is_empty());
    }

    #[test]
    fn two_eight_ghz_vms_overload_a_ten_ghz_machine() {
        let p = PlacementProblem::new(
            vec![pm(0, 10.0, 64.0), pm(1, 10.0, 64.0)],
            vec![vm(0, 8.0, 1.0), vm(1, 8.0, 1.0)],
            0.9,
        )
        .unwrap();
        let report = validate_placement(&p, &Placement(vec![1, 1])).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.overloaded_cpu, vec![1]);
        assert!(report.overloaded_mem.is_empty());
    }

    #[test]
    fn memory_overload_is_reported_separately() {
        let p = PlacementProblem::new(
            vec![pm(0, 10.0, 4.0)],
            vec![vm(0, 1.0, 3.0), vm(1, 1.0, 3.0)],
            0.9,
        )
        .unwrap();
        let report = validate_placement(&p, &Placement(vec![0, 0])).unwrap();
        assert_eq!(report.overloaded_mem, vec![0]);
        assert!(report.overloaded_cpu.is_empty());
        assert!(!report.feasible);
    }

    #[test]
    fn placement_dimension_errors() {
        let p = PlacementProblem::new(vec![pm(0, 10.0, 10.0)], vec![vm(0, 1.0, 1.0)], 0.9).unwrap();
        assert!(matches!(
            validate_placement(&p, &Placement(vec![0, 0])),
            Err(Error::DimensionMismatch {
                expected: 1,
                actual: 2
            })
        ));
        assert!(matches!(
            validate_placement(&p, &Placement(vec![3])),
            Err(Error::IndexOutOfRange { index: 3, len: 1 })
        ));
    }

    #[test]
    fn problem_invariants_are_enforced() {
        assert!(PlacementProblem::new(vec![], vec![vm(0, 1.0, 1.0)], 0.9).is_err());
        assert!(PlacementProblem::new(vec![pm(0, 1.0, 1.0)], vec![], 0.9).is_err());
        assert!(PlacementProblem::new(vec![pm(0, 1.0, 1.0)], vec![vm(0, 1.0, 1.0)], 0.0).is_err());
        let mut hot = pm(0, 1.0, 1.0);
        hot.p_idle = 300.0;
        assert!(PlacementProblem::new(vec![hot], vec![vm(0, 1.0, 1.0)], 0.9).is_err());
        assert!(PlacementProblem::new(vec![pm(0, 1.0, 1.0)], vec![vm(0, 0.0, 1.0)], 0.9).is_err());
        let ok = PlacementProblem::new(vec![pm(0, 1.0, 1.0)], vec![vm(0, 1.0, 1.0)], 0.9).unwrap();
        assert!(ok.clone().with_weights(0.0, 0.0).is_err());
        assert!(ok.with_weights(0.0, 1.0).is_ok());
    }

    #[test]
    fn single_machine_instance() {
        let p = generate_instance(1, 1, 7, &GeneratorConfig::default()).unwrap();
        assert_eq!((p.n_pms(), p.n_vms()), (1, 1));
        assert!(p.vms[0].cpu_demand < p.pms[0].cpu_capacity);
        assert!(p.vms[0].mem_demand < p.pms[0].mem_capacity);
    }

    #[test]
    fn default_generator_respects_intervals_and_load() {
        let p = generate_instance(20, 100, 1, &GeneratorConfig::default()).unwrap();
        for pm in &p.pms {
            assert!((4.0..=16.0).contains(&pm.cpu_capacity));
            assert!((8.0..=32.0).contains(&pm.mem_capacity));
            assert!((200.0..=300.0).contains(&pm.p_busy));
            assert_eq!(pm.p_idle, 0.6 * pm.p_busy);
        }
        let ratio = p.total_cpu_demand() / p.total_cpu_capacity();
        assert!((0.9..=1.0).contains(&ratio), "load ratio {ratio}");
    }

    #[test]
    fn generator_rejects_bad_inputs() {
        let cfg = GeneratorConfig::default();
        assert!(matches!(
            generate_instance(0, 3, 1, &cfg),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            generate_instance(3, 0, 1, &cfg),
            Err(Error::InvalidConfig(_))
        ));
        let bad = GeneratorConfig {
            load_fraction: 1.0,
            ..cfg
        };
        assert!(matches!(
            generate_instance(3, 5, 1, &bad),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn unreachable_load_is_generation_infeasible() {
        // 20 VMs, each below the mean capacity, cannot carry 90% of 40 machines.
        assert!(matches!(
            generate_instance(40, 20, 1, &GeneratorConfig::default()),
            Err(Error::GenerationInfeasible { .. })
        ));
    }

    #[test]
    fn missing_field_names_the_field() {
        let text = "format_version = 1\ncpu_threshold = 0.9\nalpha = 1.0\nbeta = 1.0\n\n\
                    [[pm]]\nid = 0\ncpu_capacity = 10.0\np_idle = 1.0\np_busy = 2.0\n\n\
                    [[vm]]\nid = 0\ncpu_demand = 1.0\nmem_demand = 1.0\n";
        let err = from_toml_str(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("mem_capacity"), "{msg}");
        assert!(matches!(err, Error::Parse { line: Some(_), .. }), "{err:?}");
    }

    #[test]
    fn wrong_format_version_is_rejected() {
        let p = generate_instance(2, 3, 1, &GeneratorConfig::default()).unwrap();
        let text = to_toml_string(&p).replace("format_version = 1", "format_version = 9");
        assert!(from_toml_str(&text)
            .unwrap_err()
            .to_string()
            .contains("format_version"));
    }

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        let a = generate_instance(3, 5, 42, &GeneratorConfig::default()).unwrap();
        let b = generate_instance(3, 5, 43, &GeneratorConfig::default()).unwrap();
        assert_eq!(content_hash(&a), content_hash(&a.clone()));
        assert_ne!(content_hash(&a), content_hash(&b));
        assert_eq!(content_hash(&a).len(), 64);
    }
}
