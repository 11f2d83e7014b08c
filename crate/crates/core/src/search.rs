//! Pieces shared by every solver: the random-key encoding, repair of
//! overloaded placements, the infeasibility penalty and result types.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::instance::{MachineLoads, Placement, PlacementProblem};
use crate::objectives::{self, ObjectiveVector};
use crate::seed::Rng;

/// A candidate placement together with its continuous keys and objectives.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Random keys in `[0, m)`; `placement[i] = floor(keys[i])`.
    pub keys: Vec<f64>,
    pub placement: Placement,
    pub objectives: ObjectiveVector,
    pub feasible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub cycle: usize,
    /// Best feasible energy seen so far; infinite before the first feasible point.
    pub min_energy: f64,
    pub front_size: usize,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub pareto_front: Vec<Solution>,
    pub best: Solution,
    pub history: Vec<CycleRecord>,
    /// Wall time, seconds.
    pub elapsed: f64,
    /// Objective evaluations performed.
    pub evaluations: u64,
}

/// Evaluations used by a LAMOCS run: the initial population plus, per cycle,
/// one Lévy candidate per nest and one replacement per abandoned nest.
pub fn lamocs_budget(population_size: usize, max_cycles: usize, pa: f64) -> u64 {
    let per_cycle = population_size + abandoned_count(population_size, pa);
    (population_size + max_cycles * per_cycle) as u64
}

/// Number of worst nests replaced per cycle, `ceil(pa · pop)`.
pub fn abandoned_count(population_size: usize, pa: f64) -> usize {
    ((pa * population_size as f64).ceil() as usize).min(population_size)
}

/// Maps a key into `[0, m)`.
pub fn wrap_key(key: f64, m: usize) -> f64 {
    let m = m as f64;
    let r = key.rem_euclid(m);
    if r.is_finite() && r < m {
        r
    } else {
        0.0
    }
}

pub fn decode_key(key: f64, m: usize) -> usize {
    if key <= 0.0 || key.is_nan() {
        0
    } else {
        (key.floor() as usize).min(m - 1)
    }
}

pub fn decode(keys: &[f64], m: usize) -> Placement {
    Placement(keys.iter().map(|&k| decode_key(k, m)).collect())
}

/// Decodes keys, repairs overloads and scores placements while counting
/// evaluations. Shared by all solvers so their fitness landscapes match.
pub struct Evaluator<'a> {
    problem: &'a PlacementProblem,
    penalty_scale: f64,
    evaluations: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a PlacementProblem) -> Self {
        Self {
            problem,
            penalty_scale: 10.0 * max_conceivable_energy(problem),
            evaluations: 0,
        }
    }

    pub fn problem(&self) -> &'a PlacementProblem {
        self.problem
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn penalty_scale(&self) -> f64 {
        self.penalty_scale
    }

    /// Decodes, repairs and evaluates. Keys are wrapped into `[0, m)` first.
    pub fn evaluate_keys(&mut self, mut keys: Vec<f64>, rng: &mut Rng) -> Solution {
        let m = self.problem.n_pms();
        keys.iter_mut().for_each(|k| *k = wrap_key(*k, m));
        let mut assignment = decode(&keys, m).0;
        let mut loads = MachineLoads::compute(self.problem, &assignment);
        let feasible = self.repair(&mut assignment, &mut keys, &mut loads, rng);
        self.evaluations += 1;

        let mut objectives = ObjectiveVector::from_loads(self.problem, &loads);
        if !feasible {
            let p = self.penalty_scale * (1.0 + relative_overload(self.problem, &loads));
            objectives.energy += p;
            objectives.waste += p;
            objectives.neg_utilization += p;
        }
        Solution {
            keys,
            placement: Placement(assignment),
            objectives,
            feasible,
        }
    }

    /// Evaluates a discrete placement, placing each key at the middle of its cell.
    pub fn evaluate_placement(&mut self, placement: &Placement, rng: &mut Rng) -> Solution {
        let keys = placement.0.iter().map(|&j| j as f64 + 0.5).collect();
        self.evaluate_keys(keys, rng)
    }

    /// Uniform random keys.
    pub fn random_solution(&mut self, rng: &mut Rng) -> Solution {
        let m = self.problem.n_pms() as f64;
        let keys = (0..self.problem.n_vms())
            .map(|_| rng.random_range(0.0..m))
            .collect();
        self.evaluate_keys(keys, rng)
    }

    // Moves VMs off overloaded machines onto the machine with the most CPU
    // headroom that can take them, at most n attempts. Returns feasibility.
    fn repair(
        &self,
        assignment: &mut [usize],
        keys: &mut [f64],
        loads: &mut MachineLoads,
        rng: &mut Rng,
    ) -> bool {
        let problem = self.problem;
        let m = problem.n_pms();
        let overloaded = |loads: &MachineLoads, j: usize| {
            loads.cpu_overloaded(problem, j) || loads.mem_overloaded(problem, j)
        };
        if !(0..m).any(|j| overloaded(loads, j)) {
            return true;
        }

        let mut hosted = vec![Vec::new(); m];
        for (i, &j) in assignment.iter().enumerate() {
            hosted[j].push(i);
        }
        for _ in 0..problem.n_vms() {
            let Some(src) = (0..m).find(|&j| overloaded(loads, j)) else {
                break;
            };
            hosted[src].shuffle(rng);
            let mv = hosted[src].iter().enumerate().find_map(|(pos, &i)| {
                let vm = &problem.vms[i];
                (0..m)
                    .filter(|&j| j != src && loads.fits(problem, j, vm))
                    .map(|j| (j, problem.cpu_limit(j) - loads.cpu[j]))
                    .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
                    .map(|(dst, _)| (pos, i, dst))
            });
            let Some((pos, i, dst)) = mv else {
                continue;
            };
            let vm = &problem.vms[i];
            hosted[src].swap_remove(pos);
            hosted[dst].push(i);
            loads.cpu[src] -= vm.cpu_demand;
            loads.mem[src] -= vm.mem_demand;
            loads.cpu[dst] += vm.cpu_demand;
            loads.mem[dst] += vm.mem_demand;
            assignment[i] = dst;
            keys[i] = dst as f64 + keys[i].fract();
        }
        // Incremental sums drift; recompute so the verdict matches validate_placement.
        *loads = MachineLoads::compute(problem, assignment);
        !(0..m).any(|j| overloaded(loads, j))
    }
}

fn relative_overload(problem: &PlacementProblem, loads: &MachineLoads) -> f64 {
    (0..problem.n_pms())
        .map(|j| {
            let cpu = (loads.cpu[j] - problem.cpu_limit(j)).max(0.0) / problem.cpu_limit(j);
            let mem =
                (loads.mem[j] - problem.pms[j].mem_capacity).max(0.0) / problem.pms[j].mem_capacity;
            cpu + mem
        })
        .sum()
}

/// Upper bound on the energy objective over all placements, feasible or not.
pub fn max_conceivable_energy(problem: &PlacementProblem) -> f64 {
    let demand = problem.total_cpu_demand();
    let worst_power = problem
        .pms
        .iter()
        .map(|pm| objectives::power_at(pm, demand / pm.cpu_capacity))
        .fold(0.0, f64::max);
    (demand * worst_power).max(1.0)
}

/// Index of the feasible solution with the least energy; ties go to the
/// lower waste, then lower negated utilization, then the earlier index.
pub fn min_energy_index(solutions: &[Solution]) -> Option<usize> {
    solutions
        .iter()
        .enumerate()
        .filter(|(_, s)| s.feasible)
        .min_by(|(ia, a), (ib, b)| {
            let (a, b) = (a.objectives, b.objectives);
            a.energy
                .total_cmp(&b.energy)
                .then(a.waste.total_cmp(&b.waste))
                .then(a.neg_utilization.total_cmp(&b.neg_utilization))
                .then(ia.cmp(ib))
        })
        .map(|(i, _)| i)
}
