//! Exhaustive search over all `m^n` assignments.

use crate::error::{Error, Result};
use crate::instance::{MachineLoads, Placement, PlacementProblem};
use crate::objectives::ObjectiveVector;
use crate::search::Solution;

/// Largest assignment space [`brute_force`] will enumerate.
pub const MAX_ASSIGNMENTS: f64 = 1e6;

/// Calls `visit` for every assignment in lexicographic order.
pub fn for_each_assignment(n: usize, m: usize, mut visit: impl FnMut(&[usize])) {
    let mut a = vec![0usize; n];
    loop {
        visit(&a);
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            a[pos] += 1;
            if a[pos] < m {
                break;
            }
            a[pos] = 0;
        }
    }
}

/// Feasible minimum-energy placement; ties go to lower waste, then lower
/// negated utilization, then the lexicographically smaller assignment.
pub fn brute_force(problem: &PlacementProblem) -> Result<Solution> {
    let (n, m) = (problem.n_vms(), problem.n_pms());
    let assignments = (m as f64).powi(n as i32);
    if assignments > MAX_ASSIGNMENTS {
        return Err(Error::InstanceTooLarge { assignments });
    }
    let mut best: Option<(ObjectiveVector, Vec<usize>)> = None;
    for_each_assignment(n, m, |a| {
        let loads = MachineLoads::compute(problem, a);
        let feasible =
            (0..m).all(|j| !loads.cpu_overloaded(problem, j) && !loads.mem_overloaded(problem, j));
        if !feasible {
            return;
        }
        let obj = ObjectiveVector::from_loads(problem, &loads);
        let better = match &best {
            None => true,
            Some((b, _)) => obj
                .energy
                .total_cmp(&b.energy)
                .then(obj.waste.total_cmp(&b.waste))
                .then(obj.neg_utilization.total_cmp(&b.neg_utilization))
                .is_lt(),
        };
        if better {
            best = Some((obj, a.to_vec()));
        }
    });
    let (objectives, assignment) = best.ok_or(Error::NoFeasibleSolution)?;
    Ok(Solution {
        keys: assignment.iter().map(|&j| j as f64 + 0.5).collect(),
        placement: Placement(assignment),
        objectives,
        feasible: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{PhysicalMachine, VirtualMachine};

    fn pm(id: usize, cpu: f64, p_idle: f64) -> PhysicalMachine {
        PhysicalMachine {
            id,
            cpu_capacity: cpu,
            mem_capacity: 100.0,
            p_idle,
            p_busy: 250.0,
        }
    }

    #[test]
    fn enumerates_lexicographically() {
        let mut seen = Vec::new();
        for_each_assignment(2, 3, |a| seen.push(a.to_vec()));
        assert_eq!(seen.len(), 9);
        assert_eq!(seen[0], vec![0, 0]);
        assert_eq!(seen[1], vec![0, 1]);
        assert_eq!(seen[8], vec![2, 2]);
    }

    #[test]
    fn single_vm_picks_the_cheapest_machine() {
        let p = PlacementProblem::new(
            vec![pm(0, 10.0, 200.0), pm(1, 10.0, 100.0), pm(2, 10.0, 150.0)],
            vec![VirtualMachine {
                id: 0,
                cpu_demand: 5.0,
                mem_demand: 1.0,
            }],
            0.9,
        )
        .unwrap();
        let s = brute_force(&p).unwrap();
        // 5 * ((250 - p_idle) * 0.5 + p_idle): 1125, 875, 1000.
        assert_eq!(s.placement, Placement(vec![1]));
        assert!((s.objectives.energy - 875.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_oversized_instances() {
        let p = PlacementProblem::new(
            vec![pm(0, 1.0, 100.0)],
            vec![VirtualMachine {
                id: 0,
                cpu_demand: 5.0,
                mem_demand: 1.0,
            }],
            0.9,
        )
        .unwrap();
        assert!(matches!(brute_force(&p), Err(Error::NoFeasibleSolution)));

        let vms = (0..21)
            .map(|id| VirtualMachine {
                id,
                cpu_demand: 0.1,
                mem_demand: 0.1,
            })
            .collect();
        let big =
            PlacementProblem::new(vec![pm(0, 10.0, 1.0), pm(1, 10.0, 1.0)], vms, 0.9).unwrap();
        assert!(matches!(
            brute_force(&big),
            Err(Error::InstanceTooLarge { .. })
        ));
    }
}
