//! Placement objectives and reporting metrics.
//!
//! All three optimization objectives are minimized:
//!
//! * `energy` — `Σ_j (Σ_{i on j} R_pi) · P_j`, CPU demand weighted by the
//!   machine's power draw,
//! * `waste` — unused headroom on powered-on machines,
//!   `Σ_{active j} [(threshold − U_j) + (1 − M_j)] / 2`,
//! * `neg_utilization` — minus `Σ_j α·cpu_j/T_pj + Σ_j β·mem_j/T_mj`.
//!
//! A machine's power follows the linear idle/busy model and is exactly zero
//! when it hosts nothing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{MachineLoads, PhysicalMachine, Placement, PlacementProblem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub energy: f64,
    pub waste: f64,
    pub neg_utilization: f64,
}

impl ObjectiveVector {
    pub fn as_array(&self) -> [f64; 3] {
        [self.energy, self.waste, self.neg_utilization]
    }

    /// Evaluates all three objectives from precomputed machine loads.
    pub fn from_loads(problem: &PlacementProblem, loads: &MachineLoads) -> Self {
        Self {
            energy: energy_of(problem, loads),
            waste: waste_of(problem, loads),
            neg_utilization: -utilization_of(problem, loads),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub energy: f64,
    pub waste: f64,
    pub active_servers: usize,
    pub mean_cpu_utilization: f64,
    /// Population standard deviation of CPU utilization over active machines.
    pub load_balance: f64,
    /// Seconds.
    pub processing_time: f64,
    /// `Σ_j P_j` in watts.
    pub total_power: f64,
}

/// Linear power model: `(p_busy − p_idle)·u + p_idle` when `u > 0`, otherwise 0.
pub fn power_at(pm: &PhysicalMachine, u: f64) -> f64 {
    if u > 0.0 {
        (pm.p_busy - pm.p_idle) * u + pm.p_idle
    } else {
        0.0
    }
}

fn check_machine(problem: &PlacementProblem, j: usize) -> Result<()> {
    if j < problem.n_pms() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            index: j,
            len: problem.n_pms(),
        })
    }
}

fn loads(problem: &PlacementProblem, placement: &Placement) -> Result<MachineLoads> {
    problem.check_placement(placement)?;
    Ok(MachineLoads::compute(problem, placement.as_slice()))
}

pub fn cpu_utilization(problem: &PlacementProblem, placement: &Placement, j: usize) -> Result<f64> {
    check_machine(problem, j)?;
    let l = loads(problem, placement)?;
    Ok(l.cpu[j] / problem.pms[j].cpu_capacity)
}

pub fn power(problem: &PlacementProblem, placement: &Placement, j: usize) -> Result<f64> {
    let u = cpu_utilization(problem, placement, j)?;
    Ok(power_at(&problem.pms[j], u))
}

pub fn energy(problem: &PlacementProblem, placement: &Placement) -> Result<f64> {
    Ok(energy_of(problem, &loads(problem, placement)?))
}

pub fn total_power(problem: &PlacementProblem, placement: &Placement) -> Result<f64> {
    Ok(total_power_of(problem, &loads(problem, placement)?))
}

pub fn utilization(problem: &PlacementProblem, placement: &Placement) -> Result<f64> {
    Ok(utilization_of(problem, &loads(problem, placement)?))
}

pub fn waste(problem: &PlacementProblem, placement: &Placement) -> Result<f64> {
    Ok(waste_of(problem, &loads(problem, placement)?))
}

pub fn evaluate(problem: &PlacementProblem, placement: &Placement) -> Result<ObjectiveVector> {
    Ok(ObjectiveVector::from_loads(
        problem,
        &loads(problem, placement)?,
    ))
}

pub(crate) fn energy_of(problem: &PlacementProblem, loads: &MachineLoads) -> f64 {
    problem
        .pms
        .iter()
        .zip(&loads.cpu)
        .map(|(pm, &cpu)| cpu * power_at(pm, cpu / pm.cpu_capacity))
        .sum()
}

pub(crate) fn total_power_of(problem: &PlacementProblem, loads: &MachineLoads) -> f64 {
    problem
        .pms
        .iter()
        .zip(&loads.cpu)
        .map(|(pm, &cpu)| power_at(pm, cpu / pm.cpu_capacity))
        .sum()
}

pub(crate) fn utilization_of(problem: &PlacementProblem, loads: &MachineLoads) -> f64 {
    let cpu: f64 = problem
        .pms
        .iter()
        .zip(&loads.cpu)
        .map(|(pm, &c)| problem.alpha * c / pm.cpu_capacity)
        .sum();
    let mem: f64 = problem
        .pms
        .iter()
        .zip(&loads.mem)
        .map(|(pm, &m)| problem.beta * m / pm.mem_capacity)
        .sum();
    cpu + mem
}

// Terms are clamped at zero so overloaded (infeasible) machines never
// contribute negative waste.
pub(crate) fn waste_of(problem: &PlacementProblem, loads: &MachineLoads) -> f64 {
    problem
        .pms
        .iter()
        .enumerate()
        .filter(|&(j, _)| loads.cpu[j] > 0.0)
        .map(|(j, pm)| {
            let cpu_slack = (problem.cpu_threshold - loads.cpu[j] / pm.cpu_capacity).max(0.0);
            let mem_slack = (1.0 - loads.mem[j] / pm.mem_capacity).max(0.0);
            (cpu_slack + mem_slack) / 2.0
        })
        .sum()
}

/// Assembles the six reporting criteria for a placement.
pub fn metrics(
    problem: &PlacementProblem,
    placement: &Placement,
    elapsed: f64,
) -> Result<MetricsRow> {
    let l = loads(problem, placement)?;
    let active: Vec<f64> = problem
        .pms
        .iter()
        .zip(&l.cpu)
        .filter(|&(_, &c)| c > 0.0)
        .map(|(pm, &c)| c / pm.cpu_capacity)
        .collect();
    let (mean, std) = mean_std(&active);
    Ok(MetricsRow {
        energy: energy_of(problem, &l),
        waste: waste_of(problem, &l),
        active_servers: active.len(),
        mean_cpu_utilization: mean,
        load_balance: std,
        processing_time: elapsed,
        total_power: total_power_of(problem, &l),
    })
}

/// Mean and population standard deviation; `(0, 0)` for an empty slice.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::VirtualMachine;

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

    fn single(cpu: f64, mem: f64) -> PlacementProblem {
        PlacementProblem::new(
            vec![pm(0, 10.0, 16.0), pm(1, 10.0, 16.0)],
            vec![vm(0, cpu, mem)],
            0.9,
        )
        .unwrap()
    }

    #[test]
    fn power_boundaries() {
        let m = pm(0, 10.0, 10.0);
        assert_eq!(power_at(&m, 0.0), 0.0);
        assert_eq!(power_at(&m, 1.0), 250.0);
        assert!((power_at(&m, 0.4) - 190.0).abs() < 1e-9);
        // Right limit at zero is p_idle, not 0.
        assert!((power_at(&m, 1e-12) - 150.0).abs() < 1e-6);
    }

    #[test]
    fn empty_machine_has_zero_utilization_and_power() {
        let p = single(5.0, 8.0);
        let x = Placement(vec![0]);
        assert_eq!(cpu_utilization(&p, &x, 1).unwrap(), 0.0);
        assert_eq!(power(&p, &x, 1).unwrap(), 0.0);
        assert_eq!(cpu_utilization(&p, &x, 0).unwrap(), 0.5);
    }

    #[test]
    fn single_vm_energy_and_utilization() {
        let p = single(5.0, 8.0);
        let x = Placement(vec![0]);
        assert!((power(&p, &x, 0).unwrap() - 200.0).abs() < 1e-12);
        assert!((energy(&p, &x).unwrap() - 1000.0).abs() < 1e-9);
        assert!((utilization(&p, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!((total_power(&p, &x).unwrap() - 200.0).abs() < 1e-12);
    }

    #[test]
    fn empty_problem_objectives_are_zero() {
        let p = PlacementProblem {
            pms: vec![pm(0, 10.0, 10.0)],
            vms: vec![],
            cpu_threshold: 0.9,
            alpha: 1.0,
            beta: 1.0,
        };
        let x = Placement(vec![]);
        assert_eq!(energy(&p, &x).unwrap(), 0.0);
        assert_eq!(utilization(&p, &x).unwrap(), 0.0);
        assert_eq!(waste(&p, &x).unwrap(), 0.0);
        let row = metrics(&p, &x, 0.0).unwrap();
        assert_eq!(row.active_servers, 0);
        assert_eq!(row.mean_cpu_utilization, 0.0);
        assert_eq!(row.load_balance, 0.0);
    }

    #[test]
    fn waste_is_zero_at_threshold_and_full_memory() {
        let p = single(9.0, 16.0);
        assert_eq!(waste(&p, &Placement(vec![0])).unwrap(), 0.0);
        let q = single(4.5, 8.0);
        // (0.9 - 0.45 + 1 - 0.5) / 2
        assert!((waste(&q, &Placement(vec![1])).unwrap() - 0.475).abs() < 1e-12);
    }

    #[test]
    fn load_balance_of_two_machines() {
        let p = PlacementProblem::new(
            vec![pm(0, 10.0, 16.0), pm(1, 10.0, 16.0)],
            vec![vm(0, 2.0, 1.0), vm(1, 8.0, 1.0)],
            0.9,
        )
        .unwrap();
        let row = metrics(&p, &Placement(vec![0, 1]), 1.5).unwrap();
        assert_eq!(row.active_servers, 2);
        assert!((row.mean_cpu_utilization - 0.5).abs() < 1e-12);
        assert!((row.load_balance - 0.3).abs() < 1e-12);
        assert_eq!(row.processing_time, 1.5);

        let one = metrics(&p, &Placement(vec![0, 0]), 0.0).unwrap();
        assert_eq!(one.active_servers, 1);
        assert_eq!(one.load_balance, 0.0);
    }

    #[test]
    fn out_of_range_machine_index() {
        let p = single(1.0, 1.0);
        assert!(matches!(
            cpu_utilization(&p, &Placement(vec![0]), 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
        assert!(matches!(
            energy(&p, &Placement(vec![5])),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
