//! Single-objective GA and PSO comparators.
//!
//! Both minimize energy through the same repair-and-penalty evaluator as
//! LAMOCS and stop after the evaluation budget LAMOCS would spend with the
//! same population size and cycle count, so comparisons are at equal cost.
//! They are generic textbook variants, not reproductions of any specific
//! published GA or PSO placement scheme.

mod ga;
mod pso;

pub use ga::{ga_solve, GaParams};
pub use pso::{pso_solve, PsoParams, Swarm};

use crate::search::{lamocs_budget, Solution};

/// Abandon fraction used to derive the matched evaluation budget.
pub const BUDGET_PA: f64 = 0.25;

pub(crate) fn matched_budget(
    population_size: usize,
    max_cycles: usize,
    explicit: Option<u64>,
) -> u64 {
    explicit.unwrap_or_else(|| lamocs_budget(population_size, max_cycles, BUDGET_PA))
}

/// Scalar fitness: penalized energy, lower is better.
pub(crate) fn fitness(s: &Solution) -> f64 {
    s.objectives.energy
}

/// Keeps `best` as the least-energy feasible solution seen.
pub(crate) fn track_best(best: &mut Option<Solution>, candidate: &Solution) {
    if candidate.feasible
        && best
            .as_ref()
            .is_none_or(|b| candidate.objectives.energy < b.objectives.energy)
    {
        *best = Some(candidate.clone());
    }
}
