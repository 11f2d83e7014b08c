use std::time::Instant;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{fitness, matched_budget, track_best};
use crate::error::{Error, Result};
use crate::instance::{first_fit_decreasing, Placement, PlacementProblem};
use crate::search::{CycleRecord, Evaluator, Solution, SolveResult};
use crate::seed::{self, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaParams {
    /// Must be even.
    pub population_size: usize,
    pub max_cycles: usize,
    pub crossover_rate: f64,
    /// Per-gene reassignment probability; `None` means `1/n`.
    pub mutation_rate: Option<f64>,
    pub tournament_size: usize,
    /// Overrides the matched LAMOCS budget.
    pub evaluation_budget: Option<u64>,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population_size: 100,
            max_cycles: 500,
            crossover_rate: 0.9,
            mutation_rate: None,
            tournament_size: 2,
            evaluation_budget: None,
            seed: 0,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            return bad(format!(
                "GA population_size {} must be even and >= 2",
                self.population_size
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad(format!(
                "crossover_rate {} not in [0, 1]",
                self.crossover_rate
            ));
        }
        if let Some(r) = self.mutation_rate {
            if !(0.0..=1.0).contains(&r) {
                return bad(format!("mutation_rate {r} not in [0, 1]"));
            }
        }
        if self.tournament_size == 0 {
            return bad("tournament_size must be positive".into());
        }
        Ok(())
    }
}

fn tournament<'p>(pop: &'p [Solution], size: usize, rng: &mut Rng) -> &'p Solution {
    let mut best = &pop[rng.random_range(0..pop.len())];
    for _ in 1..size {
        let c = &pop[rng.random_range(0..pop.len())];
        if fitness(c) < fitness(best) {
            best = c;
        }
    }
    best
}

fn breed(
    a: &Placement,
    b: &Placement,
    params: &GaParams,
    m: usize,
    rate: f64,
    rng: &mut Rng,
) -> (Placement, Placement) {
    let (mut x, mut y) = (a.0.clone(), b.0.clone());
    if rng.random::<f64>() < params.crossover_rate {
        for i in 0..x.len() {
            if rng.random::<bool>() {
                std::mem::swap(&mut x[i], &mut y[i]);
            }
        }
    }
    for child in [&mut x, &mut y] {
        for gene in child.iter_mut() {
            if rng.random::<f64>() < rate {
                *gene = rng.random_range(0..m);
            }
        }
    }
    (Placement(x), Placement(y))
}

/// Generational GA on the direct assignment encoding with one elite.
pub fn ga_solve(problem: &PlacementProblem, params: &GaParams) -> Result<SolveResult> {
    problem.validate()?;
    params.validate()?;
    let start = Instant::now();
    let mut rng = seed::rng(params.seed);
    let mut eval = Evaluator::new(problem);
    let (n, m) = (problem.n_vms(), problem.n_pms());
    let rate = params.mutation_rate.unwrap_or(1.0 / n as f64);
    let budget = matched_budget(
        params.population_size,
        params.max_cycles,
        params.evaluation_budget,
    );

    let anchor = first_fit_decreasing(problem);
    let mut pop: Vec<Solution> = (0..params.population_size)
        .map(|slot| match (&anchor, slot) {
            (Some(p), 0) => eval.evaluate_placement(p, &mut rng),
            _ => eval.random_solution(&mut rng),
        })
        .collect();
    let mut best = None;
    pop.iter().for_each(|s| track_best(&mut best, s));
    let mut history = Vec::new();

    while eval.evaluations() < budget {
        pop.sort_by(|a, b| fitness(a).total_cmp(&fitness(b)));
        let mut next = vec![pop[0].clone()];
        while next.len() < pop.len() && eval.evaluations() < budget {
            let a = tournament(&pop, params.tournament_size, &mut rng);
            let b = tournament(&pop, params.tournament_size, &mut rng);
            let (x, y) = breed(&a.placement, &b.placement, params, m, rate, &mut rng);
            for child in [x, y] {
                if next.len() < pop.len() && eval.evaluations() < budget {
                    let s = eval.evaluate_placement(&child, &mut rng);
                    track_best(&mut best, &s);
                    next.push(s);
                }
            }
        }
        // Budget ran out mid-generation: keep the fittest survivors.
        let missing = pop.len() - next.len();
        next.extend(pop.iter().skip(1).take(missing).cloned());
        pop = next;
        history.push(CycleRecord {
            cycle: history.len() + 1,
            min_energy: best
                .as_ref()
                .map_or(f64::INFINITY, |b: &Solution| b.objectives.energy),
            front_size: usize::from(best.is_some()),
        });
    }

    let best = best.ok_or(Error::NoFeasibleSolution)?;
    Ok(SolveResult {
        pareto_front: vec![best.clone()],
        best,
        history,
        elapsed: start.elapsed().as_secs_f64(),
        evaluations: eval.evaluations(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, GeneratorConfig};
    use crate::search::lamocs_budget;

    fn small(pop: usize, cycles: usize, seed: u64) -> GaParams {
        GaParams {
            population_size: pop,
            max_cycles: cycles,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn params_validation() {
        assert!(GaParams::default().validate().is_ok());
        assert!(small(7, 1, 0).validate().is_err());
        assert!(GaParams {
            crossover_rate: 1.5,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(GaParams {
            tournament_size: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn trivial_instance() {
        let p = generate_instance(1, 1, 0, &GeneratorConfig::default()).unwrap();
        let r = ga_solve(&p, &small(4, 2, 0)).unwrap();
        assert_eq!(r.best.placement, Placement(vec![0]));
    }

    #[test]
    fn deterministic_budgeted_and_monotone() {
        let p = generate_instance(8, 20, 4, &GeneratorConfig::default()).unwrap();
        let a = ga_solve(&p, &small(20, 15, 3)).unwrap();
        let b = ga_solve(&p, &small(20, 15, 3)).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.history, b.history);
        assert_eq!(a.evaluations, lamocs_budget(20, 15, 0.25));
        assert!(a
            .history
            .windows(2)
            .all(|w| w[1].min_energy <= w[0].min_energy));
        assert!(a.best.feasible);
    }
}
