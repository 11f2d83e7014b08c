use std::time::Instant;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::automata::{init_ensemble, sample_placement, AutomataEnsemble};
use super::levy::{levy_keys, Mantegna};
use super::pareto::{dominates, worst_first, ParetoArchive};
use crate::error::{Error, Result};
use crate::instance::{first_fit_decreasing, Placement, PlacementProblem};
use crate::objectives::ObjectiveVector;
use crate::search::{
    abandoned_count, min_energy_index, CycleRecord, Evaluator, Solution, SolveResult,
};
use crate::seed::{self, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverParams {
    pub population_size: usize,
    pub max_cycles: usize,
    /// Fraction of worst nests abandoned per cycle.
    pub pa: f64,
    pub levy_beta: f64,
    /// Penalty factor `b` of the automata update.
    pub penalty_factor: f64,
    /// Reward factor `a` of the automata update.
    pub reward_factor: f64,
    /// Multiplier of Lévy steps in key space; `None` means `1 / n`, which
    /// moves about one VM per flight on average.
    pub step_scale: Option<f64>,
    pub seed: u64,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            population_size: 100,
            max_cycles: 500,
            pa: 0.25,
            levy_beta: 1.5,
            penalty_factor: 0.5,
            reward_factor: 0.5,
            step_scale: None,
            seed: 0,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.population_size < 4 {
            return bad(format!("population_size {} < 4", self.population_size));
        }
        if !(self.pa > 0.0 && self.pa < 1.0) {
            return bad(format!("pa {} not in (0, 1)", self.pa));
        }
        if !(self.levy_beta > 1.0 && self.levy_beta <= 2.0) {
            return bad(format!("levy_beta {} not in (1, 2]", self.levy_beta));
        }
        for (name, f) in [
            ("penalty_factor", self.penalty_factor),
            ("reward_factor", self.reward_factor),
        ] {
            if !(f > 0.0 && f < 1.0) {
                return bad(format!("{name} {f} not in (0, 1)"));
            }
        }
        if let Some(s) = self.step_scale {
            if !(s >= 0.0 && s.is_finite()) {
                return bad(format!("step_scale {s} must be finite and nonnegative"));
            }
        }
        Ok(())
    }
}

/// What one generation did, for inspection and tests.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub cycle: usize,
    /// Population slots refilled from automata samples.
    pub automata_replaced: Vec<usize>,
    /// Population slots refilled with uniform-random keys.
    pub random_replaced: Vec<usize>,
    /// The worst-ranked placement whose actions were penalized.
    pub penalized: Placement,
    /// The min-energy feasible placement whose actions were rewarded.
    pub rewarded: Option<Placement>,
}

/// Solver state: nests, automata, archive and the random stream.
pub struct Lamocs<'a> {
    evaluator: Evaluator<'a>,
    params: SolverParams,
    population: Vec<Solution>,
    ensemble: AutomataEnsemble,
    archive: ParetoArchive,
    levy: Mantegna,
    step_scale: f64,
    rng: Rng,
    cycle: usize,
    history: Vec<CycleRecord>,
}

impl<'a> Lamocs<'a> {
    /// Random initial nests, except slot 0 which holds the first-fit
    /// decreasing placement whenever one exists.
    pub fn new(problem: &'a PlacementProblem, params: SolverParams) -> Result<Self> {
        problem.validate()?;
        params.validate()?;
        let mut rng = seed::rng(params.seed);
        let mut evaluator = Evaluator::new(problem);
        let anchor = first_fit_decreasing(problem);

        let mut population = Vec::with_capacity(params.population_size);
        for slot in 0..params.population_size {
            let s = match (&anchor, slot) {
                (Some(p), 0) => evaluator.evaluate_placement(p, &mut rng),
                _ => evaluator.random_solution(&mut rng),
            };
            population.push(s);
        }
        let mut archive = ParetoArchive::new();
        for s in &population {
            archive.insert(s);
        }
        let ensemble = init_ensemble(
            problem.n_vms(),
            problem.n_pms(),
            params.reward_factor,
            params.penalty_factor,
        )?;
        let step_scale = params.step_scale.unwrap_or(1.0 / problem.n_vms() as f64);
        Ok(Self {
            evaluator,
            levy: Mantegna::new(params.levy_beta)?,
            params,
            population,
            ensemble,
            archive,
            step_scale,
            rng,
            cycle: 0,
            history: Vec::new(),
        })
    }

    pub fn population(&self) -> &[Solution] {
        &self.population
    }

    pub fn ensemble(&self) -> &AutomataEnsemble {
        &self.ensemble
    }

    pub fn archive(&self) -> &ParetoArchive {
        &self.archive
    }

    pub fn cycle(&self) -> usize {
        self.cycle
    }

    pub fn history(&self) -> &[CycleRecord] {
        &self.history
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluator.evaluations()
    }

    /// Replaces the population, e.g. to start from a hand-built state.
    pub fn set_population(&mut self, population: Vec<Solution>) -> Result<()> {
        if population.len() != self.params.population_size {
            return Err(Error::DimensionMismatch {
                expected: self.params.population_size,
                actual: population.len(),
            });
        }
        for s in &population {
            self.archive.insert(s);
        }
        self.population = population;
        Ok(())
    }

    /// Runs one generation.
    pub fn step(&mut self) -> Result<StepReport> {
        let pop = self.population.len();
        let mut fresh: Vec<Solution> = Vec::with_capacity(pop * 2);

        // Lévy flights, each candidate challenging a random nest.
        for k in 0..pop {
            let keys = levy_keys(
                &self.population[k].keys,
                &self.levy,
                self.step_scale,
                &mut self.rng,
            );
            let candidate = self.evaluator.evaluate_keys(keys, &mut self.rng);
            let r = self.rng.random_range(0..pop);
            if dominates(&candidate.objectives, &self.population[r].objectives) {
                self.population[r] = candidate.clone();
            }
            fresh.push(candidate);
        }

        // Abandon the worst nests: half refilled from automata, half at random.
        let points: Vec<ObjectiveVector> = self.population.iter().map(|s| s.objectives).collect();
        let order = worst_first(&points);
        let penalized = self.population[order[0]].placement.clone();
        let abandoned = abandoned_count(pop, self.params.pa);
        let guided = abandoned - abandoned / 2;
        let automata_replaced = order[..guided].to_vec();
        let random_replaced = order[guided..abandoned].to_vec();
        for &slot in &automata_replaced {
            let placement = sample_placement(&self.ensemble, &mut self.rng);
            let keys = placement
                .0
                .iter()
                .map(|&j| j as f64 + self.rng.random::<f64>())
                .collect();
            self.population[slot] = self.evaluator.evaluate_keys(keys, &mut self.rng);
            fresh.push(self.population[slot].clone());
        }
        for &slot in &random_replaced {
            self.population[slot] = self.evaluator.random_solution(&mut self.rng);
            fresh.push(self.population[slot].clone());
        }

        // Penalize the worst response's actions, reward the best's.
        self.ensemble.penalize_all(&penalized)?;
        let rewarded =
            min_energy_index(&self.population).map(|b| self.population[b].placement.clone());
        if let Some(best) = &rewarded {
            self.ensemble.reward_all(best, Some(&penalized))?;
        }

        for s in &fresh {
            self.archive.insert(s);
        }
        self.cycle += 1;
        self.history.push(CycleRecord {
            cycle: self.cycle,
            min_energy: self
                .archive
                .min_energy()
                .map_or(f64::INFINITY, |s| s.objectives.energy),
            front_size: self.archive.len(),
        });
        Ok(StepReport {
            cycle: self.cycle,
            automata_replaced,
            random_replaced,
            penalized,
            rewarded,
        })
    }

    pub fn into_result(self, elapsed: f64) -> Result<SolveResult> {
        let evaluations = self.evaluator.evaluations();
        let best = self
            .archive
            .min_energy()
            .cloned()
            .ok_or(Error::NoFeasibleSolution)?;
        Ok(SolveResult {
            pareto_front: self.archive.into_members(),
            best,
            history: self.history,
            elapsed,
            evaluations,
        })
    }
}

/// Runs LAMOCS for `params.max_cycles` generations.
pub fn solve(problem: &PlacementProblem, params: &SolverParams) -> Result<SolveResult> {
    solve_with_observer(problem, params, |_, _| {})
}

/// Like [`solve`], calling `observer(cycle, archive)` after every generation.
pub fn solve_with_observer(
    problem: &PlacementProblem,
    params: &SolverParams,
    mut observer: impl FnMut(usize, &ParetoArchive),
) -> Result<SolveResult> {
    let start = Instant::now();
    let mut solver = Lamocs::new(problem, params.clone())?;
    for _ in 0..params.max_cycles {
        solver.step()?;
        observer(solver.cycle(), solver.archive());
    }
    solver.into_result(start.elapsed().as_secs_f64())
}
