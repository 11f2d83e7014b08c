use std::time::Instant;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{fitness, matched_budget, track_best};
use crate::error::{Error, Result};
use crate::instance::{first_fit_decreasing, PlacementProblem};
use crate::search::{CycleRecord, Evaluator, Solution, SolveResult};
use crate::seed::{self, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoParams {
    pub population_size: usize,
    pub max_cycles: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Per-dimension speed limit; `None` means `m / 2`.
    pub max_velocity: Option<f64>,
    /// Overrides the matched LAMOCS budget.
    pub evaluation_budget: Option<u64>,
    pub seed: u64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            population_size: 100,
            max_cycles: 500,
            inertia: 0.7,
            cognitive: 1.5,
            social: 1.5,
            max_velocity: None,
            evaluation_budget: None,
            seed: 0,
        }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.population_size == 0 {
            return bad("PSO population_size must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.inertia) {
            return bad(format!("inertia {} not in [0, 1]", self.inertia));
        }
        // Zero coefficients are accepted so degenerate dynamics can be probed.
        if !(self.cognitive >= 0.0 && self.social >= 0.0) {
            return bad("cognitive and social coefficients must be nonnegative".into());
        }
        if let Some(v) = self.max_velocity {
            if v.is_nan() || v <= 0.0 {
                return bad(format!("max_velocity {v} must be positive"));
            }
        }
        Ok(())
    }
}

/// Particle positions (random keys), velocities and memories.
pub struct Swarm<'a> {
    eval: Evaluator<'a>,
    params: PsoParams,
    rng: Rng,
    vmax: f64,
    pub particles: Vec<Solution>,
    pub velocities: Vec<Vec<f64>>,
    pub personal_best: Vec<Solution>,
    pub global_best: Solution,
    best_feasible: Option<Solution>,
}

impl<'a> Swarm<'a> {
    pub fn new(problem: &'a PlacementProblem, params: PsoParams) -> Result<Self> {
        problem.validate()?;
        params.validate()?;
        let mut rng = seed::rng(params.seed);
        let mut eval = Evaluator::new(problem);
        let (n, m) = (problem.n_vms(), problem.n_pms());
        let vmax = params.max_velocity.unwrap_or(m as f64 / 2.0);

        let anchor = first_fit_decreasing(problem);
        let particles: Vec<Solution> = (0..params.population_size)
            .map(|slot| match (&anchor, slot) {
                (Some(p), 0) => eval.evaluate_placement(p, &mut rng),
                _ => eval.random_solution(&mut rng),
            })
            .collect();
        let velocities = (0..params.population_size)
            .map(|_| {
                (0..n)
                    .map(|_| rng.random_range(-0.1 * vmax..=0.1 * vmax))
                    .collect()
            })
            .collect();
        let global_best = best_of(&particles).clone();
        let mut best_feasible = None;
        particles
            .iter()
            .for_each(|s| track_best(&mut best_feasible, s));
        Ok(Self {
            eval,
            params,
            rng,
            vmax,
            personal_best: particles.clone(),
            particles,
            velocities,
            global_best,
            best_feasible,
        })
    }

    pub fn evaluations(&self) -> u64 {
        self.eval.evaluations()
    }

    pub fn best_feasible(&self) -> Option<&Solution> {
        self.best_feasible.as_ref()
    }

    /// Moves every particle once, stopping early when `budget` is reached.
    pub fn step(&mut self, budget: u64) {
        let PsoParams {
            inertia,
            cognitive,
            social,
            ..
        } = self.params;
        let m = self.eval.problem().n_pms() as f64;
        for p in 0..self.particles.len() {
            if self.eval.evaluations() >= budget {
                break;
            }
            let x = &self.particles[p].keys;
            let pb = &self.personal_best[p].keys;
            let gb = &self.global_best.keys;
            let mut keys = Vec::with_capacity(x.len());
            for d in 0..x.len() {
                let r1: f64 = self.rng.random();
                let r2: f64 = self.rng.random();
                let v = inertia * self.velocities[p][d]
                    + cognitive * r1 * (pb[d] - x[d])
                    + social * r2 * (gb[d] - x[d]);
                let v = v.clamp(-self.vmax, self.vmax);
                self.velocities[p][d] = v;
                keys.push((x[d] + v).rem_euclid(m));
            }
            let s = self.eval.evaluate_keys(keys, &mut self.rng);
            if fitness(&s) < fitness(&self.personal_best[p]) {
                self.personal_best[p] = s.clone();
            }
            track_best(&mut self.best_feasible, &s);
            self.particles[p] = s;
        }
        let candidate = best_of(&self.personal_best);
        if fitness(candidate) < fitness(&self.global_best) {
            self.global_best = candidate.clone();
        }
    }
}

fn best_of(s: &[Solution]) -> &Solution {
    s.iter()
        .min_by(|a, b| fitness(a).total_cmp(&fitness(b)))
        .expect("swarm is never empty")
}

/// Random-key PSO with inertia, personal and global bests.
pub fn pso_solve(problem: &PlacementProblem, params: &PsoParams) -> Result<SolveResult> {
    let start = Instant::now();
    let budget = matched_budget(
        params.population_size,
        params.max_cycles,
        params.evaluation_budget,
    );
    let mut swarm = Swarm::new(problem, params.clone())?;
    let mut history = Vec::new();
    while swarm.evaluations() < budget {
        swarm.step(budget);
        history.push(CycleRecord {
            cycle: history.len() + 1,
            min_energy: swarm
                .best_feasible()
                .map_or(f64::INFINITY, |b| b.objectives.energy),
            front_size: usize::from(swarm.best_feasible().is_some()),
        });
    }
    let evaluations = swarm.evaluations();
    let best = swarm.best_feasible.ok_or(Error::NoFeasibleSolution)?;
    Ok(SolveResult {
        pareto_front: vec![best.clone()],
        best,
        history,
        elapsed: start.elapsed().as_secs_f64(),
        evaluations,
    })
}
