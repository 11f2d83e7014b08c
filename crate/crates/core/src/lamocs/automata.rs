//! Learning automata over physical-machine actions.
//!
//! Each VM owns one automaton whose actions are the `m` machines. Penalizing
//! action `i` with factor `b`:
//!
//! ```text
//! p_i ← (1 − b)·p_i
//! p_j ← b/(m − 1) + (1 − b)·p_j      for j ≠ i
//! ```
//!
//! Rewarding action `i` with factor `a` (linear reward scheme):
//!
//! ```text
//! p_i ← p_i + a·(1 − p_i)
//! p_j ← (1 − a)·p_j                  for j ≠ i
//! ```
//!
//! Both maps keep the vector on the probability simplex.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::instance::Placement;
use crate::seed::Rng;

const SIMPLEX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LearningAutomaton {
    probs: Vec<f64>,
}

impl LearningAutomaton {
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig(
                "automaton needs at least one action".into(),
            ));
        }
        Ok(Self {
            probs: vec![1.0 / m as f64; m],
        })
    }

    /// Wraps an explicit probability vector after checking it is on the simplex.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if probs.is_empty() || probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidConfig(format!(
                "invalid action probabilities {probs:?}"
            )));
        }
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidConfig(format!(
                "action probabilities sum to {sum}"
            )));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn n_actions(&self) -> usize {
        self.probs.len()
    }

    fn check_action(&self, action: usize) -> Result<()> {
        if action < self.probs.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: action,
                len: self.probs.len(),
            })
        }
    }

    pub fn penalize(&self, action: usize, b: f64) -> Result<Self> {
        self.check_action(action)?;
        let m = self.probs.len();
        if m == 1 {
            return Ok(self.clone());
        }
        let spread = b / (m - 1) as f64;
        let probs = self
            .probs
            .iter()
            .enumerate()
            .map(|(j, &p)| {
                if j == action {
                    (1.0 - b) * p
                } else {
                    spread + (1.0 - b) * p
                }
            })
            .collect();
        Ok(Self { probs })
    }

    pub fn reward(&self, action: usize, a: f64) -> Result<Self> {
        self.check_action(action)?;
        let probs = self
            .probs
            .iter()
            .enumerate()
            .map(|(j, &p)| {
                if j == action {
                    p + a * (1.0 - p)
                } else {
                    (1.0 - a) * p
                }
            })
            .collect();
        Ok(Self { probs })
    }

    /// Draws an action from the categorical distribution.
    pub fn sample(&self, rng: &mut Rng) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (j, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return j;
            }
        }
        // u landed in the rounding gap above the cumulative sum.
        self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }
}

/// One automaton per VM plus the update factors.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomataEnsemble {
    pub automata: Vec<LearningAutomaton>,
    pub penalty_factor: f64,
    pub reward_factor: f64,
}

pub fn init_ensemble(
    n: usize,
    m: usize,
    reward_factor: f64,
    penalty_factor: f64,
) -> Result<AutomataEnsemble> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidConfig(format!(
            "ensemble needs n >= 1 and m >= 1 (got n={n}, m={m})"
        )));
    }
    for (name, f) in [("reward", reward_factor), ("penalty", penalty_factor)] {
        if !(0.0..1.0).contains(&f) {
            return Err(Error::InvalidConfig(format!(
                "{name} factor {f} not in [0, 1)"
            )));
        }
    }
    Ok(AutomataEnsemble {
        automata: vec![LearningAutomaton::uniform(m)?; n],
        penalty_factor,
        reward_factor,
    })
}

impl AutomataEnsemble {
    pub fn len(&self) -> usize {
        self.automata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.automata.is_empty()
    }

    /// Penalizes, per VM, the machine chosen by `placement`.
    pub fn penalize_all(&mut self, placement: &Placement) -> Result<()> {
        for (la, &j) in self.automata.iter_mut().zip(placement.as_slice()) {
            *la = la.penalize(j, self.penalty_factor)?;
        }
        Ok(())
    }

    /// Rewards, per VM, the machine chosen by `target`, skipping VMs where
    /// `unless` picks the same machine.
    pub fn reward_all(&mut self, target: &Placement, unless: Option<&Placement>) -> Result<()> {
        for (i, (la, &j)) in self.automata.iter_mut().zip(target.as_slice()).enumerate() {
            if unless.is_some_and(|u| u.0[i] == j) {
                continue;
            }
            *la = la.reward(j, self.reward_factor)?;
        }
        Ok(())
    }
}

/// Draws one machine per VM from its automaton.
pub fn sample_placement(ensemble: &AutomataEnsemble, rng: &mut Rng) -> Placement {
    Placement(ensemble.automata.iter().map(|la| la.sample(rng)).collect())
}
