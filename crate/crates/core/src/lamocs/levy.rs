//! Lévy-stable step lengths via Mantegna's algorithm.

use rand::Rng as _;
use rand_distr::StandardNormal;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::seed::Rng;

/// Draws `u / |v|^(1/β)` with `u ~ N(0, σ_u²)`, `v ~ N(0, 1)` and
/// `σ_u = [Γ(1+β)·sin(πβ/2) / (Γ((1+β)/2)·β·2^((β−1)/2))]^(1/β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mantegna {
    beta: f64,
    sigma_u: f64,
}

impl Mantegna {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 1.0 && beta <= 2.0) {
            return Err(Error::InvalidConfig(format!(
                "levy_beta {beta} not in (1, 2]"
            )));
        }
        let num = gamma(1.0 + beta) * (std::f64::consts::PI * beta / 2.0).sin();
        let den = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
        Ok(Self {
            beta,
            sigma_u: (num / den).powf(1.0 / beta),
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sigma_u(&self) -> f64 {
        self.sigma_u
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        let u: f64 = rng.sample::<f64, _>(StandardNormal) * self.sigma_u;
        let v: f64 = rng.sample(StandardNormal);
        u / v.abs().powf(1.0 / self.beta)
    }
}

/// `keys[i] + step_scale · L_i`, unwrapped; the evaluator wraps into `[0, m)`.
pub fn levy_keys(keys: &[f64], sampler: &Mantegna, step_scale: f64, rng: &mut Rng) -> Vec<f64> {
    keys.iter()
        .map(|&k| k + step_scale * sampler.sample(rng))
        .collect()
}
