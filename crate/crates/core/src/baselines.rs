//! Unadjusted Langevin Monte Carlo, run as `N` independent chains:
//! `θ ← θ − γ∇V(θ) + √(2γ) ξ`.
//!
//! Noise is counter-based. The standard normal used for coordinate `c` of
//! chain `i` at iteration `t` is a pure function of `(seed, t, i, c)`, so
//! chains can be advanced in parallel without changing the trajectory.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::stein::Ensemble;
use crate::targets::Target;

#[derive(Debug, Clone, PartialEq)]
pub struct LmcState {
    positions: Vec<f64>,
    n: usize,
    d: usize,
    seed: u64,
    rng_counter: u64,
}

/// Noise source for [`lmc_step_with`]. `Zero` turns the chain into plain
/// gradient descent and exists for testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Noise {
    Gaussian,
    Zero,
}

impl LmcState {
    pub fn new(positions: Vec<f64>, d: usize, seed: u64) -> Result<Self> {
        let ens = Ensemble::from_positions(positions, d, seed)?;
        Ok(Self::from_ensemble(&ens))
    }

    pub fn from_ensemble(ens: &Ensemble) -> Self {
        Self {
            positions: ens.positions().to_vec(),
            n: ens.n(),
            d: ens.d(),
            seed: ens.seed(),
            rng_counter: 0,
        }
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of steps taken so far.
    pub fn rng_counter(&self) -> u64 {
        self.rng_counter
    }

    pub fn to_ensemble(&self) -> Ensemble {
        Ensemble::from_positions(self.positions.clone(), self.d, self.seed)
            .expect("LMC state is finite and non-empty")
    }
}

pub fn lmc_step(state: &LmcState, target: &Target, gamma: f64) -> Result<LmcState> {
    lmc_step_with(state, target, gamma, Noise::Gaussian)
}

pub fn lmc_step_with(state: &LmcState, target: &Target, gamma: f64, noise: Noise) -> Result<LmcState> {
    check_dim(state.d, target.dim())?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Argument(format!("step size must be > 0, got {gamma}")));
    }
    let d = state.d;
    let scale = (2.0 * gamma).sqrt();
    let iter = state.rng_counter;
    let mut positions = state.positions.clone();
    positions
        .par_chunks_mut(d)
        .enumerate()
        .for_each(|(chain, theta)| {
            let mut grad = vec![0.0; d];
            target.grad_into(theta, &mut grad);
            let mut rng = match noise {
                Noise::Gaussian => Some(noise_stream(state.seed, iter, chain as u64, d)),
                Noise::Zero => None,
            };
            for (x, g) in theta.iter_mut().zip(&grad) {
                let xi = rng.as_mut().map_or(0.0, standard_normal);
                *x += -gamma * g + scale * xi;
            }
        });
    if let Some(bad) = positions.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            iter: iter as usize,
            reason: format!("LMC chain {} diverged with step size {gamma:e}", bad / d),
        });
    }
    Ok(LmcState {
        positions,
        n: state.n,
        d,
        seed: state.seed,
        rng_counter: iter + 1,
    })
}

/// Generator positioned at the first word reserved for `(iter, chain)`.
/// Each coordinate consumes four 32-bit words (two `u64` draws).
fn noise_stream(seed: u64, iter: u64, chain: u64, d: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain);
    rng.set_word_pos(iter as u128 * d as u128 * 4);
    rng
}

/// Box–Muller on two 53-bit uniforms.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
    let u2 = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
