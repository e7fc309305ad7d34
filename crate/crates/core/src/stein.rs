//! Particle ensembles, the empirical SVGD direction and the kernelized Stein
//! discrepancy.
//!
//! For an ensemble `x₁ … x_N` the direction is
//!
//! ```text
//! ĝ(y) = (1/N) Σᵢ [ ∇V(xᵢ) k(xᵢ, y) − ∇₁k(xᵢ, y) ]
//! ```
//!
//! and one step moves every particle to `xᵢ − γ ĝ(xᵢ)`, with `ĝ` frozen at the
//! pre-step positions. `‖ĝ‖²_H` is computed two ways: as the V-statistic of
//! the Stein kernel ([`ksd_squared`]) and by expanding the RKHS inner product
//! term by term ([`direction_norm_squared`]).
//!
//! All pairwise sums are parallel over the outer index and reduced in a
//! fixed order, so results do not depend on the number of worker threads.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::kernels::KernelSpec;
use crate::targets::{dot, norm, Target};

/// `N` particles in `ℝ^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    positions: Vec<f64>,
    n: usize,
    d: usize,
    seed: u64,
}

impl Ensemble {
    pub fn from_positions(positions: Vec<f64>, d: usize, seed: u64) -> Result<Self> {
        if d == 0 || positions.is_empty() || !positions.len().is_multiple_of(d) {
            return Err(Error::Argument(format!(
                "{} coordinates do not form a non-empty ensemble in dimension {d}",
                positions.len()
            )));
        }
        if positions.iter().any(|v| !v.is_finite()) {
            return Err(Error::Argument("ensemble has non-finite coordinates".into()));
        }
        Ok(Self {
            n: positions.len() / d,
            positions,
            d,
            seed,
        })
    }

    /// `n` i.i.d. draws from `N(0, I_d)`.
    pub fn standard_normal(n: usize, d: usize, seed: u64) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::Argument("ensemble needs n >= 1 and d >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let positions = (0..n * d).map(|_| StandardNormal.sample(&mut rng)).collect();
        Ok(Self {
            positions,
            n,
            d,
            seed,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn particle(&self, i: usize) -> &[f64] {
        &self.positions[i * self.d..(i + 1) * self.d]
    }

    pub fn particles(&self) -> impl Iterator<Item = &[f64]> {
        self.positions.chunks_exact(self.d)
    }

    fn check(&self, target: &Target, spec: &KernelSpec) -> Result<()> {
        check_dim(self.d, target.dim())?;
        check_dim(self.d, spec.dim())
    }
}

/// `∇V` at every particle, row-major.
pub fn potential_gradients(ens: &Ensemble, target: &Target) -> Vec<f64> {
    let d = ens.d;
    let mut out = vec![0.0; ens.positions.len()];
    out.par_chunks_mut(d)
        .zip(ens.positions.par_chunks(d))
        .for_each(|(g, x)| target.grad_into(x, g));
    out
}

/// `ĝ(y)` for an arbitrary evaluation point.
pub fn direction(ens: &Ensemble, target: &Target, spec: &KernelSpec, y: &[f64]) -> Result<Vec<f64>> {
    ens.check(target, spec)?;
    check_dim(ens.d, y.len())?;
    let grads = potential_gradients(ens, target);
    Ok(direction_with(ens, &grads, spec, y))
}

pub(crate) fn direction_with(ens: &Ensemble, grads: &[f64], spec: &KernelSpec, y: &[f64]) -> Vec<f64> {
    let d = ens.d;
    let mut out = vec![0.0; d];
    let mut g1 = vec![0.0; d];
    for (x, gv) in ens.particles().zip(grads.chunks_exact(d)) {
        let (k, _) = spec.pair_terms(x, y, &mut g1);
        for a in 0..d {
            out[a] += gv[a] * k - g1[a];
        }
    }
    let inv_n = 1.0 / ens.n as f64;
    out.iter_mut().for_each(|v| *v *= inv_n);
    out
}

/// The Stein kernel
/// `u(x, y) = ∇V(x)·∇V(y) k − ∇V(x)·∇₂k − ∇V(y)·∇₁k + Σᵢ ∂²k/∂xᵢ∂yᵢ`.
pub fn stein_kernel(target: &Target, spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim(target.dim(), spec.dim())?;
    let gx = target.grad_potential(x)?;
    let gy = target.grad_potential(y)?;
    let k = spec.eval(x, y)?;
    let grad1 = spec.grad1(x, y)?;
    let grad2 = spec.grad1(y, x)?;
    let trace = spec.trace_mixed_second(x, y)?;
    Ok(dot(&gx, &gy) * k - dot(&gx, &grad2) - dot(&gy, &grad1) + trace)
}

/// Result of one fused pass over all particle pairs.
#[derive(Debug, Clone)]
pub struct Sweep {
    /// `ĝ(xⱼ)` for every particle, row-major.
    pub directions: Vec<f64>,
    /// V-statistic of the Stein kernel, `(1/N²) Σᵢ Σⱼ u(xᵢ, xⱼ)`.
    pub ksd2: f64,
}

/// `cross_sign` multiplies the two score/kernel-gradient cross terms of the
/// Stein kernel; anything other than `1.0` is a deliberate corruption used
/// by mutation tests.
pub(crate) fn sweep(ens: &Ensemble, grads: &[f64], spec: &KernelSpec, cross_sign: f64) -> Sweep {
    let (n, d) = (ens.n, ens.d);
    let rows: Vec<(Vec<f64>, f64)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let y = ens.particle(j);
            let gy = &grads[j * d..(j + 1) * d];
            let mut dir = vec![0.0; d];
            let mut g1 = vec![0.0; d];
            let mut row = 0.0;
            for (x, gx) in ens.particles().zip(grads.chunks_exact(d)) {
                // g1 = ∇₁k(x, y) = −∇₂k(x, y)
                let (k, trace) = spec.pair_terms(x, y, &mut g1);
                let mut score = 0.0;
                let mut cross = 0.0;
                for a in 0..d {
                    dir[a] += gx[a] * k - g1[a];
                    score += gx[a] * gy[a];
                    cross += (gx[a] - gy[a]) * g1[a];
                }
                row += score * k + cross_sign * cross + trace;
            }
            (dir, row)
        })
        .collect();
    let inv_n = 1.0 / n as f64;
    let mut directions = Vec::with_capacity(n * d);
    let mut total = 0.0;
    for (dir, row) in rows {
        directions.extend(dir.into_iter().map(|v| v * inv_n));
        total += row;
    }
    Sweep {
        directions,
        ksd2: total * inv_n * inv_n,
    }
}

/// Squared kernelized Stein discrepancy of the empirical measure.
pub fn ksd_squared(ens: &Ensemble, target: &Target, spec: &KernelSpec) -> Result<f64> {
    ens.check(target, spec)?;
    let grads = potential_gradients(ens, target);
    Ok(sweep(ens, &grads, spec, 1.0).ksd2)
}

pub(crate) fn ksd_squared_mutated(
    ens: &Ensemble,
    target: &Target,
    spec: &KernelSpec,
    cross_sign: f64,
) -> f64 {
    let grads = potential_gradients(ens, target);
    sweep(ens, &grads, spec, cross_sign).ksd2
}

/// `‖ĝ‖²_H` from the four RKHS inner-product sums
///
/// ```text
/// ⟨Σᵢ ∇V(xᵢ) k(xᵢ,·), Σⱼ ∇V(xⱼ) k(xⱼ,·)⟩   = tr(Gᵀ K G)
/// ⟨Σᵢ ∇V(xᵢ) k(xᵢ,·), Σⱼ ∇₁k(xⱼ,·)⟩       = Σᵢⱼ ∇V(xᵢ)·∇₁k(xⱼ, xᵢ)
/// ⟨Σᵢ ∇₁k(xᵢ,·), Σⱼ ∇V(xⱼ) k(xⱼ,·)⟩       = Σᵢⱼ ∇V(xⱼ)·∇₁k(xᵢ, xⱼ)
/// ⟨Σᵢ ∇₁k(xᵢ,·), Σⱼ ∇₁k(xⱼ,·)⟩           = Σᵢⱼ Σₐ ∂²k/∂xₐ∂yₐ(xᵢ, xⱼ)
/// ```
///
/// This route does not go through the Stein kernel and serves as its oracle.
pub fn direction_norm_squared(ens: &Ensemble, target: &Target, spec: &KernelSpec) -> Result<f64> {
    ens.check(target, spec)?;
    let (n, d) = (ens.n, ens.d);
    let grads = DMatrix::from_row_slice(n, d, &potential_gradients(ens, target));
    let mut gram = DMatrix::<f64>::zeros(n, n);
    let mut score_kgrad = 0.0;
    let mut kgrad_score = 0.0;
    let mut kgrad_kgrad = 0.0;
    for i in 0..n {
        let xi = ens.particle(i);
        for j in 0..n {
            let xj = ens.particle(j);
            gram[(i, j)] = spec.eval(xi, xj)?;
            let gji = spec.grad1(xj, xi)?;
            let gij = spec.grad1(xi, xj)?;
            for a in 0..d {
                score_kgrad += grads[(i, a)] * gji[a];
                kgrad_score += grads[(j, a)] * gij[a];
            }
            kgrad_kgrad += spec.trace_mixed_second(xi, xj)?;
        }
    }
    let score_score = (grads.transpose() * &gram * &grads).trace();
    let total = score_score - score_kgrad - kgrad_score + kgrad_kgrad;
    Ok(total / (n * n) as f64)
}

/// One synchronous SVGD step `xᵢ ← xᵢ − γ ĝ(xᵢ)`.
pub fn svgd_step(ens: &Ensemble, target: &Target, spec: &KernelSpec, gamma: f64) -> Result<Ensemble> {
    ens.check(target, spec)?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Argument(format!("step size must be > 0, got {gamma}")));
    }
    let grads = potential_gradients(ens, target);
    let sw = sweep(ens, &grads, spec, 1.0);
    apply_step(ens, &sw.directions, gamma, 0)
}

pub(crate) fn apply_step(ens: &Ensemble, directions: &[f64], gamma: f64, iter: usize) -> Result<Ensemble> {
    let positions: Vec<f64> = ens
        .positions
        .iter()
        .zip(directions)
        .map(|(x, g)| x - gamma * g)
        .collect();
    if let Some(bad) = positions.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            iter,
            reason: format!(
                "particle {} left the finite range with step size {gamma:e}; reduce the step size",
                bad / ens.d
            ),
        });
    }
    Ok(Ensemble {
        positions,
        n: ens.n,
        d: ens.d,
        seed: ens.seed,
    })
}

/// `(1/N) Σᵢ ‖∇V(xᵢ)‖`.
pub fn mean_grad_norm(grads: &[f64], d: usize) -> f64 {
    let n = grads.len() / d;
    grads.chunks_exact(d).map(norm).sum::<f64>() / n as f64
}
