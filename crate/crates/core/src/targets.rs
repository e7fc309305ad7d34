//! Target densities `π ∝ exp(−V)` together with the constants the step-size
//! theory consumes: `(L0, L1)` smoothness, the gradient growth polynomial `Q`
//! and the tail order `p`.
//!
//! Potentials are normalized so that `∫ exp(−V) = 1` whenever the
//! normalizing constant has a closed form (Gaussian and generalized
//! Gaussian). The LASSO posterior has no closed form; its additive constant
//! is supplied by the caller and defaults to zero.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum TargetFamily {
    /// `‖x − a‖² / (2σ²)`.
    Gaussian { mean: Vec<f64>, sigma: f64 },
    /// `‖x − a‖^p / (2σ^p)` with `p ≥ 2`.
    GeneralizedGaussian { mean: Vec<f64>, sigma: f64, p: f64 },
    /// `‖Ax − b‖² + τ Σ|xᵢ|^q` with `q ≥ 2`; `design` is `m × d` row-major.
    BayesianLasso {
        design: Vec<f64>,
        rows: usize,
        labels: Vec<f64>,
        tau: f64,
        q: f64,
    },
}

/// One monomial `coefficient · r^exponent` of the growth polynomial `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub coefficient: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    family: TargetFamily,
    dim: usize,
    p_order: f64,
    l0: f64,
    l1: f64,
    q_coeffs: Vec<Monomial>,
    log_normalizer: f64,
    v_at_zero: f64,
    wp_override: Option<f64>,
}

impl Target {
    pub fn standard_gaussian(dim: usize) -> Result<Self> {
        Self::gaussian(vec![0.0; dim], 1.0)
    }

    pub fn gaussian(mean: Vec<f64>, sigma: f64) -> Result<Self> {
        let dim = mean.len();
        check_positive("target.sigma", sigma)?;
        check_nonempty(dim)?;
        let s2 = sigma * sigma;
        let offset = norm(&mean);
        let mut q = vec![Monomial {
            coefficient: 1.0 / s2,
            exponent: 1.0,
        }];
        if offset > 0.0 {
            q.push(Monomial {
                coefficient: offset / s2,
                exponent: 0.0,
            });
        }
        Self::assemble(
            TargetFamily::Gaussian { mean, sigma },
            dim,
            2.0,
            (1.0 / s2, 0.0),
            q,
            radial_log_normalizer(dim, sigma, 2.0),
        )
    }

    pub fn generalized_gaussian(mean: Vec<f64>, sigma: f64, p: f64) -> Result<Self> {
        let dim = mean.len();
        check_positive("target.sigma", sigma)?;
        check_nonempty(dim)?;
        if !(p.is_finite() && p >= 2.0) {
            return Err(Error::config("target.p", format!("must be >= 2, got {p}")));
        }
        let sp = sigma.powf(p);
        // ‖∇V(x)‖ = κ ‖x − a‖^{p−1}
        let kappa = p / (2.0 * sp);
        let offset = norm(&mean);
        let q = if offset > 0.0 {
            // (r + ‖a‖)^{p−1} ≤ 2^{p−2} (r^{p−1} + ‖a‖^{p−1}) by convexity
            let c = kappa * 2f64.powf(p - 2.0);
            vec![
                Monomial {
                    coefficient: c,
                    exponent: p - 1.0,
                },
                Monomial {
                    coefficient: c * offset.powf(p - 1.0),
                    exponent: 0.0,
                },
            ]
        } else {
            vec![Monomial {
                coefficient: kappa,
                exponent: p - 1.0,
            }]
        };
        // ‖∇²V‖ = κ (p−1) r^{p−2}: bounded by κ(p−1) for r ≤ 1 and by
        // (p−1)‖∇V‖ for r ≥ 1.
        let l0 = p * (p - 1.0) / (2.0 * sp);
        Self::assemble(
            TargetFamily::GeneralizedGaussian { mean, sigma, p },
            dim,
            p,
            (l0, p - 1.0),
            q,
            radial_log_normalizer(dim, sigma, p),
        )
    }

    /// LASSO posterior. `log_normalizer` is the additive constant that makes
    /// `exp(−V)` integrate to one, when the caller knows it.
    pub fn bayesian_lasso(
        design: Vec<f64>,
        rows: usize,
        labels: Vec<f64>,
        tau: f64,
        q: f64,
        log_normalizer: f64,
    ) -> Result<Self> {
        if rows == 0 || design.is_empty() || !design.len().is_multiple_of(rows) {
            return Err(Error::config(
                "target.A_csv",
                format!("design matrix with {} entries cannot have {rows} rows", design.len()),
            ));
        }
        let dim = design.len() / rows;
        if labels.len() != rows {
            return Err(Error::config(
                "target.b_csv",
                format!("expected {rows} labels to match A, got {}", labels.len()),
            ));
        }
        if design.iter().chain(&labels).any(|v| !v.is_finite()) {
            return Err(Error::config("target.A_csv", "non-finite entry in A or b"));
        }
        check_positive("target.tau", tau)?;
        if !(q.is_finite() && q >= 2.0) {
            return Err(Error::config("target.q", format!("must be >= 2, got {q}")));
        }
        let a = DMatrix::from_row_slice(rows, dim, &design);
        let ata = a.transpose() * &a;
        let ata_norm = SymmetricEigen::new(ata)
            .eigenvalues
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        let atb = a.transpose() * nalgebra::DVector::from_column_slice(&labels);
        let atb_norm = atb.norm();

        let mut q_coeffs = Vec::new();
        if atb_norm > 0.0 {
            q_coeffs.push(Monomial {
                coefficient: 2.0 * atb_norm,
                exponent: 0.0,
            });
        }
        if ata_norm > 0.0 {
            q_coeffs.push(Monomial {
                coefficient: 2.0 * ata_norm,
                exponent: 1.0,
            });
        }
        // ‖(|xᵢ|^{q−1})ᵢ‖₂ ≤ ‖x‖₂^{q−1} since q − 1 ≥ 1
        q_coeffs.push(Monomial {
            coefficient: tau * q,
            exponent: q - 1.0,
        });
        let l0 = 2.0 * ata_norm + tau * q * (q - 1.0);
        Self::assemble(
            TargetFamily::BayesianLasso {
                design,
                rows,
                labels,
                tau,
                q,
            },
            dim,
            q,
            (l0, q - 1.0),
            q_coeffs,
            log_normalizer,
        )
    }

    fn assemble(
        family: TargetFamily,
        dim: usize,
        p_order: f64,
        (l0, l1): (f64, f64),
        q_coeffs: Vec<Monomial>,
        log_normalizer: f64,
    ) -> Result<Self> {
        if let TargetFamily::Gaussian { mean, .. } | TargetFamily::GeneralizedGaussian { mean, .. } =
            &family
        {
            if mean.iter().any(|v| !v.is_finite()) {
                return Err(Error::config("target.mean", "entries must be finite"));
            }
        }
        let mut target = Self {
            family,
            dim,
            p_order,
            l0,
            l1,
            q_coeffs,
            log_normalizer,
            v_at_zero: 0.0,
            wp_override: None,
        };
        target.v_at_zero = target.unnormalized(&vec![0.0; dim]) + log_normalizer;
        debug_assert!(target.q_coeffs.iter().all(|m| m.coefficient > 0.0));
        debug_assert!(target.q_coeffs.iter().all(|m| m.exponent <= target.p_order));
        Ok(target)
    }

    pub fn with_wp_override(mut self, wp: f64) -> Result<Self> {
        if !(wp.is_finite() && wp >= 0.0) {
            return Err(Error::config("target.wp_override", format!("must be >= 0, got {wp}")));
        }
        self.wp_override = Some(wp);
        Ok(self)
    }

    pub fn family(&self) -> &TargetFamily {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Tail order `p` shared by the transport inequality and the growth bound.
    pub fn p_order(&self) -> f64 {
        self.p_order
    }

    pub fn q_coeffs(&self) -> &[Monomial] {
        &self.q_coeffs
    }

    /// `V(0)` under the unit-normalization convention.
    pub fn v_at_zero(&self) -> f64 {
        self.v_at_zero
    }

    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }

    pub fn smoothness_constants(&self) -> (f64, f64) {
        (self.l0, self.l1)
    }

    pub fn potential(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.unnormalized(x) + self.log_normalizer)
    }

    pub fn grad_potential(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        let mut out = vec![0.0; self.dim];
        self.grad_into(x, &mut out);
        Ok(out)
    }

    /// `Q(r) = Σ aᵢ r^{pᵢ}`.
    pub fn growth_poly(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::Argument(format!("Q(r) needs r >= 0, got {r}")));
        }
        Ok(eval_poly(&self.q_coeffs, r))
    }

    /// `Q(1) = Σ aᵢ`.
    pub fn growth_at_one(&self) -> f64 {
        self.q_coeffs.iter().map(|m| m.coefficient).sum()
    }

    /// Largest exponent appearing in `Q`.
    pub fn growth_order(&self) -> f64 {
        self.q_coeffs
            .iter()
            .map(|m| m.exponent)
            .fold(0.0, f64::max)
    }

    /// `W_p(π, δ₀) = (E_π ‖X‖^p)^{1/p}`.
    ///
    /// Closed form for centred (generalized) Gaussians: with
    /// `U = ‖X‖^p / (2σ^p) ~ Gamma(d/p)`, `E ‖X‖^p = 2σ^p d / p`.
    pub fn pth_moment_root(&self) -> Result<f64> {
        if let Some(wp) = self.wp_override {
            return Ok(wp);
        }
        match &self.family {
            TargetFamily::Gaussian { mean, sigma } if norm(mean) == 0.0 => {
                Ok(sigma * (self.dim as f64).sqrt())
            }
            TargetFamily::GeneralizedGaussian { mean, sigma, p } if norm(mean) == 0.0 => {
                let moment = 2.0 * sigma.powf(*p) * self.dim as f64 / p;
                Ok(moment.powf(1.0 / p))
            }
            _ => Err(Error::config(
                "target.wp_override",
                "no closed form for W_p(pi, delta_0) on this target; supply an override",
            )),
        }
    }

    #[inline]
    pub(crate) fn unnormalized(&self, x: &[f64]) -> f64 {
        match &self.family {
            TargetFamily::Gaussian { mean, sigma } => {
                crate::kernels::sq_dist(x, mean) / (2.0 * sigma * sigma)
            }
            TargetFamily::GeneralizedGaussian { mean, sigma, p } => {
                crate::kernels::sq_dist(x, mean).powf(p / 2.0) / (2.0 * sigma.powf(*p))
            }
            TargetFamily::BayesianLasso {
                design,
                labels,
                tau,
                q,
                ..
            } => {
                let fit: f64 = design
                    .chunks_exact(self.dim)
                    .zip(labels)
                    .map(|(row, b)| {
                        let r = dot(row, x) - b;
                        r * r
                    })
                    .sum();
                let penalty: f64 = x.iter().map(|v| v.abs().powf(*q)).sum();
                fit + tau * penalty
            }
        }
    }

    /// `∇V(x)` written into `out`. No dimension or finiteness checks.
    #[inline]
    pub(crate) fn grad_into(&self, x: &[f64], out: &mut [f64]) {
        match &self.family {
            TargetFamily::Gaussian { mean, sigma } => {
                let s2 = sigma * sigma;
                for ((o, xi), ai) in out.iter_mut().zip(x).zip(mean) {
                    *o = (xi - ai) / s2;
                }
            }
            TargetFamily::GeneralizedGaussian { mean, sigma, p } => {
                let r2 = crate::kernels::sq_dist(x, mean);
                let scale = if r2 == 0.0 {
                    0.0
                } else {
                    p / (2.0 * sigma.powf(*p)) * r2.powf((p - 2.0) / 2.0)
                };
                for ((o, xi), ai) in out.iter_mut().zip(x).zip(mean) {
                    *o = scale * (xi - ai);
                }
            }
            TargetFamily::BayesianLasso {
                design,
                labels,
                tau,
                q,
                ..
            } => {
                out.iter_mut().for_each(|o| *o = 0.0);
                for (row, b) in design.chunks_exact(self.dim).zip(labels) {
                    let r = 2.0 * (dot(row, x) - b);
                    for (o, aij) in out.iter_mut().zip(row) {
                        *o += r * aij;
                    }
                }
                for (o, xi) in out.iter_mut().zip(x) {
                    *o += tau * q * xi.abs().powf(q - 1.0) * xi.signum();
                }
            }
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        if x.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::Argument("point has non-finite coordinates".into()))
        }
    }
}

/// Largest violations of the two growth assumptions on a set of points.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AssumptionCheck {
    /// `max(‖∇²V(x)‖_op − L0 − L1‖∇V(x)‖)`, Hessian by central differences.
    pub smoothness_excess: f64,
    /// `max(‖∇V(x)‖ − Q(‖x‖))`.
    pub growth_excess: f64,
    pub points: usize,
}

impl AssumptionCheck {
    pub fn holds(&self, smoothness_tol: f64, growth_tol: f64) -> bool {
        self.smoothness_excess <= smoothness_tol && self.growth_excess <= growth_tol
    }
}

/// Evaluate the `(L0, L1)` and `Q` assumptions at every point of a row-major
/// `points` buffer.
pub fn check_assumptions(target: &Target, points: &[f64]) -> AssumptionCheck {
    let d = target.dim;
    let (l0, l1) = target.smoothness_constants();
    let mut report = AssumptionCheck {
        smoothness_excess: f64::NEG_INFINITY,
        growth_excess: f64::NEG_INFINITY,
        points: 0,
    };
    let mut grad = vec![0.0; d];
    for x in points.chunks_exact(d) {
        target.grad_into(x, &mut grad);
        let gnorm = norm(&grad);
        let hess = fd_hessian_op_norm(target, x);
        report.smoothness_excess = report.smoothness_excess.max(hess - l0 - l1 * gnorm);
        report.growth_excess = report
            .growth_excess
            .max(gnorm - eval_poly(&target.q_coeffs, norm(x)));
        report.points += 1;
    }
    report
}

/// Operator norm of the central-difference Hessian of `V` at `x`.
pub fn fd_hessian_op_norm(target: &Target, x: &[f64]) -> f64 {
    let d = target.dim;
    let scale = norm(x).max(1.0);
    let step = 1e-5 * scale;
    let mut hess = DMatrix::<f64>::zeros(d, d);
    let mut xp = x.to_vec();
    let mut gp = vec![0.0; d];
    let mut gm = vec![0.0; d];
    for j in 0..d {
        xp[j] = x[j] + step;
        target.grad_into(&xp, &mut gp);
        xp[j] = x[j] - step;
        target.grad_into(&xp, &mut gm);
        xp[j] = x[j];
        for i in 0..d {
            hess[(i, j)] = (gp[i] - gm[i]) / (2.0 * step);
        }
    }
    let sym = (&hess + hess.transpose()) * 0.5;
    SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub(crate) fn eval_poly(q: &[Monomial], r: f64) -> f64 {
    q.iter()
        .map(|m| {
            if m.exponent == 0.0 {
                m.coefficient
            } else {
                m.coefficient * r.powf(m.exponent)
            }
        })
        .sum()
}

/// `log ∫ exp(−‖x‖^p / (2σ^p)) dx` over `ℝ^d`.
fn radial_log_normalizer(dim: usize, sigma: f64, p: f64) -> f64 {
    let d = dim as f64;
    let log_surface = (2.0_f64).ln() + 0.5 * d * PI.ln() - ln_gamma(0.5 * d);
    log_surface + (d / p) * (2.0 * sigma.powf(p)).ln() + ln_gamma(d / p) - p.ln()
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn check_positive(path: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be > 0, got {v}")))
    }
}

fn check_nonempty(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::config("target.mean", "dimension must be positive"))
    } else {
        Ok(())
    }
}

/// Which transport inequality the target is assumed to satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TpForm {
    /// `J(r) = √(2r / λ_T)`.
    Talagrand { lambda_t: f64 },
    /// `J(r) = λ_BV (r^{1/p} + (r/2)^{1/(2p)})`.
    BolleyVillani { lambda_bv: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TpProfile {
    pub form: TpForm,
    pub p_order: f64,
    /// `W_p(π, δ₀)`.
    pub wp_to_origin: f64,
}

impl TpProfile {
    pub fn new(form: TpForm, p_order: f64, wp_to_origin: f64) -> Result<Self> {
        let lambda = match form {
            TpForm::Talagrand { lambda_t } => lambda_t,
            TpForm::BolleyVillani { lambda_bv } => lambda_bv,
        };
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::config("tp_profile", format!("constant must be > 0, got {lambda}")));
        }
        if !(p_order >= 1.0) {
            return Err(Error::config("tp_profile.p", format!("order must be >= 1, got {p_order}")));
        }
        if !(wp_to_origin.is_finite() && wp_to_origin >= 0.0) {
            return Err(Error::config("tp_profile.wp_to_origin", "must be finite and >= 0"));
        }
        Ok(Self {
            form,
            p_order,
            wp_to_origin,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn gg4() -> Target {
        Target::generalized_gaussian(vec![0.0, 0.0], 1.0, 4.0).unwrap()
    }

    fn lasso_identity() -> Target {
        Target::bayesian_lasso(vec![1.0, 0.0, 0.0, 1.0], 2, vec![0.0, 0.0], 1.0, 3.0, 0.0).unwrap()
    }

    #[test]
    fn potential_examples() {
        let t = gg4();
        // ‖x‖⁴ / 2 on top of the normalizing constant
        assert_relative_eq!(t.potential(&[1.0, 1.0]).unwrap() - t.v_at_zero(), 2.0, epsilon = 1e-12);
        let shifted = Target::generalized_gaussian(vec![1.0, -2.0], 1.0, 4.0).unwrap();
        assert_relative_eq!(
            shifted.potential(&[1.0, -2.0]).unwrap(),
            shifted.log_normalizer(),
            epsilon = 1e-12
        );
        assert_relative_eq!(lasso_identity().potential(&[1.0, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn normalizer_matches_gaussian() {
        for d in 1..6 {
            let t = Target::standard_gaussian(d).unwrap();
            assert_relative_eq!(
                t.v_at_zero(),
                0.5 * d as f64 * (2.0 * PI).ln(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn normalizer_integrates_to_one_in_1d() {
        // trapezoid on a wide grid for p = 4, σ = 1.3
        let t = Target::generalized_gaussian(vec![0.0], 1.3, 4.0).unwrap();
        let h = 1e-3;
        let mut total = 0.0;
        let mut x = -10.0;
        while x <= 10.0 {
            total += (-t.potential(&[x]).unwrap()).exp() * h;
            x += h;
        }
        assert_relative_eq!(total, 1.0, max_relative = 1e-6);
    }

    #[test]
    fn gradient_examples() {
        let g = gg4().grad_potential(&[1.0, 1.0]).unwrap();
        assert_relative_eq!(g[0], 4.0, max_relative = 1e-12);
        assert_relative_eq!(g[1], 4.0, max_relative = 1e-12);
        let g = lasso_identity().grad_potential(&[1.0, 0.0]).unwrap();
        assert_relative_eq!(g[0], 5.0);
        assert_eq!(g[1], 0.0);
        for t in [gg4(), Target::standard_gaussian(2).unwrap()] {
            assert!(t.grad_potential(&[0.0, 0.0]).unwrap().iter().all(|v| *v == 0.0));
        }
        assert!(lasso_identity().grad_potential(&[0.0, 0.0]).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn non_finite_input_rejected() {
        assert!(gg4().potential(&[f64::NAN, 0.0]).is_err());
        assert!(gg4().grad_potential(&[0.0, f64::INFINITY]).is_err());
        assert!(gg4().potential(&[0.0]).is_err());
    }

    #[test]
    fn smoothness_examples() {
        assert_eq!(gg4().smoothness_constants(), (6.0, 3.0));
        assert_eq!(Target::standard_gaussian(3).unwrap().smoothness_constants(), (1.0, 0.0));
        let p2 = Target::generalized_gaussian(vec![0.0; 2], 1.0, 2.0).unwrap();
        assert_eq!(p2.smoothness_constants(), (1.0, 1.0));
        assert_eq!(lasso_identity().smoothness_constants(), (8.0, 2.0));
    }

    #[test]
    fn growth_examples() {
        let t = gg4();
        assert_relative_eq!(t.growth_poly(2.0).unwrap(), 16.0);
        assert_relative_eq!(t.growth_at_one(), 2.0);
        let g = Target::standard_gaussian(2).unwrap();
        assert_eq!(g.growth_poly(0.0).unwrap(), 0.0);
        assert_eq!(g.growth_poly(3.0).unwrap(), 3.0);
        let l = lasso_identity();
        assert_relative_eq!(l.growth_at_one(), 5.0);
        assert_relative_eq!(l.growth_poly(2.0).unwrap(), 4.0 + 12.0);
        assert!(t.growth_poly(-1.0).is_err());
    }

    #[test]
    fn moment_root_examples() {
        let t = Target::generalized_gaussian(vec![0.0; 3], 1.0, 2.0).unwrap();
        assert_relative_eq!(t.pth_moment_root().unwrap(), 3f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gg4().pth_moment_root().unwrap(), 1.0, max_relative = 1e-14);
        let over = lasso_identity().with_wp_override(2.5).unwrap();
        assert_eq!(over.pth_moment_root().unwrap(), 2.5);
        assert!(matches!(lasso_identity().pth_moment_root(), Err(Error::Config { .. })));
    }

    /// E‖X‖⁴ for p = 4, d = 2 by 1-D radial quadrature, independent of the
    /// Gamma-function closed form.
    #[test]
    fn moment_root_matches_radial_quadrature() {
        let (p, d) = (4.0_f64, 2.0_f64);
        let h = 1e-4;
        let (mut num, mut den) = (0.0, 0.0);
        let mut r: f64 = h / 2.0;
        while r < 12.0 {
            let w = r.powf(d - 1.0) * (-r.powf(p) / 2.0).exp();
            num += r.powf(p) * w;
            den += w;
            r += h;
        }
        let t = Target::generalized_gaussian(vec![0.0; 2], 1.0, p).unwrap();
        assert_relative_eq!(num / den, t.pth_moment_root().unwrap().powf(p), max_relative = 1e-8);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Target::generalized_gaussian(vec![0.0], 1.0, 1.5).is_err());
        assert!(Target::gaussian(vec![0.0], -1.0).is_err());
        assert!(Target::bayesian_lasso(vec![1.0, 2.0], 1, vec![1.0], 1.0, 1.5, 0.0).is_err());
        assert!(Target::bayesian_lasso(vec![1.0, 2.0, 3.0], 2, vec![1.0, 1.0], 1.0, 2.0, 0.0).is_err());
    }

    fn sample_points(rng: &mut ChaCha8Rng, d: usize, count: usize) -> Vec<f64> {
        let mut pts = Vec::with_capacity(d * count * 3);
        for scale in [0.1, 1.0, 10.0] {
            for _ in 0..count * d {
                let z: f64 = rng.sample(StandardNormal);
                pts.push(scale * z);
            }
        }
        pts
    }

    #[test]
    fn assumptions_hold_on_sampled_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let targets = [
            gg4(),
            Target::generalized_gaussian(vec![0.0; 3], 0.8, 3.0).unwrap(),
            Target::generalized_gaussian(vec![0.5, -1.0], 1.0, 4.0).unwrap(),
            Target::generalized_gaussian(vec![0.0; 2], 1.0, 2.0).unwrap(),
            Target::standard_gaussian(2).unwrap(),
            Target::gaussian(vec![1.0, 2.0], 0.5).unwrap(),
            lasso_identity(),
        ];
        for t in &targets {
            let pts = sample_points(&mut rng, t.dim(), 3_400);
            let check = check_assumptions(t, &pts);
            assert!(check.points >= 10_000);
            assert!(check.holds(1e-4, 1e-8), "{t:?}: {check:?}");
        }
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let t_all = [
            gg4(),
            Target::gaussian(vec![1.0, 2.0], 0.5).unwrap(),
            Target::bayesian_lasso(vec![1.0, 2.0, -0.5, 0.3, 0.0, 1.0], 3, vec![1.0, 0.0, -1.0], 0.7, 2.5, 0.0)
                .unwrap(),
        ];
        for t in &t_all {
            for _ in 0..1000 {
                let x: Vec<f64> = (0..t.dim()).map(|_| rng.random_range(-3.0..3.0)).collect();
                let g = t.grad_potential(&x).unwrap();
                let gn = norm(&g);
                for i in 0..t.dim() {
                    let h = 1e-5;
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[i] += h;
                    xm[i] -= h;
                    let fd = (t.potential(&xp).unwrap() - t.potential(&xm).unwrap()) / (2.0 * h);
                    assert!((fd - g[i]).abs() <= 1e-5 * gn.max(1.0), "{fd} vs {}", g[i]);
                }
            }
        }
    }

    #[test]
    fn q_coefficients_positive_and_within_order() {
        for t in [gg4(), lasso_identity(), Target::gaussian(vec![1.0], 2.0).unwrap()] {
            assert!(t.q_coeffs().iter().all(|m| m.coefficient > 0.0));
            assert!(t.growth_order() <= t.p_order());
        }
    }

    #[test]
    fn tp_profile_validation() {
        assert!(TpProfile::new(TpForm::Talagrand { lambda_t: 0.0 }, 2.0, 1.0).is_err());
        assert!(TpProfile::new(TpForm::BolleyVillani { lambda_bv: 1.0 }, 0.5, 1.0).is_err());
        assert!(TpProfile::new(TpForm::Talagrand { lambda_t: 1.0 }, 2.0, 1.0).is_ok());
    }
}
