//! Step sizes, transport constants and iteration budgets for SVGD on
//! `(L0, L1)`-smooth targets.
//!
//! Everything here is a closed-form function of the target and kernel
//! constants except [`lambda_bv`], which minimizes a one-dimensional
//! objective numerically.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::targets::{eval_poly, Target, TargetFamily, TpForm, TpProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepMode {
    Fixed,
    Theory,
    Adaptive,
}

/// How the step size is chosen each iteration.
///
/// * `Fixed` uses `gamma` throughout.
/// * `Theory` uses the constant [`theory_step_size`], stored in
///   `computed_gamma` once resolved.
/// * `Adaptive` uses [`adaptive_step_size`] from the current `‖ĝ‖_H`,
///   capped by [`descent_step_cap`] for the current ensemble, and `gamma`
///   (or the cap) once the direction vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPolicy {
    pub mode: StepMode,
    pub gamma: Option<f64>,
    pub alpha: f64,
    pub epsilon: Option<f64>,
    pub computed_gamma: Option<f64>,
}

impl StepPolicy {
    pub fn fixed(gamma: f64) -> Self {
        Self {
            mode: StepMode::Fixed,
            gamma: Some(gamma),
            alpha: DEFAULT_ALPHA,
            epsilon: None,
            computed_gamma: None,
        }
    }

    pub fn adaptive(alpha: f64) -> Self {
        Self {
            mode: StepMode::Adaptive,
            gamma: None,
            alpha,
            epsilon: None,
            computed_gamma: None,
        }
    }

    pub fn theory(computed_gamma: f64, alpha: f64, epsilon: f64) -> Self {
        Self {
            mode: StepMode::Theory,
            gamma: None,
            alpha,
            epsilon: Some(epsilon),
            computed_gamma: Some(computed_gamma),
        }
    }

    /// Step for the current iterate, given `‖ĝ‖_H` and the mean score norm
    /// of the ensemble.
    pub fn step(&self, g_norm_h: f64, mean_grad_norm: f64, b: f64, l0: f64, l1: f64) -> f64 {
        match self.mode {
            StepMode::Fixed => self.gamma.unwrap_or(0.0),
            StepMode::Theory => self.computed_gamma.unwrap_or(0.0),
            StepMode::Adaptive => {
                let cap = descent_step_cap(b, l0, l1, mean_grad_norm, self.alpha);
                match adaptive_step_size(g_norm_h, b, l1, self.alpha) {
                    Some(g) => g.min(cap),
                    None => self.gamma.unwrap_or(cap),
                }
            }
        }
    }
}

pub const DEFAULT_ALPHA: f64 = 2.0;

/// Upper bound on `KL(N(0, I_d) | π)` under the unit-normalization convention.
pub fn kl0_upper_bound(target: &Target) -> f64 {
    let d = target.dim() as f64;
    let q1 = target.growth_at_one();
    let p = target.growth_order();
    let entropy = 0.5 * d * (1.0 / (2.0 * PI * E)).ln();
    let linear = q1 * d * (2.0 / PI).sqrt();
    let tail = q1 * (2.0 * d).powf((p + 1.0) / 2.0) * gamma((p + 2.0) / 2.0) / (PI.sqrt() * (p + 1.0));
    entropy + target.v_at_zero() + linear + tail
}

/// `(2d)^{m/2} Γ((m+1)/2) / √π ≥ E‖X‖^m` for `X ~ N(0, I_d)`.
pub fn gaussian_moment_bound(d: usize, m: u32) -> Result<f64> {
    if m < 2 {
        return Err(Error::Argument(format!("moment order must be >= 2, got {m}")));
    }
    let m = m as f64;
    Ok((2.0 * d as f64).powf(m / 2.0) * gamma((m + 1.0) / 2.0) / PI.sqrt())
}

/// The increasing function `J` of the generalized transport inequality.
pub fn j_eval(profile: &TpProfile, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Argument(format!("J(r) needs r >= 0, got {r}")));
    }
    Ok(match profile.form {
        TpForm::Talagrand { lambda_t } => (2.0 * r / lambda_t).sqrt(),
        TpForm::BolleyVillani { lambda_bv } => {
            let p = profile.p_order;
            lambda_bv * (r.powf(1.0 / p) + (r / 2.0).powf(1.0 / (2.0 * p)))
        }
    })
}

/// Objective whose infimum over `s ∈ (0, 1)` defines `λ_BV` for
/// `π ∝ exp(−‖x‖^p)` in dimension `d`.
pub fn lambda_bv_objective(s: f64, d: usize, p: f64) -> f64 {
    let inner = 3.0 / (2.0 * s) - (d as f64 / p) * (-s).ln_1p() / s;
    2.0 * inner.powf(1.0 / p)
}

/// `λ_BV` for `π ∝ exp(−‖x‖^p)` by golden-section search over `s ∈ (0, 1)`.
pub fn lambda_bv_unit(d: usize, p: f64) -> f64 {
    let f = |s: f64| lambda_bv_objective(s, d, p);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (1e-12, 1.0 - 1e-12);
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > 1e-8 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    f(0.5 * (lo + hi)).min(fa).min(fb)
}

/// `λ_BV` for a centred generalized Gaussian `exp(−‖x‖^p / (2σ^p))`.
///
/// Substituting `x = (2σ^p)^{1/p} z` reduces the target to the unit case and
/// scales every Wasserstein distance, hence `λ_BV`, by `(2σ^p)^{1/p}`.
pub fn lambda_bv(target: &Target) -> Result<f64> {
    match target.family() {
        TargetFamily::GeneralizedGaussian { mean, sigma, p } if mean.iter().all(|v| *v == 0.0) => {
            let scale = (2.0 * sigma.powf(*p)).powf(1.0 / p);
            Ok(scale * lambda_bv_unit(target.dim(), *p))
        }
        TargetFamily::Gaussian { mean, sigma } if mean.iter().all(|v| *v == 0.0) => {
            let scale = (2.0 * sigma * sigma).sqrt();
            Ok(scale * lambda_bv_unit(target.dim(), 2.0))
        }
        _ => Err(Error::config(
            "tp_profile.lambda_bv",
            "closed-form lambda_BV needs a centred radial target; supply the constant",
        )),
    }
}

/// `C₀ = Q(J(kl0) + W_p(π, δ₀))`.
pub fn c0(target: &Target, profile: &TpProfile, kl0: f64) -> Result<f64> {
    if !(kl0 >= 0.0) {
        return Err(Error::Argument(format!("KL bound must be >= 0, got {kl0}")));
    }
    let r = j_eval(profile, kl0)? + profile.wp_to_origin;
    Ok(eval_poly(target.q_coeffs(), r))
}

/// Safety factor that turns the strict step-size bound into a value.
pub const STEP_SAFETY: f64 = 0.99;

/// Denominator of the constant step-size bound, without the `(α − 1)` numerator.
pub fn step_denominator(b: f64, l0: f64, l1: f64, c0_val: f64, alpha: f64) -> f64 {
    let a_term = l0.max(l1).max(1.0) + l1.max(1.0) * c0_val;
    alpha * b * b * (alpha * alpha + (E - 1.0) * a_term)
}

/// A constant step strictly inside
/// `γ < (α−1) / (αB²(α² + (e−1)(max(L0,L1,1) + max(L1,1) C₀)))`.
pub fn theory_step_size(b: f64, l0: f64, l1: f64, c0_val: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::Argument(format!("alpha must be > 1, got {alpha}")));
    }
    if [b, l0, l1, c0_val].iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(Error::Argument("step-size inputs must be finite and >= 0".into()));
    }
    Ok(STEP_SAFETY * (alpha - 1.0) / step_denominator(b, l0, l1, c0_val, alpha))
}

/// The per-iteration step `(α−1) min(1, 1/L1) / (α B ‖ĝ‖_H)`; `None` when
/// `‖ĝ‖_H = 0`, where the caller falls back to its fixed step.
pub fn adaptive_step_size(g_norm_h: f64, b: f64, l1: f64, alpha: f64) -> Option<f64> {
    if !(g_norm_h > 0.0) {
        return None;
    }
    Some((alpha - 1.0) * clip_factor(l1) / (alpha * b * g_norm_h))
}

/// `1 / (B² (α² + (e−1)(L0 + L1 m)))` with `m` the mean score norm of the
/// current ensemble. Below this step one iteration decreases KL by at least
/// `γ/2` times the squared KSD.
pub fn descent_step_cap(b: f64, l0: f64, l1: f64, mean_grad_norm: f64, alpha: f64) -> f64 {
    1.0 / (b * b * (alpha * alpha + (E - 1.0) * (l0 + l1 * mean_grad_norm)))
}

/// `min(1, 1/L1)`, equal to 1 when `L1 = 0`.
pub fn clip_factor(l1: f64) -> f64 {
    if l1 <= 1.0 {
        1.0
    } else {
        1.0 / l1
    }
}

/// Bound on `‖∇V(x⁺)‖` for `‖x⁺ − x‖ ≤ Δ` under `(L0, L1)`-smoothness.
pub fn grad_growth_bound(l0: f64, l1: f64, grad_norm_at_x: f64, delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::Argument(format!("delta must be >= 0, got {delta}")));
    }
    if l1 == 0.0 {
        return Ok(grad_norm_at_x + l0 * delta);
    }
    let growth = (delta * l1).exp();
    Ok(l0 / l1 * (growth - 1.0) + grad_norm_at_x * growth)
}

/// `⌈2 kl0 / (γ ε)⌉` iterations bring the average Stein–Fisher information
/// below `ε`.
pub fn iteration_budget(kl0: f64, gamma: f64, epsilon: f64) -> Result<u64> {
    if !(gamma > 0.0 && epsilon > 0.0 && kl0 >= 0.0) {
        return Err(Error::Argument(
            "iteration budget needs kl0 >= 0, gamma > 0, epsilon > 0".into(),
        ));
    }
    Ok((2.0 * kl0 / (gamma * epsilon)).ceil() as u64)
}

/// The two conditions the constant step must satisfy for the descent
/// induction to go through.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepConditions {
    /// `γ ≤ (α−1) min(1, 1/L1) / (α B² (C₀ + 1))`.
    pub clip_bound: f64,
    /// `γ ≤ 1 / (B² (α² + (e−1)(L0 + L1 C₀)))`.
    pub descent_bound: f64,
    pub clip_ok: bool,
    pub descent_ok: bool,
}

pub fn step_conditions(gamma: f64, b: f64, l0: f64, l1: f64, c0_val: f64, alpha: f64) -> StepConditions {
    let clip_bound = (alpha - 1.0) * clip_factor(l1) / (alpha * b * b * (c0_val + 1.0));
    let descent_bound = 1.0 / (b * b * (alpha * alpha + (E - 1.0) * (l0 + l1 * c0_val)));
    StepConditions {
        clip_bound,
        descent_bound,
        clip_ok: gamma <= clip_bound,
        descent_ok: gamma <= descent_bound,
    }
}

/// Every constant that enters the constant-step analysis for one
/// (target, kernel, transport profile) triple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryReport {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "L0")]
    pub l0: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
    #[serde(rename = "Q1")]
    pub q1: f64,
    pub p_order: f64,
    pub kl0_bound: f64,
    pub wp_to_origin: f64,
    pub j_form: &'static str,
    pub j_constant: f64,
    pub c0: f64,
    pub alpha: f64,
    pub gamma_max: f64,
    pub epsilon: f64,
    pub iteration_budget: u64,
    pub conditions: StepConditions,
}

impl TheoryReport {
    pub fn compute(
        target: &Target,
        kernel: &KernelSpec,
        profile: &TpProfile,
        alpha: f64,
        epsilon: f64,
    ) -> Result<Self> {
        let b = kernel.kernel_bound();
        let (l0, l1) = target.smoothness_constants();
        let kl0_bound = kl0_upper_bound(target);
        // A negative bound can only come from an unknown normalizing constant.
        let kl0 = kl0_bound.max(0.0);
        let c0_val = c0(target, profile, kl0)?;
        let gamma_max = theory_step_size(b, l0, l1, c0_val, alpha)?;
        let (j_form, j_constant) = match profile.form {
            TpForm::Talagrand { lambda_t } => ("talagrand", lambda_t),
            TpForm::BolleyVillani { lambda_bv } => ("bolley_villani", lambda_bv),
        };
        Ok(Self {
            b,
            l0,
            l1,
            q1: target.growth_at_one(),
            p_order: profile.p_order,
            kl0_bound,
            wp_to_origin: profile.wp_to_origin,
            j_form,
            j_constant,
            c0: c0_val,
            alpha,
            gamma_max,
            epsilon,
            iteration_budget: iteration_budget(kl0, gamma_max, epsilon)?,
            conditions: step_conditions(gamma_max, b, l0, l1, c0_val, alpha),
        })
    }

    /// `key=value` lines with the keys padded to a common width.
    pub fn to_key_values(&self) -> String {
        let rows: Vec<(&str, String)> = vec![
            ("B", fmt(self.b)),
            ("L0", fmt(self.l0)),
            ("L1", fmt(self.l1)),
            ("Q1", fmt(self.q1)),
            ("p_order", fmt(self.p_order)),
            ("kl0_bound", fmt(self.kl0_bound)),
            ("wp_to_origin", fmt(self.wp_to_origin)),
            ("j_form", self.j_form.to_string()),
            ("j_constant", fmt(self.j_constant)),
            ("c0", fmt(self.c0)),
            ("alpha", fmt(self.alpha)),
            ("gamma_max", fmt(self.gamma_max)),
            ("epsilon", fmt(self.epsilon)),
            ("iteration_budget", self.iteration_budget.to_string()),
            ("clip_bound", fmt(self.conditions.clip_bound)),
            ("descent_bound", fmt(self.conditions.descent_bound)),
            ("clip_ok", self.conditions.clip_ok.to_string()),
            ("descent_ok", self.conditions.descent_ok.to_string()),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.iter()
            .map(|(k, v)| format!("{k:<width$} = {v}\n"))
            .collect()
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.10e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kl0_bound_standard_normal() {
        for d in 1..=6 {
            let t = Target::standard_gaussian(d).unwrap();
            assert_relative_eq!(
                kl0_upper_bound(&t),
                d as f64 * (2.0 / PI).sqrt(),
                max_relative = 1e-12
            );
        }
        let t = Target::standard_gaussian(2).unwrap();
        assert_relative_eq!(kl0_upper_bound(&t), 1.595_769_121_605_731, max_relative = 1e-12);
        let t = Target::standard_gaussian(1).unwrap();
        assert_relative_eq!(kl0_upper_bound(&t), 0.797_884_560_802_865_4, max_relative = 1e-12);
    }

    #[test]
    fn gaussian_moment_examples() {
        assert_relative_eq!(gaussian_moment_bound(1, 2).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gaussian_moment_bound(2, 2).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(gaussian_moment_bound(1, 4).unwrap(), 3.0, max_relative = 1e-14);
        assert!(gaussian_moment_bound(3, 1).is_err());
    }

    #[test]
    fn j_examples() {
        let tal = TpProfile::new(TpForm::Talagrand { lambda_t: 2.0 }, 2.0, 0.0).unwrap();
        assert_relative_eq!(j_eval(&tal, 4.0).unwrap(), 2.0);
        assert_eq!(j_eval(&tal, 0.0).unwrap(), 0.0);
        let bv = TpProfile::new(TpForm::BolleyVillani { lambda_bv: 1.0 }, 1.0, 0.0).unwrap();
        assert_relative_eq!(j_eval(&bv, 2.0).unwrap(), 3.0);
        assert_eq!(j_eval(&bv, 0.0).unwrap(), 0.0);
        assert!(j_eval(&bv, -1.0).is_err());
    }

    #[test]
    fn j_is_strictly_increasing() {
        let profiles = [
            TpProfile::new(TpForm::Talagrand { lambda_t: 0.5 }, 2.0, 0.0).unwrap(),
            TpProfile::new(TpForm::BolleyVillani { lambda_bv: 3.0 }, 4.0, 0.0).unwrap(),
        ];
        for profile in profiles {
            let mut prev = j_eval(&profile, 0.0).unwrap();
            for i in 1..=1000 {
                let r = 0.1 * i as f64;
                let v = j_eval(&profile, r).unwrap();
                assert!(v > prev);
                prev = v;
            }
        }
    }

    #[test]
    fn lambda_bv_brackets() {
        for (d, p) in [(1usize, 2.0f64), (4, 2.0), (2, 4.0)] {
            let v = lambda_bv_unit(d, p);
            let lower = 2.0 * (1.5 + d as f64 / p).powf(1.0 / p);
            assert!(v >= lower - 1e-6, "d={d} p={p}: {v} < {lower}");
            assert!(v <= lambda_bv_objective(0.5, d, p));
        }
        assert_relative_eq!(
            lambda_bv_objective(0.5, 1, 2.0),
            2.0 * (3.0 + 2f64.ln()).sqrt(),
            max_relative = 1e-14
        );
        assert!(lambda_bv_unit(1, 2.0) >= 2.0 * 2f64.sqrt());
    }

    #[test]
    fn lambda_bv_is_the_grid_minimum() {
        let (d, p) = (3, 2.0);
        let grid_min = (1..10_000)
            .map(|i| lambda_bv_objective(i as f64 / 10_000.0, d, p))
            .fold(f64::INFINITY, f64::min);
        let v = lambda_bv_unit(d, p);
        assert!(v <= grid_min + 1e-9);
        assert!(v >= grid_min - 1e-4);
    }

    #[test]
    fn lambda_bv_scales_with_sigma() {
        let p = 4.0;
        let unit_sigma = 0.5f64.powf(1.0 / p);
        let unit = Target::generalized_gaussian(vec![0.0; 2], unit_sigma, p).unwrap();
        assert_relative_eq!(lambda_bv(&unit).unwrap(), lambda_bv_unit(2, p), max_relative = 1e-12);
        let lasso = Target::bayesian_lasso(vec![1.0], 1, vec![0.0], 1.0, 2.0, 0.0).unwrap();
        assert!(lambda_bv(&lasso).is_err());
    }

    #[test]
    fn c0_examples() {
        let normal = Target::standard_gaussian(1).unwrap();
        let tal1 = TpProfile::new(TpForm::Talagrand { lambda_t: 1.0 }, 2.0, 1.0).unwrap();
        assert_relative_eq!(c0(&normal, &tal1, 2.0).unwrap(), 3.0);
        let tal0 = TpProfile::new(TpForm::Talagrand { lambda_t: 1.0 }, 2.0, 0.0).unwrap();
        assert_eq!(c0(&normal, &tal0, 0.0).unwrap(), normal.growth_poly(0.0).unwrap());
        let gg = Target::generalized_gaussian(vec![0.0; 2], 1.0, 4.0).unwrap();
        let tal2 = TpProfile::new(TpForm::Talagrand { lambda_t: 2.0 }, 4.0, 0.0).unwrap();
        assert_relative_eq!(c0(&gg, &tal2, 1.0).unwrap(), 2.0);
        assert!(c0(&gg, &tal2, -1.0).is_err());
    }

    #[test]
    fn theory_step_examples() {
        let g = theory_step_size(1.0, 1.0, 0.0, 1.0, 2.0).unwrap();
        assert_relative_eq!(g, 0.99 / (2.0 * (4.0 + 2.0 * (E - 1.0))), max_relative = 1e-14);
        assert_relative_eq!(g, 0.066_563, max_relative = 1e-5);
        let g2 = theory_step_size(2.0, 1.0, 0.0, 1.0, 2.0).unwrap();
        assert_relative_eq!(g2, g / 4.0, max_relative = 1e-14);
        assert!(theory_step_size(1.0, 1.0, 0.0, 2.0, 2.0).unwrap() < g);
        assert!(theory_step_size(1.0, 2.0, 0.0, 1.0, 2.0).unwrap() < g);
        assert!(theory_step_size(1.0, 1.0, 2.0, 1.0, 2.0).unwrap() < g);
        assert!(theory_step_size(1.0, 1.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn theory_step_is_strictly_admissible() {
        for &(b, l0, l1, c, a) in &[
            (1.0, 1.0, 0.0, 1.0, 2.0),
            (2.0, 6.0, 3.0, 40.0, 1.5),
            (1.41, 0.2, 0.5, 0.0, 3.0),
        ] {
            let g = theory_step_size(b, l0, l1, c, a).unwrap();
            assert!(g * step_denominator(b, l0, l1, c, a) < a - 1.0);
            let cond = step_conditions(g, b, l0, l1, c, a);
            assert!(cond.clip_ok && cond.descent_ok, "{cond:?}");
        }
    }

    #[test]
    fn adaptive_step_examples() {
        assert_relative_eq!(adaptive_step_size(5.0, 2.0, 3.0, 2.0).unwrap(), 1.0 / 60.0);
        assert_relative_eq!(adaptive_step_size(5.0, 2.0, 0.5, 2.0).unwrap(), 1.0 / 20.0);
        assert_relative_eq!(
            adaptive_step_size(10.0, 2.0, 3.0, 2.0).unwrap(),
            adaptive_step_size(5.0, 2.0, 3.0, 2.0).unwrap() / 2.0
        );
        assert!(adaptive_step_size(0.0, 2.0, 3.0, 2.0).is_none());
    }

    #[test]
    fn adaptive_policy_is_capped() {
        let p = StepPolicy::adaptive(2.0);
        // B=1, L0=1, L1=0, m=0: cap 1/(4 + (e−1))
        let cap = 1.0 / (4.0 + (E - 1.0));
        assert_relative_eq!(descent_step_cap(1.0, 1.0, 0.0, 0.0, 2.0), cap);
        assert_relative_eq!(p.step(100.0, 0.0, 1.0, 1.0, 0.0), 1.0 / 200.0);
        assert_relative_eq!(p.step(0.01, 0.0, 1.0, 1.0, 0.0), cap);
        assert_relative_eq!(p.step(0.0, 0.0, 1.0, 1.0, 0.0), cap);
        assert_eq!(StepPolicy { gamma: Some(0.3), ..p }.step(0.0, 0.0, 1.0, 1.0, 0.0), 0.3);
        assert!(descent_step_cap(1.0, 1.0, 2.0, 5.0, 2.0) < descent_step_cap(1.0, 1.0, 2.0, 1.0, 2.0));
    }

    #[test]
    fn grad_growth_examples() {
        assert_relative_eq!(grad_growth_bound(1.0, 1.0, 0.0, 1.0).unwrap(), E - 1.0);
        assert_eq!(grad_growth_bound(6.0, 3.0, 2.5, 0.0).unwrap(), 2.5);
        assert_eq!(grad_growth_bound(2.0, 0.0, 1.0, 0.5).unwrap(), 2.0);
        // continuity as L1 → 0
        let near = grad_growth_bound(2.0, 1e-9, 1.0, 0.5).unwrap();
        assert_relative_eq!(near, 2.0, max_relative = 1e-7);
        assert!(grad_growth_bound(1.0, 1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn budget_examples() {
        assert_eq!(iteration_budget(1.0, 0.1, 0.01).unwrap(), 2000);
        assert_eq!(iteration_budget(1.0, 0.1, 0.005).unwrap(), 4000);
        assert_eq!(iteration_budget(0.0, 0.1, 0.01).unwrap(), 0);
        assert!(iteration_budget(1.0, 0.0, 0.01).is_err());
    }

    #[test]
    fn report_is_consistent() {
        let t = Target::standard_gaussian(2).unwrap();
        let k = KernelSpec::rbf(1.0, 2).unwrap();
        let profile = TpProfile::new(TpForm::Talagrand { lambda_t: 1.0 }, 2.0, t.pth_moment_root().unwrap()).unwrap();
        let r = TheoryReport::compute(&t, &k, &profile, 2.0, 0.01).unwrap();
        assert_relative_eq!(r.b, 2f64.sqrt());
        assert!(r.conditions.clip_ok && r.conditions.descent_ok);
        assert_eq!(
            r.iteration_budget,
            iteration_budget(r.kl0_bound, r.gamma_max, 0.01).unwrap()
        );
        let text = r.to_key_values();
        assert!(text.lines().any(|l| l.starts_with("gamma_max")));
        assert_eq!(text.lines().count(), 18);
    }
}
