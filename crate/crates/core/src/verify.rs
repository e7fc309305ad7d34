//! Numerical checks of every bound the step-size theory relies on.
//!
//! Each check runs at a fixed seed and reports pass/fail with the worst
//! observed margin. [`Mutation`] deliberately corrupts one ingredient so
//! tests can confirm that the corresponding checks notice.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::kernels::KernelSpec;
use crate::stein::{
    direction, direction_norm_squared, ksd_squared_mutated, mean_grad_norm, potential_gradients,
    svgd_step, Ensemble,
};
use crate::targets::{check_assumptions, norm, Target, TpForm, TpProfile};
use crate::theory::{
    gaussian_moment_bound, grad_growth_bound, j_eval, kl0_upper_bound, lambda_bv_objective,
    lambda_bv_unit, step_conditions, step_denominator, theory_step_size,
};

/// Deliberate corruption applied while verifying.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mutation {
    /// Multiplies the certified kernel bound `B` everywhere it is used.
    pub kernel_bound_scale: f64,
    /// Flips the sign of the score/kernel-gradient cross terms in the Stein
    /// kernel.
    pub flip_stein_cross_term: bool,
}

impl Default for Mutation {
    fn default() -> Self {
        Self {
            kernel_bound_scale: 1.0,
            flip_stein_cross_term: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "{} {:<width$}  {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                )
            })
            .collect()
    }
}

type CheckFn = fn(&Mutation) -> (bool, String);

const CHECKS: &[(&str, CheckFn)] = &[
    ("kernel_symmetry", kernel_symmetry),
    ("kernel_gradient", kernel_gradient),
    ("kernel_mixed_second", kernel_mixed_second),
    ("kernel_bound", kernel_bound),
    ("target_smoothness", target_smoothness),
    ("target_growth", target_growth),
    ("target_gradient", target_gradient),
    ("j_monotone", j_monotone),
    ("ksd_oracle_equivalence", ksd_oracle_equivalence),
    ("pointwise_rkhs_bound", pointwise_rkhs_bound),
    ("jacobian_hs_bound", jacobian_hs_bound),
    ("ksd_norm_bound", ksd_norm_bound),
    ("grad_growth", grad_growth),
    ("gaussian_moment", gaussian_moment),
    ("initial_kl_bound", initial_kl_bound),
    ("lambda_bv_bounds", lambda_bv_bounds),
    ("theory_step_admissible", theory_step_admissible),
];

pub fn check_names() -> impl Iterator<Item = &'static str> {
    CHECKS.iter().map(|(name, _)| *name)
}

/// Run every check whose name contains `filter` (all when `None`).
pub fn verify(filter: Option<&str>) -> VerifyReport {
    verify_with(filter, &Mutation::default())
}

pub fn verify_with(filter: Option<&str>, mutation: &Mutation) -> VerifyReport {
    let checks = CHECKS
        .iter()
        .filter(|(name, _)| filter.is_none_or(|f| name.contains(f)))
        .map(|(name, check)| {
            let (passed, detail) = check(mutation);
            CheckResult { name, passed, detail }
        })
        .collect();
    VerifyReport { checks }
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn normal_vec(rng: &mut ChaCha8Rng, len: usize, scale: f64) -> Vec<f64> {
    (0..len).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
}

fn kernels_for(d: usize) -> Vec<KernelSpec> {
    vec![
        KernelSpec::imq(1.0, -0.5, d).unwrap(),
        KernelSpec::imq(2.0, -0.3, d).unwrap(),
        KernelSpec::rbf(1.0, d).unwrap(),
        KernelSpec::rbf(0.5, d).unwrap(),
    ]
}

/// A small LASSO target with a fixed pseudo-random design in dimension `d`.
fn lasso_target(d: usize, rng: &mut ChaCha8Rng) -> Target {
    let rows = d + 1;
    let design = normal_vec(rng, rows * d, 0.7);
    let labels = normal_vec(rng, rows, 1.0);
    Target::bayesian_lasso(design, rows, labels, 0.8, 3.0, 0.0).unwrap()
}

fn targets_for(d: usize, rng: &mut ChaCha8Rng) -> Vec<Target> {
    vec![
        Target::standard_gaussian(d).unwrap(),
        Target::generalized_gaussian(vec![0.0; d], 1.0, 4.0).unwrap(),
        lasso_target(d, rng),
    ]
}

/// Random (ensemble, target, kernel) with `N ≤ 20`, `d ≤ 5`.
fn random_instance(rng: &mut ChaCha8Rng, i: usize) -> (Ensemble, Target, KernelSpec) {
    let d = rng.random_range(1..=5);
    let n = rng.random_range(1..=20);
    let scale = [0.3, 1.0, 2.0][i % 3];
    let ens = Ensemble::from_positions(normal_vec(rng, n * d, scale), d, i as u64).unwrap();
    let target = targets_for(d, rng).swap_remove(i % 3);
    let kernel = kernels_for(d).swap_remove((i / 3) % 4);
    (ens, target, kernel)
}

fn kernel_symmetry(_: &Mutation) -> (bool, String) {
    let mut r = rng(1);
    let mut failures = 0;
    for _ in 0..10_000 {
        let d = r.random_range(1..=5);
        let x = normal_vec(&mut r, d, 3.0);
        let y = normal_vec(&mut r, d, 3.0);
        for k in kernels_for(d) {
            if k.eval(&x, &y).unwrap() != k.eval(&y, &x).unwrap() {
                failures += 1;
            }
        }
    }
    (failures == 0, format!("{failures} asymmetric pairs of 40000"))
}

fn kernel_gradient(_: &Mutation) -> (bool, String) {
    let mut r = rng(2);
    let step = 1e-6;
    let mut worst = 0.0_f64;
    for _ in 0..2_000 {
        let d = r.random_range(1..=4);
        let x = normal_vec(&mut r, d, 3.0);
        let dir = normal_vec(&mut r, d, 1.0);
        let sep = r.random_range(0.0..10.0) / norm(&dir).max(1e-12);
        let y: Vec<f64> = x.iter().zip(&dir).map(|(a, u)| a + sep * u).collect();
        for k in kernels_for(d) {
            let g = k.grad1(&x, &y).unwrap();
            let scale = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            for i in 0..d {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += step;
                xm[i] -= step;
                let fd = (k.eval(&xp, &y).unwrap() - k.eval(&xm, &y).unwrap()) / (2.0 * step);
                worst = worst.max((fd - g[i]).abs() / (scale + 1e-3));
            }
        }
    }
    (worst <= 1e-6, format!("max relative error {worst:.3e} (tol 1e-6)"))
}

fn kernel_mixed_second(_: &Mutation) -> (bool, String) {
    let mut r = rng(3);
    let step = 1e-4;
    let mut worst = 0.0_f64;
    for _ in 0..500 {
        let d = r.random_range(1..=4);
        let x = normal_vec(&mut r, d, 2.0);
        let y = normal_vec(&mut r, d, 2.0);
        for k in kernels_for(d) {
            let exact = k.trace_mixed_second(&x, &y).unwrap();
            let mut fd = 0.0;
            for i in 0..d {
                let at = |dx: f64, dy: f64| {
                    let mut xs = x.clone();
                    let mut ys = y.clone();
                    xs[i] += dx;
                    ys[i] += dy;
                    k.eval(&xs, &ys).unwrap()
                };
                fd += (at(step, step) - at(step, -step) - at(-step, step) + at(-step, -step))
                    / (4.0 * step * step);
            }
            let scale = exact.abs().max(1e-3 * k.kernel_bound().powi(2));
            worst = worst.max((fd - exact).abs() / scale);
        }
    }
    (worst <= 1e-4, format!("max relative error {worst:.3e} (tol 1e-4)"))
}

fn kernel_bound(m: &Mutation) -> (bool, String) {
    let mut r = rng(4);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let d = r.random_range(1..=6);
        let x = normal_vec(&mut r, d, 10.0);
        for k in kernels_for(d) {
            let b2 = (k.kernel_bound() * m.kernel_bound_scale).powi(2);
            worst = worst.max(k.eval(&x, &x).unwrap() - b2);
            worst = worst.max(k.trace_mixed_second(&x, &x).unwrap() - b2);
        }
    }
    (worst <= 1e-12, format!("max excess over B^2 {worst:.3e}"))
}

fn assumption_targets(r: &mut ChaCha8Rng) -> Vec<Target> {
    vec![
        Target::standard_gaussian(2).unwrap(),
        Target::generalized_gaussian(vec![0.0; 2], 1.0, 2.0).unwrap(),
        Target::generalized_gaussian(vec![0.0; 2], 1.0, 4.0).unwrap(),
        Target::generalized_gaussian(vec![0.0; 3], 0.7, 3.0).unwrap(),
        Target::generalized_gaussian(vec![1.0, -0.5], 1.2, 4.0).unwrap(),
        Target::bayesian_lasso(vec![1.0, 0.0, 0.0, 1.0], 2, vec![0.0, 0.0], 1.0, 3.0, 0.0).unwrap(),
        {
            let _ = r;
            Target::bayesian_lasso(vec![0.5, -0.2, 0.1, 0.9, 0.3, 0.4], 3, vec![0.0; 3], 0.5, 2.0, 0.0)
                .unwrap()
        },
    ]
}

fn assumption_points(r: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let per_scale = 10_000usize.div_ceil(3);
    let mut pts = Vec::with_capacity(3 * per_scale * d);
    for scale in [0.1, 1.0, 10.0] {
        pts.extend(normal_vec(r, per_scale * d, scale));
    }
    pts
}

fn target_smoothness(_: &Mutation) -> (bool, String) {
    let mut r = rng(5);
    let mut worst = f64::NEG_INFINITY;
    for t in assumption_targets(&mut r) {
        let pts = assumption_points(&mut r, t.dim());
        worst = worst.max(check_assumptions(&t, &pts).smoothness_excess);
    }
    (worst <= 1e-4, format!("max ||Hess V||_op - L0 - L1 ||grad V|| = {worst:.3e} (tol 1e-4)"))
}

fn target_growth(_: &Mutation) -> (bool, String) {
    let mut r = rng(6);
    let mut worst = f64::NEG_INFINITY;
    for t in assumption_targets(&mut r) {
        let pts = assumption_points(&mut r, t.dim());
        worst = worst.max(check_assumptions(&t, &pts).growth_excess);
    }
    (worst <= 1e-8, format!("max ||grad V|| - Q(||x||) = {worst:.3e} (tol 1e-8)"))
}

fn target_gradient(_: &Mutation) -> (bool, String) {
    let mut r = rng(7);
    let mut worst = 0.0_f64;
    for t in assumption_targets(&mut r) {
        for _ in 0..500 {
            let x = normal_vec(&mut r, t.dim(), 1.5);
            let g = t.grad_potential(&x).unwrap();
            let scale = norm(&g).max(1.0);
            for i in 0..t.dim() {
                let h = 1e-5;
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                let fd = (t.potential(&xp).unwrap() - t.potential(&xm).unwrap()) / (2.0 * h);
                worst = worst.max((fd - g[i]).abs() / scale);
            }
        }
    }
    (worst <= 1e-5, format!("max relative error {worst:.3e} (tol 1e-5)"))
}

fn j_monotone(_: &Mutation) -> (bool, String) {
    let profiles = [
        TpProfile::new(TpForm::Talagrand { lambda_t: 1.0 }, 2.0, 0.0).unwrap(),
        TpProfile::new(TpForm::BolleyVillani { lambda_bv: 2.5 }, 4.0, 0.0).unwrap(),
    ];
    let mut ok = true;
    for p in &profiles {
        ok &= j_eval(p, 0.0).unwrap() == 0.0;
        let mut prev = 0.0;
        for i in 1..=1000 {
            let v = j_eval(p, 0.1 * i as f64).unwrap();
            ok &= v > prev;
            prev = v;
        }
    }
    (ok, "J(0) = 0 and strictly increasing on 0.1..100".into())
}

fn ksd_oracle_equivalence(m: &Mutation) -> (bool, String) {
    let mut r = rng(8);
    let sign = if m.flip_stein_cross_term { -1.0 } else { 1.0 };
    let mut worst = 0.0_f64;
    for i in 0..100 {
        let (ens, t, k) = random_instance(&mut r, i);
        let a = ksd_squared_mutated(&ens, &t, &k, sign);
        let b = direction_norm_squared(&ens, &t, &k).unwrap();
        worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1e-300));
    }
    (worst <= 1e-10, format!("max relative gap {worst:.3e} over 100 instances (tol 1e-10)"))
}

/// Ensembles on which the RKHS bounds are close to tight: single particles
/// with large scores, tight clusters at the mode, and random clouds.
fn bound_instances(r: &mut ChaCha8Rng) -> Vec<(Ensemble, Target, KernelSpec)> {
    let mut out = Vec::new();
    for d in 1..=3 {
        let gg = Target::generalized_gaussian(vec![0.0; d], 1.0, 4.0).unwrap();
        for k in kernels_for(d) {
            out.push((Ensemble::from_positions(vec![1.5; d], d, 0).unwrap(), gg.clone(), k));
            out.push((Ensemble::from_positions(vec![0.0; d], d, 0).unwrap(), gg.clone(), k));
            let cluster = normal_vec(r, 4 * d, 0.01);
            out.push((Ensemble::from_positions(cluster, d, 0).unwrap(), gg.clone(), k));
        }
    }
    for i in 0..24 {
        out.push(random_instance(r, i));
    }
    out
}

fn eval_points(r: &mut ChaCha8Rng, ens: &Ensemble, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|j| {
            let base = ens.particle(j % ens.n());
            let jitter = if j % 2 == 0 { 0.0 } else { 0.5 };
            base.iter()
                .map(|v| v + jitter * r.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect()
}

fn pointwise_rkhs_bound(m: &Mutation) -> (bool, String) {
    let mut r = rng(9);
    let instances = bound_instances(&mut r);
    let per = 1000usize.div_ceil(instances.len());
    let mut worst = f64::NEG_INFINITY;
    let mut points = 0;
    for (ens, t, k) in &instances {
        let b = k.kernel_bound() * m.kernel_bound_scale;
        let norm_h = ksd_squared_mutated(ens, t, k, 1.0).max(0.0).sqrt();
        for y in eval_points(&mut r, ens, per) {
            let g = direction(ens, t, k, &y).unwrap();
            worst = worst.max(norm(&g) - b * norm_h);
            points += 1;
        }
    }
    (worst <= 1e-8, format!("max ||g(x)|| - B||g||_H = {worst:.3e} on {points} points (tol 1e-8)"))
}

/// Hilbert–Schmidt norm of the central-difference Jacobian of `ĝ` at `y`.
pub fn direction_jacobian_hs(ens: &Ensemble, t: &Target, k: &KernelSpec, y: &[f64]) -> f64 {
    let d = y.len();
    let step = 1e-5;
    let mut total = 0.0;
    let mut yp = y.to_vec();
    for b in 0..d {
        yp[b] = y[b] + step;
        let gp = direction(ens, t, k, &yp).unwrap();
        yp[b] = y[b] - step;
        let gm = direction(ens, t, k, &yp).unwrap();
        yp[b] = y[b];
        for a in 0..d {
            let dab = (gp[a] - gm[a]) / (2.0 * step);
            total += dab * dab;
        }
    }
    total.sqrt()
}

fn jacobian_hs_bound(m: &Mutation) -> (bool, String) {
    let mut r = rng(10);
    let instances = bound_instances(&mut r);
    let per = 1000usize.div_ceil(instances.len());
    let mut worst = f64::NEG_INFINITY;
    let mut points = 0;
    for (ens, t, k) in &instances {
        let b = k.kernel_bound() * m.kernel_bound_scale;
        let norm_h = ksd_squared_mutated(ens, t, k, 1.0).max(0.0).sqrt();
        for y in eval_points(&mut r, ens, per) {
            worst = worst.max(direction_jacobian_hs(ens, t, k, &y) - b * norm_h);
            points += 1;
        }
    }
    (worst <= 1e-4, format!("max ||Jg(x)||_HS - B||g||_H = {worst:.3e} on {points} points (tol 1e-4)"))
}

fn ksd_norm_bound(m: &Mutation) -> (bool, String) {
    let mut r = rng(11);
    let mut worst = f64::NEG_INFINITY;
    let mut check = |ens: &Ensemble, t: &Target, k: &KernelSpec| {
        let b = k.kernel_bound() * m.kernel_bound_scale;
        let grads = potential_gradients(ens, t);
        let lhs = ksd_squared_mutated(ens, t, k, 1.0).max(0.0).sqrt();
        let rhs = b * (mean_grad_norm(&grads, ens.d()) + 1.0);
        worst = worst.max(lhs - rhs);
    };
    for i in 0..100 {
        let (ens, t, k) = random_instance(&mut r, i);
        check(&ens, &t, &k);
    }
    // along a short run
    let t = Target::generalized_gaussian(vec![0.0; 2], 1.0, 4.0).unwrap();
    let k = KernelSpec::imq(1.0, -0.5, 2).unwrap();
    let mut ens = Ensemble::standard_normal(50, 2, 11).unwrap();
    for _ in 0..50 {
        check(&ens, &t, &k);
        ens = svgd_step(&ens, &t, &k, 0.01).unwrap();
    }
    (worst <= 1e-8, format!("max sqrt(KSD2) - B(E||grad V|| + 1) = {worst:.3e} (tol 1e-8)"))
}

fn grad_growth(_: &Mutation) -> (bool, String) {
    let mut r = rng(12);
    let mut violations = 0;
    let mut total = 0;
    for p in [2.0, 4.0] {
        let t = Target::generalized_gaussian(vec![0.0; 2], 1.0, p).unwrap();
        let (l0, l1) = t.smoothness_constants();
        for i in 0..10_000 {
            let x = normal_vec(&mut r, 2, [0.1, 1.0, 3.0][i % 3]);
            let delta = r.random_range(0.0..2.0);
            let u = normal_vec(&mut r, 2, 1.0);
            let len = delta * r.random_range(0.0..=1.0) / norm(&u).max(1e-12);
            let xp: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + len * b).collect();
            let g0 = norm(&t.grad_potential(&x).unwrap());
            let g1 = norm(&t.grad_potential(&xp).unwrap());
            if g1 > grad_growth_bound(l0, l1, g0, delta).unwrap() * (1.0 + 1e-12) {
                violations += 1;
            }
            total += 1;
        }
    }
    (violations == 0, format!("{violations} violations in {total} segment pairs"))
}

fn gaussian_moment(_: &Mutation) -> (bool, String) {
    let mut r = rng(13);
    let samples = 200_000;
    let mut ok = true;
    let mut worst_margin = f64::INFINITY;
    for d in [1usize, 2, 5] {
        let norms: Vec<f64> = (0..samples).map(|_| norm(&normal_vec(&mut r, d, 1.0))).collect();
        for m in [2u32, 3, 4] {
            let vals: Vec<f64> = norms.iter().map(|v| v.powi(m as i32)).collect();
            let (mean, se) = mean_se(&vals);
            let bound = gaussian_moment_bound(d, m).unwrap();
            worst_margin = worst_margin.min((bound - (mean - 3.0 * se)) / bound);
            ok &= bound >= mean - 3.0 * se;
        }
    }
    for (d, m, exact) in [(1, 2, 1.0), (1, 4, 3.0), (2, 2, 2.0)] {
        let b = gaussian_moment_bound(d, m).unwrap();
        ok &= (b - exact).abs() <= 1e-6 * exact;
    }
    (ok, format!("min relative margin {worst_margin:.3e}; tight cases exact"))
}

fn initial_kl_bound(_: &Mutation) -> (bool, String) {
    let mut ok = true;
    for d in 1..=5 {
        let t = Target::standard_gaussian(d).unwrap();
        let b = kl0_upper_bound(&t);
        ok &= (b - d as f64 * (2.0 / PI).sqrt()).abs() <= 1e-9 && b >= 0.0;
    }
    let t = Target::generalized_gaussian(vec![0.0; 2], 1.0, 4.0).unwrap();
    let (kl, se) = mc_kl_from_standard_normal(&t, 200_000, 14);
    let bound = kl0_upper_bound(&t);
    ok &= bound >= kl - 3.0 * se;
    (ok, format!("generalized Gaussian p=4: bound {bound:.4} vs MC KL {kl:.4} ± {se:.1e}"))
}

/// Monte Carlo `KL(N(0, I) | π) = E[log φ(X) + V(X)]` with `X ~ N(0, I)`
/// and `V` unit-normalized. Returns `(mean, standard error)`.
pub fn mc_kl_from_standard_normal(t: &Target, samples: usize, seed: u64) -> (f64, f64) {
    let mut r = rng(seed);
    let d = t.dim();
    let log_phi_const = -0.5 * d as f64 * (2.0 * PI).ln();
    let vals: Vec<f64> = (0..samples)
        .map(|_| {
            let x = normal_vec(&mut r, d, 1.0);
            log_phi_const - 0.5 * norm(&x).powi(2) + t.potential(&x).unwrap()
        })
        .collect();
    mean_se(&vals)
}

fn lambda_bv_bounds(_: &Mutation) -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for (d, p) in [(1usize, 2.0f64), (4, 2.0), (2, 4.0)] {
        let v = lambda_bv_unit(d, p);
        let lower = 2.0 * (1.5 + d as f64 / p).powf(1.0 / p);
        let upper = lambda_bv_objective(0.5, d, p);
        ok &= v >= lower - 1e-6 && v <= upper;
        detail.push(format!("(d={d},p={p}) {lower:.4} <= {v:.4} <= {upper:.4}"));
    }
    (ok, detail.join("; "))
}

fn theory_step_admissible(_: &Mutation) -> (bool, String) {
    let mut r = rng(15);
    let mut ok = true;
    for _ in 0..1000 {
        let b = r.random_range(0.1..5.0);
        let l0 = r.random_range(0.0..20.0);
        let l1 = r.random_range(0.0..10.0);
        let c0 = r.random_range(0.0..100.0);
        let alpha = r.random_range(1.01..5.0);
        let g = theory_step_size(b, l0, l1, c0, alpha).unwrap();
        ok &= g * step_denominator(b, l0, l1, c0, alpha) < alpha - 1.0;
        let cond = step_conditions(g, b, l0, l1, c0, alpha);
        ok &= cond.clip_ok && cond.descent_ok;
    }
    (ok, "strict admissibility and both induction conditions on 1000 random inputs".into())
}

pub(crate) fn mean_se(vals: &[f64]) -> (f64, f64) {
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_checkout_passes() {
        let report = verify(None);
        assert!(report.all_passed(), "\n{}", report.to_text());
        assert_eq!(report.checks.len(), CHECKS.len());
    }

    #[test]
    fn halving_b_breaks_the_rkhs_bounds() {
        let m = Mutation {
            kernel_bound_scale: 0.5,
            ..Mutation::default()
        };
        let report = verify_with(Some("pointwise_rkhs_bound"), &m);
        assert!(!report.all_passed(), "{}", report.to_text());
        let report = verify_with(Some("jacobian_hs_bound"), &m);
        assert!(!report.all_passed(), "{}", report.to_text());
    }

    #[test]
    fn flipped_cross_term_breaks_oracle_equivalence() {
        let m = Mutation {
            flip_stein_cross_term: true,
            ..Mutation::default()
        };
        let report = verify_with(Some("ksd_oracle"), &m);
        assert_eq!(report.checks.len(), 1);
        assert!(!report.checks[0].passed, "{}", report.to_text());
    }

    #[test]
    fn filter_selects_by_substring() {
        let report = verify(Some("lambda_bv"));
        assert_eq!(report.checks.len(), 1);
        assert!(report.get("lambda_bv_bounds").unwrap().passed);
        assert!(verify(Some("no-such-check")).checks.is_empty());
    }
}
