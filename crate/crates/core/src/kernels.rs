//! Translation-invariant RKHS kernels with closed-form derivatives.
//!
//! Both families are radial, `k(x, y) = φ(‖x − y‖²)`, so every quantity the
//! sampler needs follows from `φ` and its first two derivatives:
//!
//! * `∇₁k(x, y) = 2 φ'(s) (x − y)`
//! * `Σᵢ ∂²k/∂xᵢ∂yᵢ = −2d φ'(s) − 4 s φ''(s)`
//!
//! with `s = ‖x − y‖²`. The RBF family uses `k(x, y) = exp(−s / (2h))`,
//! the inverse multiquadric uses `k(x, y) = (c² + s)^β`.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KernelFamily {
    /// `(c² + ‖x − y‖²)^β` with `c > 0` and `−1 < β < 0`.
    InverseMultiquadric { c: f64, beta: f64 },
    /// `exp(−‖x − y‖² / (2h))`.
    GaussianRbf { bandwidth: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    family: KernelFamily,
    dim: usize,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Argument("kernel dimension must be positive".into()));
        }
        match family {
            KernelFamily::InverseMultiquadric { c, beta } => {
                if !(c.is_finite() && c > 0.0) {
                    return Err(Error::Argument(format!("IMQ offset c must be > 0, got {c}")));
                }
                if !(beta > -1.0 && beta < 0.0) {
                    return Err(Error::Argument(format!(
                        "IMQ exponent beta must lie in (-1, 0), got {beta}"
                    )));
                }
            }
            KernelFamily::GaussianRbf { bandwidth } => {
                if !(bandwidth.is_finite() && bandwidth > 0.0) {
                    return Err(Error::Argument(format!(
                        "RBF bandwidth must be > 0, got {bandwidth}"
                    )));
                }
            }
        }
        Ok(Self { family, dim })
    }

    pub fn imq(c: f64, beta: f64, dim: usize) -> Result<Self> {
        Self::new(KernelFamily::InverseMultiquadric { c, beta }, dim)
    }

    pub fn rbf(bandwidth: f64, dim: usize) -> Result<Self> {
        Self::new(KernelFamily::GaussianRbf { bandwidth }, dim)
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Same family with a new RBF bandwidth; IMQ specs are returned unchanged.
    pub fn with_bandwidth(&self, bandwidth: f64) -> Result<Self> {
        match self.family {
            KernelFamily::GaussianRbf { .. } => Self::rbf(bandwidth, self.dim),
            KernelFamily::InverseMultiquadric { .. } => Ok(*self),
        }
    }

    /// `(φ(s), φ'(s), φ''(s))` for squared separation `s`.
    #[inline]
    pub(crate) fn profile(&self, s: f64) -> (f64, f64, f64) {
        match self.family {
            KernelFamily::GaussianRbf { bandwidth: h } => {
                let phi = (-s / (2.0 * h)).exp();
                (phi, -phi / (2.0 * h), phi / (4.0 * h * h))
            }
            KernelFamily::InverseMultiquadric { c, beta } => {
                let t = c * c + s;
                let phi = t.powf(beta);
                let d1 = beta * phi / t;
                let d2 = (beta - 1.0) * d1 / t;
                (phi, d1, d2)
            }
        }
    }

    /// Kernel value, gradient in the first argument (written to `grad`) and
    /// mixed second-derivative trace, in one pass. No dimension checks.
    #[inline]
    pub(crate) fn pair_terms(&self, x: &[f64], y: &[f64], grad: &mut [f64]) -> (f64, f64) {
        let s = sq_dist(x, y);
        let (phi, d1, d2) = self.profile(s);
        for ((g, xi), yi) in grad.iter_mut().zip(x).zip(y) {
            *g = 2.0 * d1 * (xi - yi);
        }
        let trace = -2.0 * self.dim as f64 * d1 - 4.0 * s * d2;
        (phi, trace)
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check(x, y)?;
        Ok(self.profile(sq_dist(x, y)).0)
    }

    pub fn grad1(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check(x, y)?;
        let (_, d1, _) = self.profile(sq_dist(x, y));
        Ok(x.iter().zip(y).map(|(xi, yi)| 2.0 * d1 * (xi - yi)).collect())
    }

    /// `Σᵢ ∂²k/∂xᵢ∂yᵢ` at `(x, y)`; at `x = y` this is `‖∇ₓk(x, ·)‖²_H`.
    pub fn trace_mixed_second(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check(x, y)?;
        let s = sq_dist(x, y);
        let (_, d1, d2) = self.profile(s);
        Ok(-2.0 * self.dim as f64 * d1 - 4.0 * s * d2)
    }

    /// The constant `B` with `k(x, x) ≤ B²` and `Σᵢ ∂²k/∂xᵢ∂yᵢ(x, x) ≤ B²`
    /// for every `x`. Both suprema are attained on the diagonal.
    pub fn kernel_bound(&self) -> f64 {
        let d = self.dim as f64;
        match self.family {
            KernelFamily::InverseMultiquadric { c, beta } => {
                let value = c.powf(beta);
                let grad = (-2.0 * beta * d * c.powf(2.0 * beta - 2.0)).sqrt();
                value.max(grad)
            }
            KernelFamily::GaussianRbf { bandwidth } => 1.0_f64.max((d / bandwidth).sqrt()),
        }
    }

    fn check(&self, x: &[f64], y: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        check_dim(self.dim, y.len())
    }
}

#[inline]
pub(crate) fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// RBF bandwidth from the median pairwise distance of `n` points stored
/// row-major in `positions`: `h = med² / (2 log(n + 1))`, which makes
/// `exp(−s/(2h))` the usual `exp(−s · log(n+1) / med²)` heuristic.
pub fn median_heuristic_bandwidth(positions: &[f64], n: usize, d: usize) -> f64 {
    if n < 2 {
        return 1.0;
    }
    let mut dists = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            dists.push(sq_dist(&positions[i * d..(i + 1) * d], &positions[j * d..(j + 1) * d]));
        }
    }
    dists.sort_by(f64::total_cmp);
    let med_sq = dists[dists.len() / 2];
    let h = med_sq / (2.0 * ((n + 1) as f64).ln());
    if h > 0.0 && h.is_finite() {
        h
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn imq() -> KernelSpec {
        KernelSpec::imq(1.0, -0.5, 2).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(imq().eval(&[0.3, -1.0], &[0.3, -1.0]).unwrap(), 1.0);
        let k = KernelSpec::imq(1.0, -0.5, 3).unwrap();
        // ‖x − y‖² = 3
        assert_relative_eq!(k.eval(&[1.0, 1.0, 1.0], &[0.0, 0.0, 0.0]).unwrap(), 0.5);
        let rbf = KernelSpec::rbf(2.0, 2).unwrap();
        assert_eq!(rbf.eval(&[4.0, 5.0], &[4.0, 5.0]).unwrap(), 1.0);
    }

    #[test]
    fn grad1_examples() {
        let g = imq().grad1(&[1.0, 0.0], &[0.0, 0.0]).unwrap();
        // frozen from a central difference with step 1e-6
        assert_relative_eq!(g[0], -0.353_553_390_593_273_8, max_relative = 1e-9);
        assert_eq!(g[1], 0.0);

        let rbf = KernelSpec::rbf(1.0, 2).unwrap();
        let g = rbf.grad1(&[1.0, 0.0], &[0.0, 0.0]).unwrap();
        assert_relative_eq!(g[0], -(-0.5_f64).exp(), max_relative = 1e-12);

        for spec in [imq(), rbf] {
            let g = spec.grad1(&[0.7, -2.0], &[0.7, -2.0]).unwrap();
            assert!(g.iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn trace_mixed_examples() {
        for h in [0.25, 1.0, 3.0] {
            let rbf = KernelSpec::rbf(h, 3).unwrap();
            let x = [0.1, 0.2, 0.3];
            assert_relative_eq!(rbf.trace_mixed_second(&x, &x).unwrap(), 3.0 / h, max_relative = 1e-14);
        }
        let k = KernelSpec::imq(1.0, -0.5, 4).unwrap();
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_relative_eq!(k.trace_mixed_second(&x, &x).unwrap(), 4.0);
        let rbf = KernelSpec::rbf(1.0, 1).unwrap();
        assert_eq!(rbf.trace_mixed_second(&[5.0], &[5.0]).unwrap(), 1.0);
    }

    #[test]
    fn bound_examples() {
        assert_relative_eq!(KernelSpec::imq(1.0, -0.5, 4).unwrap().kernel_bound(), 2.0);
        assert_eq!(KernelSpec::rbf(1.0, 1).unwrap().kernel_bound(), 1.0);
        assert_relative_eq!(KernelSpec::rbf(0.25, 4).unwrap().kernel_bound(), 4.0);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(KernelSpec::imq(1.0, 0.5, 2).is_err());
        assert!(KernelSpec::imq(1.0, -1.0, 2).is_err());
        assert!(KernelSpec::imq(0.0, -0.5, 2).is_err());
        assert!(KernelSpec::rbf(0.0, 2).is_err());
        assert!(KernelSpec::rbf(1.0, 0).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let k = imq();
        assert!(matches!(
            k.eval(&[1.0], &[1.0, 2.0]),
            Err(Error::Dimension { expected: 2, got: 1 })
        ));
        assert!(k.grad1(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
        assert!(k.trace_mixed_second(&[1.0, 2.0], &[1.0]).is_err());
    }

    fn random_pair(rng: &mut ChaCha8Rng, d: usize) -> (Vec<f64>, Vec<f64>) {
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
        // separation uniform in [0, 10]
        let dir: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
        let r = rng.random_range(0.0..10.0);
        let y = x.iter().zip(&dir).map(|(a, u)| a + r * u / norm).collect();
        (x, y)
    }

    fn specs(d: usize) -> Vec<KernelSpec> {
        vec![
            KernelSpec::imq(1.0, -0.5, d).unwrap(),
            KernelSpec::imq(0.7, -0.2, d).unwrap(),
            KernelSpec::rbf(1.0, d).unwrap(),
            KernelSpec::rbf(3.5, d).unwrap(),
        ]
    }

    #[test]
    fn symmetry_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let d = rng.random_range(1..6);
            let (x, y) = random_pair(&mut rng, d);
            for k in specs(d) {
                let a = k.eval(&x, &y).unwrap();
                assert_eq!(a, k.eval(&y, &x).unwrap());
                assert!(a >= 0.0);
                let g = k.grad1(&x, &y).unwrap();
                let g_swapped = k.grad1(&y, &x).unwrap();
                for (u, v) in g.iter().zip(&g_swapped) {
                    assert_eq!(*u, -*v);
                }
            }
        }
    }

    #[test]
    fn grad1_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let step = 1e-6;
        for _ in 0..2_000 {
            let d = rng.random_range(1..5);
            let (x, y) = random_pair(&mut rng, d);
            for k in specs(d) {
                let g = k.grad1(&x, &y).unwrap();
                let scale = g.iter().map(|v| v.abs()).fold(0.0, f64::max);
                for i in 0..d {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[i] += step;
                    xm[i] -= step;
                    let fd = (k.eval(&xp, &y).unwrap() - k.eval(&xm, &y).unwrap()) / (2.0 * step);
                    // relative to the gradient's scale; absolute floor covers vanishing tails
                    assert!(
                        (fd - g[i]).abs() <= 1e-6 * scale + 1e-9,
                        "{k:?} x={x:?} y={y:?} i={i} fd={fd} g={}",
                        g[i]
                    );
                }
            }
        }
    }

    #[test]
    fn mixed_trace_matches_nested_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let step = 1e-4;
        for _ in 0..500 {
            let d = rng.random_range(1..5);
            let (x, y) = random_pair(&mut rng, d);
            for k in specs(d) {
                let exact = k.trace_mixed_second(&x, &y).unwrap();
                let mut fd = 0.0;
                for i in 0..d {
                    let shifted = |dx: f64, dy: f64| {
                        let mut xs = x.clone();
                        let mut ys = y.clone();
                        xs[i] += dx;
                        ys[i] += dy;
                        k.eval(&xs, &ys).unwrap()
                    };
                    fd += (shifted(step, step) - shifted(step, -step) - shifted(-step, step)
                        + shifted(-step, -step))
                        / (4.0 * step * step);
                }
                let scale = exact.abs().max(k.trace_mixed_second(&x, &x).unwrap() * 1e-3);
                assert!(
                    (fd - exact).abs() <= 1e-4 * scale + 1e-7,
                    "{k:?} fd={fd} exact={exact}"
                );
            }
        }
    }

    #[test]
    fn bound_certifies_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10_000 {
            let d = rng.random_range(1..8);
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-100.0..100.0)).collect();
            for k in specs(d) {
                let b2 = k.kernel_bound().powi(2);
                assert!(k.eval(&x, &x).unwrap() <= b2 * (1.0 + 1e-15));
                assert!(k.trace_mixed_second(&x, &x).unwrap() <= b2 * (1.0 + 1e-15));
            }
        }
    }

    #[test]
    fn median_heuristic_is_positive() {
        let pts = [0.0, 0.0, 1.0, 0.0, 0.0, 2.0];
        let h = median_heuristic_bandwidth(&pts, 3, 2);
        assert!(h > 0.0);
        assert_eq!(median_heuristic_bandwidth(&pts[..2], 1, 2), 1.0);
    }
}
