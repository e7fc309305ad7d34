//! JSON run configuration.
//!
//! ```json
//! {
//!   "target":      { "family": "generalized_gaussian", "p": 4, "sigma": 1 },
//!   "kernel":      { "family": "inverse_multiquadric", "c": 1, "beta": -0.5 },
//!   "particles":   { "n": 200, "d": 2, "seed": 7 },
//!   "steps":       500,
//!   "step_policy": { "mode": "adaptive", "alpha": 2 },
//!   "output_dir":  "out"
//! }
//! ```
//!
//! Unknown keys are rejected. Relative CSV paths are resolved against the
//! directory that holds the config file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::io::read_matrix_csv;
use crate::kernels::{KernelFamily, KernelSpec};
use crate::targets::{Target, TargetFamily, TpForm, TpProfile};
use crate::theory::{lambda_bv, StepMode, StepPolicy, DEFAULT_ALPHA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Gaussian,
    GeneralizedGaussian,
    BayesianLasso,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub family: TargetKind,
    pub p: Option<f64>,
    pub sigma: Option<f64>,
    pub mean: Option<Vec<f64>>,
    #[serde(rename = "A_csv")]
    pub a_csv: Option<PathBuf>,
    pub b_csv: Option<PathBuf>,
    pub tau: Option<f64>,
    pub q: Option<f64>,
    pub wp_override: Option<f64>,
    /// Additive constant for targets without a closed-form normalizer.
    pub log_normalizer: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    #[serde(alias = "imq")]
    InverseMultiquadric,
    #[serde(alias = "rbf")]
    GaussianRbf,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub family: KernelKind,
    pub c: Option<f64>,
    pub beta: Option<f64>,
    pub bandwidth: Option<f64>,
    #[serde(default)]
    pub median_heuristic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    #[default]
    StandardNormal,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticlesConfig {
    pub n: usize,
    pub d: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub init: InitKind,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepPolicyConfig {
    pub mode: StepMode,
    pub gamma: Option<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    pub epsilon: Option<f64>,
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TpFormKind {
    Talagrand,
    BolleyVillani,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TpProfileConfig {
    pub form: TpFormKind,
    pub lambda_t: Option<f64>,
    /// Computed from the target when omitted (centred radial targets only).
    pub lambda_bv: Option<f64>,
    pub p: Option<f64>,
    pub wp_to_origin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub target: TargetConfig,
    pub kernel: KernelConfig,
    pub particles: ParticlesConfig,
    pub steps: usize,
    pub step_policy: StepPolicyConfig,
    pub tp_profile: Option<TpProfileConfig>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// 0 writes only the final snapshot.
    #[serde(default)]
    pub snapshot_every: usize,
    /// Fill the `elapsed_ms` trace column with wall-clock time. Off by
    /// default so that traces are byte-reproducible.
    #[serde(default)]
    pub timing: bool,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Parse and validate a JSON document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let message = e.into_inner().to_string();
        Error::config(if path == "." { "<root>".to_string() } else { path }, message)
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Read, parse and validate a config file; the returned path is the base
/// directory for relative paths inside it.
pub fn load_config(path: &Path) -> Result<(RunConfig, PathBuf)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let cfg = parse_config(&text)?;
    let base = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    Ok((cfg, base))
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        let p = &self.particles;
        if p.n < 1 {
            return Err(Error::config("particles.n", "must be >= 1"));
        }
        if p.d < 1 {
            return Err(Error::config("particles.d", "must be >= 1"));
        }
        let sp = &self.step_policy;
        if !(sp.alpha > 1.0 && sp.alpha.is_finite()) {
            return Err(Error::config("step_policy.alpha", format!("must be > 1, got {}", sp.alpha)));
        }
        if let Some(g) = sp.gamma {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::config("step_policy.gamma", format!("must be > 0, got {g}")));
            }
        }
        match sp.mode {
            StepMode::Fixed if sp.gamma.is_none() => {
                return Err(Error::config("step_policy.gamma", "required when mode = fixed"));
            }
            StepMode::Theory => {
                match sp.epsilon {
                    Some(e) if e > 0.0 && e.is_finite() => {}
                    Some(e) => {
                        return Err(Error::config("step_policy.epsilon", format!("must be > 0, got {e}")))
                    }
                    None => return Err(Error::config("step_policy.epsilon", "required when mode = theory")),
                }
                if self.kernel.median_heuristic {
                    return Err(Error::config(
                        "kernel.median_heuristic",
                        "theory mode needs a fixed kernel",
                    ));
                }
            }
            _ => {}
        }
        if let Some(e) = sp.epsilon {
            if !(e > 0.0) {
                return Err(Error::config("step_policy.epsilon", format!("must be > 0, got {e}")));
            }
        }
        self.kernel_spec()?;
        self.validate_target_fields()?;
        Ok(())
    }

    fn validate_target_fields(&self) -> Result<()> {
        let t = &self.target;
        let lasso_only = [
            ("target.A_csv", t.a_csv.is_some()),
            ("target.b_csv", t.b_csv.is_some()),
            ("target.tau", t.tau.is_some()),
            ("target.q", t.q.is_some()),
            ("target.log_normalizer", t.log_normalizer.is_some()),
        ];
        let radial_only = [
            ("target.p", t.p.is_some()),
            ("target.sigma", t.sigma.is_some()),
            ("target.mean", t.mean.is_some()),
        ];
        let (forbidden, family): (&[(&str, bool)], &str) = match t.family {
            TargetKind::Gaussian => {
                if t.p.is_some() {
                    return Err(Error::config("target.p", "not used by the gaussian family"));
                }
                (&lasso_only, "gaussian")
            }
            TargetKind::GeneralizedGaussian => {
                if t.p.is_none() {
                    return Err(Error::config("target.p", "required for generalized_gaussian"));
                }
                (&lasso_only, "generalized_gaussian")
            }
            TargetKind::BayesianLasso => {
                for (key, present) in [
                    ("target.A_csv", t.a_csv.is_some()),
                    ("target.b_csv", t.b_csv.is_some()),
                    ("target.tau", t.tau.is_some()),
                    ("target.q", t.q.is_some()),
                ] {
                    if !present {
                        return Err(Error::config(key, "required for bayesian_lasso"));
                    }
                }
                (&radial_only, "bayesian_lasso")
            }
        };
        if let Some((key, _)) = forbidden.iter().find(|(_, present)| *present) {
            return Err(Error::config(*key, format!("not used by the {family} family")));
        }
        if let Some(mean) = &t.mean {
            if mean.len() != self.particles.d {
                return Err(Error::config(
                    "target.mean",
                    format!("length {} does not match particles.d = {}", mean.len(), self.particles.d),
                ));
            }
        }
        Ok(())
    }

    pub fn kernel_spec(&self) -> Result<KernelSpec> {
        let k = &self.kernel;
        let family = match k.family {
            KernelKind::InverseMultiquadric => {
                if k.bandwidth.is_some() || k.median_heuristic {
                    return Err(Error::config(
                        "kernel.bandwidth",
                        "bandwidth options apply to gaussian_rbf only",
                    ));
                }
                let c = k.c.unwrap_or(1.0);
                let beta = k.beta.unwrap_or(-0.5);
                if !(c > 0.0 && c.is_finite()) {
                    return Err(Error::config("kernel.c", format!("must be > 0, got {c}")));
                }
                if !(beta > -1.0 && beta < 0.0) {
                    return Err(Error::config("kernel.beta", format!("must lie in (-1, 0), got {beta}")));
                }
                KernelFamily::InverseMultiquadric { c, beta }
            }
            KernelKind::GaussianRbf => {
                if k.c.is_some() || k.beta.is_some() {
                    return Err(Error::config("kernel.c", "c and beta apply to inverse_multiquadric only"));
                }
                let bandwidth = k.bandwidth.unwrap_or(1.0);
                if !(bandwidth > 0.0 && bandwidth.is_finite()) {
                    return Err(Error::config(
                        "kernel.bandwidth",
                        format!("must be > 0, got {bandwidth}"),
                    ));
                }
                KernelFamily::GaussianRbf { bandwidth }
            }
        };
        KernelSpec::new(family, self.particles.d).map_err(|e| Error::config("kernel", e.to_string()))
    }

    /// Build the target, loading LASSO data relative to `base_dir`.
    pub fn build_target(&self, base_dir: &Path) -> Result<Target> {
        let t = &self.target;
        let d = self.particles.d;
        let mean = t.mean.clone().unwrap_or_else(|| vec![0.0; d]);
        let sigma = t.sigma.unwrap_or(1.0);
        let target = match t.family {
            TargetKind::Gaussian => Target::gaussian(mean, sigma)?,
            TargetKind::GeneralizedGaussian => {
                Target::generalized_gaussian(mean, sigma, t.p.expect("validated"))?
            }
            TargetKind::BayesianLasso => {
                let resolve = |p: &PathBuf| if p.is_absolute() { p.clone() } else { base_dir.join(p) };
                let a_path = resolve(t.a_csv.as_ref().expect("validated"));
                let b_path = resolve(t.b_csv.as_ref().expect("validated"));
                let (design, rows, cols) =
                    read_matrix_csv(&a_path).map_err(|e| Error::config("target.A_csv", e.to_string()))?;
                if cols != d {
                    return Err(Error::config(
                        "target.A_csv",
                        format!("A has {cols} columns but particles.d = {d}"),
                    ));
                }
                let (labels, b_rows, b_cols) =
                    read_matrix_csv(&b_path).map_err(|e| Error::config("target.b_csv", e.to_string()))?;
                if b_cols != 1 && b_rows != 1 {
                    return Err(Error::config("target.b_csv", "b must be a single row or column"));
                }
                Target::bayesian_lasso(
                    design,
                    rows,
                    labels,
                    t.tau.expect("validated"),
                    t.q.expect("validated"),
                    t.log_normalizer.unwrap_or(0.0),
                )?
            }
        };
        match t.wp_override {
            Some(wp) => target.with_wp_override(wp),
            None => Ok(target),
        }
    }

    /// Transport profile from the config, or the family default: Talagrand
    /// with `λ_T = 1/σ²` for Gaussians and a computed Bolley–Villani
    /// constant for generalized Gaussians.
    pub fn tp_profile(&self, target: &Target) -> Result<TpProfile> {
        let (form, p, wp) = match &self.tp_profile {
            Some(cfg) => {
                let form = match cfg.form {
                    TpFormKind::Talagrand => TpForm::Talagrand {
                        lambda_t: cfg.lambda_t.ok_or_else(|| {
                            Error::config("tp_profile.lambda_t", "required for the talagrand form")
                        })?,
                    },
                    TpFormKind::BolleyVillani => TpForm::BolleyVillani {
                        lambda_bv: match cfg.lambda_bv {
                            Some(v) => v,
                            None => lambda_bv(target)?,
                        },
                    },
                };
                (form, cfg.p, cfg.wp_to_origin)
            }
            None => {
                let form = match target.family() {
                    TargetFamily::Gaussian { sigma, .. } => TpForm::Talagrand {
                        lambda_t: 1.0 / (sigma * sigma),
                    },
                    TargetFamily::GeneralizedGaussian { .. } => TpForm::BolleyVillani {
                        lambda_bv: lambda_bv(target)?,
                    },
                    TargetFamily::BayesianLasso { .. } => {
                        return Err(Error::config(
                            "tp_profile",
                            "required for bayesian_lasso (no default transport constant)",
                        ))
                    }
                };
                (form, None, None)
            }
        };
        let wp = match wp {
            Some(v) => v,
            None => target.pth_moment_root()?,
        };
        TpProfile::new(form, p.unwrap_or(target.p_order()), wp)
    }

    /// Step policy with the `alpha`/`gamma`/`epsilon` fields copied over;
    /// theory mode still needs its `computed_gamma` filled in by the caller.
    pub fn step_policy(&self) -> StepPolicy {
        let sp = &self.step_policy;
        StepPolicy {
            mode: sp.mode,
            gamma: sp.gamma,
            alpha: sp.alpha,
            epsilon: sp.epsilon,
            computed_gamma: None,
        }
    }
}
