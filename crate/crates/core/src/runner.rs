//! Run orchestration: initialize, iterate, record, persist.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::baselines::{lmc_step, LmcState};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::io::{ensure_dir, particles_to_csv, snapshot_name, trace_to_csv, write_file, TraceRecord};
use crate::kernels::{median_heuristic_bandwidth, KernelSpec};
use crate::stein::{apply_step, mean_grad_norm, potential_gradients, sweep, Ensemble};
use crate::targets::Target;
use crate::theory::{StepMode, StepPolicy, TheoryReport};

/// Everything a run needs after the config has been resolved.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub target: Target,
    pub kernel: KernelSpec,
    pub median_heuristic: bool,
    pub initial: Ensemble,
    pub steps: usize,
    pub policy: StepPolicy,
    pub theory: Option<TheoryReport>,
    pub snapshot_every: usize,
    pub timing: bool,
}

impl RunPlan {
    pub fn from_config(cfg: &RunConfig, base_dir: &Path) -> Result<Self> {
        let target = cfg.build_target(base_dir)?;
        let kernel = cfg.kernel_spec()?;
        let mut policy = cfg.step_policy();
        let epsilon = policy.epsilon.unwrap_or(DEFAULT_EPSILON);
        let theory = match cfg.tp_profile(&target) {
            Ok(profile) => Some(TheoryReport::compute(&target, &kernel, &profile, policy.alpha, epsilon)?),
            Err(e) if policy.mode == StepMode::Theory => return Err(e),
            Err(_) => None,
        };
        if policy.mode == StepMode::Theory {
            policy.computed_gamma = theory.as_ref().map(|r| r.gamma_max);
        }
        let p = &cfg.particles;
        Ok(Self {
            target,
            kernel,
            median_heuristic: cfg.kernel.median_heuristic,
            initial: Ensemble::standard_normal(p.n, p.d, p.seed)?,
            steps: cfg.steps,
            policy,
            theory,
            snapshot_every: cfg.snapshot_every,
            timing: cfg.timing,
        })
    }
}

/// Accuracy used for the iteration budget when the config does not set one.
pub const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Debug)]
pub struct RunOutcome {
    pub trace: Vec<TraceRecord>,
    pub ensemble: Ensemble,
    /// Set when a step was rejected; the trace and ensemble stop just before it.
    pub rejection: Option<Error>,
}

impl RunOutcome {
    pub fn summary(&self, theory: Option<&TheoryReport>, wall_ms: f64) -> RunSummary {
        let first = self.trace.first();
        let last = self.trace.last();
        let n = self.trace.len().max(1) as f64;
        RunSummary {
            status: if self.rejection.is_some() { "rejected" } else { "completed" },
            rejection: self.rejection.as_ref().map(|e| e.to_string()),
            steps_completed: self.trace.last().map_or(0, |r| r.iter),
            particles: self.ensemble.n(),
            dim: self.ensemble.d(),
            seed: self.ensemble.seed(),
            initial_ksd2: first.map_or(f64::NAN, |r| r.ksd2),
            final_ksd2: last.map_or(f64::NAN, |r| r.ksd2),
            mean_ksd2: self.trace.iter().map(|r| r.ksd2).sum::<f64>() / n,
            min_gamma: self.trace.iter().map(|r| r.gamma).fold(f64::INFINITY, f64::min),
            wall_ms,
            theory: theory.cloned(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub status: &'static str,
    pub rejection: Option<String>,
    pub steps_completed: usize,
    pub particles: usize,
    pub dim: usize,
    pub seed: u64,
    pub initial_ksd2: f64,
    pub final_ksd2: f64,
    pub mean_ksd2: f64,
    pub min_gamma: f64,
    pub wall_ms: f64,
    pub theory: Option<TheoryReport>,
}

/// Iterate SVGD for `plan.steps` steps. `snapshot` is called with every
/// ensemble the plan asks to keep (including the final one).
///
/// The trace holds one record per iterate `0..=steps`; record `i` carries
/// the diagnostics of iterate `i` and the step size used to leave it.
pub fn run_svgd<F>(plan: &RunPlan, mut snapshot: F) -> Result<RunOutcome>
where
    F: FnMut(usize, &Ensemble) -> Result<()>,
{
    let start = Instant::now();
    let (l0, l1) = plan.target.smoothness_constants();
    let d = plan.initial.d();
    let mut ens = plan.initial.clone();
    let mut trace = Vec::with_capacity(plan.steps + 1);
    let mut rejection = None;

    for iter in 0..=plan.steps {
        let kernel = if plan.median_heuristic {
            plan.kernel
                .with_bandwidth(median_heuristic_bandwidth(ens.positions(), ens.n(), d))?
        } else {
            plan.kernel
        };
        let b = kernel.kernel_bound();
        let grads = potential_gradients(&ens, &plan.target);
        let sw = sweep(&ens, &grads, &kernel, 1.0);
        let g_norm = sw.ksd2.max(0.0).sqrt();
        let grad_norm = mean_grad_norm(&grads, d);
        let gamma = plan.policy.step(g_norm, grad_norm, b, l0, l1);
        trace.push(TraceRecord {
            iter,
            gamma,
            ksd2: sw.ksd2,
            mean_grad_norm: grad_norm,
            elapsed_ms: if plan.timing {
                start.elapsed().as_secs_f64() * 1e3
            } else {
                0.0
            },
        });
        if wants_snapshot(iter, plan.steps, plan.snapshot_every) {
            snapshot(iter, &ens)?;
        }
        if iter == plan.steps {
            break;
        }
        match apply_step(&ens, &sw.directions, gamma, iter) {
            Ok(next) => ens = next,
            Err(e) => {
                rejection = Some(e);
                break;
            }
        }
    }
    Ok(RunOutcome {
        trace,
        ensemble: ens,
        rejection,
    })
}

/// Unadjusted Langevin on the same initial ensemble. The step size is the
/// fixed `gamma`, or the theory step in theory mode; diagnostics use the
/// same KSD estimator as SVGD.
pub fn run_lmc<F>(plan: &RunPlan, mut snapshot: F) -> Result<RunOutcome>
where
    F: FnMut(usize, &Ensemble) -> Result<()>,
{
    let gamma = match plan.policy.mode {
        StepMode::Fixed => plan.policy.gamma,
        StepMode::Theory => plan.policy.computed_gamma,
        StepMode::Adaptive => None,
    }
    .ok_or_else(|| Error::config("step_policy.mode", "LMC needs a constant step (fixed or theory)"))?;
    let start = Instant::now();
    let d = plan.initial.d();
    let mut state = LmcState::from_ensemble(&plan.initial);
    let mut trace = Vec::with_capacity(plan.steps + 1);
    let mut rejection = None;
    for iter in 0..=plan.steps {
        let ens = state.to_ensemble();
        let kernel = if plan.median_heuristic {
            plan.kernel
                .with_bandwidth(median_heuristic_bandwidth(ens.positions(), ens.n(), d))?
        } else {
            plan.kernel
        };
        let grads = potential_gradients(&ens, &plan.target);
        let ksd2 = sweep(&ens, &grads, &kernel, 1.0).ksd2;
        trace.push(TraceRecord {
            iter,
            gamma,
            ksd2,
            mean_grad_norm: mean_grad_norm(&grads, d),
            elapsed_ms: if plan.timing {
                start.elapsed().as_secs_f64() * 1e3
            } else {
                0.0
            },
        });
        if wants_snapshot(iter, plan.steps, plan.snapshot_every) {
            snapshot(iter, &ens)?;
        }
        if iter == plan.steps {
            break;
        }
        match lmc_step(&state, &plan.target, gamma) {
            Ok(next) => state = next,
            Err(e) => {
                rejection = Some(e);
                break;
            }
        }
    }
    Ok(RunOutcome {
        trace,
        ensemble: state.to_ensemble(),
        rejection,
    })
}

fn wants_snapshot(iter: usize, steps: usize, every: usize) -> bool {
    iter == steps || (every > 0 && iter.is_multiple_of(every))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    Svgd,
    Lmc,
}

/// Run and write `trace.csv`, `particles_<iter>.csv` and `report.json`
/// under `output_dir`.
pub fn run_to_dir(plan: &RunPlan, sampler: Sampler, output_dir: &Path) -> Result<(RunOutcome, RunSummary)> {
    let dir = ensure_dir(output_dir)?;
    let start = Instant::now();
    let mut last_snapshot = None;
    let mut write_snapshot = |iter: usize, ens: &Ensemble| {
        last_snapshot = Some(iter);
        write_file(&dir.join(snapshot_name(iter)), &particles_to_csv(ens.positions(), ens.d()))
    };
    let outcome = match sampler {
        Sampler::Svgd => run_svgd(plan, &mut write_snapshot)?,
        Sampler::Lmc => run_lmc(plan, &mut write_snapshot)?,
    };
    // a rejected run still leaves its last accepted ensemble on disk
    let final_iter = outcome.trace.last().map_or(0, |r| r.iter);
    if last_snapshot != Some(final_iter) {
        write_file(
            &dir.join(snapshot_name(final_iter)),
            &particles_to_csv(outcome.ensemble.positions(), outcome.ensemble.d()),
        )?;
    }
    write_file(&dir.join("trace.csv"), &trace_to_csv(&outcome.trace))?;
    let wall_ms = if plan.timing {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    let summary = outcome.summary(plan.theory.as_ref(), wall_ms);
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_file(&dir.join("report.json"), &(json + "\n"))?;
    Ok((outcome, summary))
}
