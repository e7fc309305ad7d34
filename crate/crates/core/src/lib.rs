//! Stein variational gradient descent for targets whose potential is
//! `(L0, L1)`-smooth, together with the constants, step sizes and iteration
//! budgets that make its convergence guarantee executable.
//!
//! The crate is organised by concern:
//!
//! * [`kernels`]: positive-definite kernels and their derivative bounds.
//! * [`targets`]: potentials, gradients and smoothness/growth constants.
//! * [`stein`]: the SVGD direction, the Stein kernel and KSD.
//! * [`theory`]: step-size rules and complexity bounds.
//! * [`baselines`]: unadjusted Langevin Monte Carlo for comparison.
//! * [`runner`], [`config`], [`io`]: experiment driving and persistence.
//! * [`verify`]: numerical checks of every bound the step sizes rely on.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod config;
pub mod error;
pub mod io;
pub mod kernels;
pub mod runner;
pub mod stein;
pub mod targets;
pub mod theory;
pub mod verify;

pub use error::{Error, Result};
pub use kernels::{KernelFamily, KernelSpec};
pub use stein::{direction, ksd_squared, stein_kernel, svgd_step, Ensemble};
pub use targets::{Target, TargetFamily, TpForm, TpProfile};
pub use theory::{StepMode, StepPolicy, TheoryReport};
