//! Optimization-defined correlation measures: squashed-entanglement upper
//! bounds over channel extensions, entanglement of purification over bounded
//! extensions, and accessible information over POVMs.
//!
//! Channel extensions are parameterised by Stinespring isometries (the first
//! d_in columns of e^G for anti-Hermitian G), so CPTP feasibility holds by
//! construction; POVMs by A_i = T^{-1/2} B_i†B_i T^{-1/2}. Gradients are
//! central finite differences; every search is multi-restart with
//! per-restart rng streams derived from (seed, restart index).

mod descent;
mod extension;
mod measures;
mod povm;
mod stiefel;

pub use extension::ExtensionProblem;
pub use measures::{
    accessible_information, cmi_for_extension, cmi_for_extension_pure, ef_flower,
    entanglement_of_purification, ep_additivity_check, ep_series, squashed_upper_bound,
    squashed_upper_bound_measured,
};
pub use povm::PovmProblem;

use crate::entropy::Bits;
use crate::linalg::CMatrix;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Optimizer knobs. The environment dimension of the internal Stinespring
/// dilation defaults to the purifier dimension when `d_env` is `None`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub step_tol: f64,
    pub value_tol: f64,
    pub fd_step: f64,
    pub seed: u64,
    pub d_env: Option<usize>,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig {
            restarts: 16,
            max_iters: 2000,
            step_tol: 1e-8,
            value_tol: 1e-7,
            fd_step: 1e-5,
            seed: 0,
            d_env: None,
        }
    }
}

impl OptConfig {
    pub fn with_seed(seed: u64) -> Self {
        OptConfig {
            seed,
            ..OptConfig::default()
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.restarts == 0
            || self.max_iters == 0
            || self.step_tol <= 0.0
            || self.value_tol <= 0.0
            || self.fd_step <= 0.0
            || self.d_env == Some(0)
        {
            return Err(crate::Error::bad_shape(
                "optimizer configuration fields must be positive",
            ));
        }
        Ok(())
    }
}

/// The parameters behind a reported optimum. `Exact` marks short-circuit
/// paths where the value is deterministic (trivial environment, rank-one
/// input) and no search ran.
#[derive(Debug, Clone)]
pub enum BestParams<T> {
    Isometry(CMatrix<T>),
    Povm(Vec<CMatrix<T>>),
    Exact,
}

/// Outcome of a multi-restart optimization. `value` is the objective
/// re-evaluated at `best_params`, so re-evaluation reproduces it exactly;
/// `history` holds each restart's best value in restart order.
#[derive(Debug, Clone)]
pub struct OptReport<T> {
    pub value: Bits<T>,
    pub best_params: BestParams<T>,
    pub restarts: usize,
    pub iterations: Vec<usize>,
    pub converged: bool,
    pub history: Vec<T>,
    pub config: OptConfig,
}

impl<T: Scalar> OptReport<T> {
    pub(crate) fn exact(value: T, cfg: &OptConfig) -> Self {
        OptReport {
            value: Bits(value),
            best_params: BestParams::Exact,
            restarts: 0,
            iterations: Vec::new(),
            converged: true,
            history: vec![value],
            config: cfg.clone(),
        }
    }
}
