//! Multi-restart gradient descent with central finite differences and a
//! backtracking Armijo line search.
//!
//! The Armijo test doubles as the self-validation of the finite-difference
//! gradient: a step is only accepted when the objective decrease matches a
//! fraction of the predicted linear decrease, and a restart whose line
//! search cannot make progress at a non-negligible gradient counts as a
//! line-search failure.

use super::OptConfig;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

const ARMIJO_C: f64 = 1e-4;
const MIN_STEP: f64 = 1e-14;
const PLATEAU_WINDOW: usize = 4;

#[derive(Debug, Clone)]
pub(crate) struct RestartOutcome<T> {
    pub params: Vec<T>,
    pub value: T,
    pub iterations: usize,
    pub converged: bool,
    line_search_failed: bool,
}

/// Minimize `f` over `dim` real parameters from `cfg.restarts` random starts.
/// Returns the outcomes in restart order plus the winning index (lowest
/// value, ties broken by lowest restart index).
pub(crate) fn minimize_multistart<T, F>(
    f: &F,
    dim: usize,
    init_scale: f64,
    cfg: &OptConfig,
) -> Result<(usize, Vec<RestartOutcome<T>>)>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    cfg.validate()?;
    let restarts = cfg.restarts.max(1);
    let outcomes: Vec<RestartOutcome<T>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64 + 1);
            let init: Vec<T> = (0..dim)
                .map(|_| {
                    let g: f64 = StandardNormal.sample(&mut rng);
                    T::real(g * init_scale)
                })
                .collect();
            descend(f, init, cfg)
        })
        .collect();

    if outcomes.iter().all(|o| o.line_search_failed && o.iterations == 0) {
        return Err(Error::OptimizerDiverged);
    }
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.value < outcomes[best].value {
            best = i;
        }
    }
    Ok((best, outcomes))
}

fn descend<T, F>(f: &F, mut theta: Vec<T>, cfg: &OptConfig) -> RestartOutcome<T>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    let h = T::real(cfg.fd_step);
    let two_h = h * T::real(2.0);
    let mut value = f(&theta);
    let mut grad = vec![T::zero(); theta.len()];
    let mut prev_theta: Option<Vec<T>> = None;
    let mut prev_grad: Option<Vec<T>> = None;
    let mut step = T::real(0.1);
    let mut plateau = 0usize;
    let mut converged = false;
    let mut line_search_failed = false;
    let mut iterations = 0usize;

    for iter in 0..cfg.max_iters {
        iterations = iter;
        // central differences
        let mut grad_norm2 = T::zero();
        for i in 0..theta.len() {
            let orig = theta[i];
            theta[i] = orig + h;
            let up = f(&theta);
            theta[i] = orig - h;
            let down = f(&theta);
            theta[i] = orig;
            let g = (up - down) / two_h;
            grad[i] = g;
            grad_norm2 += g * g;
        }
        let grad_norm = grad_norm2.sqrt();
        if grad_norm < T::real(1e-9) {
            converged = true;
            break;
        }

        // Barzilai-Borwein spectral step as the line-search start, falling
        // back to growing the previously accepted step
        let mut t = step * T::real(2.0);
        if let (Some(pt), Some(pg)) = (&prev_theta, &prev_grad) {
            let mut sy = T::zero();
            let mut yy = T::zero();
            for i in 0..theta.len() {
                let s = theta[i] - pt[i];
                let y = grad[i] - pg[i];
                sy += s * y;
                yy += y * y;
            }
            if yy > T::zero() && sy > T::zero() {
                let bb = sy / yy;
                if bb.is_finite() {
                    t = bb.min(T::real(100.0)).max(T::real(MIN_STEP * 10.0));
                }
            }
        }

        let mut accepted = false;
        while t > T::real(MIN_STEP) {
            let trial: Vec<T> = theta
                .iter()
                .zip(&grad)
                .map(|(&x, &g)| x - t * g)
                .collect();
            let trial_value = f(&trial);
            if trial_value <= value - T::real(ARMIJO_C) * t * grad_norm2 {
                let decrease = value - trial_value;
                prev_theta = Some(theta.clone());
                prev_grad = Some(grad.clone());
                theta = trial;
                value = trial_value;
                step = t;
                accepted = true;
                if decrease < T::real(cfg.value_tol) {
                    plateau += 1;
                } else {
                    plateau = 0;
                }
                break;
            }
            t *= T::real(0.5);
        }
        if !accepted {
            // no acceptable step: at a stationary point this is convergence,
            // otherwise the line search genuinely failed
            if grad_norm < T::real(1e-5) {
                converged = true;
            } else {
                line_search_failed = true;
            }
            break;
        }
        if plateau >= PLATEAU_WINDOW || step * grad_norm < T::real(cfg.step_tol) {
            converged = true;
            break;
        }
    }

    RestartOutcome {
        params: theta,
        value,
        iterations,
        converged,
        line_search_failed,
    }
}
