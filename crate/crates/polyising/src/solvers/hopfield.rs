//! Higher-order Hopfield-Tank network dynamics.

use super::{RunResult, SolverConfig, SolverError, DIVERGENCE_FACTOR};
use crate::pubo::PolySpec;
use crate::rng::StreamRng;

/// Std dev of the random initial state, N(0, 1e-4).
const INIT_STD: f64 = 1e-2;

/// One run of `dx = -x - xi * grad H(tanh(x / beta))`, amplitudes
/// initialised from N(0, 1e-4). Spins are sign(x) after the last step.
pub fn hopfield_run(
    poly: &PolySpec,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    if poly.n_terms() == 0 {
        return Err(SolverError::EmptyPolynomial);
    }
    if cfg.beta == 0.0 {
        return Err(SolverError::InvalidConfig("beta must be nonzero".into()));
    }
    let n = poly.n_vars();
    let mut rng = StreamRng::new(seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.normal(INIT_STD)).collect();
    let mut act = vec![0.0f64; n];
    let mut grad = vec![0.0f64; n];
    let mut trajectory = cfg.trajectory_every.map(|_| Vec::new());
    let gsign = cfg.feedback_sign();
    let bound = DIVERGENCE_FACTOR * cfg.x_sat;

    for t in 0..cfg.steps {
        if let (Some(traj), Some(every)) = (trajectory.as_mut(), cfg.trajectory_every) {
            if t % every == 0 {
                traj.push((t, x.clone()));
            }
        }
        for i in 0..n {
            act[i] = (x[i] / cfg.beta).tanh();
        }
        poly.gradient_into(&act, &mut grad);
        for i in 0..n {
            x[i] += -x[i] + gsign * cfg.xi * grad[i];
            if !x[i].is_finite() || x[i].abs() > bound {
                return Err(SolverError::Diverged { run_index: 0, step: t });
            }
        }
    }
    RunResult::finish(poly, &x, seed, trajectory)
}
