//! CIM-style annealed gradient flow with momentum and saturation.

use super::{anneal_nu, RunResult, SolverConfig, SolverError, DIVERGENCE_FACTOR};
use crate::pubo::PolySpec;
use crate::rng::StreamRng;

/// One run: quadratures start at zero; each step applies
/// `dx = nu(t) * x - xi * grad H(x) + f(t)`, accumulates heavy-ball
/// momentum `v <- alpha * v + dx; x <- x + v`, then clamps every
/// amplitude to [-x_sat, x_sat]. Spins are sign(x) after the last step.
pub fn polysimcim_run(
    poly: &PolySpec,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    if poly.n_terms() == 0 {
        return Err(SolverError::EmptyPolynomial);
    }
    let n = poly.n_vars();
    let mut rng = StreamRng::new(seed);
    let mut x = vec![0.0f64; n];
    let mut v = vec![0.0f64; n];
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
        let nu = anneal_nu(t, cfg.steps, cfg.nu_o, cfg.nu_d, cfg.nu_s);
        poly.gradient_into(&x, &mut grad);
        for i in 0..n {
            let noise = if cfg.sigma > 0.0 {
                rng.normal(cfg.sigma)
            } else {
                0.0
            };
            let dx = nu * x[i] + gsign * cfg.xi * grad[i] + noise;
            v[i] = cfg.momentum_alpha * v[i] + dx;
            x[i] += v[i];
            if !x[i].is_finite() || x[i].abs() > bound {
                return Err(SolverError::Diverged { run_index: 0, step: t });
            }
            x[i] = x[i].clamp(-cfg.x_sat, cfg.x_sat);
        }
    }
    RunResult::finish(poly, &x, seed, trajectory)
}
