//! Complex-amplitude gain dynamics with transient complex couplings.
//!
//! Amplitudes are complex; each variable carries its own gain nu_i that
//! adapts toward the amplitude threshold rho_th. When the flow reaches a
//! steady state (windowed mean |dx| below tolerance) a few randomly
//! chosen couplings receive an imaginary component, which is removed once
//! the system leaves the local minimum again.

use super::{RunResult, SolverConfig, SolverError, DIVERGENCE_FACTOR};
use crate::pubo::PolySpec;
use crate::rng::StreamRng;
use num_complex::Complex64;

/// One TGD+CC run. Starts from zero amplitudes and zero gains; the
/// Gaussian noise term (applied to the real part of dx) provides the
/// symmetry breaking across runs. Spins are sign(Re x).
pub fn tgdcc_run(
    poly: &PolySpec,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    if poly.n_terms() == 0 {
        return Err(SolverError::EmptyPolynomial);
    }
    let n = poly.n_vars();
    let n_terms = poly.n_terms();
    let gsign = cfg.feedback_sign();
    let cc_count = cfg
        .cc_count
        .unwrap_or_else(|| std::cmp::max(1, n_terms.div_ceil(100)));
    let cc_magnitude = cfg
        .cc_magnitude
        .unwrap_or_else(|| poly.abs_coeff_sum() / n_terms as f64);
    let steady_tol = cfg.steady_tol();
    let bound = DIVERGENCE_FACTOR * cfg.x_sat;

    let base_coeffs: Vec<f64> = poly.terms().iter().map(|t| gsign * t.coeff()).collect();
    let mut coeffs: Vec<Complex64> = base_coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let term_indices: Vec<&[u32]> = poly.terms().iter().map(|t| t.indices()).collect();

    let mut rng = StreamRng::new(seed);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut nu = vec![0.0f64; n];
    let mut coupling = vec![Complex64::new(0.0, 0.0); n];
    let mut trajectory = cfg.trajectory_every.map(|_| Vec::new());

    let mut window = std::collections::VecDeque::with_capacity(cfg.steady_window);
    let mut window_sum = 0.0f64;
    let mut complexified: Vec<usize> = Vec::new();

    for t in 0..cfg.steps {
        if let (Some(traj), Some(every)) = (trajectory.as_mut(), cfg.trajectory_every) {
            if t % every == 0 {
                traj.push((t, x.iter().map(|c| c.re).collect()));
            }
        }
        coupling.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        for (k, idx) in term_indices.iter().enumerate() {
            let coeff = coeffs[k];
            let d = idx.len();
            for p in 0..d {
                // Product over the other factors, conjugating the one with
                // the largest remaining index.
                let last = if p == d - 1 { d.wrapping_sub(2) } else { d - 1 };
                let mut prod = coeff;
                for q in 0..d {
                    if q == p {
                        continue;
                    }
                    let xq = x[idx[q] as usize - 1];
                    prod *= if q == last { xq.conj() } else { xq };
                }
                coupling[idx[p] as usize - 1] += prod;
            }
        }
        let mut dx_mean = 0.0;
        for i in 0..n {
            let amp2 = x[i].norm_sqr();
            let mut dx = cfg.xi * (x[i] * (nu[i] - amp2) + coupling[i]);
            if cfg.sigma > 0.0 {
                dx += Complex64::new(rng.normal(cfg.sigma), 0.0);
            }
            nu[i] += cfg.xi * cfg.epsilon * (cfg.rho_th - amp2);
            x[i] += dx;
            dx_mean += dx.norm();
            if !x[i].re.is_finite() || !x[i].im.is_finite() || x[i].norm() > bound {
                return Err(SolverError::Diverged { run_index: 0, step: t });
            }
        }
        dx_mean /= n as f64;

        if window.len() == cfg.steady_window {
            window_sum -= window.pop_front().expect("window is non-empty");
        }
        window.push_back(dx_mean);
        window_sum += dx_mean;
        if window.len() == cfg.steady_window {
            let mean = window_sum / cfg.steady_window as f64;
            if complexified.is_empty() && mean < steady_tol {
                for _ in 0..cc_count.min(n_terms) {
                    let k = rng.below(n_terms as u64) as usize;
                    coeffs[k].im += cc_magnitude;
                    complexified.push(k);
                }
            } else if !complexified.is_empty() && mean > steady_tol {
                for &k in &complexified {
                    coeffs[k] = Complex64::new(base_coeffs[k], 0.0);
                }
                complexified.clear();
            }
        }
    }
    let re: Vec<f64> = x.iter().map(|c| c.re).collect();
    RunResult::finish(poly, &re, seed, trajectory)
}
