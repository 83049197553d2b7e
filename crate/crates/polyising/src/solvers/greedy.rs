//! Discrete greedy descent over the spin hypercube.

use super::{RunResult, SolverError};
use crate::pubo::{PolySpec, PuboError, SpinVector};

/// Steepest single-flip descent: repeatedly flips the spin whose flip
/// lowers the energy the most (ties to the lowest variable index) and
/// stops at the first local minimum. Flip gains are maintained
/// incrementally from per-term signed values, O(total term size) per
/// iteration; the final energy is recomputed from scratch.
pub fn greedy_run(poly: &PolySpec, start: &SpinVector) -> Result<RunResult, SolverError> {
    let n = poly.n_vars();
    if start.len() != n {
        return Err(SolverError::Pubo(PuboError::DimensionMismatch {
            expected: n,
            got: start.len(),
        }));
    }
    let mut var_terms: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (k, t) in poly.terms().iter().enumerate() {
        for &i in t.indices() {
            var_terms[(i - 1) as usize].push(k as u32);
        }
    }
    let mut spins = start.clone();
    // Signed value of each term at the current point.
    let mut term_val: Vec<f64> = poly
        .terms()
        .iter()
        .map(|t| {
            let mut neg = false;
            for &i in t.indices() {
                neg ^= spins.values()[(i - 1) as usize] < 0;
            }
            if neg {
                -t.coeff()
            } else {
                t.coeff()
            }
        })
        .collect();

    loop {
        let mut best_delta = 0.0;
        let mut best_i = None;
        for i in 0..n {
            // Flipping spin i negates every term containing it.
            let delta: f64 = -2.0 * var_terms[i].iter().map(|&k| term_val[k as usize]).sum::<f64>();
            if delta < best_delta {
                best_delta = delta;
                best_i = Some(i);
            }
        }
        match best_i {
            Some(i) => {
                spins.flip(i);
                for &k in &var_terms[i] {
                    term_val[k as usize] = -term_val[k as usize];
                }
            }
            None => break,
        }
    }
    RunResult::finish(poly, &spins.to_f64(), 0, None)
}
