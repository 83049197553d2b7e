//! Exhaustive ground-state search with Gray-code incremental updates.

use super::{PolySpec, PuboError, SpinVector};

/// Largest n for which exhaustive minimization is attempted.
pub const EXHAUSTIVE_LIMIT: usize = 26;

/// Enumerates all 2^n spin points and returns the minimum energy and its
/// argmin. Uses Gray-code ordering so each step flips one spin and updates
/// only the terms containing it. Ties keep the first point encountered in
/// Gray order from the all-(+1) start.
pub fn exhaustive_minimum(poly: &PolySpec) -> Result<(f64, SpinVector), PuboError> {
    let n = poly.n_vars();
    if n > EXHAUSTIVE_LIMIT {
        return Err(PuboError::TooManyVars {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    // var -> terms adjacency over the term list.
    let mut var_terms: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (k, t) in poly.terms().iter().enumerate() {
        for &i in t.indices() {
            var_terms[(i - 1) as usize].push(k as u32);
        }
    }
    let coeffs: Vec<f64> = poly.terms().iter().map(|t| t.coeff()).collect();

    let mut spins = vec![1i8; n];
    // Signed value of each term at the current point.
    let mut term_val: Vec<f64> = coeffs.clone();
    let mut energy: f64 = term_val.iter().sum();

    let mut best_energy = energy;
    let mut best_spins = spins.clone();

    for g in 1u64..1u64 << n {
        let flip = g.trailing_zeros() as usize;
        spins[flip] = -spins[flip];
        let mut delta = 0.0;
        for &k in &var_terms[flip] {
            let v = term_val[k as usize];
            term_val[k as usize] = -v;
            delta -= 2.0 * v;
        }
        energy += delta;
        if energy < best_energy {
            best_energy = energy;
            best_spins.copy_from_slice(&spins);
        }
    }
    let best = SpinVector::new(best_spins).expect("spins stay in {-1,+1}");
    // Recompute from scratch to shed accumulated floating-point drift.
    let exact = poly.evaluate_spins(&best)?;
    Ok((exact, best))
}
