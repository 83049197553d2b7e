//! Exact multilinear expansion of black-box spin functions via the parity
//! (Walsh-Hadamard) transform.

use super::{PolySpec, PuboError, Term};

/// Largest n for which exhaustive expansion is attempted (2^n evaluations).
pub const EXPANSION_LIMIT: usize = 20;

/// Default tolerance below which expansion coefficients are dropped.
const DROP_TOL: f64 = 1e-12;

/// Expands a black-box function on {-1,+1}^n into its unique multilinear
/// polynomial: coeff_S = 2^-n * sum_s f(s) * prod_{i in S} s_i.
///
/// The callback receives spins indexed 1..=n as a slice; table index bit
/// i-1 set means s_i = -1.
pub fn multilinear_expand<F>(f: F, n: usize) -> Result<PolySpec, PuboError>
where
    F: FnMut(&[i8]) -> f64,
{
    multilinear_expand_with(f, n, DROP_TOL)
}

pub fn multilinear_expand_with<F>(
    mut f: F,
    n: usize,
    drop_tol: f64,
) -> Result<PolySpec, PuboError>
where
    F: FnMut(&[i8]) -> f64,
{
    if n > EXPANSION_LIMIT {
        return Err(PuboError::TooManyVars {
            n,
            limit: EXPANSION_LIMIT,
        });
    }
    let size = 1usize << n;
    let mut table = vec![0.0f64; size];
    let mut spins = vec![1i8; n];
    for (m, slot) in table.iter_mut().enumerate() {
        for (i, s) in spins.iter_mut().enumerate() {
            *s = if m >> i & 1 == 1 { -1 } else { 1 };
        }
        *slot = f(&spins);
    }
    // In-place Walsh-Hadamard transform: table[S] becomes
    // sum_m f[m] * (-1)^popcount(m & S) = sum_s f(s) chi_S(s).
    let mut half = 1;
    while half < size {
        let mut base = 0;
        while base < size {
            for i in base..base + half {
                let (a, b) = (table[i], table[i + half]);
                table[i] = a + b;
                table[i + half] = a - b;
            }
            base += half * 2;
        }
        half *= 2;
    }
    let scale = 1.0 / size as f64;
    let mut terms = Vec::new();
    for (mask, &raw) in table.iter().enumerate() {
        let coeff = raw * scale;
        if coeff.abs() <= drop_tol {
            continue;
        }
        let indices: Vec<u32> = (0..n as u32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        terms.push(Term::new(indices, coeff));
    }
    PolySpec::new(n, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pubo::SpinVector;

    #[test]
    fn parity_function_expands_to_single_term() {
        let p = multilinear_expand(|s| (s[0] * s[1]) as f64, 2).unwrap();
        assert_eq!(p.n_terms(), 1);
        assert_eq!(p.terms()[0].indices(), &[1, 2]);
        assert_eq!(p.terms()[0].coeff(), 1.0);
    }

    #[test]
    fn constant_function_expands_to_offset() {
        let p = multilinear_expand(|_| 3.5, 3).unwrap();
        assert_eq!(p.n_terms(), 1);
        assert!(p.terms()[0].indices().is_empty());
        assert_eq!(p.terms()[0].coeff(), 3.5);
    }

    #[test]
    fn random_table_reproduced_exactly() {
        let n = 4;
        let mut rng = crate::rng::StreamRng::new(2024);
        let table: Vec<f64> = (0..1 << n).map(|_| rng.uniform_in(-5.0, 5.0)).collect();
        let p = multilinear_expand_with(
            |s| {
                let m: usize = s
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| if v < 0 { 1 << i } else { 0 })
                    .sum();
                table[m]
            },
            n,
            0.0,
        )
        .unwrap();
        for m in 0..1usize << n {
            let spins: Vec<i8> = (0..n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect();
            let s = SpinVector::new(spins).unwrap();
            let v = p.evaluate_spins(&s).unwrap();
            assert!((v - table[m]).abs() < 1e-9, "m={m}: {v} vs {}", table[m]);
        }
    }

    #[test]
    fn expansion_limit_enforced() {
        assert!(matches!(
            multilinear_expand(|_| 0.0, EXPANSION_LIMIT + 1),
            Err(PuboError::TooManyVars { .. })
        ));
    }

    #[test]
    fn expand_of_evaluate_is_identity_on_coefficients() {
        use crate::pubo::Term;
        let p = PolySpec::new(
            5,
            vec![
                Term::new(vec![1, 3, 5], -2.5),
                Term::new(vec![2], 1.25),
                Term::new(vec![], 0.5),
                Term::new(vec![4, 5], 3.0),
            ],
        )
        .unwrap();
        let q = multilinear_expand(
            |s| {
                let sv = SpinVector::new(s.to_vec()).unwrap();
                p.evaluate_spins(&sv).unwrap()
            },
            5,
        )
        .unwrap();
        assert_eq!(p.terms().len(), q.terms().len());
        for (a, b) in p.terms().iter().zip(q.terms()) {
            assert_eq!(a.indices(), b.indices());
            assert!((a.coeff() - b.coeff()).abs() < 1e-9);
        }
    }
}
