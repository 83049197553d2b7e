//! Sparse multilinear spin polynomials and their core operations:
//! construction, evaluation, gradients, exact expansion of black-box spin
//! functions, and the text file format.

mod expand;
mod exhaustive;
mod format;

pub use expand::{multilinear_expand, multilinear_expand_with, EXPANSION_LIMIT};
pub use exhaustive::exhaustive_minimum;
pub use format::{parse_pubo, serialize_pubo};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PuboError {
    #[error("dimension mismatch: polynomial has {expected} variables, point has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value at component {index}")]
    NonFinite { index: usize },
    #[error("non-finite coefficient in term {term:?}")]
    NonFiniteCoeff { term: Vec<u32> },
    #[error("variable index {index} out of range 1..={n_vars}")]
    IndexOutOfRange { index: u32, n_vars: usize },
    #[error("variable index {index} repeated within a term")]
    RepeatedIndex { index: u32 },
    #[error("{n} variables exceed the exhaustive limit of {limit}")]
    TooManyVars { n: usize, limit: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("spin vector entry at component {index} is not +1 or -1")]
    NotASpin { index: usize },
}

/// One summand of a spin polynomial: a coefficient times a product of
/// distinct variables, identified by 1-based indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    indices: Vec<u32>,
    coeff: f64,
}

impl Term {
    /// Indices may arrive in any order; they are sorted on polynomial
    /// construction (spin variables commute). An empty index list is the
    /// constant term.
    pub fn new(indices: Vec<u32>, coeff: f64) -> Self {
        Term { indices, coeff }
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }
}

/// Immutable sparse multilinear polynomial over spin variables s_1..s_n.
///
/// Terms are kept in canonical form: indices strictly increasing within a
/// term, terms in lexicographic tuple order, duplicate tuples merged by
/// exact coefficient addition, exact zeros dropped. A flattened copy of
/// the term list backs the evaluation and gradient hot loops.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpec {
    n_vars: usize,
    terms: Vec<Term>,
    // Flat mirror of `terms` with 0-based indices.
    flat_offsets: Vec<u32>,
    flat_indices: Vec<u32>,
    flat_coeffs: Vec<f64>,
}

impl PolySpec {
    pub fn new(n_vars: usize, terms: Vec<Term>) -> Result<Self, PuboError> {
        let mut canon: Vec<(Vec<u32>, f64)> = Vec::with_capacity(terms.len());
        for mut t in terms {
            if !t.coeff.is_finite() {
                return Err(PuboError::NonFiniteCoeff { term: t.indices });
            }
            t.indices.sort_unstable();
            for w in t.indices.windows(2) {
                if w[0] == w[1] {
                    return Err(PuboError::RepeatedIndex { index: w[0] });
                }
            }
            if let Some(&ix) = t.indices.iter().find(|&&i| i == 0 || i as usize > n_vars) {
                return Err(PuboError::IndexOutOfRange { index: ix, n_vars });
            }
            canon.push((t.indices, t.coeff));
        }
        canon.sort_by(|a, b| a.0.cmp(&b.0));
        // Merge equal tuples; drop terms whose merged coefficient is exactly 0.
        let mut merged: Vec<Term> = Vec::with_capacity(canon.len());
        for (indices, coeff) in canon {
            match merged.last_mut() {
                Some(last) if last.indices == indices => last.coeff += coeff,
                _ => merged.push(Term { indices, coeff }),
            }
        }
        merged.retain(|t| t.coeff != 0.0);

        let mut flat_offsets = Vec::with_capacity(merged.len() + 1);
        let mut flat_indices = Vec::new();
        let mut flat_coeffs = Vec::with_capacity(merged.len());
        flat_offsets.push(0);
        for t in &merged {
            flat_indices.extend(t.indices.iter().map(|&i| i - 1));
            flat_offsets.push(flat_indices.len() as u32);
            flat_coeffs.push(t.coeff);
        }
        Ok(PolySpec {
            n_vars,
            terms: merged,
            flat_offsets,
            flat_indices,
            flat_coeffs,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(Term::degree).max().unwrap_or(0)
    }

    /// Sum of |coeff| over non-constant terms.
    pub fn abs_coeff_sum(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.degree() > 0)
            .map(|t| t.coeff.abs())
            .sum()
    }

    /// Value of the multilinear extension at an arbitrary real point.
    pub fn evaluate(&self, point: &[f64]) -> Result<f64, PuboError> {
        self.check_point(point)?;
        Ok(self.evaluate_unchecked(point))
    }

    #[inline]
    pub(crate) fn evaluate_unchecked(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (k, &coeff) in self.flat_coeffs.iter().enumerate() {
            let lo = self.flat_offsets[k] as usize;
            let hi = self.flat_offsets[k + 1] as usize;
            let mut prod = coeff;
            for &i in &self.flat_indices[lo..hi] {
                prod *= point[i as usize];
            }
            acc += prod;
        }
        acc
    }

    /// Exact energy at a spin point.
    pub fn evaluate_spins(&self, spins: &SpinVector) -> Result<f64, PuboError> {
        if spins.len() != self.n_vars {
            return Err(PuboError::DimensionMismatch {
                expected: self.n_vars,
                got: spins.len(),
            });
        }
        let mut acc = 0.0;
        for (k, &coeff) in self.flat_coeffs.iter().enumerate() {
            let lo = self.flat_offsets[k] as usize;
            let hi = self.flat_offsets[k + 1] as usize;
            let mut neg = false;
            for &i in &self.flat_indices[lo..hi] {
                neg ^= spins.values()[i as usize] < 0;
            }
            acc += if neg { -coeff } else { coeff };
        }
        Ok(acc)
    }

    /// Gradient of the multilinear extension. A degree-d term contributes
    /// its d leave-one-out products, formed from prefix/suffix products so
    /// zero amplitudes need no special casing.
    pub fn gradient(&self, point: &[f64]) -> Result<Vec<f64>, PuboError> {
        self.check_point(point)?;
        let mut out = vec![0.0; self.n_vars];
        self.gradient_into(point, &mut out);
        Ok(out)
    }

    #[inline]
    pub(crate) fn gradient_into(&self, point: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        let mut suffix = [0.0f64; 64];
        for (k, &coeff) in self.flat_coeffs.iter().enumerate() {
            let lo = self.flat_offsets[k] as usize;
            let hi = self.flat_offsets[k + 1] as usize;
            let idx = &self.flat_indices[lo..hi];
            match idx.len() {
                0 => {}
                1 => out[idx[0] as usize] += coeff,
                2 => {
                    let (a, b) = (idx[0] as usize, idx[1] as usize);
                    out[a] += coeff * point[b];
                    out[b] += coeff * point[a];
                }
                3 => {
                    let (a, b, c) = (idx[0] as usize, idx[1] as usize, idx[2] as usize);
                    let (xa, xb, xc) = (point[a], point[b], point[c]);
                    out[a] += coeff * xb * xc;
                    out[b] += coeff * xa * xc;
                    out[c] += coeff * xa * xb;
                }
                d if d <= 64 => {
                    // suffix[j] = x_{i_{j+1}} * ... * x_{i_{d-1}}
                    suffix[d - 1] = 1.0;
                    for j in (0..d - 1).rev() {
                        suffix[j] = suffix[j + 1] * point[idx[j + 1] as usize];
                    }
                    let mut prefix = 1.0;
                    for j in 0..d {
                        out[idx[j] as usize] += coeff * prefix * suffix[j];
                        prefix *= point[idx[j] as usize];
                    }
                }
                d => {
                    let mut suf = vec![1.0; d];
                    for j in (0..d - 1).rev() {
                        suf[j] = suf[j + 1] * point[idx[j + 1] as usize];
                    }
                    let mut prefix = 1.0;
                    for j in 0..d {
                        out[idx[j] as usize] += coeff * prefix * suf[j];
                        prefix *= point[idx[j] as usize];
                    }
                }
            }
        }
    }

    fn check_point(&self, point: &[f64]) -> Result<(), PuboError> {
        if point.len() != self.n_vars {
            return Err(PuboError::DimensionMismatch {
                expected: self.n_vars,
                got: point.len(),
            });
        }
        for (i, v) in point.iter().enumerate() {
            if !v.is_finite() {
                return Err(PuboError::NonFinite { index: i });
            }
        }
        Ok(())
    }
}

/// A point of the spin hypercube {-1, +1}^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinVector(Vec<i8>);

impl SpinVector {
    pub fn new(values: Vec<i8>) -> Result<Self, PuboError> {
        if let Some(i) = values.iter().position(|&v| v != 1 && v != -1) {
            return Err(PuboError::NotASpin { index: i });
        }
        Ok(SpinVector(values))
    }

    /// sign(x) with sign(0) := +1.
    pub fn from_signs(amplitudes: &[f64]) -> Self {
        SpinVector(
            amplitudes
                .iter()
                .map(|&x| if x < 0.0 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&v| v as f64).collect()
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }
}
