//! Variable changes and degree reduction.
//!
//! Spin polynomials convert to boolean form via s_i = 1 - 2 b_i (and back
//! via b_i = (1 - s_i) / 2); boolean polynomials of degree > 2 are
//! quadratized by repeated pair substitution: the most frequent variable
//! pair among high-degree terms is replaced by a fresh ancilla, with a
//! penalty that forces the ancilla to equal the product at any optimum.
//! Both polynomial forms reuse [`PolySpec`]; the boolean interpretation
//! evaluates terms at points in {0, 1}^n (multilinearity makes this
//! well-defined since indices within a term are distinct).

use crate::pubo::{PolySpec, PuboError, Term};
use serde::Serialize;
use std::collections::HashMap;

/// Book-keeping for a quadratization: which ancilla replaced which
/// variable pair, in elimination order, and the penalty weight used.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionMap {
    pub original_n: usize,
    pub reduced_n: usize,
    /// (ancilla index, (parent i, parent j)); parents precede the ancilla.
    pub ancilla_defs: Vec<(u32, (u32, u32))>,
    pub penalty_weight: f64,
}

/// Substitutes s_i = 1 - 2 b_i and expands; the result evaluates on
/// {0,1}^n to the same energies the input gives on {-1,+1}^n.
pub fn spin_to_boolean(poly: &PolySpec) -> PolySpec {
    let mut acc: HashMap<Vec<u32>, f64> = HashMap::new();
    for t in poly.terms() {
        expand_substitution(t.indices(), t.coeff(), 1.0, -2.0, &mut acc);
    }
    rebuild(poly.n_vars(), acc)
}

/// Inverse substitution b_i = (1 - s_i) / 2.
pub fn boolean_to_spin(poly: &PolySpec) -> PolySpec {
    let mut acc: HashMap<Vec<u32>, f64> = HashMap::new();
    for t in poly.terms() {
        expand_substitution(t.indices(), t.coeff(), 0.5, -0.5, &mut acc);
    }
    rebuild(poly.n_vars(), acc)
}

/// Expands coeff * prod_i (offset + slope * v_i) into the accumulator.
fn expand_substitution(
    indices: &[u32],
    coeff: f64,
    offset: f64,
    slope: f64,
    acc: &mut HashMap<Vec<u32>, f64>,
) {
    let d = indices.len();
    for mask in 0u32..1 << d {
        let kept: Vec<u32> = (0..d).filter(|&j| mask >> j & 1 == 1).map(|j| indices[j]).collect();
        let k = kept.len();
        let c = coeff * slope.powi(k as i32) * offset.powi((d - k) as i32);
        *acc.entry(kept).or_insert(0.0) += c;
    }
}

fn rebuild(n_vars: usize, acc: HashMap<Vec<u32>, f64>) -> PolySpec {
    // Coefficients that cancel mathematically can leave ~1e-16 rounding
    // dust (sums of exact power-of-two multiples in arbitrary order);
    // drop anything far below the polynomial's scale.
    let scale: f64 = acc.values().map(|c| c.abs()).sum::<f64>().max(1.0);
    let terms: Vec<Term> = acc
        .into_iter()
        .filter(|(_, c)| c.abs() > 1e-12 * scale)
        .map(|(ix, c)| Term::new(ix, c))
        .collect();
    PolySpec::new(n_vars, terms).expect("substitution preserves canonical form")
}

/// Rosenberg pair substitution on a boolean polynomial. Returns a degree
/// <= 2 polynomial over the original variables plus one ancilla per
/// eliminated pair, with penalty weight M = 1 + sum |non-constant coeffs|
/// of the input. Optimal values are preserved and every reduced optimum
/// restricts to an optimum of the input.
pub fn quadratize(poly: &PolySpec) -> (PolySpec, ReductionMap) {
    let penalty = 1.0 + poly.abs_coeff_sum();
    let original_n = poly.n_vars();
    let mut n = original_n;
    let mut terms: Vec<(Vec<u32>, f64)> = poly
        .terms()
        .iter()
        .map(|t| (t.indices().to_vec(), t.coeff()))
        .collect();
    let mut ancilla_defs = Vec::new();

    loop {
        // Pair frequencies among terms of degree >= 3.
        let mut freq: HashMap<(u32, u32), usize> = HashMap::new();
        for (ix, _) in &terms {
            if ix.len() < 3 {
                continue;
            }
            for a in 0..ix.len() {
                for b in a + 1..ix.len() {
                    *freq.entry((ix[a], ix[b])).or_insert(0) += 1;
                }
            }
        }
        if freq.is_empty() {
            break;
        }
        let (&pair, _) = freq
            .iter()
            .max_by(|(pa, ca), (pb, cb)| ca.cmp(cb).then_with(|| pb.cmp(pa)))
            .expect("freq is non-empty");
        let (i, j) = pair;
        n += 1;
        let ancilla = n as u32;
        ancilla_defs.push((ancilla, (i, j)));
        for (ix, _) in terms.iter_mut() {
            if ix.len() >= 3 && ix.contains(&i) && ix.contains(&j) {
                ix.retain(|&v| v != i && v != j);
                ix.push(ancilla);
                ix.sort_unstable();
            }
        }
        terms.push((vec![i, j], penalty));
        terms.push((vec![i, ancilla], -2.0 * penalty));
        terms.push((vec![j, ancilla], -2.0 * penalty));
        terms.push((vec![ancilla], 3.0 * penalty));
    }

    let reduced = PolySpec::new(
        n,
        terms.into_iter().map(|(ix, c)| Term::new(ix, c)).collect(),
    )
    .expect("substituted terms stay canonical");
    debug_assert!(reduced.max_degree() <= 2);
    (
        reduced,
        ReductionMap {
            original_n,
            reduced_n: n,
            ancilla_defs,
            penalty_weight: penalty,
        },
    )
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OverheadReport {
    pub n_vars: usize,
    pub terms_pubo: usize,
    pub n_vars_qubo: usize,
    pub terms_qubo: usize,
}

impl OverheadReport {
    pub fn csv_header() -> &'static str {
        "n_vars,terms_pubo,n_vars_qubo,terms_qubo"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.n_vars, self.terms_pubo, self.n_vars_qubo, self.terms_qubo
        )
    }
}

/// Size overhead of the spin -> boolean -> quadratize -> boolean -> spin
/// pipeline.
pub fn overhead_report(poly: &PolySpec) -> Result<OverheadReport, PuboError> {
    let boolean = spin_to_boolean(poly);
    let (quad, _) = quadratize(&boolean);
    let back = boolean_to_spin(&quad);
    Ok(OverheadReport {
        n_vars: poly.n_vars(),
        terms_pubo: poly.n_terms(),
        n_vars_qubo: back.n_vars(),
        terms_qubo: back.n_terms(),
    })
}
