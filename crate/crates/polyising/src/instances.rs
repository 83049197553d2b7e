//! Random third-degree benchmark instances.
//!
//! Three classes of cubic spin polynomials over all strictly increasing
//! triples: Class I draws each coefficient from {-1, +1} (a third-degree
//! generalisation of the Sherrington-Kirkpatrick model), Class II draws
//! uniformly from [-1, 1], Class III sparsifies Class II by dropping each
//! term with a fixed probability.
//!
//! Generation is platform-stable: triples are visited in lexicographic
//! order with a fixed draw schedule (one value draw per triple; Class III
//! draws the drop decision first and skips the value draw for dropped
//! terms), all from the crate's specified counter-based RNG.

use crate::pubo::{PolySpec, Term};
use crate::rng::{derive_seed, StreamRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_DROP_PROB: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InstanceClass {
    I,
    II,
    III,
}

impl std::fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InstanceClass::I => write!(f, "I"),
            InstanceClass::II => write!(f, "II"),
            InstanceClass::III => write!(f, "III"),
        }
    }
}

impl std::str::FromStr for InstanceClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" | "i" | "1" => Ok(InstanceClass::I),
            "II" | "ii" | "2" => Ok(InstanceClass::II),
            "III" | "iii" | "3" => Ok(InstanceClass::III),
            other => Err(format!("unknown instance class `{other}` (expected I, II or III)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecipe {
    pub class_id: InstanceClass,
    pub n_vars: usize,
    pub seed: u64,
    /// Drop probability; only meaningful for Class III.
    pub drop_prob: f64,
}

impl InstanceRecipe {
    pub fn new(class_id: InstanceClass, n_vars: usize, seed: u64) -> Self {
        InstanceRecipe {
            class_id,
            n_vars,
            seed,
            drop_prob: DEFAULT_DROP_PROB,
        }
    }
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("instance generation needs n_vars >= 3, got {0}")]
    TooFewVars(usize),
    #[error("drop probability {0} outside [0, 1)")]
    BadDropProb(f64),
}

pub fn generate(recipe: &InstanceRecipe) -> Result<PolySpec, InstanceError> {
    if recipe.n_vars < 3 {
        return Err(InstanceError::TooFewVars(recipe.n_vars));
    }
    if !(0.0..1.0).contains(&recipe.drop_prob) {
        return Err(InstanceError::BadDropProb(recipe.drop_prob));
    }
    let n = recipe.n_vars as u32;
    let mut rng = StreamRng::new(recipe.seed);
    let mut terms = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                match recipe.class_id {
                    InstanceClass::I => {
                        let coeff = if rng.uniform01() < 0.5 { 1.0 } else { -1.0 };
                        terms.push(Term::new(vec![a, b, c], coeff));
                    }
                    InstanceClass::II => {
                        terms.push(Term::new(vec![a, b, c], rng.uniform_in(-1.0, 1.0)));
                    }
                    InstanceClass::III => {
                        if rng.uniform01() < recipe.drop_prob {
                            continue;
                        }
                        terms.push(Term::new(vec![a, b, c], rng.uniform_in(-1.0, 1.0)));
                    }
                }
            }
        }
    }
    Ok(PolySpec::new(recipe.n_vars, terms).expect("generated terms are canonical"))
}

/// Derives the per-instance seed for position (size, index) in a suite.
pub fn suite_seed(base_seed: u64, size: usize, index: usize) -> u64 {
    derive_seed(base_seed, &[size as u64, index as u64])
}

pub fn generate_suite(
    class_id: InstanceClass,
    sizes: &[usize],
    instances_per_size: usize,
    base_seed: u64,
) -> Result<Vec<(InstanceRecipe, PolySpec)>, InstanceError> {
    let mut out = Vec::with_capacity(sizes.len() * instances_per_size);
    for &size in sizes {
        for index in 0..instances_per_size {
            let mut recipe = InstanceRecipe::new(class_id, size, suite_seed(base_seed, size, index));
            recipe.drop_prob = DEFAULT_DROP_PROB;
            let poly = generate(&recipe)?;
            out.push((recipe, poly));
        }
    }
    Ok(out)
}

/// PUBO file text with a comment header recording the recipe.
pub fn serialize_instance(recipe: &InstanceRecipe, poly: &PolySpec) -> String {
    format!(
        "# class {} n {} seed {} drop_prob {}\n{}",
        recipe.class_id,
        recipe.n_vars,
        recipe.seed,
        recipe.drop_prob,
        crate::pubo::serialize_pubo(poly)
    )
}
