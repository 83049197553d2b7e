//! 2D square-lattice protein folding.
//!
//! A fold of an M-residue chain is a string of 2(M-1) turn bits, two per
//! turn: 01 = right, 11 = up, 10 = left, 00 = down, read leftmost bit
//! first. The first three bits carry no information (lattice symmetry)
//! and are fixed to 0,1,1, leaving 2M-5 free bits. Contact energies come
//! from the hydrophobic-polar or Miyazawa-Jernigan pair tables; overlaps
//! are penalised per coinciding coordinate pair.

use crate::pubo::{multilinear_expand, PolySpec, PuboError};
use thiserror::Error;

/// Fixed values of the first three turn bits.
pub const FOLD_PREFIX: [u8; 3] = [0, 1, 1];

/// Largest chain length the exhaustive fold search accepts
/// (2^(2M-5) states; M = 12 is ~524k).
pub const BRUTE_FORCE_LIMIT: usize = 12;

#[derive(Debug, Error)]
pub enum ProteinError {
    #[error("residue `{0}` is not valid for the {1:?} model")]
    BadResidue(char, Model),
    #[error("sequence must have at least {min} residues, got {got}")]
    TooShort { min: usize, got: usize },
    #[error("chain of {m} residues exceeds the limit of {limit}")]
    TooLong { m: usize, limit: usize },
    #[error("turn bit string has length {got}, expected {expected}")]
    BadBitLength { expected: usize, got: usize },
    #[error(transparent)]
    Pubo(#[from] PuboError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Hp,
    Mj,
}

impl std::str::FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "HP" => Ok(Model::Hp),
            "MJ" => Ok(Model::Mj),
            other => Err(format!("unknown interaction model `{other}`")),
        }
    }
}

impl Model {
    fn valid_residue(&self, c: char) -> bool {
        match self {
            Model::Hp => matches!(c, 'H' | 'P'),
            Model::Mj => matches!(c, 'P' | 'S' | 'V' | 'K' | 'M' | 'A'),
        }
    }

    /// Symmetric contact energy; unlisted pairs are 0.
    pub fn pair_energy(&self, a: char, b: char) -> f64 {
        let key = if a <= b { (a, b) } else { (b, a) };
        match self {
            Model::Hp => match key {
                ('H', 'H') => -1.0,
                _ => 0.0,
            },
            Model::Mj => match key {
                ('P', 'S') => -0.5,
                ('K', 'P') => -1.0,
                ('A', 'P') => -2.0,
                ('M', 'S') => -3.0,
                ('A', 'V') => -4.0,
                ('S', 'V') => -5.0,
                _ => 0.0,
            },
        }
    }

    pub fn max_abs_pair_energy(&self) -> f64 {
        match self {
            Model::Hp => 1.0,
            Model::Mj => 5.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sequence {
    residues: Vec<char>,
    model: Model,
}

impl Sequence {
    pub fn new(residues: &str, model: Model) -> Result<Self, ProteinError> {
        let chars: Vec<char> = residues.chars().collect();
        if chars.len() < 2 {
            return Err(ProteinError::TooShort { min: 2, got: chars.len() });
        }
        for &c in &chars {
            if !model.valid_residue(c) {
                return Err(ProteinError::BadResidue(c, model));
            }
        }
        Ok(Sequence { residues: chars, model })
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Default overlap penalty: strictly dominates any feasible energy gain.
    pub fn default_overlap_penalty(&self) -> f64 {
        1.0 + self.len() as f64 * self.model.max_abs_pair_energy()
    }

    pub fn free_bits(&self) -> usize {
        2 * self.len() - 5
    }
}

/// A decoded fold: turn bits, lattice coordinates, energy, feasibility.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFold {
    pub turn_bits: Vec<u8>,
    pub coords: Vec<(i32, i32)>,
    pub energy: f64,
    pub feasible: bool,
}

/// Decodes 2(M-1) turn bits into M lattice coordinates starting at the
/// origin. Bit pairs are read leftmost bit first.
pub fn decode_turns(turn_bits: &[u8], m: usize) -> Result<Vec<(i32, i32)>, ProteinError> {
    let expected = 2 * (m - 1);
    if turn_bits.len() != expected {
        return Err(ProteinError::BadBitLength { expected, got: turn_bits.len() });
    }
    let mut coords = Vec::with_capacity(m);
    let mut pos = (0i32, 0i32);
    coords.push(pos);
    for pair in turn_bits.chunks_exact(2) {
        let step = match (pair[0], pair[1]) {
            (0, 1) => (1, 0),  // right
            (1, 1) => (0, 1),  // up
            (1, 0) => (-1, 0), // left
            (0, 0) => (0, -1), // down
            _ => unreachable!("turn bits are 0/1"),
        };
        pos = (pos.0 + step.0, pos.1 + step.1);
        coords.push(pos);
    }
    Ok(coords)
}

/// Contact energy of a placed chain plus overlap penalties.
///
/// Residue pairs at sequence distance >= 3 and lattice distance 1
/// contribute their model pair energy; each coinciding coordinate pair
/// adds `overlap_penalty`. Feasible means no coincidences.
pub fn fold_energy(
    seq: &Sequence,
    coords: &[(i32, i32)],
    overlap_penalty: f64,
) -> (f64, bool) {
    let m = coords.len();
    debug_assert_eq!(m, seq.len());
    let mut energy = 0.0;
    let mut overlaps = 0usize;
    for i in 0..m {
        for j in i + 1..m {
            let dx = coords[i].0 - coords[j].0;
            let dy = coords[i].1 - coords[j].1;
            if dx == 0 && dy == 0 {
                overlaps += 1;
            } else if j - i >= 3 && dx.abs() + dy.abs() == 1 {
                energy += seq.model.pair_energy(seq.residues[i], seq.residues[j]);
            }
        }
    }
    (energy + overlaps as f64 * overlap_penalty, overlaps == 0)
}

fn assemble_bits(free_bits_value: u64, n_free: usize) -> Vec<u8> {
    let mut bits = Vec::with_capacity(3 + n_free);
    bits.extend_from_slice(&FOLD_PREFIX);
    for j in 0..n_free {
        bits.push((free_bits_value >> (n_free - 1 - j) & 1) as u8);
    }
    bits
}

/// Exhaustive search over all 2^(2M-5) free-bit settings; returns the
/// minimum-energy feasible fold. Ties keep the lowest free-bit value.
pub fn brute_force_fold(seq: &Sequence) -> Result<(f64, LatticeFold), ProteinError> {
    brute_force_fold_with_prefix(seq, &FOLD_PREFIX)
}

pub(crate) fn brute_force_fold_with_prefix(
    seq: &Sequence,
    prefix: &[u8; 3],
) -> Result<(f64, LatticeFold), ProteinError> {
    let m = seq.len();
    if m < 4 {
        return Err(ProteinError::TooShort { min: 4, got: m });
    }
    if m > BRUTE_FORCE_LIMIT {
        return Err(ProteinError::TooLong { m, limit: BRUTE_FORCE_LIMIT });
    }
    let n_free = seq.free_bits();
    let penalty = seq.default_overlap_penalty();
    let mut best: Option<(f64, LatticeFold)> = None;
    for v in 0u64..1 << n_free {
        let mut bits = assemble_bits(v, n_free);
        bits[..3].copy_from_slice(prefix);
        let coords = decode_turns(&bits, m)?;
        let (energy, feasible) = fold_energy(seq, &coords, penalty);
        if !feasible {
            continue;
        }
        if best.as_ref().map_or(true, |(be, _)| energy < *be) {
            best = Some((
                energy,
                LatticeFold { turn_bits: bits, coords, energy, feasible },
            ));
        }
    }
    // Every chain admits at least the straight-line fold... except that the
    // fixed prefix already bends the chain; the prefix itself is always
    // self-avoiding for m >= 2, and extending straight keeps it feasible,
    // so a feasible fold always exists.
    Ok(best.expect("a feasible fold always exists"))
}

/// Bit counts of the full turn-ancilla encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitCounts {
    pub n_phys: usize,
    pub n_penalty: usize,
    pub n_pair: usize,
    pub n_reduction: usize,
    pub n_pubo: usize,
    pub n_qubo: usize,
}

fn ceil_log2(v: u64) -> usize {
    debug_assert!(v >= 1);
    (64 - (v - 1).leading_zeros() as usize).min(63)
}

/// Evaluates the closed-form bit-count formulas for an M-residue chain.
pub fn bit_counts(m: usize) -> BitCounts {
    assert!(m >= 4, "bit counts need m >= 4");
    let n_phys = 2 * m - 5;
    let mut n_penalty = 0usize;
    for i in 1..=m.saturating_sub(4) {
        for j in i + 4..=m {
            let d = j - i;
            if d % 2 == 0 {
                n_penalty += ceil_log2((d * d) as u64);
            }
        }
    }
    let mut n_pair = 0usize;
    for i in 1..=m - 3 {
        for j in i + 3..=m {
            if (j - i) % 2 == 1 {
                n_pair += 1;
            }
        }
    }
    let mut n_reduction = 0usize;
    for i in 1..=2 * m - 7 {
        for j in i + 2..=2 * m - 5 {
            if (j - i) % 2 == 0 {
                n_reduction += 1;
            }
        }
    }
    let n_pubo = n_phys + n_penalty + n_pair;
    BitCounts {
        n_phys,
        n_penalty,
        n_pair,
        n_reduction,
        n_pubo,
        n_qubo: n_pubo + n_reduction,
    }
}

/// Bit counts with the pair-ancilla term restricted to pairs that can
/// actually interact: `bit_counts` counts every odd-distance pair, but
/// one ancilla per *potential interaction* suffices, so pairs whose
/// contact energy is zero need none. The two only differ for sequences
/// with zero-energy pairs (e.g. the HP model's HP and PP contacts).
pub fn bit_counts_for(seq: &Sequence) -> BitCounts {
    let m = seq.len();
    let mut counts = bit_counts(m);
    let mut n_pair = 0usize;
    for i in 0..m {
        for j in i + 3..m {
            if (j - i) % 2 == 1 && seq.model.pair_energy(seq.residues[i], seq.residues[j]) != 0.0
            {
                n_pair += 1;
            }
        }
    }
    counts.n_pair = n_pair;
    counts.n_pubo = counts.n_phys + counts.n_penalty + n_pair;
    counts.n_qubo = counts.n_pubo + counts.n_reduction;
    counts
}

/// Exact spin polynomial of the fold energy over the 2M-5 free turn bits,
/// built by multilinear expansion of fold_energy(decode(...)). Spin +1
/// maps to bit 0.
pub fn build_fold_pubo(seq: &Sequence, overlap_penalty: f64) -> Result<PolySpec, ProteinError> {
    let m = seq.len();
    if m < 4 {
        return Err(ProteinError::TooShort { min: 4, got: m });
    }
    let n_free = seq.free_bits();
    let poly = multilinear_expand(
        |spins| {
            let mut bits = Vec::with_capacity(3 + n_free);
            bits.extend_from_slice(&FOLD_PREFIX);
            bits.extend(spins.iter().map(|&s| if s < 0 { 1u8 } else { 0u8 }));
            let coords = decode_turns(&bits, m).expect("bit length matches by construction");
            fold_energy(seq, &coords, overlap_penalty).0
        },
        n_free,
    )?;
    Ok(poly)
}

/// Coordinates as CSV `index,x,y` rows.
pub fn coords_csv(coords: &[(i32, i32)]) -> String {
    let mut out = String::from("index,x,y\n");
    for (i, (x, y)) in coords.iter().enumerate() {
        out.push_str(&format!("{},{x},{y}\n", i + 1));
    }
    out
}
