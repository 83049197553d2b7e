//! Counter-based random number generation.
//!
//! Every stochastic component in this crate (instance generation, solver
//! noise, tuner sampling) draws from [`StreamRng`], a SplitMix64 stream
//! seeded through [`derive_seed`]. The generator is fully specified here,
//! so identical seeds reproduce identical streams on every platform, and
//! per-run seeds can be derived independently of thread scheduling.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer: a bijective mix of the input word.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent seed from a base seed and a sequence of words
/// (run index, problem size, instance index, ...). Distinct word sequences
/// give statistically independent streams.
pub fn derive_seed(base: u64, words: &[u64]) -> u64 {
    let mut acc = mix64(base ^ GAMMA);
    for &w in words {
        acc = mix64(acc.wrapping_add(GAMMA) ^ mix64(w));
    }
    acc
}

/// Deterministic SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct StreamRng {
    state: u64,
}

impl StreamRng {
    pub fn new(seed: u64) -> Self {
        StreamRng { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    #[inline]
    pub fn uniform01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    #[inline]
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform01()
    }

    /// Standard normal via Box-Muller; two uniforms consumed per call.
    #[inline]
    pub fn normal(&mut self, std_dev: f64) -> f64 {
        // 1 - u in (0, 1] keeps the log argument positive.
        let u1 = 1.0 - self.uniform01();
        let u2 = self.uniform01();
        std_dev * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform integer in [0, n).
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        // Multiply-shift rejection-free mapping; bias is negligible for the
        // small n used here (term counts, grid sizes).
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }
}
