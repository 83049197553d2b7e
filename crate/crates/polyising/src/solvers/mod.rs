//! Iterative PUBO solvers behind one interface.
//!
//! Five dynamics share the [`Algorithm`]/[`SolverConfig`]/[`RunResult`]
//! surface: a CIM-style annealed gradient flow with momentum and amplitude
//! saturation, a Hopfield-Tank network, gain dynamics with per-variable
//! error feedback, complex-amplitude gain dynamics with transient complex
//! couplings, and discrete greedy descent.
//!
//! Sign convention: the update rules are usually written with a `+xi *
//! grad H` feedback term, which ascends H. This crate minimizes, so the
//! feedback enters with the opposite sign (equivalently, couplings
//! negated) while xi stays positive. Set [`SolverConfig::maximize`] to
//! restore the literal ascending form.
//!
//! Every run is a pure function of (polynomial, config, seed); batches
//! derive per-run seeds from a counter-based scheme, so results do not
//! depend on thread scheduling.

mod greedy;
mod hopfield;
mod leleu;
mod simcim;
mod tgdcc;

pub use greedy::greedy_run;
pub use hopfield::hopfield_run;
pub use leleu::leleu_run;
pub use simcim::polysimcim_run;
pub use tgdcc::tgdcc_run;

use crate::pubo::{PolySpec, PuboError, SpinVector};
use crate::rng::{derive_seed, StreamRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Amplitude bound beyond which a run is declared divergent (signals a
/// bad learning rate rather than silently clamping forever).
pub(crate) const DIVERGENCE_FACTOR: f64 = 1e6;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid solver config: {0}")]
    InvalidConfig(String),
    #[error("polynomial has no terms")]
    EmptyPolynomial,
    #[error("run {run_index} diverged at step {step}: hyperparameters are unstable")]
    Diverged { run_index: usize, step: usize },
    #[error("run {run_index}: error variable became non-positive at step {step}")]
    NonPositiveErrorVar { run_index: usize, step: usize },
    #[error(transparent)]
    Pubo(#[from] PuboError),
}

impl SolverError {
    pub(crate) fn with_run_index(self, run_index: usize) -> Self {
        match self {
            SolverError::Diverged { step, .. } => SolverError::Diverged { run_index, step },
            SolverError::NonPositiveErrorVar { step, .. } => {
                SolverError::NonPositiveErrorVar { run_index, step }
            }
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    PolySimCim,
    HopfieldTank,
    Leleu,
    TgdCc,
    Greedy,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::PolySimCim,
        Algorithm::HopfieldTank,
        Algorithm::Leleu,
        Algorithm::TgdCc,
        Algorithm::Greedy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::PolySimCim => "polysimcim",
            Algorithm::HopfieldTank => "hopfield",
            Algorithm::Leleu => "leleu",
            Algorithm::TgdCc => "tgdcc",
            Algorithm::Greedy => "greedy",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "polysimcim" | "simcim" => Ok(Algorithm::PolySimCim),
            "hopfield" | "hopfield-tank" => Ok(Algorithm::HopfieldTank),
            "leleu" => Ok(Algorithm::Leleu),
            "tgdcc" | "tgd+cc" => Ok(Algorithm::TgdCc),
            "greedy" => Ok(Algorithm::Greedy),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

fn default_steps() -> usize {
    1000
}
fn default_xi() -> f64 {
    0.05
}
fn default_sigma() -> f64 {
    0.01
}
fn default_alpha() -> f64 {
    0.99
}
fn default_x_sat() -> f64 {
    1.0
}
fn default_nu_o() -> f64 {
    1.0
}
fn default_nu_d() -> f64 {
    0.5
}
fn default_nu_s() -> f64 {
    5.0
}
fn default_beta() -> f64 {
    1.0
}
fn default_beta_e() -> f64 {
    0.1
}
fn default_a_target() -> f64 {
    1.0
}
fn default_epsilon() -> f64 {
    0.1
}
fn default_rho_th() -> f64 {
    1.0
}
fn default_steady_window() -> usize {
    50
}

/// Hyperparameters for all solvers. Unused fields are ignored by the
/// algorithms that do not read them; serde fills defaults so partial JSON
/// configs work.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub steps: usize,
    /// Learning rate xi.
    pub xi: f64,
    /// Std dev of the per-step Gaussian noise.
    pub sigma: f64,
    /// Heavy-ball momentum (PolySimCIM only).
    pub momentum_alpha: f64,
    /// Amplitude clamp.
    pub x_sat: f64,
    /// Annealing schedule nu(t) = nu_o * tanh(nu_s * (t/steps - 0.5)) - nu_d.
    pub nu_o: f64,
    pub nu_d: f64,
    pub nu_s: f64,
    /// Ascend instead of descend (literal textbook sign).
    pub maximize: bool,
    /// Hopfield-Tank activation temperature.
    pub beta: f64,
    /// Error-variable relaxation rate (Leleu).
    pub beta_e: f64,
    /// Error-variable amplitude target (Leleu).
    pub a_target: f64,
    /// Gain adaptation rate (TGD+CC).
    pub epsilon: f64,
    /// Gain amplitude threshold (TGD+CC).
    pub rho_th: f64,
    /// Number of couplings complexified at a steady state; default
    /// max(1, ceil(0.01 * n_terms)).
    pub cc_count: Option<usize>,
    /// Magnitude of the added imaginary coupling; default mean |coeff|.
    pub cc_magnitude: Option<f64>,
    /// Steady-state detection window (steps).
    pub steady_window: usize,
    /// Steady-state threshold on the windowed mean |dx|; default 1e-4 * x_sat.
    pub steady_tol: Option<f64>,
    /// Record amplitude snapshots every k steps.
    pub trajectory_every: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            steps: default_steps(),
            xi: default_xi(),
            sigma: default_sigma(),
            momentum_alpha: default_alpha(),
            x_sat: default_x_sat(),
            nu_o: default_nu_o(),
            nu_d: default_nu_d(),
            nu_s: default_nu_s(),
            maximize: false,
            beta: default_beta(),
            beta_e: default_beta_e(),
            a_target: default_a_target(),
            epsilon: default_epsilon(),
            rho_th: default_rho_th(),
            cc_count: None,
            cc_magnitude: None,
            steady_window: default_steady_window(),
            steady_tol: None,
            trajectory_every: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.steps == 0 {
            return Err(SolverError::InvalidConfig("steps must be >= 1".into()));
        }
        if !(self.sigma >= 0.0) {
            return Err(SolverError::InvalidConfig("sigma must be >= 0".into()));
        }
        if !(self.x_sat > 0.0) {
            return Err(SolverError::InvalidConfig("x_sat must be > 0".into()));
        }
        if !(0.0..1.0).contains(&self.momentum_alpha) {
            return Err(SolverError::InvalidConfig(
                "momentum_alpha must be in [0, 1)".into(),
            ));
        }
        if self.steady_window == 0 {
            return Err(SolverError::InvalidConfig("steady_window must be >= 1".into()));
        }
        Ok(())
    }

    pub(crate) fn steady_tol(&self) -> f64 {
        self.steady_tol.unwrap_or(1e-4 * self.x_sat)
    }

    /// Sign applied to the gradient feedback: descend by default.
    pub(crate) fn feedback_sign(&self) -> f64 {
        if self.maximize {
            1.0
        } else {
            -1.0
        }
    }
}

/// Annealing gain schedule: a shifted hyperbolic tangent.
pub fn anneal_nu(t: usize, steps: usize, o: f64, d: f64, s: f64) -> f64 {
    o * (s * (t as f64 / steps as f64 - 0.5)).tanh() - d
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub spins: SpinVector,
    pub energy: f64,
    pub run_index: usize,
    pub seed: u64,
    /// (step, amplitudes) snapshots when trajectory recording is enabled.
    pub trajectory: Option<Vec<(usize, Vec<f64>)>>,
}

impl RunResult {
    pub(crate) fn finish(
        poly: &PolySpec,
        amplitudes: &[f64],
        seed: u64,
        trajectory: Option<Vec<(usize, Vec<f64>)>>,
    ) -> Result<Self, SolverError> {
        let spins = SpinVector::from_signs(amplitudes);
        // Recompute from scratch; incremental energies are never trusted.
        let energy = poly.evaluate_spins(&spins)?;
        Ok(RunResult {
            spins,
            energy,
            run_index: 0,
            seed,
            trajectory,
        })
    }

    /// CSV trajectory export, one `step,var_index,value` row per sample.
    pub fn trajectory_csv(&self) -> Option<String> {
        let traj = self.trajectory.as_ref()?;
        let mut out = String::from("step,var_index,value\n");
        for (step, xs) in traj {
            for (i, v) in xs.iter().enumerate() {
                out.push_str(&format!("{step},{},{v}\n", i + 1));
            }
        }
        Some(out)
    }
}

/// Derives the seed for run `j` of a batch.
pub fn run_seed(base_seed: u64, run_index: usize) -> u64 {
    derive_seed(base_seed, &[run_index as u64])
}

pub fn solve_one(
    poly: &PolySpec,
    algorithm: Algorithm,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<RunResult, SolverError> {
    match algorithm {
        Algorithm::PolySimCim => polysimcim_run(poly, cfg, seed),
        Algorithm::HopfieldTank => hopfield_run(poly, cfg, seed),
        Algorithm::Leleu => leleu_run(poly, cfg, seed),
        Algorithm::TgdCc => tgdcc_run(poly, cfg, seed),
        Algorithm::Greedy => {
            let mut rng = StreamRng::new(seed);
            let start = random_spins(poly.n_vars(), &mut rng);
            let mut res = greedy_run(poly, &start)?;
            res.seed = seed;
            Ok(res)
        }
    }
}

pub(crate) fn random_spins(n: usize, rng: &mut StreamRng) -> SpinVector {
    SpinVector::new(
        (0..n)
            .map(|_| if rng.next_u64() & 1 == 1 { 1 } else { -1 })
            .collect(),
    )
    .expect("values are spins")
}

/// Runs `runs` independent solver runs with per-run derived seeds.
/// Divergence in one run is reported in its slot without aborting the
/// rest; the result order is by run index regardless of parallelism.
pub fn batch_solve(
    poly: &PolySpec,
    algorithm: Algorithm,
    cfg: &SolverConfig,
    runs: usize,
    base_seed: u64,
) -> Vec<Result<RunResult, SolverError>> {
    (0..runs)
        .into_par_iter()
        .map(|j| {
            let seed = run_seed(base_seed, j);
            solve_one(poly, algorithm, cfg, seed)
                .map(|mut r| {
                    r.run_index = j;
                    r
                })
                .map_err(|e| e.with_run_index(j))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pubo::Term;

    fn single_var_poly() -> PolySpec {
        PolySpec::new(1, vec![Term::new(vec![1], 1.0)]).unwrap()
    }

    #[test]
    fn anneal_nu_values() {
        let steps = 1000;
        assert_eq!(anneal_nu(steps / 2, steps, 1.0, 0.3, 5.0), -0.3);
        let end = anneal_nu(steps, steps, 2.0, 0.3, 5.0);
        assert!((end - (2.0 * (2.5f64).tanh() - 0.3)).abs() < 1e-15);
        // tanh saturation at t = 0 for large S.
        let v = anneal_nu(0, steps, 1.0, 0.0, 1e6);
        assert!((v + 1.0).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig::default();
        cfg.steps = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = SolverConfig::default();
        cfg.momentum_alpha = 1.0;
        assert!(cfg.validate().is_err());
        let mut cfg = SolverConfig::default();
        cfg.x_sat = 0.0;
        assert!(cfg.validate().is_err());
        assert!(SolverConfig::default().validate().is_ok());
    }

    #[test]
    fn config_json_round_trip_with_partial_input() {
        let cfg: SolverConfig = serde_json::from_str(r#"{"xi": 0.2, "steps": 10}"#).unwrap();
        assert_eq!(cfg.steps, 10);
        assert_eq!(cfg.xi, 0.2);
        assert_eq!(cfg.momentum_alpha, 0.99);
    }

    #[test]
    fn every_algorithm_minimizes_single_spin() {
        let poly = single_var_poly();
        let cfg = SolverConfig {
            xi: 0.1,
            sigma: 0.0,
            nu_o: 1.0,
            nu_d: 0.5,
            nu_s: 5.0,
            // Leleu stability: keep the Euler map contractive at |x|^2 = a.
            beta_e: 0.01,
            a_target: 0.5,
            ..Default::default()
        };
        for alg in Algorithm::ALL {
            let r = solve_one(&poly, alg, &cfg, 3).unwrap();
            assert_eq!(r.spins.values(), &[-1], "{}", alg.name());
            assert_eq!(r.energy, -1.0, "{}", alg.name());
        }
    }

    #[test]
    fn batch_is_deterministic_and_ordered() {
        let poly = crate::instances::generate(&crate::instances::InstanceRecipe::new(
            crate::instances::InstanceClass::II,
            8,
            11,
        ))
        .unwrap();
        let cfg = SolverConfig {
            steps: 50,
            ..Default::default()
        };
        let a = batch_solve(&poly, Algorithm::PolySimCim, &cfg, 16, 99);
        let b = batch_solve(&poly, Algorithm::PolySimCim, &cfg, 16, 99);
        for (j, (ra, rb)) in a.iter().zip(&b).enumerate() {
            let (ra, rb) = (ra.as_ref().unwrap(), rb.as_ref().unwrap());
            assert_eq!(ra.run_index, j);
            assert_eq!(ra.spins, rb.spins);
            assert_eq!(ra.energy.to_bits(), rb.energy.to_bits());
        }
    }

    #[test]
    fn batch_of_one_matches_direct_run() {
        let poly = single_var_poly();
        let cfg = SolverConfig::default();
        let batch = batch_solve(&poly, Algorithm::PolySimCim, &cfg, 1, 5);
        let direct = solve_one(&poly, Algorithm::PolySimCim, &cfg, run_seed(5, 0)).unwrap();
        assert_eq!(batch[0].as_ref().unwrap().spins, direct.spins);
    }

    #[test]
    fn divergence_reports_run_index() {
        let poly = single_var_poly();
        let cfg = SolverConfig {
            xi: 1e12,
            sigma: 0.0,
            momentum_alpha: 0.0,
            steps: 200,
            ..Default::default()
        };
        // PolySimCIM clamps, so divergence cannot trip there; Hopfield has
        // no clamp and a huge xi explodes immediately.
        let res = batch_solve(&poly, Algorithm::HopfieldTank, &cfg, 3, 1);
        for (j, r) in res.iter().enumerate() {
            match r {
                Err(SolverError::Diverged { run_index, .. }) => assert_eq!(*run_index, j),
                other => panic!("expected divergence, got {other:?}"),
            }
        }
    }

    #[test]
    fn trajectory_csv_shape() {
        let poly = single_var_poly();
        let cfg = SolverConfig {
            steps: 10,
            trajectory_every: Some(5),
            sigma: 0.0,
            ..Default::default()
        };
        let r = polysimcim_run(&poly, &cfg, 1).unwrap();
        let csv = r.trajectory_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "step,var_index,value");
        // Samples at t = 0 and t = 5.
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,1,"));
        assert!(lines[2].starts_with("5,1,"));
    }
}
