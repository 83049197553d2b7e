//! Black-box hyperparameter tuning on a logarithmic grid.
//!
//! The cost of a candidate configuration is a weighted sum of two ratios
//! against the first evaluation's energy statistics, each capped at 1:
//! `cost = 0.25 * min(<H>/|<H0>|, 1) + min(min H / |min H0|, 1)`, bounded
//! above by 1.25. Candidates are sampled log-uniformly from [1e-8, 1e3]
//! (noise from [1e-8, 10^-0.1]); after a random phase the search switches
//! to a differential-evolution loop over the best configurations found.

use super::HarnessError;
use crate::pubo::PolySpec;
use crate::rng::{derive_seed, StreamRng};
use crate::solvers::{batch_solve, Algorithm, SolverConfig};

const LOG_LO: f64 = -8.0;
const LOG_HI: f64 = 3.0;
const SIGMA_LOG_HI: f64 = -0.1;
const DE_WEIGHT: f64 = 0.7;
const DE_CROSSOVER: f64 = 0.9;
const POOL: usize = 10;

/// Weighted-sum tuning cost; errors when a first-step statistic is zero.
pub fn tune_cost(
    energies: &[f64],
    first_step_mean: f64,
    first_step_min: f64,
) -> Result<f64, HarnessError> {
    if energies.is_empty() {
        return Err(HarnessError::Empty);
    }
    if first_step_mean == 0.0 || first_step_min == 0.0 {
        return Err(HarnessError::ZeroBaseline);
    }
    let mean: f64 = energies.iter().sum::<f64>() / energies.len() as f64;
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let cost = 0.25 * (mean / first_step_mean.abs()).min(1.0) + (min / first_step_min.abs()).min(1.0);
    debug_assert!(cost <= 1.25);
    Ok(cost)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Param {
    Xi,
    Sigma,
    NuO,
    NuD,
    NuS,
    XSat,
    Beta,
    BetaE,
    ATarget,
    Epsilon,
    RhoTh,
}

impl Param {
    fn for_algorithm(alg: Algorithm) -> &'static [Param] {
        use Param::*;
        match alg {
            Algorithm::PolySimCim => &[Xi, Sigma, NuO, NuD, NuS, XSat],
            Algorithm::HopfieldTank => &[Xi, Beta],
            Algorithm::Leleu => &[Xi, NuO, NuD, NuS, BetaE, ATarget],
            Algorithm::TgdCc => &[Xi, Sigma, Epsilon, RhoTh],
            Algorithm::Greedy => &[],
        }
    }

    fn log_hi(&self) -> f64 {
        match self {
            Param::Sigma => SIGMA_LOG_HI,
            _ => LOG_HI,
        }
    }

    fn apply(&self, cfg: &mut SolverConfig, value: f64) {
        match self {
            Param::Xi => cfg.xi = value,
            Param::Sigma => cfg.sigma = value,
            Param::NuO => cfg.nu_o = value,
            Param::NuD => cfg.nu_d = value,
            Param::NuS => cfg.nu_s = value,
            Param::XSat => cfg.x_sat = value,
            Param::Beta => cfg.beta = value,
            Param::BetaE => cfg.beta_e = value,
            Param::ATarget => cfg.a_target = value,
            Param::Epsilon => cfg.epsilon = value,
            Param::RhoTh => cfg.rho_th = value,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TuneSettings {
    /// Total number of configuration evaluations (>= 10).
    pub budget: usize,
    /// Solver runs per evaluation.
    pub runs_per_eval: usize,
    /// Starting configuration; also the first evaluation, which fixes the
    /// cost baselines.
    pub base_config: SolverConfig,
}

impl Default for TuneSettings {
    fn default() -> Self {
        TuneSettings {
            budget: 200,
            runs_per_eval: 50,
            base_config: SolverConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TuneOutcome {
    pub best_config: SolverConfig,
    pub best_cost: f64,
    /// Cost per evaluation, +inf for fully diverged candidates.
    pub trace: Vec<f64>,
    pub first_step_mean: f64,
    pub first_step_min: f64,
}

pub fn tune(
    poly: &PolySpec,
    algorithm: Algorithm,
    settings: &TuneSettings,
    seed: u64,
) -> Result<TuneOutcome, HarnessError> {
    if settings.budget < 10 {
        return Err(HarnessError::Solver(
            crate::solvers::SolverError::InvalidConfig("tuning budget must be >= 10".into()),
        ));
    }
    let params = Param::for_algorithm(algorithm);
    let mut rng = StreamRng::new(derive_seed(seed, &[0x7u64]));

    let evaluate = |cfg: &SolverConfig, eval_index: usize| -> Option<Vec<f64>> {
        let base = derive_seed(seed, &[1, eval_index as u64]);
        let energies: Vec<f64> = batch_solve(poly, algorithm, cfg, settings.runs_per_eval, base)
            .into_iter()
            .filter_map(|r| r.ok())
            .map(|r| r.energy)
            .collect();
        if energies.is_empty() {
            None
        } else {
            Some(energies)
        }
    };

    // First evaluation: the base config fixes <H0> and min H0.
    let first = evaluate(&settings.base_config, 0).ok_or(HarnessError::AllDiverged)?;
    let h0_mean = first.iter().sum::<f64>() / first.len() as f64;
    let h0_min = first.iter().copied().fold(f64::INFINITY, f64::min);
    let base_cost = tune_cost(&first, h0_mean, h0_min)?;

    // Candidate vectors live in log10 space.
    let mut evaluated: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut trace = vec![base_cost];
    let mut best_cost = base_cost;
    let mut best_config = settings.base_config.clone();

    let random_phase = (settings.budget / 2).max(10).min(settings.budget);
    for eval_index in 1..settings.budget {
        let point: Vec<f64> = if eval_index < random_phase || evaluated.len() < 4 {
            params
                .iter()
                .map(|p| rng.uniform_in(LOG_LO, p.log_hi()))
                .collect()
        } else {
            // Differential evolution over the current elite pool.
            let mut pool: Vec<&(f64, Vec<f64>)> = evaluated.iter().collect();
            pool.sort_by(|a, b| a.0.total_cmp(&b.0));
            pool.truncate(POOL.max(3));
            let pick = |rng: &mut StreamRng| pool[rng.below(pool.len() as u64) as usize];
            let a = pick(&mut rng).1.clone();
            let b = pick(&mut rng).1.clone();
            let c = pick(&mut rng).1.clone();
            params
                .iter()
                .enumerate()
                .map(|(d, p)| {
                    let v = if rng.uniform01() < DE_CROSSOVER {
                        a[d] + DE_WEIGHT * (b[d] - c[d])
                    } else {
                        a[d]
                    };
                    v.clamp(LOG_LO, p.log_hi())
                })
                .collect()
        };
        let mut cfg = settings.base_config.clone();
        for (p, &v) in params.iter().zip(&point) {
            p.apply(&mut cfg, 10f64.powf(v));
        }
        match evaluate(&cfg, eval_index) {
            Some(energies) => {
                let cost = tune_cost(&energies, h0_mean, h0_min)?;
                trace.push(cost);
                if cost < best_cost {
                    best_cost = cost;
                    best_config = cfg;
                }
                evaluated.push((cost, point));
            }
            None => trace.push(f64::INFINITY),
        }
    }

    Ok(TuneOutcome {
        best_config,
        best_cost,
        trace,
        first_step_mean: h0_mean,
        first_step_min: h0_min,
    })
}
