//! Benchmark orchestration: figure-of-merit computation, aggregation
//! into report rows and histograms, and the full class/size sweep.

mod tune;

pub use tune::{tune, tune_cost, TuneOutcome, TuneSettings};

use crate::instances::{self, InstanceClass, InstanceRecipe};
use crate::pubo::{exhaustive_minimum, PolySpec};
use crate::solvers::{batch_solve, Algorithm, SolverConfig, SolverError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("figure of merit requires best energy < 0, got {0}; use raw energies instead")]
    NonNegativeBest(f64),
    #[error("empty energy list")]
    Empty,
    #[error("first-step statistic is zero; cost ratios are undefined")]
    ZeroBaseline,
    #[error("all tuning evaluations diverged; try a smaller learning-rate range")]
    AllDiverged,
    #[error("solver error: {0}")]
    Solver(#[from] SolverError),
    #[error("instance error: {0}")]
    Instance(#[from] crate::instances::InstanceError),
    #[error(transparent)]
    Pubo(#[from] crate::pubo::PuboError),
}

/// Figure of merit: run energy over best-known energy; 1 means the best
/// known solution was reached. Defined only for negative best energies.
pub fn eta(run_energy: f64, best_energy: f64) -> Result<f64, HarnessError> {
    if !(best_energy < 0.0) {
        return Err(HarnessError::NonNegativeBest(best_energy));
    }
    Ok(run_energy / best_energy)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct BestKnown {
    pub energy: f64,
    /// Whether any supplied run reached `energy`.
    pub reached: bool,
    pub from_oracle: bool,
}

/// Best-known energy over all runs of all algorithms, optionally
/// tightened by an exhaustive-oracle value.
pub fn best_known(energies: &[f64], oracle: Option<f64>) -> Result<BestKnown, HarnessError> {
    if energies.is_empty() && oracle.is_none() {
        return Err(HarnessError::Empty);
    }
    let empirical = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let energy = match oracle {
        Some(o) => o.min(empirical),
        None => empirical,
    };
    Ok(BestKnown {
        energy,
        reached: empirical <= energy,
        from_oracle: oracle.map_or(false, |o| o <= empirical),
    })
}

/// Median with the even-length mean-of-central-pair convention.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Linear-interpolation percentile over sorted order statistics:
/// rank = p/100 * (n - 1).
pub fn percentile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 1 {
        return v[0];
    }
    let rank = p / 100.0 * (n - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    v[lo] + frac * (v[hi] - v[lo])
}

/// Fixed-width histogram over [start, 1].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Histogram {
    pub start: f64,
    pub bin_width: f64,
    pub counts: Vec<u64>,
}

pub const ETA_BIN_WIDTH: f64 = 0.01;

pub fn eta_histogram(etas: &[f64]) -> Histogram {
    let min = etas.iter().copied().fold(1.0f64, f64::min);
    let n_bins = (((1.0 - min) / ETA_BIN_WIDTH).ceil() as usize).max(1);
    let mut counts = vec![0u64; n_bins];
    for &e in etas {
        let mut bin = ((e - min) / ETA_BIN_WIDTH) as usize;
        if bin >= n_bins {
            bin = n_bins - 1;
        }
        counts[bin] += 1;
    }
    Histogram {
        start: min,
        bin_width: ETA_BIN_WIDTH,
        counts,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstanceResult {
    pub class: String,
    pub size: usize,
    pub index: usize,
    pub seed: u64,
    pub algorithm: String,
    pub energies: Vec<f64>,
    pub failed_runs: Vec<usize>,
    pub best_known: BestKnown,
    pub etas: Vec<f64>,
    pub best_eta: f64,
    pub median_eta: f64,
}

/// One aggregate row per (class, size, algorithm): medians and 25-75
/// percentiles of the per-instance best and median figures of merit.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AggregateRow {
    pub class: String,
    pub size: usize,
    pub algorithm: String,
    pub median_best: f64,
    pub p25_best: f64,
    pub p75_best: f64,
    pub median_median: f64,
    pub p25_median: f64,
    pub p75_median: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BenchmarkReport {
    pub spec: BenchmarkSpec,
    pub results: Vec<InstanceResult>,
    pub aggregates: Vec<AggregateRow>,
    /// Per algorithm, eta histogram over all runs at the largest size.
    pub histograms: Vec<(String, Histogram)>,
}

impl BenchmarkReport {
    /// CSV panel `size,algorithm,median,p25,p75` of best (or median)
    /// figures of merit.
    pub fn panel_csv(&self, of_medians: bool) -> String {
        let mut out = String::from("size,algorithm,median,p25,p75\n");
        for row in &self.aggregates {
            let (m, lo, hi) = if of_medians {
                (row.median_median, row.p25_median, row.p75_median)
            } else {
                (row.median_best, row.p25_best, row.p75_best)
            };
            out.push_str(&format!("{},{},{m},{lo},{hi}\n", row.size, row.algorithm));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Parameters of a benchmark sweep.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BenchmarkSpec {
    pub class: InstanceClass,
    pub sizes: Vec<usize>,
    pub instances_per_size: usize,
    pub runs: usize,
    pub base_seed: u64,
    pub algorithms: Vec<String>,
    pub config: SolverConfig,
    /// Compute the exhaustive oracle for sizes up to this bound.
    pub oracle_max_size: usize,
    /// Tuning budget per (class, size); 0 keeps `config` as-is.
    pub tune_budget: usize,
}

/// Builds per-instance results for one algorithm on one instance.
fn run_instance(
    poly: &PolySpec,
    recipe: &InstanceRecipe,
    index: usize,
    algorithm: Algorithm,
    cfg: &SolverConfig,
    runs: usize,
    oracle: Option<f64>,
) -> Result<InstanceResult, HarnessError> {
    // Distinct base seed per (instance, algorithm): keyed off the
    // instance seed so adding algorithms never perturbs existing streams.
    let base = crate::rng::derive_seed(recipe.seed, &[algorithm as u64 + 1]);
    let outcomes = batch_solve(poly, algorithm, cfg, runs, base);
    let mut energies = Vec::with_capacity(runs);
    let mut failed = Vec::new();
    for (j, r) in outcomes.into_iter().enumerate() {
        match r {
            Ok(res) => energies.push(res.energy),
            Err(_) => failed.push(j),
        }
    }
    let best = best_known(&energies, oracle)?;
    let etas: Vec<f64> = energies
        .iter()
        .map(|&e| eta(e, best.energy))
        .collect::<Result<_, _>>()?;
    let best_eta = etas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let median_eta = median(&etas);
    Ok(InstanceResult {
        class: recipe.class_id.to_string(),
        size: recipe.n_vars,
        index,
        seed: recipe.seed,
        algorithm: algorithm.name().to_string(),
        energies,
        failed_runs: failed,
        best_known: best,
        etas,
        best_eta,
        median_eta,
    })
}

/// Recomputes etas of a result set against a shared best-known energy.
fn rebaseline(results: &mut [InstanceResult]) -> Result<(), HarnessError> {
    // Per (size, index) group, the best-known energy is shared across
    // algorithms: the minimum over every run of every algorithm, further
    // tightened by the oracle when present.
    let mut best = f64::INFINITY;
    let mut from_oracle = false;
    for r in results.iter() {
        if r.best_known.energy < best {
            best = r.best_known.energy;
            from_oracle = r.best_known.from_oracle;
        }
    }
    for r in results.iter_mut() {
        let reached = r.energies.iter().any(|&e| e <= best);
        r.best_known = BestKnown {
            energy: best,
            reached,
            from_oracle,
        };
        r.etas = r
            .energies
            .iter()
            .map(|&e| eta(e, best))
            .collect::<Result<_, _>>()?;
        r.best_eta = r.etas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        r.median_eta = median(&r.etas);
    }
    Ok(())
}

/// Runs the full sweep: per size, optionally tune on instance 0, then run
/// every algorithm on every instance; aggregate per (class, size,
/// algorithm) and emit histograms at the largest size.
pub fn run_benchmark(spec: &BenchmarkSpec) -> Result<BenchmarkReport, HarnessError> {
    let mut results: Vec<InstanceResult> = Vec::new();
    let algorithms: Vec<Algorithm> = spec
        .algorithms
        .iter()
        .map(|s| s.parse::<Algorithm>().map_err(SolverError::InvalidConfig))
        .collect::<Result<_, _>>()?;

    for &size in &spec.sizes {
        // One hyperparameter set per (class, size), tuned on instance 0
        // and reused for all other instances of that size.
        let mut cfg = spec.config.clone();
        if spec.tune_budget > 0 {
            let recipe0 = InstanceRecipe::new(
                spec.class,
                size,
                instances::suite_seed(spec.base_seed, size, 0),
            );
            let poly0 = instances::generate(&recipe0)?;
            for &alg in &algorithms {
                if alg == Algorithm::Greedy {
                    continue; // greedy has no hyperparameters
                }
                // Only the primary algorithm's tuned config is carried
                // forward when several are benchmarked with one config
                // object; tune the first non-greedy algorithm listed.
                let settings = TuneSettings {
                    budget: spec.tune_budget,
                    runs_per_eval: 50.min(spec.runs.max(1)),
                    base_config: cfg.clone(),
                    ..TuneSettings::default()
                };
                let outcome = tune(&poly0, alg, &settings, spec.base_seed)?;
                cfg = outcome.best_config;
                break;
            }
        }
        for index in 0..spec.instances_per_size {
            let recipe = InstanceRecipe::new(
                spec.class,
                size,
                instances::suite_seed(spec.base_seed, size, index),
            );
            let poly = instances::generate(&recipe)?;
            let oracle = if size <= spec.oracle_max_size {
                Some(exhaustive_minimum(&poly)?.0)
            } else {
                None
            };
            let mut group: Vec<InstanceResult> = algorithms
                .iter()
                .map(|&alg| run_instance(&poly, &recipe, index, alg, &cfg, spec.runs, oracle))
                .collect::<Result<_, _>>()?;
            rebaseline(&mut group)?;
            results.extend(group);
        }
    }

    let aggregates = aggregate(&results);
    let largest = spec.sizes.iter().copied().max().unwrap_or(0);
    let mut histograms = Vec::new();
    for alg in &spec.algorithms {
        let etas: Vec<f64> = results
            .iter()
            .filter(|r| r.size == largest && &r.algorithm == alg)
            .flat_map(|r| r.etas.iter().copied())
            .collect();
        if !etas.is_empty() {
            histograms.push((alg.clone(), eta_histogram(&etas)));
        }
    }
    Ok(BenchmarkReport {
        spec: spec.clone(),
        results,
        aggregates,
        histograms,
    })
}

/// Medians and 25-75 percentiles of per-instance best and median figures
/// of merit, per (class, size, algorithm), in input order of appearance.
pub fn aggregate(results: &[InstanceResult]) -> Vec<AggregateRow> {
    let mut keys: Vec<(String, usize, String)> = Vec::new();
    for r in results {
        let key = (r.class.clone(), r.size, r.algorithm.clone());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.iter()
        .map(|(class, size, alg)| {
            let bests: Vec<f64> = results
                .iter()
                .filter(|r| &r.class == class && r.size == *size && &r.algorithm == alg)
                .map(|r| r.best_eta)
                .collect();
            let medians: Vec<f64> = results
                .iter()
                .filter(|r| &r.class == class && r.size == *size && &r.algorithm == alg)
                .map(|r| r.median_eta)
                .collect();
            AggregateRow {
                class: class.clone(),
                size: *size,
                algorithm: alg.clone(),
                median_best: median(&bests),
                p25_best: percentile(&bests, 25.0),
                p75_best: percentile(&bests, 75.0),
                median_median: median(&medians),
                p25_median: percentile(&medians, 25.0),
                p75_median: percentile(&medians, 75.0),
            }
        })
        .collect()
}
