//! Command-line front end: instance generation, solving, the benchmark
//! protocol, degree reduction, protein folding, encoding bit counts, and
//! hyperparameter tuning.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error. The env var
//! `POLYISING_THREADS` caps the worker-thread count; results are identical
//! for any thread count.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use polyising::harness::{
    run_benchmark, tune, BenchmarkSpec, TuneSettings,
};
use polyising::instances::{
    generate, serialize_instance, suite_seed, InstanceClass, InstanceRecipe,
};
use polyising::protein::{
    bit_counts, brute_force_fold, build_fold_pubo, coords_csv, decode_turns, fold_energy, Model,
    Sequence, FOLD_PREFIX,
};
use polyising::pubo::{exhaustive_minimum, parse_pubo, serialize_pubo};
use polyising::reduction::{overhead_report, quadratize, spin_to_boolean, OverheadReport};
use polyising::solvers::{batch_solve, Algorithm, SolverConfig};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "polyising", version, about = "Polynomial spin-glass optimization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a suite of random cubic instances to PUBO files.
    Generate {
        /// Instance class: I, II, or III.
        #[arg(long)]
        class: InstanceClass,
        /// Problem sizes (number of spins).
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Instances per size.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output directory; files are named class_size_index.pubo.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Run one algorithm on one PUBO file.
    Solve {
        /// Input PUBO file.
        input: PathBuf,
        #[arg(long, default_value = "polysimcim")]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        config: ConfigArgs,
        /// Also compute the exhaustive minimum (small instances only).
        #[arg(long)]
        exact: bool,
        /// Write the best run's amplitude trajectory CSV here (requires
        /// trajectory_every in the config).
        #[arg(long)]
        trajectory_out: Option<PathBuf>,
    },
    /// Run the full benchmark protocol and emit a JSON report.
    Benchmark {
        #[arg(long)]
        class: InstanceClass,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        instances: usize,
        #[arg(long, default_value_t = 500)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma-separated algorithm names; default all five.
        #[arg(long, value_delimiter = ',')]
        algorithms: Vec<String>,
        #[command(flatten)]
        config: ConfigArgs,
        /// Compute the exhaustive oracle for sizes up to this bound.
        #[arg(long, default_value_t = 20)]
        oracle_max_size: usize,
        /// Tuning evaluations per (class, size); 0 disables tuning.
        #[arg(long, default_value_t = 0)]
        tune_budget: usize,
        /// Report JSON path.
        #[arg(long)]
        out: PathBuf,
        /// Also write the aggregate panel CSV here.
        #[arg(long)]
        panel_csv: Option<PathBuf>,
    },
    /// Quadratize a PUBO file (spin -> boolean -> degree <= 2).
    Reduce {
        input: PathBuf,
        /// Output path for the reduced boolean polynomial.
        #[arg(long)]
        out: PathBuf,
        /// Append an overhead CSV row to this file (header added if new).
        #[arg(long)]
        overhead_csv: Option<PathBuf>,
    },
    /// Fold a protein sequence on the 2D lattice.
    Fold {
        /// Residue sequence, e.g. HPPHHP (HP model) or PSVKMA (MJ model).
        sequence: String,
        #[arg(long, default_value = "hp")]
        model: Model,
        /// Overlap penalty; default 1 + M * max |pair energy|.
        #[arg(long)]
        lambda: Option<f64>,
        /// Write the fold-energy PUBO over the free turn bits here.
        #[arg(long)]
        pubo_out: Option<PathBuf>,
        /// Solve the PUBO with this algorithm instead of brute force.
        #[arg(long)]
        algorithm: Option<Algorithm>,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        config: ConfigArgs,
        /// Write the best fold's coordinates CSV here.
        #[arg(long)]
        coords_out: Option<PathBuf>,
    },
    /// Print the encoding bit-count table for a range of chain lengths.
    Counts {
        /// Chain lengths M.
        #[arg(value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
    },
    /// Tune solver hyperparameters on one PUBO file.
    Tune {
        input: PathBuf,
        #[arg(long, default_value = "polysimcim")]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        /// Solver runs per evaluation.
        #[arg(long, default_value_t = 50)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        config: ConfigArgs,
        /// Write the best config JSON here (also printed to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// Solver config JSON file; missing fields take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the step count from the config.
    #[arg(long)]
    steps: Option<usize>,
}

impl ConfigArgs {
    fn load(&self) -> Result<SolverConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => SolverConfig::default(),
        };
        if let Some(steps) = self.steps {
            cfg.steps = steps;
        }
        Ok(cfg)
    }
}

fn read_poly(path: &PathBuf) -> Result<polyising::pubo::PolySpec> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_pubo(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { class, sizes, count, seed, out_dir } => {
            fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            for &size in &sizes {
                for index in 0..count {
                    let recipe =
                        InstanceRecipe::new(class, size, suite_seed(seed, size, index));
                    let poly = generate(&recipe)?;
                    let path = out_dir.join(format!("{class}_{size}_{index}.pubo"));
                    fs::write(&path, serialize_instance(&recipe, &poly))
                        .with_context(|| format!("writing {}", path.display()))?;
                }
            }
            println!("wrote {} instance files to {}", sizes.len() * count, out_dir.display());
        }
        Command::Solve { input, algorithm, runs, seed, config, exact, trajectory_out } => {
            let poly = read_poly(&input)?;
            let cfg = config.load()?;
            let results = batch_solve(&poly, algorithm, &cfg, runs, seed);
            let ok: Vec<_> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
            let failed = results.len() - ok.len();
            if ok.is_empty() {
                bail!("all {runs} runs failed; first error: {}",
                    results[0].as_ref().err().map(|e| e.to_string()).unwrap_or_default());
            }
            let best = ok
                .iter()
                .min_by(|a, b| a.energy.total_cmp(&b.energy))
                .expect("ok is non-empty");
            let mean: f64 = ok.iter().map(|r| r.energy).sum::<f64>() / ok.len() as f64;
            println!("algorithm: {}", algorithm.name());
            println!("runs: {} ({failed} failed)", runs);
            println!("best energy: {}", best.energy);
            println!("mean energy: {mean}");
            println!("best spins: {}", best
                .spins
                .values()
                .iter()
                .map(|&s| if s > 0 { '+' } else { '-' })
                .collect::<String>());
            if exact {
                let (emin, _) = exhaustive_minimum(&poly)?;
                println!("exact minimum: {emin}");
                println!("best eta: {}", if emin < 0.0 { best.energy / emin } else { f64::NAN });
            }
            if let Some(path) = trajectory_out {
                let csv = best
                    .trajectory_csv()
                    .context("no trajectory recorded; set trajectory_every in the config")?;
                fs::write(&path, csv)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Benchmark {
            class, sizes, instances, runs, seed, algorithms, config,
            oracle_max_size, tune_budget, out, panel_csv,
        } => {
            let algorithms = if algorithms.is_empty() {
                Algorithm::ALL.iter().map(|a| a.name().to_string()).collect()
            } else {
                algorithms
            };
            let spec = BenchmarkSpec {
                class,
                sizes,
                instances_per_size: instances,
                runs,
                base_seed: seed,
                algorithms,
                config: config.load()?,
                oracle_max_size,
                tune_budget,
            };
            let report = run_benchmark(&spec)?;
            fs::write(&out, report.to_json())
                .with_context(|| format!("writing {}", out.display()))?;
            if let Some(path) = panel_csv {
                fs::write(&path, report.panel_csv(false))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            for row in &report.aggregates {
                println!(
                    "class {} N={} {}: median best eta {:.4} [{:.4}, {:.4}]",
                    row.class, row.size, row.algorithm,
                    row.median_best, row.p25_best, row.p75_best
                );
            }
            println!("report written to {}", out.display());
        }
        Command::Reduce { input, out, overhead_csv } => {
            let poly = read_poly(&input)?;
            let boolean = spin_to_boolean(&poly);
            let (reduced, map) = quadratize(&boolean);
            fs::write(&out, serialize_pubo(&reduced))
                .with_context(|| format!("writing {}", out.display()))?;
            println!(
                "reduced {} vars / {} terms to {} vars / {} terms ({} ancillas, penalty {})",
                poly.n_vars(), poly.n_terms(), reduced.n_vars(), reduced.n_terms(),
                map.ancilla_defs.len(), map.penalty_weight
            );
            if let Some(path) = overhead_csv {
                let row = overhead_report(&poly)?;
                let mut text = if path.exists() {
                    fs::read_to_string(&path)?
                } else {
                    format!("{}\n", OverheadReport::csv_header())
                };
                text.push_str(&row.csv_row());
                text.push('\n');
                fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Fold {
            sequence, model, lambda, pubo_out, algorithm, runs, seed, config, coords_out,
        } => {
            let seq = Sequence::new(&sequence, model)?;
            let lambda = lambda.unwrap_or_else(|| seq.default_overlap_penalty());
            let (energy, fold) = match algorithm {
                None => brute_force_fold(&seq)?,
                Some(alg) => {
                    let poly = build_fold_pubo(&seq, lambda)?;
                    let cfg = config.load()?;
                    let results = batch_solve(&poly, alg, &cfg, runs, seed);
                    let best = results
                        .iter()
                        .filter_map(|r| r.as_ref().ok())
                        .min_by(|a, b| a.energy.total_cmp(&b.energy))
                        .context("all solver runs failed")?;
                    let mut bits = FOLD_PREFIX.to_vec();
                    bits.extend(best.spins.values().iter().map(|&s| if s < 0 { 1u8 } else { 0 }));
                    let coords = decode_turns(&bits, seq.len())?;
                    let (energy, feasible) = fold_energy(&seq, &coords, lambda);
                    (energy, polyising::protein::LatticeFold {
                        turn_bits: bits,
                        coords,
                        energy,
                        feasible,
                    })
                }
            };
            println!("sequence: {sequence} ({} residues)", seq.len());
            println!("energy: {energy}");
            println!("feasible: {}", fold.feasible);
            println!("turn bits: {}", fold.turn_bits.iter().map(|b| b.to_string()).collect::<String>());
            if let Some(path) = pubo_out {
                let poly = build_fold_pubo(&seq, lambda)?;
                fs::write(&path, serialize_pubo(&poly))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if let Some(path) = coords_out {
                fs::write(&path, coords_csv(&fold.coords))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Counts { lengths } => {
            println!("m,n_phys,n_penalty,n_pair,n_reduction,n_pubo,n_qubo");
            for m in lengths {
                let c = bit_counts(m);
                println!(
                    "{m},{},{},{},{},{},{}",
                    c.n_phys, c.n_penalty, c.n_pair, c.n_reduction, c.n_pubo, c.n_qubo
                );
            }
        }
        Command::Tune { input, algorithm, budget, runs, seed, config, out } => {
            let poly = read_poly(&input)?;
            let settings = TuneSettings {
                budget,
                runs_per_eval: runs,
                base_config: config.load()?,
            };
            let outcome = tune(&poly, algorithm, &settings, seed)?;
            let json = serde_json::to_string_pretty(&outcome.best_config)?;
            println!("best cost: {}", outcome.best_cost);
            println!("{json}");
            if let Some(path) = out {
                fs::write(&path, json)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("POLYISING_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => {
                // Ignore the error if a pool already exists.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("POLYISING_THREADS must be a positive integer, got `{v}`");
                return ExitCode::from(1);
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are successful exits; real usage
            // errors exit 1.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
