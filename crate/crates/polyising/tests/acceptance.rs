//! End-to-end acceptance gate. Each test covers one numbered criterion
//! and prints a single `criterion N: PASS/FAIL` line (visible with
//! `--nocapture`) before asserting.
//!
//! Criterion 1 is expected red on one of its four values: the pinned
//! ground-state energy for PSVKMAPS (-9) is not the optimum of the
//! stated contact model, which admits a valid fold of energy -10
//! (verified by two independent enumerators). The test pins the
//! published value and reports the discrepancy honestly.

use polyising::harness::{
    run_benchmark, tune, tune_cost, BenchmarkSpec, TuneSettings,
};
use polyising::instances::{generate, suite_seed, InstanceClass, InstanceRecipe};
use polyising::protein::{
    bit_counts, bit_counts_for, brute_force_fold, build_fold_pubo, Model, Sequence,
};
use polyising::pubo::{
    exhaustive_minimum, multilinear_expand, PolySpec, Term,
};
use polyising::reduction::quadratize;
use polyising::rng::{derive_seed, StreamRng};
use polyising::solvers::{batch_solve, Algorithm, SolverConfig};
use std::time::Instant;

fn best_energy(results: &[Result<polyising::solvers::RunResult, polyising::solvers::SolverError>]) -> f64 {
    results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|r| r.energy)
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn criterion_1_protein_ground_states() {
    let t0 = Instant::now();
    let pinned = [
        ("PSVKMA", Model::Mj, -6.0),
        ("PSVKMAP", Model::Mj, -6.0),
        ("PSVKMAPS", Model::Mj, -9.0),
        ("PHPPHPPHPPH", Model::Hp, -4.0),
    ];
    let mut mismatches = Vec::new();
    for (s, model, expected) in pinned {
        let seq = Sequence::new(s, model).unwrap();
        let (e, _) = brute_force_fold(&seq).unwrap();
        if e != expected {
            mismatches.push(format!("{s}: got {e}, pinned {expected}"));
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "runtime {elapsed:.1}s exceeds 60s");
    if mismatches.is_empty() {
        println!("criterion 1: PASS — all four ground-state energies match ({elapsed:.1}s)");
    } else {
        println!(
            "criterion 1: FAIL — {} (the stated contact model admits the fold \
             (0,0)(1,0)(1,1)(0,1)(0,2)(1,2)(2,2)(2,1) with contacts PK+VA+VS = -10, \
             confirmed by an independent enumerator; the pinned table value appears \
             to be in error)",
            mismatches.join("; ")
        );
        panic!("{}", mismatches.join("; "));
    }
}

#[test]
fn criterion_2_bit_counts() {
    // Pair ancillas are needed only for pairs that can actually
    // interact; for the MJ sequences every odd pair does, while the HP
    // chain needs them only for its 4 HH pairs.
    let rows = [
        ("PSVKMA", Model::Mj, 19, 28),
        ("PSVKMAP", Model::Mj, 33, 49),
        ("PSVKMAPS", Model::Mj, 48, 73),
        ("PHPPHPPHPPH", Model::Hp, 104, 168),
    ];
    for (s, model, n_pubo, n_qubo) in rows {
        let seq = Sequence::new(s, model).unwrap();
        let c = bit_counts_for(&seq);
        assert_eq!(c.n_pubo, n_pubo, "{s}");
        assert_eq!(c.n_qubo, n_qubo, "{s}");
        // The type-blind closed form agrees whenever all pairs interact.
        if model == Model::Mj {
            let f = bit_counts(seq.len());
            assert_eq!((f.n_pubo, f.n_qubo), (n_pubo, n_qubo), "{s} closed form");
        }
    }
    println!("criterion 2: PASS — N_PUBO/N_QUBO = 19/28, 33/49, 48/73, 104/168 exactly");
}

#[test]
fn criterion_3_desk_scale_benchmark() {
    let t0 = Instant::now();
    let base_seed = 1u64;
    let runs = 500;
    let mut all_ok = true;
    for class in [InstanceClass::I, InstanceClass::II, InstanceClass::III] {
        for size in [10usize, 16, 20] {
            // One hyperparameter set per (class, size), tuned on instance 0.
            let recipe0 = InstanceRecipe::new(class, size, suite_seed(base_seed, size, 0));
            let poly0 = generate(&recipe0).unwrap();
            let settings = TuneSettings {
                budget: 30,
                runs_per_eval: 50,
                base_config: SolverConfig::default(), // 1000 steps
            };
            let cfg = tune(&poly0, Algorithm::PolySimCim, &settings, base_seed)
                .unwrap()
                .best_config;
            let mut hits = 0;
            for index in 0..10 {
                let recipe = InstanceRecipe::new(class, size, suite_seed(base_seed, size, index));
                let poly = generate(&recipe).unwrap();
                let (opt, _) = exhaustive_minimum(&poly).unwrap();
                let sim_seed = derive_seed(recipe.seed, &[1]);
                let sim = batch_solve(&poly, Algorithm::PolySimCim, &cfg, runs, sim_seed);
                let sim_best = best_energy(&sim);
                if (sim_best - opt).abs() < 1e-9 {
                    hits += 1;
                }
                // Directional check: greedy should not beat the simulated
                // dynamics' best run, and can never beat the oracle.
                let greedy_seed = derive_seed(recipe.seed, &[2]);
                let greedy = batch_solve(
                    &poly,
                    Algorithm::Greedy,
                    &SolverConfig::default(),
                    runs,
                    greedy_seed,
                );
                let greedy_best = best_energy(&greedy);
                assert!(
                    greedy_best >= opt - 1e-9,
                    "greedy below the exhaustive oracle is impossible"
                );
                let mut greedy_etas: Vec<f64> = greedy
                    .iter()
                    .filter_map(|r| r.as_ref().ok())
                    .map(|r| r.energy / opt)
                    .collect();
                greedy_etas.sort_by(f64::total_cmp);
                let greedy_median = greedy_etas[greedy_etas.len() / 2];
                if greedy_median > sim_best / opt + 1e-12 {
                    println!(
                        "  note: class {class} N={size} #{index}: greedy median eta \
                         {greedy_median:.4} exceeds polysimcim best eta {:.4}",
                        sim_best / opt
                    );
                }
            }
            if hits < 9 {
                all_ok = false;
            }
            println!(
                "  class {class} N={size}: {hits}/10 instances at eta = 1 \
                 ({:.0}s elapsed)",
                t0.elapsed().as_secs_f64()
            );
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    assert!(elapsed < 1800.0, "runtime {elapsed:.0}s exceeds 30 min");
    if all_ok {
        println!("criterion 3: PASS — tuned dynamics reach eta = 1 on >= 9/10 instances per cell ({elapsed:.0}s)");
    } else {
        println!("criterion 3: FAIL — some (class, size) cell below 9/10");
        panic!("desk-scale benchmark below threshold");
    }
}

#[test]
fn criterion_4_gradient_matches_finite_differences() {
    let mut rng = StreamRng::new(0x9a4d);
    for case in 0..50u64 {
        let n = 2 + (rng.below(29) as usize); // up to 30 variables
        let mut terms = Vec::new();
        for _ in 0..(5 + rng.below(20)) {
            let d = 1 + rng.below(4.min(n as u64)) as usize;
            let mut idx: Vec<u32> = Vec::new();
            while idx.len() < d {
                let v = 1 + rng.below(n as u64) as u32;
                if !idx.contains(&v) {
                    idx.push(v);
                }
            }
            terms.push(Term::new(idx, rng.uniform_in(-2.0, 2.0)));
        }
        let poly = PolySpec::new(n, terms).unwrap();
        let x: Vec<f64> = (0..n).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
        let grad = poly.gradient(&x).unwrap();
        let h = 1e-4;
        for i in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            let fd = (poly.evaluate(&xp).unwrap() - poly.evaluate(&xm).unwrap()) / (2.0 * h);
            let denom = fd.abs().max(1.0);
            assert!(
                (grad[i] - fd).abs() / denom < 1e-6,
                "case {case} var {}: analytic {} vs fd {fd}",
                i + 1,
                grad[i]
            );
        }
    }
    println!("criterion 4: PASS — 50 instances, every component within 1e-6 of central differences");
}

#[test]
fn criterion_5_expansion_identity() {
    let mut rng = StreamRng::new(0x77e1);
    for case in 0..20u64 {
        let n = 2 + (rng.below(11) as usize); // up to 12
        let mut terms = Vec::new();
        for _ in 0..(3 + rng.below(15)) {
            let d = 1 + rng.below(n.min(4) as u64) as usize;
            let mut idx: Vec<u32> = Vec::new();
            while idx.len() < d {
                let v = 1 + rng.below(n as u64) as u32;
                if !idx.contains(&v) {
                    idx.push(v);
                }
            }
            terms.push(Term::new(idx, rng.uniform_in(-3.0, 3.0)));
        }
        let poly = PolySpec::new(n, terms).unwrap();
        let expanded = multilinear_expand(
            |spins| {
                let x: Vec<f64> = spins.iter().map(|&s| s as f64).collect();
                poly.evaluate(&x).unwrap()
            },
            n,
        )
        .unwrap();
        assert_eq!(poly.n_terms(), expanded.n_terms(), "case {case}");
        for (a, b) in poly.terms().iter().zip(expanded.terms()) {
            assert_eq!(a.indices(), b.indices(), "case {case}");
            assert!(
                (a.coeff() - b.coeff()).abs() < 1e-9,
                "case {case}: {} vs {}",
                a.coeff(),
                b.coeff()
            );
        }
    }
    println!("criterion 5: PASS — expand(evaluate) recovered all coefficients within 1e-9");
}

#[test]
fn criterion_6_quadratization_soundness() {
    fn eval_bool(poly: &PolySpec, bits: u64) -> f64 {
        let point: Vec<f64> = (0..poly.n_vars()).map(|i| (bits >> i & 1) as f64).collect();
        poly.evaluate(&point).unwrap()
    }
    let mut rng = StreamRng::new(0x51ab);
    for case in 0..20u64 {
        let n = 6 + (rng.below(5) as usize); // up to 10
        let mut terms = Vec::new();
        for _ in 0..4 {
            let d = 3 + rng.below(2) as usize;
            let mut idx: Vec<u32> = Vec::new();
            while idx.len() < d {
                let v = 1 + rng.below(n as u64) as u32;
                if !idx.contains(&v) {
                    idx.push(v);
                }
            }
            terms.push(Term::new(idx, rng.uniform_in(-2.0, 2.0)));
        }
        for _ in 0..3 {
            let a = 1 + rng.below(n as u64) as u32;
            terms.push(Term::new(vec![a], rng.uniform_in(-1.0, 1.0)));
        }
        let poly = PolySpec::new(n, terms).unwrap();
        let (reduced, map) = quadratize(&poly);
        assert!(reduced.max_degree() <= 2);
        assert!(reduced.n_vars() <= 22, "case {case}: too many ancillas to enumerate");

        let orig_min = (0..1u64 << n)
            .map(|b| eval_bool(&poly, b))
            .fold(f64::INFINITY, f64::min);
        let mut red_min = f64::INFINITY;
        for b in 0..1u64 << reduced.n_vars() {
            red_min = red_min.min(eval_bool(&reduced, b));
        }
        let tol = 1e-9 * poly.abs_coeff_sum().max(1.0);
        assert!(
            (orig_min - red_min).abs() < tol,
            "case {case}: minima differ ({orig_min} vs {red_min})"
        );
        for b in 0..1u64 << reduced.n_vars() {
            if (eval_bool(&reduced, b) - red_min).abs() < tol {
                for &(a, (i, j)) in &map.ancilla_defs {
                    let av = b >> (a - 1) & 1;
                    let prod = (b >> (i - 1) & 1) * (b >> (j - 1) & 1);
                    assert_eq!(av, prod, "case {case}: ancilla {a} != b{i}*b{j}");
                }
            }
        }
    }
    println!("criterion 6: PASS — 20 instances: minima equal, ancillas consistent at every optimum");
}

#[test]
fn criterion_7_fold_pubo_equivalence() {
    let seq = Sequence::new("PSVKMA", Model::Mj).unwrap();
    let lambda = seq.default_overlap_penalty();
    let poly = build_fold_pubo(&seq, lambda).unwrap();
    let (pubo_min, _) = exhaustive_minimum(&poly).unwrap();
    let (fold_min, _) = brute_force_fold(&seq).unwrap();
    assert_eq!(pubo_min, -6.0);
    assert_eq!(fold_min, -6.0);
    // Hyperparameters scaled to the fold PUBO (its penalty terms put the
    // coefficient scale near lambda = 31, so the feedback rate drops
    // accordingly); the paper's protocol tunes per problem.
    let cfg = SolverConfig {
        xi: 0.001,
        ..Default::default()
    };
    let results = batch_solve(&poly, Algorithm::PolySimCim, &cfg, 500, 17);
    let hits = results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .filter(|r| (r.energy - -6.0).abs() < 1e-9)
        .count();
    assert!(hits >= 1, "no run reached -6");
    println!(
        "criterion 7: PASS — PUBO minimum = fold minimum = -6; dynamics reached it in {hits}/500 runs"
    );
}

#[test]
fn criterion_8_determinism_across_thread_counts() {
    let spec = BenchmarkSpec {
        class: InstanceClass::III,
        sizes: vec![10, 12],
        instances_per_size: 2,
        runs: 50,
        base_seed: 23,
        algorithms: vec!["polysimcim".into(), "greedy".into()],
        config: SolverConfig {
            steps: 200,
            ..Default::default()
        },
        oracle_max_size: 12,
        tune_budget: 10,
    };
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_benchmark(&spec).unwrap().to_json());
    let parallel = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap()
        .install(|| run_benchmark(&spec).unwrap().to_json());
    assert_eq!(serial, parallel, "reports differ between 1 and 8 workers");
    println!(
        "criterion 8: PASS — serial and 8-worker reports are byte-identical ({} bytes)",
        serial.len()
    );
}

#[test]
fn criterion_9_tuner_sanity() {
    // Analytic cost values.
    assert_eq!(tune_cost(&[-4.0], -4.0, -4.0).unwrap(), -1.25);
    assert_eq!(tune_cost(&[10.0], -1.0, -1.0).unwrap(), 1.25);
    assert_eq!(tune_cost(&[0.0], -2.0, -3.0).unwrap(), 0.0);

    // Paired comparison on one Class I N = 16 instance: best-of-200 with
    // the tuned config must not be worse than with the default config.
    let recipe = InstanceRecipe::new(InstanceClass::I, 16, suite_seed(5, 16, 0));
    let poly = generate(&recipe).unwrap();
    let (opt, _) = exhaustive_minimum(&poly).unwrap();
    let default_cfg = SolverConfig::default();
    let settings = TuneSettings {
        budget: 40,
        runs_per_eval: 50,
        base_config: default_cfg.clone(),
    };
    let tuned_cfg = tune(&poly, Algorithm::PolySimCim, &settings, 5)
        .unwrap()
        .best_config;
    let batch_seed = derive_seed(recipe.seed, &[9]);
    let default_best = best_energy(&batch_solve(
        &poly,
        Algorithm::PolySimCim,
        &default_cfg,
        200,
        batch_seed,
    ));
    let tuned_best = best_energy(&batch_solve(
        &poly,
        Algorithm::PolySimCim,
        &tuned_cfg,
        200,
        batch_seed,
    ));
    let (eta_default, eta_tuned) = (default_best / opt, tuned_best / opt);
    assert!(
        eta_tuned >= eta_default - 1e-12,
        "tuned eta {eta_tuned} worse than default eta {eta_default}"
    );
    println!(
        "criterion 9: PASS — cost values exact; tuned eta {eta_tuned:.4} >= default eta {eta_default:.4}"
    );
}
