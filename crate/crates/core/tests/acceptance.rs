//! Acceptance criteria 1-9. Each test prints one `criterion N: PASS|FAIL`
//! line to stderr (bypassing the test harness capture) and then asserts.

use std::io::Write as _;
use std::time::Instant;

use fgt_core::harness::{bench, verify, BenchParams, Colouring, DeltaSpec, Problem, VerifyOptions, VerifyTarget};
use fgt_core::instances::{gen_apsp_instance, gen_coloured_graph, gen_minplus_matrix};
use fgt_core::oracles::{apsp_exact, dmt_exact, minplus_exact, tc_exact, TripleOptions};
use fgt_core::qcost::{ceil_log2, vtgs_cost, Cost, CostLedger, CostModel, OMEGA_DEFAULT};
use fgt_core::reductions::{
    apsp_via_minplus, floor_target_hit, minplus_via_apnt, minplus_via_apnt_call_bound, scale_count, PipelineId,
    ReductionTrace,
};
use fgt_core::triangles::{choose_mode, dmt_solve, tc_solve, DmtConfig, DmtMode};
use num_rational::BigRational;

const REDUCTION_TRIALS: usize = 500;
const MATRIX_MAX_N: usize = 24;
const NT_MAX_N: usize = 20;
const PIPELINE_TRIALS: usize = 200;
const PIPELINE_MAX_N: usize = 10;
const SUITE_BUDGET_SECS: f64 = 600.0;
const EXHAUSTIVE_RANGE: i64 = 8;
const ALGO_TRIALS: usize = 300;
const DMT_MAX_N: usize = 30;
const TC_MAX_N: usize = 40;
const BENCH_SIZES: [usize; 5] = [64, 128, 256, 512, 1024];
const BENCH_TRIALS: usize = 3;
const TC_SLOPE_TOL: f64 = 0.05;
const SMALL_SLOPE_TOL: f64 = 0.1;
const LARGE_SLOPE_TOL: f64 = 0.15;
const SEED: u64 = 20240601;

fn line(n: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n}: {verdict} ({detail})");
}

fn threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn rat(x: u64) -> BigRational {
    BigRational::from_integer(x.into())
}

#[test]
fn criterion_1_reduction_correctness() {
    let start = Instant::now();
    let campaigns = [
        (VerifyTarget::Pipeline(PipelineId::ApspToMm), MATRIX_MAX_N, false),
        (VerifyTarget::MmToApsp, MATRIX_MAX_N, false),
        (VerifyTarget::Pipeline(PipelineId::MmToApnt), MATRIX_MAX_N, false),
        (VerifyTarget::Pipeline(PipelineId::ApntToNt), MATRIX_MAX_N, false),
        (VerifyTarget::Pipeline(PipelineId::ApntToNt), MATRIX_MAX_N, true),
        (VerifyTarget::Pipeline(PipelineId::NtToZwt), NT_MAX_N, false),
    ];
    let mut details = Vec::new();
    let mut mismatches = 0;
    for (i, (target, max_n, decision_only)) in campaigns.into_iter().enumerate() {
        let opts = VerifyOptions {
            trials: REDUCTION_TRIALS,
            max_n,
            seed: SEED + i as u64,
            decision_only,
            threads: threads(),
            ..Default::default()
        };
        let out = verify(target, &opts).unwrap();
        mismatches += out.failures;
        let suffix = if decision_only { "/decision" } else { "" };
        details.push(format!("{target}{suffix} {}/{}", out.trials - out.failures, out.trials));
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = mismatches == 0 && secs < SUITE_BUDGET_SECS;
    line(1, pass, &format!("{}; {secs:.1}s", details.join(", ")));
    assert!(pass);
}

#[test]
fn criterion_2_end_to_end_pipeline() {
    let opts = VerifyOptions {
        trials: PIPELINE_TRIALS,
        max_n: PIPELINE_MAX_N,
        seed: SEED,
        threads: threads(),
        ..Default::default()
    };
    let out = verify(VerifyTarget::Pipeline(PipelineId::ApspToZwt), &opts).unwrap();
    let pass = out.passed() && out.trials >= PIPELINE_TRIALS;
    line(
        2,
        pass,
        &format!(
            "apsp-to-zwt {}/{} equal to Floyd-Warshall, {} zwt calls",
            out.trials - out.failures,
            out.trials,
            out.trace.calls("zwt")
        ),
    );
    assert!(pass, "{:?}", out.counterexample);
}

#[test]
fn criterion_3_construction_lemma() {
    let r = EXHAUSTIVE_RANGE;
    let max_scale = scale_count(r) - 1;
    let mut exceptions = 0;
    let mut checked = 0;
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                checked += 1;
                if floor_target_hit([a, b, c], max_scale).is_some() != (a + b + c < 0) {
                    exceptions += 1;
                }
            }
        }
    }
    let pass = exceptions == 0 && checked == (2 * r + 1).pow(3);
    line(3, pass, &format!("{checked} weight triples, {exceptions} exceptions, scales 0..={max_scale}"));
    assert!(pass);
}

fn log_spaced_deltas(n: usize) -> Vec<u64> {
    let cube = (n as u64).pow(3);
    let mut d: Vec<u64> = (0..=8u64).filter(|&x| x <= cube).collect();
    for i in 1..=8 {
        let x = (cube as f64).powf(i as f64 / 8.0).round() as u64;
        d.push(x.clamp(1, cube));
    }
    d.sort_unstable();
    d.dedup();
    d
}

#[test]
fn criterion_4_algorithm_correctness() {
    let mut dmt_runs = 0;
    let mut dmt_bad = 0;
    let mut step2_violations = 0;
    for i in 0..ALGO_TRIALS {
        let n = 3 + i % (DMT_MAX_N - 2);
        let k = 1 + (i * 7) % n.min(7);
        let g = gen_coloured_graph(n, k, 0.3 + 0.5 * ((i % 5) as f64 / 4.0), SEED + i as u64).unwrap();
        let opts = TripleOptions {
            distinct_triples: i % 3 != 0,
        };
        for delta in log_spaced_deltas(n) {
            let want = dmt_exact(&g, delta, opts);
            for mode in [DmtMode::Small, DmtMode::Large, DmtMode::Auto] {
                let cfg = DmtConfig {
                    delta,
                    mode,
                    charge_global_n: false,
                    opts,
                };
                let out = dmt_solve(&g, &cfg, &mut CostLedger::default()).unwrap();
                dmt_runs += 1;
                if out.answer != want {
                    dmt_bad += 1;
                }
                if delta > 0 && out.step2_triples * delta > (n as u64).pow(3) {
                    step2_violations += 1;
                }
            }
        }
    }
    let mut tc_bad = 0;
    for i in 0..ALGO_TRIALS {
        let n = 3 + i % (TC_MAX_N - 2);
        let k = 1 + (i * 5) % n.min(5);
        let g = gen_coloured_graph(n, k, 0.5 + 0.4 * ((i % 4) as f64 / 3.0), SEED ^ i as u64).unwrap();
        let opts = TripleOptions {
            distinct_triples: i % 2 == 0,
        };
        if tc_solve(&g, opts, &mut CostLedger::default()).unwrap().answer != tc_exact(&g, opts) {
            tc_bad += 1;
        }
    }
    let pass = dmt_bad == 0 && tc_bad == 0 && step2_violations == 0;
    line(
        4,
        pass,
        &format!(
            "dmt {ALGO_TRIALS} graphs, {dmt_runs} (delta, mode) runs, {dmt_bad} mismatches; tc {ALGO_TRIALS} graphs, {tc_bad} mismatches"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_exact_cost_identity() {
    let mut worst = 0.0f64;
    let mut exact = 0;
    let mut within = 0;
    let mut total = 0;
    for i in 0..ALGO_TRIALS {
        let n = 3 + i % (TC_MAX_N - 2);
        let k = 1 + (i * 11) % n;
        let g = gen_coloured_graph(n, k, 0.6, SEED + 7 * i as u64).unwrap();
        let mut ledger = CostLedger::new(CostModel::default());
        let out = tc_solve(&g, TripleOptions::default(), &mut ledger).unwrap();
        let n3 = (n as u64).pow(3);
        let target = (n as f64).powf(1.5);
        let base = ledger.total_for("tc");
        let rel = (base - target).abs() / target;
        let slack = (k as f64).powi(3) / n3 as f64;
        worst = worst.max(rel);
        total += 1;
        if out.search_cost.exact_square() == Some(&rat(n3)) {
            exact += 1;
        }
        if rel <= slack {
            within += 1;
        }
    }
    let pass = within == total && exact == total;
    line(
        5,
        pass,
        &format!("{within}/{total} colourings within |Gamma|^3/n^3, {exact}/{total} with squared cost exactly n^3, worst relative error {worst:.2e}"),
    );
    assert!(pass);
}

fn fitted(problem: Problem, algo: &str, p: BenchParams) -> (f64, f64) {
    let r = bench(problem, algo, &BENCH_SIZES, BENCH_TRIALS, SEED, &p).unwrap();
    assert!(r.rows.iter().map(|row| row.n).collect::<std::collections::BTreeSet<_>>().len() >= 4);
    (r.slope.unwrap(), r.residual_max.unwrap())
}

#[test]
fn criterion_6_scaling_fits() {
    let base = BenchParams {
        record_wall: false,
        threads: threads(),
        ..Default::default()
    };
    let mut checks = Vec::new();

    let (s, _) = fitted(Problem::Tc, "vtgs", base);
    checks.push(("tc".to_string(), s, 1.5, TC_SLOPE_TOL));

    for alpha in [0.0, 0.5, 1.0] {
        let p = BenchParams {
            delta: DeltaSpec::Power(alpha),
            colouring: Colouring::Balanced,
            ..base
        };
        let (s, _) = fitted(Problem::Dmt, "small", p);
        checks.push((format!("small a={alpha}"), s, 1.5 + alpha / 2.0, SMALL_SLOPE_TOL));
    }

    for alpha in [2.5, 3.0] {
        let p = BenchParams {
            delta: DeltaSpec::Power(alpha),
            colouring: Colouring::Heavy,
            charge_global_n: true,
            opts: TripleOptions {
                distinct_triples: false,
            },
            ..base
        };
        let (s, _) = fitted(Problem::Dmt, "large", p);
        checks.push((format!("large a={alpha}"), s, 1.5 + OMEGA_DEFAULT - alpha / 2.0, LARGE_SLOPE_TOL));
    }

    let pass = checks.iter().all(|(_, s, want, tol)| (s - want).abs() <= *tol);
    let detail: Vec<String> = checks
        .iter()
        .map(|(name, s, want, tol)| format!("{name}: {s:.4} vs {want:.4}+-{tol}"))
        .collect();
    line(6, pass, &detail.join("; "));
    assert!(pass);
}

#[test]
fn criterion_7_crossover() {
    let mut ok = true;
    for n in [8usize, 16, 64, 256, 1024] {
        let n2 = (n as u64).pow(2);
        let n25 = (n as f64).powf(2.5).round() as u64;
        ok &= choose_mode(n, n2, OMEGA_DEFAULT) == DmtMode::Small;
        ok &= choose_mode(n, n25, OMEGA_DEFAULT) == DmtMode::Large;
    }
    let mut shared = 0;
    let mut disagreements = 0;
    for i in 0..60 {
        let n = 4 + i % 13;
        let g = gen_coloured_graph(n, 1 + i % 4, 0.7, SEED + i as u64).unwrap();
        let opts = TripleOptions {
            distinct_triples: i % 2 == 0,
        };
        for delta in [(n as u64).pow(2), (n as f64).powf(2.5).round() as u64] {
            let run = |mode| {
                let cfg = DmtConfig {
                    delta,
                    mode,
                    charge_global_n: false,
                    opts,
                };
                dmt_solve(&g, &cfg, &mut CostLedger::default()).unwrap()
            };
            let auto = run(DmtMode::Auto);
            let small = run(DmtMode::Small);
            let large = run(DmtMode::Large);
            ok &= auto.mode == choose_mode(n, delta, OMEGA_DEFAULT);
            shared += 1;
            if small.answer != large.answer || auto.answer != small.answer {
                disagreements += 1;
            }
        }
    }
    let pass = ok && disagreements == 0;
    line(
        7,
        pass,
        &format!("n^2 -> small and n^2.5 -> large at omega {OMEGA_DEFAULT}; {shared} shared instances, {disagreements} disagreements"),
    );
    assert!(pass);
}

#[test]
fn criterion_8_call_counts() {
    let mut apsp_bad = 0;
    let mut apnt_bad = 0;
    let mut step2_bad = 0;
    for i in 0..REDUCTION_TRIALS {
        let n = 1 + i % MATRIX_MAX_N;
        let g = gen_apsp_instance(n, 1.0, 0.4, SEED + i as u64).unwrap();
        let mut trace = ReductionTrace::new();
        let d = apsp_via_minplus(&g, &mut |a, b| minplus_exact(a, b), &mut trace).unwrap();
        if trace.calls("minplus") != ceil_log2(n as u64) as u64 || d != apsp_exact(&g).unwrap() {
            apsp_bad += 1;
        }

        let a = gen_minplus_matrix(n, 1.0, 0.1, SEED + 2 * i as u64).unwrap();
        let b = gen_minplus_matrix(n, 1.0, 0.1, SEED + 2 * i as u64 + 1).unwrap();
        let mut trace = ReductionTrace::new();
        minplus_via_apnt(&a, &b, &mut |t| Ok(fgt_core::oracles::apnt_exact(t)), &mut trace).unwrap();
        if trace.calls("apnt") > minplus_via_apnt_call_bound(a.bound().max(b.bound())) {
            apnt_bad += 1;
        }
    }
    let mut step2_runs = 0;
    for i in 0..ALGO_TRIALS {
        let n = 3 + i % (DMT_MAX_N - 2);
        let g = gen_coloured_graph(n, 1 + i % n.min(8), 0.5, SEED + i as u64).unwrap();
        for delta in log_spaced_deltas(n).into_iter().filter(|&d| d > 0) {
            let cfg = DmtConfig {
                delta,
                mode: DmtMode::Large,
                ..Default::default()
            };
            let out = dmt_solve(&g, &cfg, &mut CostLedger::default()).unwrap();
            step2_runs += 1;
            if out.step2_triples * delta > (n as u64).pow(3) {
                step2_bad += 1;
            }
        }
    }
    let pass = apsp_bad == 0 && apnt_bad == 0 && step2_bad == 0;
    line(
        8,
        pass,
        &format!(
            "squarings exact on {REDUCTION_TRIALS}, apnt bound held on {}/{REDUCTION_TRIALS}, step-2 bound held on {}/{step2_runs}",
            REDUCTION_TRIALS - apnt_bad,
            step2_runs - step2_bad
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_9_qcost_properties() {
    let ints = |xs: &[u64]| xs.iter().map(|&x| Cost::from_integer(x)).collect::<Vec<_>>();
    let mut ok = true;

    ok &= vtgs_cost(&ints(&[3, 4])).unwrap().exact_square() == Some(&rat(25));
    ok &= vtgs_cost(&ints(&[3, 4])).unwrap().value() == 5.0;
    ok &= vtgs_cost(&ints(&[7; 16])).unwrap().exact_square() == Some(&rat(16 * 49));
    ok &= vtgs_cost(&ints(&[7; 16])).unwrap().value() == 28.0;

    use rand::{seq::SliceRandom, Rng, SeedableRng};
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(SEED);
    let mut cases = 0;
    for _ in 0..2000 {
        let len = r.gen_range(1..40);
        let xs: Vec<u64> = (0..len).map(|_| r.gen_range(0..10_000)).collect();
        let v = vtgs_cost(&ints(&xs)).unwrap();
        let sq = v.exact_square().unwrap().clone();

        let mut ys = xs.clone();
        ys.shuffle(&mut r);
        ok &= vtgs_cost(&ints(&ys)).unwrap() == v;

        let k = r.gen_range(0..100u64);
        let scaled: Vec<u64> = xs.iter().map(|x| x * k).collect();
        ok &= vtgs_cost(&ints(&scaled)).unwrap().exact_square() == v.scaled(k).exact_square();

        let max = *xs.iter().max().unwrap();
        let sum: u64 = xs.iter().sum();
        ok &= sq >= rat(max * max) && sq <= rat(sum * sum);
        cases += 1;
    }
    line(9, ok, &format!("[3,4] -> 5, 16 x 7 -> 28, {cases} random permutation/homogeneity/sandwich cases, exact rationals"));
    assert!(ok);
}
