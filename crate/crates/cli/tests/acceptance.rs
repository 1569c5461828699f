//! Acceptance criteria 1 to 10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if a criterion outside `KNOWN_FAILURES` fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qtl_cli::run::{risk_curve, shift_points};
use qtl_cli::ExperimentConfig;
use qtl_core::complexity::{cap_from_mi, max_of, rademacher_cap_dim, rademacher_estimates, renyi2_mi, renyi2_mi_profile, EstimatorSettings};
use qtl_core::divergence::TaskPair;
use qtl_core::embedding::{EmbeddingAnsatz, EmbeddingTable, TableEmbedding, ThetaGrid, ThetaVector, DEFAULT_GRID_CAP};
use qtl_core::pipeline::{replicate, BoundConfig, Experiment, RiskReport};
use qtl_core::qmath::DensityMatrix;
use qtl_core::tasks::{quantize_gaussian_task, DiscreteTask, GaussianTaskSpec};
use qtl_core::validation::{dissimilarity_checks, helstrom_checks, rademacher_checks, PropertyResult};

/// Criteria expected to fail; see the decisions ledger for the analysis.
const KNOWN_FAILURES: [u32; 1] = [6];

const VALIDATION_SEED: u64 = 0;

/// Round-off allowance for values that are exact in real arithmetic.
const EXACT_TOL: f64 = 1e-12;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn within(limit_secs: u64, started: Instant) -> (bool, String) {
    let took = started.elapsed();
    (took <= Duration::from_secs(limit_secs), format!("{:.1} s of {limit_secs} s", took.as_secs_f64()))
}

fn summarize(results: &[PropertyResult]) -> String {
    results.iter().map(|r| format!("{} {:.2e}/{:.0e}", r.name, r.max_violation, r.tolerance)).collect::<Vec<_>>().join(", ")
}

fn helstrom_optimality() -> Outcome {
    let t = Instant::now();
    let results = helstrom_checks(VALIDATION_SEED, 200, 10_000, false).unwrap();
    let (fast, took) = within(30, t);
    outcome(results.iter().all(PropertyResult::passed) && fast, format!("{}; {took}", summarize(&results)))
}

fn dissimilarity_pairs() -> ([PropertyResult; 2], (bool, String)) {
    let t = Instant::now();
    let results = dissimilarity_checks(VALIDATION_SEED, 100, 16).unwrap();
    (results, within(120, t))
}

fn renyi_exactness() -> Outcome {
    let empty = ThetaVector::<f64>::zeros(0);
    let plus = [Complex64::new(0.5f64.sqrt(), 0.0), Complex64::new(0.5f64.sqrt(), 0.0)];
    let features = vec![-1.0, 0.0, 0.5, 2.0];
    let constant = TableEmbedding::new(features.clone(), vec![DensityMatrix::from_pure_state(&plus).unwrap(); 4]).unwrap();
    let task = DiscreteTask::new(features, [0.3, 0.7], [vec![0.1, 0.2, 0.3, 0.4], vec![0.4, 0.4, 0.1, 0.1]]).unwrap();
    let constant_mi = renyi2_mi(&task, &constant, &empty).unwrap();
    let mut passed = constant_mi.abs() <= 1e-12;
    let mut detail = format!("constant |I2| = {:.1e}", constant_mi.abs());
    for n in [2usize, 4] {
        let features: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let table = TableEmbedding::new(features.clone(), (0..n).map(|k| DensityMatrix::basis(n, k)).collect()).unwrap();
        let u = vec![1.0 / n as f64; n];
        let task = DiscreteTask::new(features, [0.5, 0.5], [u.clone(), u]).unwrap();
        let err = (renyi2_mi(&task, &table, &empty).unwrap() - (n as f64).log2()).abs();
        passed &= err <= 1e-9;
        detail.push_str(&format!(", n={n} error {err:.1e}"));
    }
    outcome(passed, detail)
}

fn rademacher_exactness() -> Outcome {
    let a = EmbeddingAnsatz::rx_rot_rx();
    let grid = ThetaGrid::uniform(3, 6, DEFAULT_GRID_CAP).unwrap();
    let task = quantize_gaussian_task::<f64>(&GaussianTaskSpec::new(1.0, -1.0, 0.11)).unwrap();
    let table = EmbeddingTable::new(&a, &grid, task.features()).unwrap();
    let one = rademacher_estimates(&task, &table, 1, &EstimatorSettings::default(), 5).unwrap();
    let exact = one.povm.exhaustive
        && one.joint.exhaustive
        && (one.povm.value - 0.5).abs() <= EXACT_TOL
        && (one.joint.value - 0.5).abs() <= EXACT_TOL;
    let results = rademacher_checks(VALIDATION_SEED, 20).unwrap();
    outcome(
        exact && results.iter().all(PropertyResult::passed),
        format!("N=1 values {} / {} (exhaustive); {}", one.povm.value, one.joint.value, summarize(&results)),
    )
}

fn median_at(reports: &[RiskReport<f64>], n_source: usize, n_target: usize) -> &RiskReport<f64> {
    reports.iter().find(|r| r.n_source == n_source && r.n_target == n_target).expect("cell present")
}

fn fig2_shape(reports: &[RiskReport<f64>], took: &str) -> Outcome {
    let m = |s, t| median_at(reports, s, t).median;
    let helps = [2, 4].map(|t| m(100, t) < m(0, t));
    let gap32 = m(100, 32) - m(0, 32);
    outcome(
        helps.iter().all(|&h| h) && gap32.abs() <= 0.02,
        format!(
            "N^T=2: {:.4} vs {:.4}, N^T=4: {:.4} vs {:.4} (N^S=100 vs 0); gap at N^T=32 {gap32:+.4}; {took}",
            m(100, 2),
            m(0, 2),
            m(100, 4),
            m(0, 4)
        ),
    )
}

fn fig2_bounds(cfg: &ExperimentConfig, reports: &[RiskReport<f64>]) -> Outcome {
    let dominated = reports.iter().all(|r| r.bound.value > r.median);
    let pair = cfg.task_pair().unwrap();
    let ansatz = cfg.ansatz().unwrap();
    let table = cfg.table(&pair, &cfg.grid().unwrap()).unwrap();
    let r_povm = cap_from_mi(max_of(&renyi2_mi_profile(&pair.target, &table).unwrap()));
    let r_joint = rademacher_cap_dim(&ansatz, &pair.target);
    let advantage = 2.0 * (r_joint + r_povm) - 4.0 * r_povm;
    let components = advantage > 0.0;
    let mut below = true;
    let mut detail = format!("bound > median in all {} cells: {dominated}; 4R_M = {:.4} < 2(R_TM + R_M) = {:.4}", reports.len(), 4.0 * r_povm, 2.0 * (r_joint + r_povm));
    for t in [2, 4] {
        let transfer = median_at(reports, 100, t);
        let baseline = median_at(reports, 0, t);
        let d_st = transfer.bound.component("dissimilarity_term").unwrap();
        if d_st < advantage / (t as f64).sqrt() {
            below &= transfer.bound.value < baseline.bound.value;
        }
        detail.push_str(&format!("; N^T={t}: {:.3} vs {:.3}", transfer.bound.value, baseline.bound.value));
    }
    outcome(dominated && components && below, detail)
}

fn fig3_shape() -> Outcome {
    let t = Instant::now();
    let cfg = ExperimentConfig::load("fig3").unwrap();
    let points = shift_points(&cfg, cfg.seed).unwrap();
    let (fast, took) = within(600, t);
    let argmin = |f: &dyn Fn(usize) -> f64| (0..points.len()).min_by(|&a, &b| f(a).total_cmp(&f(b))).unwrap();
    let best = points[argmin(&|i| points[i].report.median)].shift;
    let best_bound = points[argmin(&|i| points[i].report.bound.value)].shift;
    let at = |s: f64| points.iter().find(|p| p.shift == s).unwrap().report.median;
    let rise = (at(-2.0) - at(0.0)).min(at(2.0) - at(0.0));
    outcome(
        best.abs() <= 0.25 && best_bound.abs() <= 0.25 && rise >= 0.02 && fast,
        format!("median argmin at {best}, bound argmin at {best_bound}, rise at |shift|=2 {rise:.4}; {took}"),
    )
}

fn large_sample() -> Outcome {
    let a = EmbeddingAnsatz::rx_rot_rx();
    let grid = ThetaGrid::uniform(3, 8, DEFAULT_GRID_CAP).unwrap();
    let task = quantize_gaussian_task::<f64>(&GaussianTaskSpec::new(1.5, -0.5, 0.11)).unwrap();
    let table = EmbeddingTable::new(&a, &grid, task.features()).unwrap();
    let pair = TaskPair::new(task.clone(), task);
    let exp = Experiment { embedding: &a, table: &table, pair: &pair, bound: BoundConfig::new(0.5), replications: 50 };
    let r = replicate(&exp, &[(10_000, 10_000)], 2024).unwrap().remove(0);
    outcome(r.median < 0.02, format!("median {:.5} over {} replications", r.median, r.replications))
}

fn validate_command() -> Outcome {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qtl")).args(["validate", "--seed", &VALIDATION_SEED.to_string()]).output().unwrap();
    let (fast, took) = within(300, t);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let families = stdout.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count();
    let failed: Vec<&str> = stdout.lines().filter(|l| l.starts_with("FAIL")).collect();
    outcome(
        out.status.code() == Some(0) && families >= 8 && failed.is_empty() && fast,
        format!("exit {:?}, {families} families, {} failed; {took}", out.status.code(), failed.len()),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut report = |n: u32, name: &'static str, o: Outcome| {
        println!("criterion {n:>2} {} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, name, o));
    };

    report(1, "Helstrom optimality", helstrom_optimality());
    let ([ordering, definition], (fast, took)) = dissimilarity_pairs();
    report(2, "trace vs TV ordering", outcome(ordering.passed() && fast, format!("{}; {took}", summarize(&[ordering]))));
    report(3, "dissimilarity definition", outcome(definition.passed(), summarize(&[definition])));
    report(4, "Renyi-2 MI exactness", renyi_exactness());
    report(5, "Rademacher exactness and caps", rademacher_exactness());

    let t = Instant::now();
    let fig2 = ExperimentConfig::load("fig2").unwrap();
    let reports = risk_curve(&fig2, fig2.seed).unwrap();
    let (fast, took) = within(600, t);
    let mut shape = fig2_shape(&reports, &took);
    shape.passed &= fast;
    report(6, "fig2 transfer advantage", shape);
    report(7, "fig2 bound panel", fig2_bounds(&fig2, &reports));
    report(8, "fig3 shift sweep", fig3_shape());
    report(9, "large-sample consistency", large_sample());
    report(10, "validate suite", validate_command());

    let unexpected: Vec<u32> = results.iter().filter(|(n, _, o)| !o.passed && !KNOWN_FAILURES.contains(n)).map(|r| r.0).collect();
    let passed = results.iter().filter(|r| r.2.passed).count();
    println!("{passed} of {} criteria passed; known failures {KNOWN_FAILURES:?}", results.len());
    for n in KNOWN_FAILURES {
        if results.iter().any(|(m, _, o)| *m == n && o.passed) {
            println!("criterion {n} is listed as a known failure but passed");
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
