//! Cross-module property suites with their worst observed violations.
//!
//! Each check draws its random cases from its own stream of the master seed
//! and reports the largest violation against a fixed tolerance.

use rand::Rng;

use crate::classifier::{generalization_gap, helstrom, helstrom_risk, weighted_class_densities, Povm};
use crate::complexity::{
    cap_from_mi, max_of, rademacher_cap_dim, rademacher_estimates, renyi2_mi, renyi2_mi_profile, EstimatorSettings,
};
use crate::divergence::{dissimilarity_gap, dst_trace_from_profiles, dst_tv, risk_profiles, TaskPair};
use crate::embedding::{rot_gate, rx_gate, Embedding, EmbeddingAnsatz, EmbeddingTable, TableEmbedding, ThetaGrid, ThetaVector, DEFAULT_GRID_CAP};
use crate::error::Result;
use crate::pipeline::{joint_train, transfer_excess_risk, transfer_learn};
use crate::qmath::{
    hermitian_eig, hermitian_eigenvalues, negative_part_trace, positive_part_trace, random, trace_distance, trace_norm, CMatrix,
    DensityMatrix,
};
use crate::rng::{stream, Role, StreamRng};
use crate::tasks::{quantize_gaussian_task, quantize_pair, sample_dataset, DiscreteTask, GaussianTaskSpec};

/// Outcome of one property family.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_violation: f64,
    pub tolerance: f64,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.max_violation <= self.tolerance
    }
}

/// Case counts for [`run_suite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteSize {
    pub helstrom_pairs: usize,
    pub povms_per_pair: usize,
    pub dissimilarity_pairs: usize,
    pub grid_resolution: usize,
    pub rademacher_configs: usize,
}

impl Default for SuiteSize {
    fn default() -> Self {
        Self { helstrom_pairs: 200, povms_per_pair: 10_000, dissimilarity_pairs: 100, grid_resolution: 16, rademacher_configs: 20 }
    }
}

impl SuiteSize {
    /// A few seconds' worth of cases.
    pub fn quick() -> Self {
        Self { helstrom_pairs: 20, povms_per_pair: 500, dissimilarity_pairs: 8, grid_resolution: 6, rademacher_configs: 4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SuiteOptions {
    pub size: SuiteSize,
    /// Replace the Helstrom measurement by its outcome-swapped version.
    pub corrupt_helstrom: bool,
}

fn family_rng(seed: u64, family: u64) -> StreamRng {
    stream(seed, family, Role::Validation)
}

fn result(name: &'static str, cases: usize, max_violation: f64, tolerance: f64) -> PropertyResult {
    PropertyResult { name, cases, max_violation, tolerance }
}

/// Random equal-variance Gaussian task quantized on `bins` bins.
pub fn random_gaussian_spec<G: Rng + ?Sized>(rng: &mut G, bins: usize) -> GaussianTaskSpec {
    GaussianTaskSpec {
        prior0: rng.random_range(0.15..0.85),
        bins,
        ..GaussianTaskSpec::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(0.05..1.5))
    }
}

fn random_theta<G: Rng + ?Sized>(rng: &mut G) -> ThetaVector<f64> {
    ThetaVector::new((0..3).map(|_| rng.random_range(0.0..std::f64::consts::TAU)))
}

/// Identity, symmetry, triangle inequality and range of the trace distance.
pub fn trace_distance_axioms(seed: u64, cases: usize) -> Result<PropertyResult> {
    let mut rng = family_rng(seed, 1);
    let mut worst = 0.0f64;
    for k in 0..cases {
        let dim = [2, 3, 4][k % 3];
        let a = random::density::<f64, _>(dim, &mut rng).into_matrix();
        let b = random::density::<f64, _>(dim, &mut rng).into_matrix();
        let c = random::pure_state::<f64, _>(dim, &mut rng).into_matrix();
        let (ab, ba, bc, ac) = (trace_distance(&a, &b)?, trace_distance(&b, &a)?, trace_distance(&b, &c)?, trace_distance(&a, &c)?);
        worst = worst
            .max(trace_distance(&a, &a)?.abs())
            .max((ab - ba).abs())
            .max(ac - ab - bc)
            .max(-ab)
            .max(ab - 1.0);
    }
    Ok(result("trace_distance_axioms", cases, worst.max(0.0), 1e-10))
}

/// Tr A₊ + Tr A₋ = Tr A, Tr A₊ − Tr A₋ = ‖A‖₁, and Tr(M A) ≤ Tr A₊ for effects M.
pub fn positive_part_identity(seed: u64, cases: usize) -> Result<PropertyResult> {
    let mut rng = family_rng(seed, 2);
    let mut worst = 0.0f64;
    for k in 0..cases {
        let dim = 2 + k % 3;
        let a = random::hermitian::<f64, _>(dim, &mut rng);
        let (pos, neg) = (positive_part_trace(&a)?, negative_part_trace(&a)?);
        worst = worst.max((pos + neg - a.trace_re()).abs()).max((pos - neg - trace_norm(&a)?).abs());
        for _ in 0..10 {
            let m = random::effect::<f64, _>(dim, &mut rng);
            worst = worst.max(m.trace_product_re(&a) - pos);
        }
    }
    Ok(result("positive_part_identity", cases, worst.max(0.0), 1e-9))
}

fn synthesized(a: &[CMatrix<f64>; 2], corrupt: bool) -> Result<Povm<f64>> {
    let h = helstrom(&a[0], &a[1])?;
    Ok(if corrupt { h.swapped() } else { h })
}

/// Helstrom risk against random POVMs, and against the closed form ½ − T.
pub fn helstrom_checks(seed: u64, pairs: usize, povms: usize, corrupt: bool) -> Result<[PropertyResult; 2]> {
    let mut rng = family_rng(seed, 3);
    let a = EmbeddingAnsatz::rx_rot_rx();
    let (mut optimality, mut closed_form) = (0.0f64, 0.0f64);
    for _ in 0..pairs {
        let task = quantize_gaussian_task::<f64>(&random_gaussian_spec(&mut rng, 40))?;
        let theta = random_theta(&mut rng);
        let w = weighted_class_densities(&task, &a, &theta)?;
        let achieved = synthesized(&w, corrupt)?.risk_against(&w);
        closed_form = closed_form.max((achieved - helstrom_risk(&w[0], &w[1])?).abs());
        for _ in 0..povms {
            let p = Povm::from_effect(random::effect::<f64, _>(2, &mut rng))?;
            optimality = optimality.max(achieved - p.risk_against(&w));
        }
    }
    Ok([
        result("helstrom_optimality", pairs * povms, optimality.max(0.0), 1e-9),
        result("helstrom_closed_form", pairs, closed_form, 1e-10),
    ])
}

/// D^ST_trace ≤ D^ST_TV and the dissimilarity inequality with both, on
/// random Gaussian pairs with shared bins.
pub fn dissimilarity_checks(seed: u64, pairs: usize, resolution: usize) -> Result<[PropertyResult; 2]> {
    let mut rng = family_rng(seed, 4);
    let a = EmbeddingAnsatz::rx_rot_rx();
    let grid = ThetaGrid::uniform(3, resolution, DEFAULT_GRID_CAP)?;
    let (mut ordering, mut definition) = (0.0f64, f64::NEG_INFINITY);
    for _ in 0..pairs {
        let (s, t) = quantize_pair::<f64>(&random_gaussian_spec(&mut rng, 100), &random_gaussian_spec(&mut rng, 100))?;
        let pair = TaskPair::new(s, t);
        let (ps, pt) = risk_profiles(&pair, &a, &grid)?;
        let trace = dst_trace_from_profiles(&ps, &pt);
        let tv = dst_tv(&pair)?;
        ordering = ordering.max(trace - tv);
        for d in [trace, tv] {
            definition = definition.max(dissimilarity_gap(&ps, &pt, d)?.0);
        }
    }
    Ok([
        result("trace_vs_tv_ordering", pairs, ordering.max(0.0), 1e-9),
        result("dissimilarity_definition", 2 * pairs, definition.max(0.0), 1e-9),
    ])
}

/// Closed-form I₂ values and the [0, log₂ n] range for pure embeddings.
pub fn renyi_mi_checks(seed: u64, cases: usize) -> Result<PropertyResult> {
    let mut worst = 0.0f64;
    let empty = ThetaVector::<f64>::zeros(0);
    let constant = TableEmbedding::new(vec![0.0f64], vec![DensityMatrix::basis(2, 0)])?;
    let single = DiscreteTask::new(vec![0.0], [0.5, 0.5], [vec![1.0], vec![1.0]])?;
    worst = worst.max(renyi2_mi(&single, &constant, &empty)?.abs());
    for n in [2usize, 4] {
        let features: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let table = TableEmbedding::new(features.clone(), (0..n).map(|k| DensityMatrix::basis(n, k)).collect())?;
        let u = vec![1.0 / n as f64; n];
        let task = DiscreteTask::new(features, [0.5, 0.5], [u.clone(), u])?;
        worst = worst.max((renyi2_mi(&task, &table, &empty)? - (n as f64).log2()).abs());
    }
    let mut rng = family_rng(seed, 5);
    let a = EmbeddingAnsatz::rx_rot_rx();
    for _ in 0..cases {
        let task = quantize_gaussian_task::<f64>(&random_gaussian_spec(&mut rng, 40))?;
        let mi = renyi2_mi(&task, &a, &random_theta(&mut rng))?;
        worst = worst.max(-mi).max(mi - 1.0);
    }
    Ok(result("renyi_mi_exactness", cases + 3, worst, 1e-9))
}

/// N = 1 exactness of both estimators, and estimates against their caps.
pub fn rademacher_checks(seed: u64, configs: usize) -> Result<[PropertyResult; 2]> {
    let mut rng = family_rng(seed, 6);
    let a = EmbeddingAnsatz::rx_rot_rx();
    let grid = ThetaGrid::uniform(3, 4, DEFAULT_GRID_CAP)?;
    let (mut exact, mut caps) = (0.0f64, 0.0f64);
    for k in 0..configs {
        let task = quantize_gaussian_task::<f64>(&random_gaussian_spec(&mut rng, 30))?;
        let table = EmbeddingTable::new(&a, &grid, task.features())?;
        let est_seed = rng.random();
        let one = rademacher_estimates(&task, &table, 1, &EstimatorSettings { outer: 5, ..Default::default() }, est_seed)?;
        exact = exact.max((one.povm.value - 0.5).abs()).max((one.joint.value - 0.5).abs());

        let n = [2, 5, 9, 16, 40][k % 5];
        let settings = EstimatorSettings { outer: 6, sigma_draws: 40, exhaustive_max_n: 10 };
        let r = rademacher_estimates(&task, &table, n, &settings, est_seed)?;
        let cap_mi = cap_from_mi(max_of(&renyi2_mi_profile(&task, &table)?));
        let cap_dim = rademacher_cap_dim(&a, &task);
        caps = caps
            .max(r.povm.value - cap_mi - 3.0 * r.povm.std_error)
            .max(r.joint.value - cap_dim - 3.0 * r.joint.std_error)
            .max(r.povm.value - r.joint.value - 1e-12);
    }
    Ok([
        result("rademacher_single_sample", configs, exact, 1e-12),
        result("rademacher_caps", configs, caps.max(0.0), 0.0),
    ])
}

/// The closed-form generalization error dominates |R − R̂| for random POVMs
/// and is attained by a spectral projector.
pub fn generalization_checks(seed: u64, cases: usize, povms: usize) -> Result<PropertyResult> {
    let mut rng = family_rng(seed, 7);
    let a = EmbeddingAnsatz::rx_rot_rx();
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let task = quantize_gaussian_task::<f64>(&random_gaussian_spec(&mut rng, 30))?;
        let theta = random_theta(&mut rng);
        let n = rng.random_range(1..20);
        let data = sample_dataset(&task, n, rng.random());
        let truth = weighted_class_densities(&task, &a, &theta)?;
        let emp = weighted_class_densities(&task.empirical(&data)?, &a, &theta)?;
        let closed = generalization_gap(&truth, &emp)?;
        let gap = |p: &Povm<f64>| (p.risk_against(&truth) - p.risk_against(&emp)).abs();
        for _ in 0..povms {
            worst = worst.max(gap(&Povm::from_effect(random::effect::<f64, _>(2, &mut rng))?) - closed);
        }
        let b = &(&truth[0] - &truth[1]) - &(&emp[0] - &emp[1]);
        let spec = hermitian_eig(&b)?;
        let attained = [spec.projector(|l| l > 0.0), spec.projector(|l| l < 0.0)]
            .into_iter()
            .map(|m1| Povm::from_effect(m1).map(|p| gap(&p)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0f64, f64::max);
        worst = worst.max((attained - closed).abs());
    }
    Ok(result("generalization_error_closed_form", cases, worst.max(0.0), 1e-9))
}

/// Transfer learning with source data := target data reproduces joint training.
pub fn staged_equals_joint(seed: u64, cases: usize) -> Result<PropertyResult> {
    let mut rng = family_rng(seed, 8);
    let a = EmbeddingAnsatz::rx_rot_rx();
    let grid = ThetaGrid::uniform(3, 8, DEFAULT_GRID_CAP)?;
    let task = quantize_gaussian_task::<f64>(&GaussianTaskSpec::new(1.5, -0.5, 0.11))?;
    let table = EmbeddingTable::new(&a, &grid, task.features())?;
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let data = sample_dataset(&task, rng.random_range(1..40), rng.random());
        let staged = transfer_learn(&data, &data, &table)?;
        let joint = joint_train(&data, &table)?;
        let mismatch = if staged == joint { 0.0 } else { 1.0 };
        let diff = (transfer_excess_risk(&staged, &task, &table)? - transfer_excess_risk(&joint, &task, &table)?).abs();
        worst = worst.max(mismatch).max(diff);
    }
    Ok(result("staged_equals_joint", cases, worst, 0.0))
}

/// Gates are unitary and embedded states are pure density matrices.
pub fn embedding_validity(seed: u64, cases: usize) -> Result<PropertyResult> {
    let mut rng = family_rng(seed, 9);
    let a = EmbeddingAnsatz::rx_rot_rx();
    let id = CMatrix::<f64>::identity(2);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let (t1, t2, t3, x) = (rng.random_range(-7.0..7.0), rng.random_range(-7.0..7.0), rng.random_range(-7.0..7.0), rng.random_range(-5.0..5.0));
        for g in [rot_gate(t1, t2, t3), rx_gate(x)] {
            worst = worst.max((&g.adjoint() * &g).max_abs_diff(&id));
        }
        let rho = a.embed(&ThetaVector::new([t1, t2, t3]), x)?;
        let m = rho.matrix();
        let min_eig = hermitian_eigenvalues(m)?.last().copied().unwrap_or(0.0);
        worst = worst
            .max(m.hermitian_deviation())
            .max((m.trace_re() - 1.0).abs())
            .max(-min_eig)
            .max((rho.purity() - 1.0).abs());
    }
    Ok(result("embedding_validity", cases, worst, 1e-10))
}

/// Every property family, in a fixed order.
pub fn run_suite(seed: u64, opts: &SuiteOptions) -> Result<Vec<PropertyResult>> {
    let s = opts.size;
    let mut out = vec![trace_distance_axioms(seed, 1000)?, positive_part_identity(seed, 500)?];
    out.extend(helstrom_checks(seed, s.helstrom_pairs, s.povms_per_pair, opts.corrupt_helstrom)?);
    out.extend(dissimilarity_checks(seed, s.dissimilarity_pairs, s.grid_resolution)?);
    out.push(renyi_mi_checks(seed, 200)?);
    out.extend(rademacher_checks(seed, s.rademacher_configs)?);
    out.push(generalization_checks(seed, 30, s.povms_per_pair.min(10_000))?);
    out.push(staged_equals_joint(seed, 20)?);
    out.push(embedding_validity(seed, 500)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let results = run_suite(7, &SuiteOptions { size: SuiteSize::quick(), corrupt_helstrom: false }).unwrap();
        assert!(results.len() >= 8);
        for r in &results {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn swapped_helstrom_is_caught() {
        let [opt, closed] = helstrom_checks(3, 10, 200, true).unwrap();
        assert!(!opt.passed());
        assert!(!closed.passed());
    }
}
