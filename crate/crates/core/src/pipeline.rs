//! Two-stage transfer learning on a θ grid, excess risks, the two
//! generalization bounds, and replication statistics.
//!
//! Training only needs per-class bin histograms, so every routine here works
//! on a precomputed [`EmbeddingTable`] and costs O(grid × occupied bins).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{min_risk_profile, povm_from_empirical, tabulated_class_densities, Povm};
use crate::complexity::{cap_from_mi, max_of, rademacher_cap_dim, rademacher_estimates, renyi2_mi_profile, EstimatorSettings};
use crate::divergence::{dst_trace_from_profiles, dst_tv, TaskPair};
use crate::embedding::{grid_argmin, Embedding, EmbeddingTable, ThetaGrid, ThetaVector};
use crate::error::{Error, Result};
use crate::qmath::{trace_norm, CMatrix};
use crate::rng::{stream, Role};
use crate::scalar::Real;
use crate::tasks::{covering_bin_centers, quantize_on, sample_with, Dataset, DiscreteTask, GaussianTaskSpec};

/// Embedding parameter and target POVM produced by training.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel<R> {
    pub theta_index: usize,
    pub theta_hat: ThetaVector<R>,
    pub povm: Povm<R>,
    pub source_train_risk: R,
    pub target_train_risk: R,
}

/// Nonzero empirical weights (bin, N₀ᵢ/N, N₁ᵢ/N).
fn empirical_weights<R: Real>(data: &Dataset, bins: usize) -> Result<Vec<(usize, R, R)>> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(&(_, i)) = data.samples().iter().find(|&&(_, i)| i >= bins) {
        return Err(Error::InvalidArgument(format!("bin index {i} out of range (bins = {bins})")));
    }
    let h = data.histogram(bins);
    let n = R::from_usize(data.len()).unwrap();
    Ok((0..bins)
        .filter(|&i| h[0][i] + h[1][i] > 0)
        .map(|i| (i, R::from_usize(h[0][i]).unwrap() / n, R::from_usize(h[1][i]).unwrap() / n))
        .collect())
}

/// Empirical weighted class densities Â_c at grid point `g`.
fn empirical_densities<R: Real>(table: &EmbeddingTable<R>, weights: &[(usize, R, R)], g: usize) -> [CMatrix<R>; 2] {
    [
        table.weighted_sum(g, weights.iter().map(|&(i, w0, _)| (i, w0))),
        table.weighted_sum(g, weights.iter().map(|&(i, _, w1)| (i, w1))),
    ]
}

/// Trained (Helstrom-minimized) empirical risk ½ − T(Â₀, Â₁) at every grid point.
pub fn empirical_risk_profile<R: Real>(data: &Dataset, table: &EmbeddingTable<R>) -> Result<Vec<R>> {
    let w = empirical_weights::<R>(data, table.features().len())?;
    let half = R::lit(0.5);
    (0..table.grid_len())
        .into_par_iter()
        .map(|g| {
            let diff = table.weighted_sum(g, w.iter().map(|&(i, w0, w1)| (i, w1 - w0)));
            Ok((half - half * trace_norm(&diff)?).max(R::zero()).min(half))
        })
        .collect()
}

/// Helstrom POVM trained on `data` at grid point `g`, with its training risk.
pub fn train_at<R: Real>(data: &Dataset, table: &EmbeddingTable<R>, g: usize) -> Result<(Povm<R>, R)> {
    let w = empirical_weights::<R>(data, table.features().len())?;
    let [a0, a1] = empirical_densities(table, &w, g);
    povm_from_empirical(data.class_counts(), &a0, &a1)
}

/// Grid point minimizing the trained empirical risk, lowest index on ties.
pub fn pretrain_theta<R: Real>(source_data: &Dataset, table: &EmbeddingTable<R>) -> Result<(usize, R)> {
    let profile = empirical_risk_profile(source_data, table)?;
    let g = grid_argmin(&profile).ok_or(Error::EmptyDataset)?;
    Ok((g, profile[g]))
}

/// Pretrains θ on the source data, then fits the POVM on the target data.
pub fn transfer_learn<R: Real>(
    source_data: &Dataset,
    target_data: &Dataset,
    table: &EmbeddingTable<R>,
) -> Result<TrainedModel<R>> {
    if target_data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let (g, source_train_risk) = pretrain_theta(source_data, table)?;
    let (povm, target_train_risk) = train_at(target_data, table, g)?;
    Ok(TrainedModel { theta_index: g, theta_hat: table.grid().get(g).clone(), povm, source_train_risk, target_train_risk })
}

/// Joint (θ, POVM) empirical risk minimization on the target data alone.
pub fn joint_train<R: Real>(target_data: &Dataset, table: &EmbeddingTable<R>) -> Result<TrainedModel<R>> {
    let (g, risk) = pretrain_theta(target_data, table)?;
    let (povm, target_train_risk) = train_at(target_data, table, g)?;
    Ok(TrainedModel { theta_index: g, theta_hat: table.grid().get(g).clone(), povm, source_train_risk: risk, target_train_risk })
}

/// min over the grid of R^T_θ.
pub fn grid_min_risk<R: Real>(task: &DiscreteTask<R>, table: &EmbeddingTable<R>) -> Result<R> {
    Ok(min_risk_profile(task, table)?.into_iter().fold(R::infinity(), R::min))
}

/// True target risk of `model` minus a precomputed reference risk.
pub fn excess_over<R: Real>(model: &TrainedModel<R>, task: &DiscreteTask<R>, table: &EmbeddingTable<R>, reference: R) -> Result<R> {
    let a = tabulated_class_densities(task, table, model.theta_index)?;
    Ok(model.povm.risk_against(&a) - reference)
}

/// R^T(θ̂, M̂) − min_θ R^T_θ. Unclamped; round-off can make it slightly negative.
pub fn transfer_excess_risk<R: Real>(model: &TrainedModel<R>, target_task: &DiscreteTask<R>, table: &EmbeddingTable<R>) -> Result<R> {
    excess_over(model, target_task, table, grid_min_risk(target_task, table)?)
}

/// Excess risk of joint training on the target data only.
pub fn no_transfer_excess_risk<R: Real>(
    target_data: &Dataset,
    target_task: &DiscreteTask<R>,
    table: &EmbeddingTable<R>,
) -> Result<R> {
    transfer_excess_risk(&joint_train(target_data, table)?, target_task, table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DstMode {
    #[default]
    Trace,
    Tv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexityMode {
    #[default]
    AnalyticCap,
    McEstimate,
}

/// How bounds are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundConfig {
    pub delta: f64,
    #[serde(default)]
    pub d_st_mode: DstMode,
    #[serde(default)]
    pub r_mode: ComplexityMode,
    #[serde(default)]
    pub estimator: EstimatorSettings,
    /// Seed for Monte-Carlo complexity estimates.
    #[serde(skip)]
    pub seed: u64,
}

impl BoundConfig {
    pub fn new(delta: f64) -> Self {
        Self { delta, d_st_mode: DstMode::Trace, r_mode: ComplexityMode::AnalyticCap, estimator: EstimatorSettings::default(), seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidArgument(format!("delta must be in (0, 1), got {}", self.delta)));
        }
        self.estimator.validate()
    }
}

/// Bound value with its additive terms.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundBreakdown<R> {
    pub value: R,
    pub components: Vec<(&'static str, R)>,
}

impl<R: Real> BoundBreakdown<R> {
    fn from_terms(components: Vec<(&'static str, R)>) -> Self {
        Self { value: components.iter().map(|&(_, v)| v).sum(), components }
    }

    pub fn component(&self, name: &str) -> Option<R> {
        self.components.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }
}

/// Complexity values entering a bound: 𝕽_𝓜 and 𝕽_{Θ,𝓜}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complexities<R> {
    pub povm: R,
    pub joint: R,
}

/// Caps (Rényi-2 and dimension) or Monte-Carlo estimates at sample size `n`.
pub fn complexities<R: Real, E: Embedding<R> + ?Sized>(
    cfg: &BoundConfig,
    task: &DiscreteTask<R>,
    embedding: &E,
    table: &EmbeddingTable<R>,
    n: usize,
) -> Result<Complexities<R>> {
    match cfg.r_mode {
        ComplexityMode::AnalyticCap => Ok(Complexities {
            povm: cap_from_mi(max_of(&renyi2_mi_profile(task, table)?)),
            joint: rademacher_cap_dim(embedding, task),
        }),
        ComplexityMode::McEstimate => {
            let r = rademacher_estimates(task, table, n, &cfg.estimator, cfg.seed)?;
            Ok(Complexities { povm: r.povm.value, joint: r.joint.value })
        }
    }
}

fn check_n(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(format!("{what} must be >= 1")));
    }
    Ok(())
}

fn rsqrt<R: Real>(n: usize) -> R {
    R::one() / R::from_usize(n).unwrap().sqrt()
}

/// 2(𝕽_{Θ,𝓜} + 𝕽_𝓜)/√N + √(2 log(2/δ)/N).
pub fn no_transfer_terms<R: Real>(r: Complexities<R>, n_target: usize, delta: f64) -> Result<BoundBreakdown<R>> {
    check_n(n_target, "n_target")?;
    let two = R::lit(2.0);
    let s = rsqrt::<R>(n_target);
    Ok(BoundBreakdown::from_terms(vec![
        ("complexity_term", two * (r.joint + r.povm) * s),
        ("confidence_term", (two * R::lit((2.0 / delta).ln())).sqrt() * s),
    ]))
}

/// 4𝕽^T_𝓜/√N^T + √(2 log(3/δ)/N^T) + D^ST + 2(𝕽^S_{Θ,𝓜} + 𝕽^S_𝓜)/√N^S + √(2 log(3/δ)/N^S).
pub fn transfer_terms<R: Real>(
    target: Complexities<R>,
    source: Complexities<R>,
    d_st: R,
    n_source: usize,
    n_target: usize,
    delta: f64,
) -> Result<BoundBreakdown<R>> {
    check_n(n_source, "n_source")?;
    check_n(n_target, "n_target")?;
    let two = R::lit(2.0);
    let conf = (two * R::lit((3.0 / delta).ln())).sqrt();
    let (st, ss) = (rsqrt::<R>(n_target), rsqrt::<R>(n_source));
    Ok(BoundBreakdown::from_terms(vec![
        ("target_complexity_term", R::lit(4.0) * target.povm * st),
        ("target_confidence_term", conf * st),
        ("dissimilarity_term", d_st),
        ("source_complexity_term", two * (source.joint + source.povm) * ss),
        ("source_confidence_term", conf * ss),
    ]))
}

/// Excess-risk bound for joint training on N^T target samples.
pub fn bound_no_transfer<R: Real, E: Embedding<R> + ?Sized>(
    cfg: &BoundConfig,
    task: &DiscreteTask<R>,
    embedding: &E,
    table: &EmbeddingTable<R>,
    n_target: usize,
) -> Result<BoundBreakdown<R>> {
    cfg.validate()?;
    check_n(n_target, "n_target")?;
    no_transfer_terms(complexities(cfg, task, embedding, table, n_target)?, n_target, cfg.delta)
}

/// D^ST in the configured mode.
pub fn dissimilarity<R: Real>(mode: DstMode, pair: &TaskPair<R>, table: &EmbeddingTable<R>) -> Result<R> {
    match mode {
        DstMode::Trace => Ok(dst_trace_from_profiles(&min_risk_profile(&pair.source, table)?, &min_risk_profile(&pair.target, table)?)),
        DstMode::Tv => dst_tv(pair),
    }
}

/// Transfer excess-risk bound. Both tasks must share the table's features.
pub fn bound_transfer<R: Real, E: Embedding<R> + ?Sized>(
    cfg: &BoundConfig,
    pair: &TaskPair<R>,
    embedding: &E,
    table: &EmbeddingTable<R>,
    n_source: usize,
    n_target: usize,
) -> Result<BoundBreakdown<R>> {
    cfg.validate()?;
    check_n(n_source, "n_source")?;
    check_n(n_target, "n_target")?;
    let target = complexities(cfg, &pair.target, embedding, table, n_target)?;
    let source = complexities(cfg, &pair.source, embedding, table, n_source)?;
    transfer_terms(target, source, dissimilarity(cfg.d_st_mode, pair, table)?, n_source, n_target, cfg.delta)
}

/// Excess-risk distribution of one (N^S, N^T) cell plus its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskReport<R> {
    pub n_source: usize,
    pub n_target: usize,
    pub replications: usize,
    pub median: R,
    pub q25: R,
    pub q75: R,
    /// Mean of the unclamped excess risks.
    pub excess_raw_mean: R,
    pub bound: BoundBreakdown<R>,
    /// Unclamped excess risk of every replication, in replication order.
    pub raw: Vec<R>,
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile<R: Real>(sorted: &[R], q: f64) -> R {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = R::lit(pos - lo as f64);
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Inputs shared by every cell of an experiment.
pub struct Experiment<'a, R, E: ?Sized> {
    pub embedding: &'a E,
    pub table: &'a EmbeddingTable<R>,
    pub pair: &'a TaskPair<R>,
    pub bound: BoundConfig,
    pub replications: usize,
}

/// Stream index for a dataset of size `n` in replication `rep`. Cells sharing a
/// sample size reuse the same draws, which pairs transfer and no-transfer runs.
fn dataset_index(n: usize, rep: usize) -> u64 {
    ((n as u64) << 32) | rep as u64
}

/// Runs every `(n_source, n_target)` cell; `n_source = 0` is the no-transfer
/// baseline. Deterministic in `seed` for any thread count.
pub fn replicate<R: Real, E: Embedding<R> + ?Sized>(
    exp: &Experiment<'_, R, E>,
    cells: &[(usize, usize)],
    seed: u64,
) -> Result<Vec<RiskReport<R>>> {
    if exp.replications == 0 {
        return Err(Error::InvalidArgument("replications must be >= 1".into()));
    }
    exp.bound.validate()?;
    let reference = grid_min_risk(&exp.pair.target, exp.table)?;
    let mut bound_cfg = exp.bound;
    bound_cfg.seed = seed;
    cells
        .iter()
        .map(|&(n_source, n_target)| {
            check_n(n_target, "n_target")?;
            let raw: Vec<R> = (0..exp.replications)
                .into_par_iter()
                .map(|rep| {
                    let mut trng = stream(seed, dataset_index(n_target, rep), Role::TargetData);
                    let target = sample_with(&exp.pair.target, n_target, &mut trng, seed);
                    let model = if n_source == 0 {
                        joint_train(&target, exp.table)?
                    } else {
                        let mut srng = stream(seed, dataset_index(n_source, rep), Role::SourceData);
                        let source = sample_with(&exp.pair.source, n_source, &mut srng, seed);
                        transfer_learn(&source, &target, exp.table)?
                    };
                    excess_over(&model, &exp.pair.target, exp.table, reference)
                })
                .collect::<Result<_>>()?;
            let bound = if n_source == 0 {
                bound_no_transfer(&bound_cfg, &exp.pair.target, exp.embedding, exp.table, n_target)?
            } else {
                bound_transfer(&bound_cfg, exp.pair, exp.embedding, exp.table, n_source, n_target)?
            };
            Ok(summarize(n_source, n_target, raw, bound))
        })
        .collect()
}

fn summarize<R: Real>(n_source: usize, n_target: usize, raw: Vec<R>, bound: BoundBreakdown<R>) -> RiskReport<R> {
    let mut clamped: Vec<R> = raw.iter().map(|&v| v.max(R::zero())).collect();
    clamped.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = R::from_usize(raw.len()).unwrap();
    RiskReport {
        n_source,
        n_target,
        replications: raw.len(),
        median: quantile(&clamped, 0.5),
        q25: quantile(&clamped, 0.25),
        q75: quantile(&clamped, 0.75),
        excess_raw_mean: raw.iter().copied().sum::<R>() / k,
        bound,
        raw,
    }
}

/// One point of a mean-shift sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftPoint<R> {
    pub shift: f64,
    pub report: RiskReport<R>,
    pub dst_trace: R,
    pub dst_tv: R,
}

/// Settings for [`shift_sweep`].
#[derive(Debug, Clone)]
pub struct ShiftSweep {
    pub source: GaussianTaskSpec,
    /// Target before shifting; both class means move by each shift.
    pub target: GaussianTaskSpec,
    pub shifts: Vec<f64>,
    pub n_source: usize,
    pub n_target: usize,
    pub replications: usize,
    pub bound: BoundConfig,
}

/// Transfer excess risk and bound as the target means move. All shifted
/// tasks share one bin set covering every shift, so the source task is the
/// same at every point. Rows come back in ascending shift order.
pub fn shift_sweep<R: Real, E: Embedding<R> + ?Sized>(
    embedding: &E,
    grid: &ThetaGrid<R>,
    sweep: &ShiftSweep,
    seed: u64,
) -> Result<Vec<ShiftPoint<R>>> {
    if sweep.n_source == 0 {
        return Err(Error::InvalidArgument("shift sweep needs n_source >= 1".into()));
    }
    let mut shifts = sweep.shifts.clone();
    if shifts.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument("shifts must be finite".into()));
    }
    shifts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    shifts.dedup();
    let specs: Vec<GaussianTaskSpec> =
        std::iter::once(sweep.source).chain(shifts.iter().map(|&s| sweep.target.shifted(s))).collect();
    let centers: Vec<R> = covering_bin_centers(&specs)?;
    let table = EmbeddingTable::new(embedding, grid, &centers)?;
    let source = quantize_on(&sweep.source, &centers)?;
    let source_profile = min_risk_profile(&source, &table)?;
    shifts
        .iter()
        .map(|&shift| {
            let target = quantize_on(&sweep.target.shifted(shift), &centers)?;
            let pair = TaskPair::new(source.clone(), target);
            let exp = Experiment { embedding, table: &table, pair: &pair, bound: sweep.bound, replications: sweep.replications };
            let report = replicate(&exp, &[(sweep.n_source, sweep.n_target)], seed)?.remove(0);
            let dst_trace = dst_trace_from_profiles(&source_profile, &min_risk_profile(&pair.target, &table)?);
            Ok(ShiftPoint { shift, report, dst_trace, dst_tv: dst_tv(&pair)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{expected_risk, min_expected_risk, train_povm};
    use crate::embedding::{EmbeddingAnsatz, DEFAULT_GRID_CAP};
    use crate::tasks::{quantize_pair, sample_dataset};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn small_grid() -> ThetaGrid<f64> {
        ThetaGrid::uniform(3, 4, DEFAULT_GRID_CAP).unwrap()
    }

    fn fig2_pair(bins: usize) -> TaskPair<f64> {
        let s = GaussianTaskSpec { bins, ..GaussianTaskSpec::new(1.0, -1.0, 0.11) };
        let t = GaussianTaskSpec { bins, ..GaussianTaskSpec::new(1.5, -0.5, 0.11) };
        let (s, t) = quantize_pair(&s, &t).unwrap();
        TaskPair::new(s, t)
    }

    /// The data set whose empirical measure is the task itself (rational weights).
    fn exact_support_dataset() -> (DiscreteTask<f64>, Dataset) {
        let task = DiscreteTask::new(vec![-1.0, 0.0, 0.8], [0.5, 0.5], [vec![0.5, 0.5, 0.0], vec![0.0, 0.25, 0.75]]).unwrap();
        let data = Dataset::from_samples(vec![(0, 0), (0, 0), (0, 1), (0, 1), (1, 1), (1, 2), (1, 2), (1, 2)], 3).unwrap();
        (task, data)
    }

    #[test]
    fn pretrain_matches_exhaustive_oracle() {
        let a = EmbeddingAnsatz::rx_rot_rx();
        let pair = fig2_pair(40);
        let grid = small_grid();
        let table = EmbeddingTable::new(&a, &grid, pair.source.features()).unwrap();
        let data = sample_dataset(&pair.source, 25, 3);
        let (g, risk) = pretrain_theta(&data, &table).unwrap();
        let direct: Vec<f64> =
            grid.points().iter().map(|t| train_povm(&data, pair.source.features(), &a, t).unwrap().1).collect();
        let mut best = 0;
        for (i, &v) in direct.iter().enumerate() {
            if v < direct[best] - 1e-12 {
                best = i;
            }
        }
        assert_eq!(g, best);
        assert_abs_diff_eq!(risk, direct[best], epsilon = 1e-12);
    }

    #[test]
    fn pretrain_edge_cases() {
        let a = EmbeddingAnsatz::rx_rot_rx();
        let pair = fig2_pair(20);
        let one = ThetaGrid::from_points(vec![ThetaVector::new([0.5, 1.0, 1.5])]).unwrap();
        let table = EmbeddingTable::new(&a, &one, pair.source.features()).unwrap();
        let data = sample_dataset(&pair.source, 10, 1);
        assert_eq!(pretrain_theta(&data, &table).unwrap().0, 0);
        let empty = Dataset::from_samples(vec![], 20).unwrap();
        assert_eq!(pretrain_theta(&empty, &table).unwrap_err(), Error::EmptyDataset);

        // at θ = 0 the features 0 and π/2 embed to |0⟩ and |1⟩
        let table = EmbeddingTable::new(&a, &small_grid(), &[0.0, std::f64::consts::FRAC_PI_2]).unwrap();
        let sep = Dataset::from_samples(vec![(0, 0), (1, 1)], 2).unwrap();
        assert_abs_diff_eq!(pretrain_theta(&sep, &table).unwrap().1, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn transfer_learn_single_point_grid_equals_train_povm() {
        let a = EmbeddingAnsatz::rx_rot_rx();
        let pair = fig2_pair(20);
        let theta = ThetaVector::new([2.0, 0.7, 4.1]);
        let table = EmbeddingTable::new(&a, &ThetaGrid::from_points(vec![theta.clone()]).unwrap(), pair.source.features()).unwrap();
        let s = sample_dataset(&pair.source, 30, 5);
        let t = sample_dataset(&pair.target, 6, 6);
        let m = transfer_learn(&s, &t, &table).unwrap();
        let (povm, risk) = train_povm(&t, pair.target.features(), &a, &theta).unwrap();
        assert!(m.povm.element(1).max_abs_diff(povm.element(1)) < 1e-12);
        assert_abs_diff_eq!(m.target_train_risk, risk, epsilon = 1e-12);
        assert_eq!(m, transfer_learn(&s, &t, &table).unwrap());
    }

    #[test]
    fn excess_risk_vanishes_on_exact_support() {
        let a = EmbeddingAnsatz::rx_rot_rx();
        let (task, data) = exact_support_dataset();
        let table = EmbeddingTable::new(&a, &small_grid(), task.features()).unwrap();
        let model = transfer_learn(&data, &data, &table).unwrap();
        assert!(transfer_excess_risk(&model, &task, &table).unwrap().abs() <= 1e-9);
        assert!(no_transfer_excess_risk(&data, &task, &table).unwrap().abs() <= 1e-9);

        let one = EmbeddingTable::new(&a, &ThetaGrid::from_points(vec![ThetaVector::new([1.0, 2.0, 3.0])]).unwrap(), task.features()).unwrap();
        let model = joint_train(&data, &one).unwrap();
        assert!(transfer_excess_risk(&model, &task, &one).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn excess_risk_matches_direct_evaluation() {
        let a = EmbeddingAnsatz::rx_rot_rx();
        let pair = fig2_pair(30);
        let grid = small_grid();
        let table = EmbeddingTable::new(&a, &grid, pair.source.features()).unwrap();
        let m = transfer_learn(&sample_dataset(&pair.source, 40, 1), &sample_dataset(&pair.target, 4, 2), &table).unwrap();
        let best = grid.points().iter().map(|t| min_expected_risk(&pair.target, &a, t).unwrap()).fold(f64::INFINITY, f64::min);
        let direct = expected_risk(&m.povm, &pair.target, &a, &m.theta_hat).unwrap() - best;
        assert_abs_diff_eq!(transfer_excess_risk(&m, &pair.target, &table).unwrap(), direct, epsilon = 1e-12);
    }

    #[test]
    fn bound_no_transfer_examples() {
        let a = EmbeddingAnsatz::rx_rot_rx();
        let pair = fig2_pair(30);
        let table = EmbeddingTable::new(&a, &small_grid(), pair.source.features()).unwrap();
        let cfg = BoundConfig::new(0.5);
        let values: Vec<f64> =
            [1, 2, 4, 8, 64].iter().map(|&n| bound_no_transfer(&cfg, &pair.target, &a, &table, n).unwrap().value).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
        let b = bound_no_transfer(&cfg, &pair.target, &a, &table, 1).unwrap();
        assert!(b.component("complexity_term").unwrap() <= 2.0 * (2.0 + 0.5 * 2f64.sqrt()) + 1e-12);
        let near_one = bound_no_transfer(&BoundConfig::new(1.0 - 1e-12), &pair.target, &a, &table, 8).unwrap();
        assert_abs_diff_eq!(near_one.component("confidence_term").unwrap(), (2.0 * 2f64.ln() / 8.0).sqrt(), epsilon = 1e-9);
        assert!(bound_no_transfer(&BoundConfig::new(1.0), &pair.target, &a, &table, 8).is_err());
    }

    #[test]
    fn bound_transfer_examples() {
        let a = EmbeddingAnsatz::rx_rot_rx();
        let pair = fig2_pair(30);
        let same = TaskPair::new(pair.source.clone(), pair.source.clone());
        let table = EmbeddingTable::new(&a, &small_grid(), pair.source.features()).unwrap();
        let cfg = BoundConfig::new(0.5);
        let b = bound_transfer(&cfg, &same, &a, &table, 100, 4).unwrap();
        assert_eq!(b.component("dissimilarity_term"), Some(0.0));
        assert_abs_diff_eq!(b.value, b.components.iter().map(|c| c.1).sum::<f64>(), epsilon = 1e-15);

        let values: Vec<f64> = [1, 10, 100, 10_000].iter().map(|&ns| bound_transfer(&cfg, &pair, &a, &table, ns, 4).unwrap().value).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
        let huge = bound_transfer(&cfg, &pair, &a, &table, usize::MAX / 2, 4).unwrap();
        let limit = huge.component("target_complexity_term").unwrap()
            + huge.component("target_confidence_term").unwrap()
            + huge.component("dissimilarity_term").unwrap();
        assert_abs_diff_eq!(huge.value, limit, epsilon = 1e-8);

        // identical tasks, plenty of source data: transfer bound is tighter at small N^T
        let nt = bound_no_transfer(&cfg, &same.target, &a, &table, 2).unwrap().value;
        let tr = bound_transfer(&cfg, &same, &a, &table, 1_000_000, 2).unwrap().value;
        assert!(tr < nt, "{tr} vs {nt}");

        let tv = BoundConfig { d_st_mode: DstMode::Tv, ..cfg };
        let b_tv = bound_transfer(&tv, &pair, &a, &table, 100, 4).unwrap();
        assert_abs_diff_eq!(b_tv.component("dissimilarity_term").unwrap(), dst_tv(&pair).unwrap(), epsilon = 1e-15);
    }

    #[test]
    fn mc_mode_uses_estimates() {
        let a = EmbeddingAnsatz::rx_rot_rx();
        let pair = fig2_pair(20);
        let table = EmbeddingTable::new(&a, &ThetaGrid::uniform(3, 3, DEFAULT_GRID_CAP).unwrap(), pair.source.features()).unwrap();
        let cfg = BoundConfig {
            r_mode: ComplexityMode::McEstimate,
            estimator: EstimatorSettings { outer: 2, sigma_draws: 8, exhaustive_max_n: 4 },
            ..BoundConfig::new(0.5)
        };
        let r = complexities(&cfg, &pair.target, &a, &table, 1).unwrap();
        assert_abs_diff_eq!(r.povm, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r.joint, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(quantile(&[3.0], 0.25), 3.0);
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.5), 3.0);
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.25), 2.0);
        assert_eq!(quantile(&[0.0, 1.0], 0.5), 0.5);
    }

    #[test]
    fn replicate_is_deterministic_and_summarized() {
        let a = EmbeddingAnsatz::rx_rot_rx();
        let pair = fig2_pair(30);
        let table = EmbeddingTable::new(&a, &small_grid(), pair.source.features()).unwrap();
        let exp = Experiment { embedding: &a, table: &table, pair: &pair, bound: BoundConfig::new(0.5), replications: 1 };
        let one = replicate(&exp, &[(10, 4)], 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].median, one[0].q25);
        assert_eq!(one[0].median, one[0].q75);

        let exp = Experiment { replications: 25, ..exp };
        let cells = [(0, 2), (10, 2), (0, 8)];
        let r1 = replicate(&exp, &cells, 99).unwrap();
        assert_eq!(r1, replicate(&exp, &cells, 99).unwrap());
        for r in &r1 {
            assert!(r.q25 <= r.median && r.median <= r.q75);
            assert!(r.raw.iter().all(|&v| v >= -1e-9));
            assert!(r.bound.value >= 0.0);
        }
        assert!(r1[0].bound.component("complexity_term").is_some());
        assert!(r1[1].bound.component("dissimilarity_term").is_some());
    }

    #[test]
    fn shift_sweep_rows_are_sorted() {
        let a = EmbeddingAnsatz::rx_rot_rx();
        let src = GaussianTaskSpec { bins: 20, ..GaussianTaskSpec::new(1.0, -2.0, 1.0) };
        let sweep = ShiftSweep {
            source: src,
            target: src,
            shifts: vec![0.5, -0.5, 0.0],
            n_source: 10,
            n_target: 4,
            replications: 5,
            bound: BoundConfig::new(0.9),
        };
        let rows = shift_sweep(&a, &small_grid(), &sweep, 4).unwrap();
        let shifts: Vec<f64> = rows.iter().map(|r| r.shift).collect();
        assert_eq!(shifts, vec![-0.5, 0.0, 0.5]);
        assert_eq!(rows[1].dst_trace, 0.0);
        assert_eq!(rows[1].dst_tv, 0.0);
        assert!(rows[0].dst_trace > 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn staged_training_on_target_equals_joint(seed in any::<u64>(), n in 1usize..30) {
            let a = EmbeddingAnsatz::rx_rot_rx();
            let pair = fig2_pair(24);
            let table = EmbeddingTable::new(&a, &small_grid(), pair.target.features()).unwrap();
            let data = sample_dataset(&pair.target, n, seed);
            let staged = transfer_learn(&data, &data, &table).unwrap();
            let joint = joint_train(&data, &table).unwrap();
            prop_assert_eq!(&staged, &joint);
            let e1 = transfer_excess_risk(&staged, &pair.target, &table).unwrap();
            let e2 = no_transfer_excess_risk(&data, &pair.target, &table).unwrap();
            prop_assert_eq!(e1, e2);
            prop_assert!(e1 >= -1e-9);
        }
    }
}
