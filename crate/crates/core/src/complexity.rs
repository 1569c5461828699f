//! Rényi-2 mutual information, Monte-Carlo Rademacher complexities with exact
//! inner suprema, and the analytic complexity caps.
//!
//! With M₀ = I − M₁ the loss of sample (c, x) is δ_c(1) + Tr(M₁ Δ ρ(x)), where
//! Δ = +1 for c = 0 and −1 for c = 1. Hence for fixed θ and sign vector σ
//!
//! ```text
//! sup_M Σⱼ σⱼ ℓⱼ = Σⱼ σⱼ δ_{cⱼ}(1) + Tr[(Σⱼ σⱼ Δⱼ ρ(xⱼ))₊]
//! ```
//!
//! and both estimators divide that by √N.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{Embedding, EmbeddingTable, ThetaGrid, ThetaVector};
use crate::error::{Error, Result};
use crate::qmath::{positive_part_trace, trace_sqrt, CMatrix};
use crate::rng::{stream, Role};
use crate::scalar::Real;
use crate::tasks::{sample_with, DiscreteTask};

/// Tr √(Σₓ p(x) ρ(x)²) for states listed per feature bin.
fn trace_sqrt_second_moment<'a, R: Real>(
    dim: usize,
    terms: impl IntoIterator<Item = (R, &'a CMatrix<R>)>,
) -> Result<R> {
    let mut acc = CMatrix::zeros(dim);
    for (p, rho) in terms {
        if p != R::zero() {
            acc.add_scaled(&(rho * rho), p);
        }
    }
    trace_sqrt(&acc)
}

/// I₂(X; R_θ) = 2 log₂ Tr √(Σₓ p(x) ρ_θ(x)²) in bits.
pub fn renyi2_mi<R: Real, E: Embedding<R> + ?Sized>(
    task: &DiscreteTask<R>,
    embedding: &E,
    theta: &ThetaVector<R>,
) -> Result<R> {
    let states = task
        .features()
        .iter()
        .map(|&x| embedding.embed(theta, x).map(|d| d.into_matrix()))
        .collect::<Result<Vec<_>>>()?;
    let t = trace_sqrt_second_moment(embedding.dim(), task.marginal().into_iter().zip(&states))?;
    Ok(mi_from_trace_sqrt(t))
}

fn mi_from_trace_sqrt<R: Real>(t: R) -> R {
    (R::lit(2.0) * t.log2()).max(R::zero())
}

/// I₂ at every grid point of `table`.
pub fn renyi2_mi_profile<R: Real>(task: &DiscreteTask<R>, table: &EmbeddingTable<R>) -> Result<Vec<R>> {
    table.check_features(task.features())?;
    let p = task.marginal();
    (0..table.grid_len())
        .into_par_iter()
        .map(|g| {
            let terms = p.iter().enumerate().map(|(i, &w)| (w, table.state(g, i)));
            trace_sqrt_second_moment(table.dim(), terms).map(mi_from_trace_sqrt)
        })
        .collect()
}

/// 0.5 √(2^{sup I₂}) given sup I₂ in bits.
pub fn cap_from_mi<R: Real>(mi_sup: R) -> R {
    R::lit(0.5) * R::lit(2.0).powf(mi_sup).sqrt()
}

/// Grid supremum of I₂ and the POVM-complexity cap 0.5 √(sup_θ 2^{I₂}).
pub fn rademacher_cap_mi<R: Real, E: Embedding<R> + ?Sized>(
    task: &DiscreteTask<R>,
    embedding: &E,
    grid: &ThetaGrid<R>,
) -> Result<R> {
    let table = EmbeddingTable::new(embedding, grid, task.features())?;
    let sup = max_of(&renyi2_mi_profile(task, &table)?);
    Ok(cap_from_mi(sup))
}

pub fn max_of<R: Real>(v: &[R]) -> R {
    v.iter().copied().fold(R::neg_infinity(), R::max)
}

/// Joint-complexity cap n √(E_{p(x)}[sup_θ Tr ρ_θ(x)²]).
pub fn rademacher_cap_dim<R: Real, E: Embedding<R> + ?Sized>(embedding: &E, task: &DiscreteTask<R>) -> R {
    let n = R::from_usize(embedding.dim()).unwrap();
    let purity: R = task
        .features()
        .iter()
        .zip(task.marginal())
        .map(|(&x, p)| p * embedding.purity_envelope(x))
        .sum();
    n * purity.sqrt()
}

/// Tr √(E_{p(x)}[κ(x)²]) for one-time encodings, κ(x) being the state after
/// the data-encoding stage.
pub fn one_time_encoding_cap<R: Real, E: Embedding<R> + ?Sized>(task: &DiscreteTask<R>, embedding: &E) -> Result<R> {
    let kappas = task
        .features()
        .iter()
        .map(|&x| embedding.encoding_state(x).map(|d| d.into_matrix()))
        .collect::<Result<Vec<_>>>()?;
    trace_sqrt_second_moment(embedding.dim(), task.marginal().into_iter().zip(&kappas))
}

/// sup over POVMs of Σⱼ σⱼ (1 − Tr(M_{cⱼ} ρⱼ)), unnormalized.
pub fn signed_loss_sup<R: Real>(labels: &[usize], states: &[&CMatrix<R>], signs: &[bool]) -> Result<R> {
    if labels.is_empty() || labels.len() != states.len() || labels.len() != signs.len() {
        return Err(Error::InvalidArgument("labels, states and signs must be nonempty and equally long".into()));
    }
    let mut lin = R::zero();
    let mut b = CMatrix::zeros(states[0].dim());
    for ((&c, rho), &plus) in labels.iter().zip(states).zip(signs) {
        let s = if plus { R::one() } else { -R::one() };
        if c == 1 {
            lin = lin + s;
            b.add_scaled(rho, -s);
        } else {
            b.add_scaled(rho, s);
        }
    }
    Ok(lin + positive_part_trace(&b)?)
}

/// Monte-Carlo settings shared by both Rademacher estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorSettings {
    /// Independent datasets drawn from the task.
    pub outer: usize,
    /// Random sign vectors per dataset.
    pub sigma_draws: usize,
    /// Up to this N all 2^N sign vectors are enumerated instead of sampled.
    pub exhaustive_max_n: usize,
}

impl Default for EstimatorSettings {
    fn default() -> Self {
        Self { outer: 50, sigma_draws: 100, exhaustive_max_n: 12 }
    }
}

impl EstimatorSettings {
    pub fn validate(&self) -> Result<()> {
        if self.outer == 0 || self.sigma_draws == 0 {
            return Err(Error::InvalidArgument("outer and sigma_draws must be >= 1".into()));
        }
        if self.exhaustive_max_n > 24 {
            return Err(Error::InvalidArgument(format!(
                "exhaustive_max_n = {} would enumerate too many sign vectors (max 24)",
                self.exhaustive_max_n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RademacherEstimate<R> {
    pub value: R,
    pub std_error: R,
    pub outer_draws: usize,
    /// Sign vectors per dataset (2^N when enumerated).
    pub sigma_draws: usize,
    pub n: usize,
    pub exhaustive: bool,
    pub grid_points: usize,
}

/// Both estimators computed from the same data and sign draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RademacherPair<R> {
    pub povm: RademacherEstimate<R>,
    pub joint: RademacherEstimate<R>,
}

/// Running sums for one dataset draw.
struct OuterStats<R> {
    per_theta_sum: Vec<R>,
    per_theta_sumsq: Vec<R>,
    joint_sum: R,
    joint_sumsq: R,
    draws: usize,
}

/// POVM-class complexity sup_θ E[sup_M ...], grid-restricted.
pub fn rademacher_povm<R: Real, E: Embedding<R> + ?Sized>(
    task: &DiscreteTask<R>,
    embedding: &E,
    grid: &ThetaGrid<R>,
    n: usize,
    settings: &EstimatorSettings,
    seed: u64,
) -> Result<RademacherEstimate<R>> {
    let table = EmbeddingTable::new(embedding, grid, task.features())?;
    Ok(rademacher_estimates(task, &table, n, settings, seed)?.povm)
}

/// Joint complexity E[sup_{θ, M} ...], grid-restricted.
pub fn rademacher_joint<R: Real, E: Embedding<R> + ?Sized>(
    task: &DiscreteTask<R>,
    embedding: &E,
    grid: &ThetaGrid<R>,
    n: usize,
    settings: &EstimatorSettings,
    seed: u64,
) -> Result<RademacherEstimate<R>> {
    let table = EmbeddingTable::new(embedding, grid, task.features())?;
    Ok(rademacher_estimates(task, &table, n, settings, seed)?.joint)
}

/// Both complexities on a precomputed table. Dataset `o` uses stream
/// `(seed, o)`, so results do not depend on the number of worker threads.
pub fn rademacher_estimates<R: Real>(
    task: &DiscreteTask<R>,
    table: &EmbeddingTable<R>,
    n: usize,
    settings: &EstimatorSettings,
    seed: u64,
) -> Result<RademacherPair<R>> {
    settings.validate()?;
    if n == 0 {
        return Err(Error::InvalidArgument("sample size must be >= 1".into()));
    }
    table.check_features(task.features())?;
    let exhaustive = n <= settings.exhaustive_max_n;
    let stats: Vec<OuterStats<R>> = (0..settings.outer)
        .into_par_iter()
        .map(|o| outer_draw(task, table, n, settings, exhaustive, seed, o as u64))
        .collect::<Result<_>>()?;

    let outer = stats.len();
    let draws = stats[0].draws;
    let rn = |k: usize| R::from_usize(k).unwrap();
    let grid_points = table.grid_len();

    // POVM class: sup over θ of the grand mean
    let mut mean_per_theta = vec![R::zero(); grid_points];
    for s in &stats {
        for (m, &v) in mean_per_theta.iter_mut().zip(&s.per_theta_sum) {
            *m = *m + v / rn(s.draws);
        }
    }
    mean_per_theta.iter_mut().for_each(|m| *m = *m / rn(outer));
    let best = mean_per_theta
        .iter()
        .enumerate()
        .fold(0, |b, (g, &v)| if v > mean_per_theta[b] { g } else { b });
    let povm_outer: Vec<R> = stats.iter().map(|s| s.per_theta_sum[best] / rn(s.draws)).collect();
    let povm_se = standard_error(
        &povm_outer,
        exhaustive,
        stats[0].per_theta_sum[best],
        stats[0].per_theta_sumsq[best],
        draws,
    );

    let joint_outer: Vec<R> = stats.iter().map(|s| s.joint_sum / rn(s.draws)).collect();
    let joint_value = joint_outer.iter().copied().sum::<R>() / rn(outer);
    let joint_se = standard_error(&joint_outer, exhaustive, stats[0].joint_sum, stats[0].joint_sumsq, draws);

    let make = |value, std_error| RademacherEstimate {
        value,
        std_error,
        outer_draws: outer,
        sigma_draws: draws,
        n,
        exhaustive,
        grid_points,
    };
    Ok(RademacherPair { povm: make(mean_per_theta[best], povm_se), joint: make(joint_value, joint_se) })
}

/// Standard error across dataset draws; with a single draw, across sampled
/// sign vectors (zero when they were enumerated).
fn standard_error<R: Real>(outer_means: &[R], exhaustive: bool, sum: R, sumsq: R, draws: usize) -> R {
    let rn = |k: usize| R::from_usize(k).unwrap();
    let k = outer_means.len();
    if k >= 2 {
        let mean = outer_means.iter().copied().sum::<R>() / rn(k);
        let var = outer_means.iter().map(|&v| (v - mean) * (v - mean)).sum::<R>() / rn(k - 1);
        return (var / rn(k)).sqrt();
    }
    if exhaustive || draws < 2 {
        return R::zero();
    }
    let mean = sum / rn(draws);
    let var = ((sumsq - rn(draws) * mean * mean) / rn(draws - 1)).max(R::zero());
    (var / rn(draws)).sqrt()
}

fn outer_draw<R: Real>(
    task: &DiscreteTask<R>,
    table: &EmbeddingTable<R>,
    n: usize,
    settings: &EstimatorSettings,
    exhaustive: bool,
    seed: u64,
    o: u64,
) -> Result<OuterStats<R>> {
    let mut data_rng = stream(seed, o, Role::RademacherData);
    let data = sample_with(task, n, &mut data_rng, seed);

    // distinct bins carry the summed weight Σ σⱼ Δⱼ of their samples
    let mut slots: Vec<usize> = data.samples().iter().map(|&(_, i)| i).collect();
    slots.sort_unstable();
    slots.dedup();
    let slot_of: Vec<usize> = data.samples().iter().map(|&(_, i)| slots.binary_search(&i).unwrap()).collect();
    let delta: Vec<R> = data.samples().iter().map(|&(c, _)| if c == 0 { R::one() } else { -R::one() }).collect();
    let is_one: Vec<bool> = data.samples().iter().map(|&(c, _)| c == 1).collect();

    let grid_points = table.grid_len();
    let scale = R::one() / R::from_usize(n).unwrap().sqrt();
    let mut stats = OuterStats {
        per_theta_sum: vec![R::zero(); grid_points],
        per_theta_sumsq: vec![R::zero(); grid_points],
        joint_sum: R::zero(),
        joint_sumsq: R::zero(),
        draws: 0,
    };
    let mut weights = vec![R::zero(); slots.len()];
    let mut visit = |lin: R, weights: &[R]| -> Result<()> {
        let mut best = R::neg_infinity();
        for g in 0..grid_points {
            let b = table.weighted_sum(g, weights.iter().enumerate().map(|(k, &w)| (slots[k], w)));
            let v = (lin + positive_part_trace(&b)?) * scale;
            stats.per_theta_sum[g] = stats.per_theta_sum[g] + v;
            stats.per_theta_sumsq[g] = stats.per_theta_sumsq[g] + v * v;
            best = best.max(v);
        }
        stats.joint_sum = stats.joint_sum + best;
        stats.joint_sumsq = stats.joint_sumsq + best * best;
        stats.draws += 1;
        Ok(())
    };

    let two = R::lit(2.0);
    if exhaustive {
        // Gray-code walk: one sign flips per step, starting from all +1
        let mut signs = vec![true; n];
        let mut lin = R::zero();
        for j in 0..n {
            weights[slot_of[j]] = weights[slot_of[j]] + delta[j];
            if is_one[j] {
                lin = lin + R::one();
            }
        }
        visit(lin, &weights)?;
        for step in 1u64..(1u64 << n) {
            let j = step.trailing_zeros() as usize;
            let s = if signs[j] { -two } else { two };
            signs[j] = !signs[j];
            weights[slot_of[j]] = weights[slot_of[j]] + s * delta[j];
            if is_one[j] {
                lin = lin + s;
            }
            visit(lin, &weights)?;
        }
    } else {
        let mut sigma_rng = stream(seed, o, Role::RademacherSigma);
        for _ in 0..settings.sigma_draws {
            weights.iter_mut().for_each(|w| *w = R::zero());
            let mut lin = R::zero();
            for j in 0..n {
                let s = if sigma_rng.random_bool(0.5) { R::one() } else { -R::one() };
                weights[slot_of[j]] = weights[slot_of[j]] + s * delta[j];
                if is_one[j] {
                    lin = lin + s;
                }
            }
            visit(lin, &weights)?;
        }
    }
    Ok(stats)
}
