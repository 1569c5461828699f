//! Task-based distances between embedding parameters and the source/target
//! dissimilarity measures D^ST_trace and D^ST_TV.
//!
//! Every supremum over Θ is taken over a finite [`ThetaGrid`].

use crate::classifier::{min_expected_risk, min_risk_profile};
use crate::embedding::{grid_argmin, Embedding, EmbeddingTable, ThetaGrid, ThetaVector};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tasks::{tv_distance, DiscreteTask};

/// Slack allowed when checking the dissimilarity inequality.
pub const DISSIMILARITY_SLACK: f64 = 1e-9;

/// Source and target tasks.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskPair<R> {
    pub source: DiscreteTask<R>,
    pub target: DiscreteTask<R>,
}

impl<R: Real> TaskPair<R> {
    pub fn new(source: DiscreteTask<R>, target: DiscreteTask<R>) -> Self {
        Self { source, target }
    }

    /// Both tasks live on the same feature values.
    pub fn is_aligned(&self) -> bool {
        self.source.features() == self.target.features()
    }
}

/// d(θ, θ') = |R_θ' − R_θ|.
pub fn task_distance<R: Real, E: Embedding<R> + ?Sized>(
    task: &DiscreteTask<R>,
    theta: &ThetaVector<R>,
    theta2: &ThetaVector<R>,
    embedding: &E,
) -> Result<R> {
    Ok((min_expected_risk(task, embedding, theta2)? - min_expected_risk(task, embedding, theta)?).abs())
}

/// Minimum risk R_θ of each task at every grid point.
pub fn risk_profiles<R: Real, E: Embedding<R> + ?Sized>(
    pair: &TaskPair<R>,
    embedding: &E,
    grid: &ThetaGrid<R>,
) -> Result<(Vec<R>, Vec<R>)> {
    let source_table = EmbeddingTable::new(embedding, grid, pair.source.features())?;
    let source = min_risk_profile(&pair.source, &source_table)?;
    let target = if pair.is_aligned() {
        min_risk_profile(&pair.target, &source_table)?
    } else {
        min_risk_profile(&pair.target, &EmbeddingTable::new(embedding, grid, pair.target.features())?)?
    };
    Ok((source, target))
}

/// 2 max_g |R^S_g − R^T_g| over two risk profiles on the same grid.
pub fn dst_trace_from_profiles<R: Real>(source: &[R], target: &[R]) -> R {
    let two = R::lit(2.0);
    source.iter().zip(target).map(|(&s, &t)| two * (s - t).abs()).fold(R::zero(), R::max)
}

/// D^ST_trace = 2 sup_θ |R^S_θ − R^T_θ|, grid-restricted.
pub fn dst_trace<R: Real, E: Embedding<R> + ?Sized>(
    pair: &TaskPair<R>,
    embedding: &E,
    grid: &ThetaGrid<R>,
) -> Result<R> {
    let (s, t) = risk_profiles(pair, embedding, grid)?;
    Ok(dst_trace_from_profiles(&s, &t))
}

/// D^ST_TV = 2 TV(p^T_c, p^S_c) + 2 Σ_c p^S(c) TV(p^T(·|c), p^S(·|c)).
pub fn dst_tv<R: Real>(pair: &TaskPair<R>) -> Result<R> {
    if !pair.is_aligned() {
        return Err(Error::UnalignedSupport);
    }
    let (s, t) = (&pair.source, &pair.target);
    let two = R::lit(2.0);
    let mut total = two * tv_distance(&t.prior(), &s.prior())?;
    for c in 0..2 {
        total = total + two * s.prior()[c] * tv_distance(t.cond(c), s.cond(c))?;
    }
    Ok(total)
}

/// Outcome of checking d^T(θ, θ*^T) ≤ d^S(θ, θ*^S) + d_st over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityReport<R> {
    /// Largest amount by which the inequality fails (0 if it always holds).
    pub max_violation: R,
    /// Grid index attaining `max_violation` (the largest left-minus-right gap).
    pub worst_index: usize,
    pub worst_theta: ThetaVector<R>,
    pub points_checked: usize,
}

impl<R: Real> DissimilarityReport<R> {
    pub fn passed(&self) -> bool {
        self.max_violation <= R::lit(DISSIMILARITY_SLACK)
    }
}

/// Largest value of d^T(g, g*^T) − d^S(g, g*^S) − d_st and where it occurs.
pub fn dissimilarity_gap<R: Real>(source: &[R], target: &[R], d_st: R) -> Result<(R, usize)> {
    if source.is_empty() || source.len() != target.len() {
        return Err(Error::DimMismatch { left: source.len(), right: target.len() });
    }
    let best_s = source[grid_argmin(source).unwrap()];
    let best_t = target[grid_argmin(target).unwrap()];
    let mut worst = (R::neg_infinity(), 0);
    for (g, (&s, &t)) in source.iter().zip(target).enumerate() {
        let gap = (t - best_t).abs() - (s - best_s).abs() - d_st;
        if gap > worst.0 {
            worst = (gap, g);
        }
    }
    Ok(worst)
}

/// Verifies Definition-style D^ST-dissimilarity for every grid point.
pub fn check_dissimilarity<R: Real, E: Embedding<R> + ?Sized>(
    pair: &TaskPair<R>,
    embedding: &E,
    grid: &ThetaGrid<R>,
    d_st: R,
) -> Result<DissimilarityReport<R>> {
    let (s, t) = risk_profiles(pair, embedding, grid)?;
    let (gap, worst_index) = dissimilarity_gap(&s, &t, d_st)?;
    Ok(DissimilarityReport {
        max_violation: gap.max(R::zero()),
        worst_index,
        worst_theta: grid.get(worst_index).clone(),
        points_checked: grid.len(),
    })
}
