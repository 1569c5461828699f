//! Binary POVM classifiers: loss and risk evaluation, Helstrom synthesis, and
//! the closed-form generalization error.
//!
//! With M₀ = I − M₁ every risk is affine in M₁:
//!
//! ```text
//! R(M) = Tr(A₁) + Tr(M₁ (A₀ − A₁)),   A_c = p(c) ρ_{θ|c}
//! ```
//!
//! so optima over 0 ≤ M₁ ≤ I reduce to positive/negative eigenspaces.

use rayon::prelude::*;

use crate::embedding::{Embedding, EmbeddingTable, ThetaVector};
use crate::error::{Error, Result};
use crate::qmath::{
    hermitian_eig, hermitian_eigenvalues, negative_part_trace, positive_part_trace, trace_distance, CMatrix,
    DensityMatrix,
};
use crate::scalar::Real;
use crate::tasks::{check_class, class_average_density, empirical_class_density, Dataset, DiscreteTask};

/// Two-outcome POVM {M₀, M₁}.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm<R> {
    m0: CMatrix<R>,
    m1: CMatrix<R>,
}

impl<R: Real> Povm<R> {
    /// Validates M₀, M₁ ≥ 0 and M₀ + M₁ = I; both elements are symmetrized.
    pub fn new(m0: CMatrix<R>, m1: CMatrix<R>) -> Result<Self> {
        m0.check_same_dim(&m1)?;
        let tol = R::lit(R::POVM_TOL);
        for (name, m) in [("M0", &m0), ("M1", &m1)] {
            if m.hermitian_deviation() > tol {
                return Err(Error::InvalidPovm(format!("{name} is not Hermitian")));
            }
        }
        let m0 = m0.hermitian_part();
        let m1 = m1.hermitian_part();
        let sum = &m0 + &m1;
        if sum.max_abs_diff(&CMatrix::identity(m0.dim())) > tol {
            return Err(Error::InvalidPovm("elements do not sum to identity".into()));
        }
        for (name, m) in [("M0", &m0), ("M1", &m1)] {
            let min = hermitian_eigenvalues(m)?.last().copied().unwrap_or_else(R::zero);
            if min < -tol {
                return Err(Error::InvalidPovm(format!("{name} has eigenvalue {min}")));
            }
        }
        Ok(Self { m0, m1 })
    }

    /// {I − E, E} for an effect 0 ≤ E ≤ I.
    pub fn from_effect(m1: CMatrix<R>) -> Result<Self> {
        let m0 = &CMatrix::identity(m1.dim()) - &m1;
        Self::new(m0, m1)
    }

    /// Always answers class `c`.
    pub fn constant(dim: usize, c: usize) -> Result<Self> {
        check_class(c)?;
        let (i, z) = (CMatrix::identity(dim), CMatrix::zeros(dim));
        Ok(if c == 0 { Self { m0: i, m1: z } } else { Self { m0: z, m1: i } })
    }

    /// Fair coin {I/2, I/2}.
    pub fn coin(dim: usize) -> Self {
        let half = CMatrix::identity(dim).scale(R::lit(0.5));
        Self { m0: half.clone(), m1: half }
    }

    pub fn element(&self, c: usize) -> &CMatrix<R> {
        if c == 0 {
            &self.m0
        } else {
            &self.m1
        }
    }

    pub fn dim(&self) -> usize {
        self.m0.dim()
    }

    /// Relabels the outcomes.
    pub fn swapped(&self) -> Self {
        Self { m0: self.m1.clone(), m1: self.m0.clone() }
    }

    /// Risk 1 − Σ_c Tr(M_c A_c) against weighted class densities A_c.
    pub fn risk_against(&self, weighted: &[CMatrix<R>; 2]) -> R {
        R::one() - self.m0.trace_product_re(&weighted[0]) - self.m1.trace_product_re(&weighted[1])
    }
}

/// ℓ = 1 − Tr(M_c ρ), clamped into [0, 1].
pub fn loss<R: Real>(povm: &Povm<R>, rho: &DensityMatrix<R>, c: usize) -> Result<R> {
    check_class(c)?;
    povm.m0.check_same_dim(rho.matrix())?;
    let v = R::one() - povm.element(c).trace_product_re(rho.matrix());
    Ok(v.max(R::zero()).min(R::one()))
}

/// Weighted class-average densities A_c = p(c) ρ_{θ|c}.
pub fn weighted_class_densities<R: Real, E: Embedding<R> + ?Sized>(
    task: &DiscreteTask<R>,
    embedding: &E,
    theta: &ThetaVector<R>,
) -> Result<[CMatrix<R>; 2]> {
    let p = task.prior();
    let a0 = class_average_density(task, embedding, theta, 0)?.into_matrix().scale(p[0]);
    let a1 = class_average_density(task, embedding, theta, 1)?.into_matrix().scale(p[1]);
    Ok([a0, a1])
}

/// Expected risk E_{p(c,x)}[ℓ] = 1 − Σ_c p(c) Tr(M_c ρ_{θ|c}).
pub fn expected_risk<R: Real, E: Embedding<R> + ?Sized>(
    povm: &Povm<R>,
    task: &DiscreteTask<R>,
    embedding: &E,
    theta: &ThetaVector<R>,
) -> Result<R> {
    let a = weighted_class_densities(task, embedding, theta)?;
    povm.m0.check_same_dim(&a[0])?;
    Ok(clamp_unit(povm.risk_against(&a)))
}

/// Average loss over the samples of `data`; bin indices refer to `features`.
pub fn empirical_risk<R: Real, E: Embedding<R> + ?Sized>(
    povm: &Povm<R>,
    data: &Dataset,
    features: &[R],
    embedding: &E,
    theta: &ThetaVector<R>,
) -> Result<R> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut total = R::zero();
    for &(c, i) in data.samples() {
        total = total + loss(povm, &embedding.embed(theta, features[i])?, c)?;
    }
    Ok(total / R::from_usize(data.len()).unwrap())
}

/// Helstrom measurement for weighted densities a₀ = p₀ρ₀, a₁ = p₁ρ₁:
/// M₁ projects onto the strictly positive eigenspace of a₁ − a₀. Eigenvalues
/// within the tie band go to M₀.
pub fn helstrom<R: Real>(a0: &CMatrix<R>, a1: &CMatrix<R>) -> Result<Povm<R>> {
    a0.check_same_dim(a1)?;
    for a in [a0, a1] {
        let min = hermitian_eigenvalues(a)?.last().copied().unwrap_or_else(R::zero);
        if min < -R::lit(R::PSD_TOL) {
            return Err(Error::NotPsd { min_eigenvalue: min.as_f64() });
        }
    }
    let total = a0.trace_re() + a1.trace_re();
    if (total - R::one()).abs() > R::lit(R::POVM_TOL) {
        return Err(Error::InvalidArgument(format!("weighted densities have total trace {total}, expected 1")));
    }
    let spec = hermitian_eig(&(a1 - a0))?;
    let tie = R::lit(R::TIE_TOL);
    let m1 = spec.projector(|l| l > tie);
    let m0 = &CMatrix::identity(a0.dim()) - &m1;
    Ok(Povm { m0, m1 })
}

/// ½ − T(a₀, a₁): the minimum risk for weighted class densities.
pub fn helstrom_risk<R: Real>(a0: &CMatrix<R>, a1: &CMatrix<R>) -> Result<R> {
    Ok(clamp_half(R::lit(0.5) - trace_distance(a0, a1)?))
}

/// R_θ = ½ − T(p(0)ρ_{θ|0}, p(1)ρ_{θ|1}).
pub fn min_expected_risk<R: Real, E: Embedding<R> + ?Sized>(
    task: &DiscreteTask<R>,
    embedding: &E,
    theta: &ThetaVector<R>,
) -> Result<R> {
    let [a0, a1] = weighted_class_densities(task, embedding, theta)?;
    helstrom_risk(&a0, &a1)
}

/// A_c = p(c) ρ_{θ_g|c} at grid point `g`, read from a precomputed table.
pub fn tabulated_class_densities<R: Real>(
    task: &DiscreteTask<R>,
    table: &EmbeddingTable<R>,
    g: usize,
) -> Result<[CMatrix<R>; 2]> {
    table.check_features(task.features())?;
    let p = task.prior();
    let side = |c: usize| table.weighted_sum(g, task.cond(c).iter().map(|&w| w * p[c]).enumerate());
    Ok([side(0), side(1)])
}

/// R_θ at every grid point of `table`.
pub fn min_risk_profile<R: Real>(task: &DiscreteTask<R>, table: &EmbeddingTable<R>) -> Result<Vec<R>> {
    table.check_features(task.features())?;
    (0..table.grid_len())
        .into_par_iter()
        .map(|g| {
            let [a0, a1] = tabulated_class_densities(task, table, g)?;
            helstrom_risk(&a0, &a1)
        })
        .collect()
}

/// Helstrom measurement on the empirical weighted class densities, plus the
/// minimized training loss. When only one class is present the POVM always
/// answers that class.
pub fn povm_from_empirical<R: Real>(counts: [usize; 2], a0: &CMatrix<R>, a1: &CMatrix<R>) -> Result<(Povm<R>, R)> {
    let risk = helstrom_risk(a0, a1)?;
    let povm = match counts {
        [0, 0] => return Err(Error::EmptyDataset),
        [_, 0] => Povm::constant(a0.dim(), 0)?,
        [0, _] => Povm::constant(a0.dim(), 1)?,
        _ => helstrom(a0, a1)?,
    };
    Ok((povm, risk))
}

/// Empirical risk minimizer over all POVMs at fixed θ.
pub fn train_povm<R: Real, E: Embedding<R> + ?Sized>(
    data: &Dataset,
    features: &[R],
    embedding: &E,
    theta: &ThetaVector<R>,
) -> Result<(Povm<R>, R)> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let (w0, m0) = empirical_class_density(data, features, embedding, theta, 0)?;
    let (w1, m1) = empirical_class_density(data, features, embedding, theta, 1)?;
    povm_from_empirical(data.class_counts(), &m0.scale(w0), &m1.scale(w1))
}

/// sup over POVMs of |R − R̂|, given true and empirical weighted densities.
///
/// R − R̂ = c₀ + Tr(M₁ B) with c₀ = Tr A₁ − Tr Â₁ and B = (A₀ − A₁) − (Â₀ − Â₁).
pub fn generalization_gap<R: Real>(truth: &[CMatrix<R>; 2], empirical: &[CMatrix<R>; 2]) -> Result<R> {
    let c0 = truth[1].trace_re() - empirical[1].trace_re();
    let b = &(&truth[0] - &truth[1]) - &(&empirical[0] - &empirical[1]);
    let hi = c0 + positive_part_trace(&b)?;
    let lo = c0 + negative_part_trace(&b)?;
    Ok(hi.abs().max(lo.abs()))
}

/// Generalization error sup_M |R_{θ,M} − R̂_{θ,M}| in closed form.
pub fn generalization_error<R: Real, E: Embedding<R> + ?Sized>(
    task: &DiscreteTask<R>,
    data: &Dataset,
    embedding: &E,
    theta: &ThetaVector<R>,
) -> Result<R> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let truth = weighted_class_densities(task, embedding, theta)?;
    let (w0, m0) = empirical_class_density(data, task.features(), embedding, theta, 0)?;
    let (w1, m1) = empirical_class_density(data, task.features(), embedding, theta, 1)?;
    generalization_gap(&truth, &[m0.scale(w0), m1.scale(w1)])
}

fn clamp_unit<R: Real>(v: R) -> R {
    v.max(R::zero()).min(R::one())
}

fn clamp_half<R: Real>(v: R) -> R {
    v.max(R::zero()).min(R::lit(0.5))
}
