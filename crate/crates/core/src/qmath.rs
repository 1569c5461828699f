//! Dense complex-matrix kernel.
//!
//! Matrices here are tiny (Hilbert dimension at most 16), so everything is a
//! row-major `Vec` and the Hermitian eigensolver is a cyclic complex Jacobi
//! iteration. All higher-level quantities (trace norm, trace distance,
//! positive-part trace, PSD square root) go through [`hermitian_eig`] or the
//! eigenvalue-only path [`hermitian_eigenvalues`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{cone, cplx, czero, Real, C};

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix<R> {
    dim: usize,
    data: Vec<C<R>>,
}

impl<R: fmt::Debug> fmt::Debug for CMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{})", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim.max(1)) {
            let cells: Vec<String> = row.iter().map(|z| format!("{:?}{:+?}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<R: Real> CMatrix<R> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![czero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = cone();
        }
        m
    }

    /// Builds a matrix from rows, checking squareness and finiteness.
    pub fn from_rows(rows: Vec<Vec<C<R>>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::NotSquare { rows: dim, row: i, cols: row.len() });
            }
            data.extend(row);
        }
        let m = Self { dim, data };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    /// Builds a matrix with real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| cplx(R::lit(v), R::zero())).collect())
                .collect(),
        )
    }

    pub fn from_diag(diag: &[R]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = cplx(d, R::zero());
        }
        m
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: &[C<R>], b: &[C<R>]) -> Self {
        debug_assert_eq!(a.len(), b.len());
        let dim = a.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = a[i] * b[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C<R>] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C<R> {
        (0..self.dim).fold(czero(), |acc, i| acc + self[(i, i)])
    }

    /// Real part of the trace; the imaginary part vanishes for Hermitian input.
    pub fn trace_re(&self) -> R {
        self.trace().re
    }

    pub fn scale(&self, s: R) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_c(&self, s: C<R>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// `self += s * other`, the accumulation step of every weighted sum.
    pub fn add_scaled(&mut self, other: &Self, s: R) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + b * s;
        }
    }

    /// Largest entrywise modulus of `A - A†`.
    pub fn hermitian_deviation(&self) -> R {
        let mut dev = R::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = R::lit(0.5);
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * half;
            }
        }
        m
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> R {
        self.data.iter().fold(R::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> R {
        debug_assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .fold(R::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn frobenius_norm(&self) -> R {
        self.data.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt()
    }

    /// Re Tr(self · other) for Hermitian arguments, without forming the product.
    pub fn trace_product_re(&self, other: &Self) -> R {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = R::zero();
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self[(i, k)];
                let b = other[(k, i)];
                acc = acc + a.re * b.re - a.im * b.im;
            }
        }
        acc
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let n = self.dim * other.dim;
        let mut m = Self::zeros(n);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self[(i, j)];
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        m[(i * other.dim + k, j * other.dim + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C<R>]) -> Vec<C<R>> {
        debug_assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).fold(czero(), |acc, k| acc + self[(i, k)] * v[k]))
            .collect()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C<R>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    pub(crate) fn check_hermitian(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        let dev = self.hermitian_deviation();
        if dev > R::lit(R::HERMITIAN_TOL) {
            return Err(Error::NotHermitian { deviation: dev.as_f64() });
        }
        Ok(())
    }
}

impl<R> Index<(usize, usize)> for CMatrix<R> {
    type Output = C<R>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<R> {
        &self.data[i * self.dim + j]
    }
}

impl<R> IndexMut<(usize, usize)> for CMatrix<R> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<R> {
        &mut self.data[i * self.dim + j]
    }
}

impl<R: Real> Add for &CMatrix<R> {
    type Output = CMatrix<R>;
    fn add(self, rhs: &CMatrix<R>) -> CMatrix<R> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix addition");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<R: Real> Sub for &CMatrix<R> {
    type Output = CMatrix<R>;
    fn sub(self, rhs: &CMatrix<R>) -> CMatrix<R> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix subtraction");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<R: Real> Mul for &CMatrix<R> {
    type Output = CMatrix<R>;
    fn mul(self, rhs: &CMatrix<R>) -> CMatrix<R> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    m[(i, j)] = m[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        m
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Spectrum<R> {
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<R>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub eigenvectors: CMatrix<R>,
}

impl<R: Real> Spectrum<R> {
    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(R) -> R) -> CMatrix<R> {
        let n = self.eigenvectors.dim();
        let v = &self.eigenvectors;
        let fl: Vec<R> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = czero();
                for k in 0..n {
                    if fl[k] != R::zero() {
                        acc = acc + v[(i, k)] * v[(j, k)].conj() * fl[k];
                    }
                }
                m[(i, j)] = acc;
            }
        }
        m
    }

    pub fn reconstruct(&self) -> CMatrix<R> {
        self.map(|l| l)
    }

    /// Orthogonal projector onto the eigenvectors selected by `keep`.
    pub fn projector(&self, keep: impl Fn(R) -> bool) -> CMatrix<R> {
        self.map(|l| if keep(l) { R::one() } else { R::zero() })
    }
}

const MAX_SWEEPS: usize = 64;

/// Hermitian eigen-decomposition via cyclic complex Jacobi rotations.
///
/// The input is symmetrized as `(A + A†)/2` after the Hermiticity check.
pub fn hermitian_eig<R: Real>(a: &CMatrix<R>) -> Result<Spectrum<R>> {
    a.check_hermitian()?;
    let n = a.dim();
    let mut m = a.hermitian_part();
    for i in 0..n {
        m[(i, i)] = cplx(m[(i, i)].re, R::zero());
    }
    let mut v = CMatrix::identity(n);

    let scale = m.frobenius_norm();
    if scale == R::zero() {
        return Ok(Spectrum { eigenvalues: vec![R::zero(); n], eigenvectors: v });
    }
    let eps = R::epsilon();
    let tol = eps * eps * scale * scale;

    let mut converged = n == 1;
    for _sweep in 0..MAX_SWEEPS {
        let off: R = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)].norm_sqr())
            .sum();
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.partial_cmp(&m[(i, i)].re).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vecs = CMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vecs[(r, new_col)] = v[(r, old_col)];
        }
    }
    Ok(Spectrum { eigenvalues, eigenvectors: vecs })
}

/// Zeroes `m[p][q]` with a unitary rotation acting on rows/columns p, q.
fn jacobi_rotate<R: Real>(m: &mut CMatrix<R>, v: &mut CMatrix<R>, p: usize, q: usize) {
    let b = m[(p, q)];
    let babs = b.norm();
    if babs == R::zero() {
        return;
    }
    // Phase that makes the (p, q) entry real and positive.
    let phase = b / babs; // e^{iφ}
    let phase_conj = phase.conj(); // e^{-iφ}
    let alpha = m[(p, p)].re;
    let beta = m[(q, q)].re;
    let two = R::lit(2.0);
    let tau = (beta - alpha) / (two * babs);
    let t = if tau >= R::zero() {
        R::one() / (tau + (R::one() + tau * tau).sqrt())
    } else {
        -R::one() / (-tau + (R::one() + tau * tau).sqrt())
    };
    let c = R::one() / (R::one() + t * t).sqrt();
    let s = t * c;

    // G_pp = c, G_pq = s, G_qp = -s e^{-iφ}, G_qq = c e^{-iφ}; A <- G† A G.
    let n = m.dim();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        let new_kp = akp * c - akq * phase_conj * s;
        let new_kq = akp * s + akq * phase_conj * c;
        m[(k, p)] = new_kp;
        m[(p, k)] = new_kp.conj();
        m[(k, q)] = new_kq;
        m[(q, k)] = new_kq.conj();
    }
    m[(p, p)] = cplx(alpha - t * babs, R::zero());
    m[(q, q)] = cplx(beta + t * babs, R::zero());
    m[(p, q)] = czero();
    m[(q, p)] = czero();

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * phase_conj * s;
        v[(k, q)] = vkp * s + vkq * phase_conj * c;
    }
}

/// Eigenvalues only, descending. Closed form for 2×2, Jacobi otherwise.
pub fn hermitian_eigenvalues<R: Real>(a: &CMatrix<R>) -> Result<Vec<R>> {
    if a.dim() == 2 {
        a.check_hermitian()?;
        let half = R::lit(0.5);
        let p = a[(0, 0)].re;
        let d = a[(1, 1)].re;
        let off = (a[(0, 1)] + a[(1, 0)].conj()) * half;
        let mean = (p + d) * half;
        let gap = (((p - d) * half).powi(2) + off.norm_sqr()).sqrt();
        return Ok(vec![mean + gap, mean - gap]);
    }
    Ok(hermitian_eig(a)?.eigenvalues)
}

/// Σ|λᵢ| for Hermitian `a`.
pub fn trace_norm<R: Real>(a: &CMatrix<R>) -> Result<R> {
    Ok(hermitian_eigenvalues(a)?.into_iter().map(|l| l.abs()).sum())
}

/// T(ρ, σ) = ‖ρ − σ‖₁ / 2. Arguments need not have unit trace.
pub fn trace_distance<R: Real>(rho: &CMatrix<R>, sigma: &CMatrix<R>) -> Result<R> {
    rho.check_same_dim(sigma)?;
    Ok(trace_norm(&(rho - sigma))? * R::lit(0.5))
}

/// Sum of the strictly positive eigenvalues; the supremum of Tr(M a) over 0 ≤ M ≤ I.
pub fn positive_part_trace<R: Real>(a: &CMatrix<R>) -> Result<R> {
    Ok(hermitian_eigenvalues(a)?.into_iter().filter(|&l| l > R::zero()).sum())
}

/// Sum of the strictly negative eigenvalues; the infimum of Tr(M a) over 0 ≤ M ≤ I.
pub fn negative_part_trace<R: Real>(a: &CMatrix<R>) -> Result<R> {
    Ok(hermitian_eigenvalues(a)?.into_iter().filter(|&l| l < R::zero()).sum())
}

/// Principal square root of a PSD matrix. Eigenvalues in `[-PSD_TOL, 0)` are clamped.
pub fn psd_sqrt<R: Real>(a: &CMatrix<R>) -> Result<CMatrix<R>> {
    let spec = hermitian_eig(a)?;
    let min = spec.eigenvalues.last().copied().unwrap_or_else(R::zero);
    if min < -R::lit(R::PSD_TOL) {
        return Err(Error::NotPsd { min_eigenvalue: min.as_f64() });
    }
    Ok(spec.map(|l| l.max(R::zero()).sqrt()))
}

/// Tr √a for PSD `a`, computed from eigenvalues only.
pub fn trace_sqrt<R: Real>(a: &CMatrix<R>) -> Result<R> {
    let eig = hermitian_eigenvalues(a)?;
    let min = eig.last().copied().unwrap_or_else(R::zero);
    if min < -R::lit(R::PSD_TOL) {
        return Err(Error::NotPsd { min_eigenvalue: min.as_f64() });
    }
    Ok(eig.into_iter().map(|l| l.max(R::zero()).sqrt()).sum())
}

/// Quantum state: Hermitian, PSD, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<R> {
    mat: CMatrix<R>,
}

impl<R: Real> DensityMatrix<R> {
    /// Validates and normalizes numerical noise: symmetrizes, clamps tiny
    /// negative eigenvalues to zero.
    pub fn new(mat: CMatrix<R>) -> Result<Self> {
        mat.check_hermitian()?;
        let mat = mat.hermitian_part();
        let trace = mat.trace_re();
        if (trace - R::one()).abs() > R::lit(R::TRACE_TOL) {
            return Err(Error::NotUnitTrace { trace: trace.as_f64() });
        }
        let spec = hermitian_eig(&mat)?;
        let min = spec.eigenvalues.last().copied().unwrap_or_else(R::zero);
        if min < -R::lit(R::CLAMP_TOL) {
            return Err(Error::NotPsd { min_eigenvalue: min.as_f64() });
        }
        if min < R::zero() {
            return Ok(Self { mat: spec.map(|l| l.max(R::zero())) });
        }
        Ok(Self { mat })
    }

    /// |ψ⟩⟨ψ| for a (normalized here) state vector.
    pub fn from_pure_state(psi: &[C<R>]) -> Result<Self> {
        if psi.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt();
        if !norm.is_finite() || norm == R::zero() {
            return Err(Error::NonFinite);
        }
        let unit: Vec<C<R>> = psi.iter().map(|z| z / norm).collect();
        let mut mat = CMatrix::outer(&unit, &unit);
        for i in 0..mat.dim() {
            mat[(i, i)] = cplx(mat[(i, i)].re, R::zero());
        }
        Ok(Self { mat })
    }

    /// Computational basis state |k⟩⟨k|.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut mat = CMatrix::zeros(dim);
        mat[(k, k)] = cone();
        Self { mat }
    }

    /// Maximally mixed state I/n.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { mat: CMatrix::identity(dim).scale(R::one() / R::from_usize(dim).unwrap()) }
    }

    /// Convex combination Σ wᵢ ρᵢ. Weights must be non-negative and sum to one.
    pub fn mixture<'a>(terms: impl IntoIterator<Item = (R, &'a DensityMatrix<R>)>) -> Result<Self>
    where
        R: 'a,
    {
        let mut acc: Option<CMatrix<R>> = None;
        for (w, rho) in terms {
            if w < R::zero() {
                return Err(Error::InvalidArgument(format!("negative mixture weight {w}")));
            }
            match acc.as_mut() {
                None => acc = Some(rho.mat.scale(w)),
                Some(m) => {
                    m.check_same_dim(&rho.mat)?;
                    m.add_scaled(&rho.mat, w);
                }
            }
        }
        Self::new(acc.ok_or(Error::EmptyMatrix)?)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix<R> {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix<R> {
        self.mat
    }

    /// Tr ρ².
    pub fn purity(&self) -> R {
        self.mat.trace_product_re(&self.mat)
    }

    /// U ρ U†.
    pub fn conjugate_by(&self, u: &CMatrix<R>) -> Self {
        let mat = &(u * &self.mat) * &u.adjoint();
        Self { mat: mat.hermitian_part() }
    }

    pub(crate) fn from_matrix_unchecked(mat: CMatrix<R>) -> Self {
        Self { mat }
    }
}

impl<R: Real> AsRef<CMatrix<R>> for DensityMatrix<R> {
    fn as_ref(&self) -> &CMatrix<R> {
        &self.mat
    }
}

/// Random matrices for property checks and oracles.
pub mod random {
    use rand::Rng;
    use rand_distr::StandardNormal;

    use super::*;

    fn gaussian<R: Real, G: Rng + ?Sized>(rng: &mut G) -> C<R> {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        cplx(R::lit(re), R::lit(im))
    }

    /// Haar-random unitary via Gram–Schmidt on a complex Gaussian matrix.
    pub fn unitary<R: Real, G: Rng + ?Sized>(dim: usize, rng: &mut G) -> CMatrix<R> {
        loop {
            let mut cols: Vec<Vec<C<R>>> = Vec::with_capacity(dim);
            let mut ok = true;
            for _ in 0..dim {
                let mut v: Vec<C<R>> = (0..dim).map(|_| gaussian(rng)).collect();
                for u in &cols {
                    let proj = u.iter().zip(&v).fold(czero::<R>(), |acc, (a, b)| acc + a.conj() * b);
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi = *vi - ui * proj;
                    }
                }
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt();
                if norm < R::lit(1e-6) {
                    ok = false;
                    break;
                }
                cols.push(v.into_iter().map(|z| z / norm).collect());
            }
            if ok {
                let mut m = CMatrix::zeros(dim);
                for (j, col) in cols.iter().enumerate() {
                    for (i, &z) in col.iter().enumerate() {
                        m[(i, j)] = z;
                    }
                }
                return m;
            }
        }
    }

    /// Random pure state |ψ⟩⟨ψ| with ψ Gaussian.
    pub fn pure_state<R: Real, G: Rng + ?Sized>(dim: usize, rng: &mut G) -> DensityMatrix<R> {
        loop {
            let psi: Vec<C<R>> = (0..dim).map(|_| gaussian(rng)).collect();
            if let Ok(rho) = DensityMatrix::from_pure_state(&psi) {
                return rho;
            }
        }
    }

    /// Random mixed state U diag(p) U† with p drawn uniformly from the simplex.
    pub fn density<R: Real, G: Rng + ?Sized>(dim: usize, rng: &mut G) -> DensityMatrix<R> {
        let u = unitary::<R, G>(dim, rng);
        let raw: Vec<f64> = (0..dim).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
        let total: f64 = raw.iter().sum();
        let diag: Vec<R> = raw.iter().map(|&w| R::lit(w / total)).collect();
        let d = CMatrix::from_diag(&diag);
        DensityMatrix::from_matrix_unchecked((&(&u * &d) * &u.adjoint()).hermitian_part())
    }

    /// Random Hermitian matrix with Gaussian entries.
    pub fn hermitian<R: Real, G: Rng + ?Sized>(dim: usize, rng: &mut G) -> CMatrix<R> {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = gaussian(rng);
            }
        }
        m.hermitian_part()
    }

    /// Random effect 0 ≤ E ≤ I as V diag(u) V† with uᵢ uniform on [0, 1].
    pub fn effect<R: Real, G: Rng + ?Sized>(dim: usize, rng: &mut G) -> CMatrix<R> {
        let v = unitary::<R, G>(dim, rng);
        let diag: Vec<R> = (0..dim).map(|_| R::lit(rng.random::<f64>())).collect();
        (&(&v * &CMatrix::from_diag(&diag)) * &v.adjoint()).hermitian_part()
    }
}
