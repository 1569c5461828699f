//! Floating-point scalar abstraction.
//!
//! Every numerical routine in the crate is generic over [`Real`], which is
//! implemented for `f32` and `f64`. Tolerances that the numerics depend on are
//! attached to the scalar type so single precision gets looser thresholds.

use std::fmt;
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar usable by the matrix kernel and everything built on it.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Send
    + Sync
    + fmt::Debug
    + fmt::Display
    + 'static
{
    /// Maximum entrywise |A - A†| accepted for Hermitian inputs.
    const HERMITIAN_TOL: f64;
    /// Negative eigenvalues above `-CLAMP_TOL` are treated as zero.
    const CLAMP_TOL: f64;
    /// Eigenvalues below `-PSD_TOL` make a matrix non-PSD.
    const PSD_TOL: f64;
    /// Allowed deviation of a density trace from one.
    const TRACE_TOL: f64;
    /// Tolerance for POVM validity (PSD elements summing to identity).
    const POVM_TOL: f64;
    /// Eigenvalues of the Helstrom operator within this band count as zero.
    const TIE_TOL: f64;
    /// Objective differences below this are ties in grid searches.
    const ARGMIN_TOL: f64;

    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64`, used for reporting and sampling.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const HERMITIAN_TOL: f64 = 1e-8;
    const CLAMP_TOL: f64 = 1e-10;
    const PSD_TOL: f64 = 1e-8;
    const TRACE_TOL: f64 = 1e-10;
    const POVM_TOL: f64 = 1e-9;
    const TIE_TOL: f64 = 1e-10;
    const ARGMIN_TOL: f64 = 1e-12;
}

impl Real for f32 {
    const HERMITIAN_TOL: f64 = 1e-4;
    const CLAMP_TOL: f64 = 1e-5;
    const PSD_TOL: f64 = 1e-4;
    const TRACE_TOL: f64 = 1e-5;
    const POVM_TOL: f64 = 1e-5;
    const TIE_TOL: f64 = 1e-6;
    const ARGMIN_TOL: f64 = 1e-6;
}

/// Complex number over a [`Real`] scalar.
pub type C<R> = Complex<R>;

#[inline]
pub(crate) fn cplx<R: Real>(re: R, im: R) -> C<R> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn czero<R: Real>() -> C<R> {
    Complex::new(R::zero(), R::zero())
}

#[inline]
pub(crate) fn cone<R: Real>() -> C<R> {
    Complex::new(R::one(), R::zero())
}
