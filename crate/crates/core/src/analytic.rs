//! Evaluators for functions analytic in the disk, with a declared bound on
//! their modulus.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::disk::{BoundaryFunction, MoebiusAutomorphism};
use crate::error::{invalid, Result};

/// A function analytic in the open disk that can be evaluated on the closed
/// disk (boundary values are radial limits), together with a declared bound
/// on its sup-norm.
pub trait Analytic: Send + Sync {
    fn eval(&self, z: Complex64) -> Complex64;

    fn bound(&self) -> f64;
}

impl<T: Analytic + ?Sized> Analytic for &T {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }
    fn bound(&self) -> f64 {
        (**self).bound()
    }
}

impl<T: Analytic + ?Sized> Analytic for Box<T> {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }
    fn bound(&self) -> f64 {
        (**self).bound()
    }
}

impl<T: Analytic + ?Sized> Analytic for Arc<T> {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }
    fn bound(&self) -> f64 {
        (**self).bound()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub Complex64);

impl Analytic for Constant {
    fn eval(&self, _z: Complex64) -> Complex64 {
        self.0
    }
    fn bound(&self) -> f64 {
        self.0.norm()
    }
}

/// `Σ c_k z^k`; the declared bound is `Σ |c_k|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    /// Rescales so that `Σ |c_k| = 1`, hence `sup |p| ≤ 1` on the disk.
    pub fn normalized(coeffs: Vec<Complex64>) -> Result<Self> {
        let total: f64 = coeffs.iter().map(|c| c.norm()).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(invalid("cannot normalize the zero polynomial"));
        }
        Ok(Self { coeffs: coeffs.into_iter().map(|c| c / total).collect() })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

impl Analytic for Polynomial {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
    fn bound(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }
}

/// Wraps a closure with a caller-declared bound.
pub struct FnAnalytic<F> {
    f: F,
    bound: f64,
}

impl<F: Fn(Complex64) -> Complex64 + Send + Sync> FnAnalytic<F> {
    pub fn new(f: F, bound: f64) -> Self {
        Self { f, bound }
    }
}

impl<F: Fn(Complex64) -> Complex64 + Send + Sync> Analytic for FnAnalytic<F> {
    fn eval(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }
    fn bound(&self) -> f64 {
        self.bound
    }
}

/// `z ↦ f(r z)`.
#[derive(Debug, Clone)]
pub struct Dilated<F> {
    inner: F,
    r: f64,
}

impl<F: Analytic> Dilated<F> {
    pub fn new(inner: F, r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(invalid(format!("dilation radius {r} outside (0, 1)")));
        }
        Ok(Self { inner, r })
    }

    pub fn radius(&self) -> f64 {
        self.r
    }
}

impl<F: Analytic> Analytic for Dilated<F> {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.inner.eval(z * self.r)
    }
    fn bound(&self) -> f64 {
        self.inner.bound()
    }
}

/// `f ∘ φ` for a disk automorphism `φ`.
#[derive(Debug, Clone)]
pub struct Composed<F> {
    inner: F,
    map: MoebiusAutomorphism,
}

impl<F: Analytic> Composed<F> {
    pub fn new(inner: F, map: MoebiusAutomorphism) -> Self {
        Self { inner, map }
    }
}

impl<F: Analytic> Analytic for Composed<F> {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.inner.eval(self.map.eval(z))
    }
    fn bound(&self) -> f64 {
        self.inner.bound()
    }
}

/// Pointwise product of evaluators.
#[derive(Clone, Default)]
pub struct Product {
    factors: Vec<Arc<dyn Analytic>>,
}

impl Product {
    pub fn new(factors: Vec<Arc<dyn Analytic>>) -> Self {
        Self { factors }
    }
}

impl Analytic for Product {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.factors.iter().fold(Complex64::new(1.0, 0.0), |acc, f| acc * f.eval(z))
    }
    fn bound(&self) -> f64 {
        self.factors.iter().map(|f| f.bound()).product()
    }
}

/// Analytic function recovered from boundary samples: the nonnegative-frequency
/// part of the trigonometric interpolant, `Σ_{0≤m<N/2} ĉ_m z^m`.
///
/// `analyticity_defect` is the ℓ¹ mass of the discarded negative-frequency
/// coefficients; it is at rounding level exactly when the samples are the
/// boundary values of a polynomial of degree below `N/2`.
#[derive(Debug, Clone)]
pub struct CauchyExtension {
    coeffs: Vec<Complex64>,
    analyticity_defect: f64,
    bound: f64,
}

impl CauchyExtension {
    pub fn from_boundary(f: &BoundaryFunction) -> Self {
        let spectrum = fourier_coefficients(f);
        let n = spectrum.len();
        let half = n / 2;
        let coeffs = spectrum[..half].to_vec();
        let analyticity_defect = spectrum[half..].iter().map(|c| c.norm()).sum();
        Self { coeffs, analyticity_defect, bound: f.sup_norm() }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn analyticity_defect(&self) -> f64 {
        self.analyticity_defect
    }
}

impl Analytic for CauchyExtension {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
    fn bound(&self) -> f64 {
        self.bound
    }
}

/// Discrete Fourier coefficients `ĉ_m = (1/N) Σ_k f_k e^{−2πimk/N}`, index
/// `m` in `0..N` (indices above `N/2` are the negative frequencies `m − N`).
pub(crate) fn fourier_coefficients(f: &BoundaryFunction) -> Vec<Complex64> {
    let n = f.len();
    let mut buf = f.values().to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}
