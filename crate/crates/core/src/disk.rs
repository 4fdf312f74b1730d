//! The Möbius group of the unit disk, pseudo-hyperbolic distance, and
//! functions sampled on a dyadic grid of the unit circle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Tolerance accepted on `|λ| = 1` before the factor is renormalized.
pub const UNIMODULAR_TOL: f64 = 1e-14;

/// A disk automorphism `z ↦ λ (a − z) / (1 − ā z)` with `|a| < 1`, `|λ| = 1`.
///
/// With `λ = 1` this is the involution exchanging `a` and `0`. Note that the
/// identity map is `a = 0, λ = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusAutomorphism {
    a: Complex64,
    lambda: Complex64,
}

impl MoebiusAutomorphism {
    pub fn new(a: Complex64, lambda: Complex64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(invalid(format!("automorphism point |a| = {} must be < 1", a.norm())));
        }
        let modulus = lambda.norm();
        if !((modulus - 1.0).abs() <= UNIMODULAR_TOL) {
            return Err(invalid(format!("automorphism factor |λ| = {modulus} is not unimodular")));
        }
        Ok(Self { a, lambda: lambda / modulus })
    }

    /// The involution `φ_a` (λ = 1).
    pub fn involution(a: Complex64) -> Result<Self> {
        Self::new(a, Complex64::new(1.0, 0.0))
    }

    pub fn identity() -> Self {
        Self { a: Complex64::new(0.0, 0.0), lambda: Complex64::new(-1.0, 0.0) }
    }

    /// The rotation `z ↦ ζ z`.
    pub fn rotation(zeta: Complex64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), -zeta)
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.lambda * (self.a - z) / (Complex64::new(1.0, 0.0) - self.a.conj() * z)
    }

    /// The inverse map, `w ↦ φ_a(λ̄ w)` written back in canonical form.
    pub fn inverse(&self) -> Self {
        let lc = self.lambda.conj();
        // zero of the inverse is the image of 0, i.e. λ a
        let zero = self.lambda * self.a;
        let inv = |w: Complex64| {
            let u = lc * w;
            (self.a - u) / (Complex64::new(1.0, 0.0) - self.a.conj() * u)
        };
        Self::from_zero_and_map(zero, inv)
    }

    /// `self ∘ inner`, i.e. `z ↦ self(inner(z))`.
    pub fn compose(&self, inner: &MoebiusAutomorphism) -> Self {
        // zero of the composition: the point inner sends to self's zero
        let zero = inner.inverse().eval(self.a);
        Self::from_zero_and_map(zero, |z| self.eval(inner.eval(z)))
    }

    /// Recovers (a, λ) for an automorphism known to vanish at `zero`, fixing
    /// λ from one boundary evaluation of `map`.
    fn from_zero_and_map(zero: Complex64, map: impl Fn(Complex64) -> Complex64) -> Self {
        let r = zero.norm();
        let a = if r < 1.0 { zero } else { zero * ((1.0 - f64::EPSILON) / r) };
        let probe = if r > 0.0 { -a / r } else { Complex64::new(1.0, 0.0) };
        let base = (a - probe) / (Complex64::new(1.0, 0.0) - a.conj() * probe);
        let lambda = map(probe) / base;
        Self { a, lambda: lambda / lambda.norm() }
    }
}

/// `ρ(z, w) = |(z − w) / (1 − w̄ z)|` for points of the open disk.
pub fn pseudo_hyperbolic(z: Complex64, w: Complex64) -> Result<f64> {
    if !(z.norm() < 1.0 && w.norm() < 1.0) {
        return Err(invalid("pseudo-hyperbolic distance needs both points in the open disk"));
    }
    Ok(((z - w) / (Complex64::new(1.0, 0.0) - w.conj() * z)).norm())
}

/// Uniform grid of `2^m` nodes `e^{2πik/2^m}` on the unit circle, `m ≥ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryGrid {
    log2_size: u32,
}

impl BoundaryGrid {
    pub const MAX_LOG2: u32 = 24;

    pub fn new(log2_size: u32) -> Result<Self> {
        if !(3..=Self::MAX_LOG2).contains(&log2_size) {
            return Err(invalid(format!(
                "grid log2 size {log2_size} outside 3..={}",
                Self::MAX_LOG2
            )));
        }
        Ok(Self { log2_size })
    }

    /// Grid with `len` nodes; `len` must be a power of two of at least 8.
    pub fn with_len(len: usize) -> Result<Self> {
        if !len.is_power_of_two() {
            return Err(invalid(format!("grid size {len} is not a power of two")));
        }
        Self::new(len.trailing_zeros())
    }

    pub fn log2_size(&self) -> u32 {
        self.log2_size
    }

    pub fn len(&self) -> usize {
        1 << self.log2_size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn theta(&self, k: usize) -> f64 {
        TAU * k as f64 / self.len() as f64
    }

    pub fn node(&self, k: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.theta(k))
    }

    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.len()).map(move |k| self.node(k))
    }

    /// Index of the node at `zeta`, if `zeta` lies within `tol` of a node.
    pub fn node_index(&self, zeta: Complex64, tol: f64) -> Option<usize> {
        let n = self.len();
        let turns = zeta.arg().rem_euclid(TAU) / TAU * n as f64;
        let k = (turns.round() as usize) % n;
        ((self.node(k) - zeta).norm() <= tol).then_some(k)
    }
}

/// Complex samples on the nodes of a [`BoundaryGrid`]; the finite stand-in
/// for an element of `L^∞` of the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFunction {
    grid: BoundaryGrid,
    values: Vec<Complex64>,
}

impl BoundaryFunction {
    pub fn new(grid: BoundaryGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch { left: grid.len(), right: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: BoundaryGrid, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        let values = grid.nodes().map(&mut f).collect();
        Self { grid, values }
    }

    pub fn constant(grid: BoundaryGrid, c: Complex64) -> Self {
        Self { grid, values: vec![c; grid.len()] }
    }

    /// Indicator of the node indices in `range`.
    pub fn indicator(grid: BoundaryGrid, range: std::ops::Range<usize>) -> Self {
        let values = (0..grid.len())
            .map(|k| if range.contains(&k) { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
            .collect();
        Self { grid, values }
    }

    /// Indicator of the upper half circle, nodes `[0, N/2)`.
    pub fn half_indicator(grid: BoundaryGrid) -> Self {
        Self::indicator(grid, 0..grid.len() / 2)
    }

    pub fn grid(&self) -> BoundaryGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Discrete essential supremum: the maximum modulus over the nodes.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(
        &self,
        other: &BoundaryFunction,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.check_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&x, &y)| f(x, y)).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub(crate) fn check_grid(&self, other: &BoundaryFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch { left: self.len(), right: other.len() });
        }
        Ok(())
    }

    /// Exact realization of `(ψ_ζ f)(z) = f(z ζ̄)` for `ζ = e^{2πij/N}`:
    /// node `k` of the result holds node `k − j (mod N)` of `self`.
    pub fn rotate(&self, j: usize) -> Self {
        let n = self.len();
        let j = j % n;
        let values = (0..n).map(|k| self.values[(k + n - j) % n]).collect();
        Self { grid: self.grid, values }
    }

    pub fn max_abs_diff(&self, other: &BoundaryFunction) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
    }
}

/// Free-function form of [`BoundaryFunction::rotate`].
pub fn rotate_boundary(f: &BoundaryFunction, j: usize) -> Result<BoundaryFunction> {
    if j >= f.len() {
        return Err(invalid(format!("shift {j} outside grid of {} nodes", f.len())));
    }
    Ok(f.rotate(j))
}
