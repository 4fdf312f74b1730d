//! Seeded random test inputs.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::Polynomial;
use crate::blaschke::BlaschkeProduct;
use crate::disk::{BoundaryFunction, BoundaryGrid, MoebiusAutomorphism};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the disk of radius `max_radius`.
pub fn disk_point<R: Rng>(rng: &mut R, max_radius: f64) -> Complex64 {
    Complex64::from_polar(max_radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

pub fn unimodular<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))
}

/// Degree `degree` with Gaussian-like coefficients, rescaled to `Σ|c_k| = 1`.
pub fn polynomial<R: Rng>(rng: &mut R, degree: usize) -> Polynomial {
    let coeffs = (0..=degree)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Polynomial::normalized(coeffs).expect("random coefficients are nonzero")
}

pub fn automorphism<R: Rng>(rng: &mut R, max_radius: f64) -> MoebiusAutomorphism {
    MoebiusAutomorphism::new(disk_point(rng, max_radius), unimodular(rng)).expect("|a| < 1")
}

/// Finite Blaschke product with `degree` zeros in the disk of radius `max_radius`.
pub fn blaschke<R: Rng>(rng: &mut R, degree: usize, max_radius: f64) -> BlaschkeProduct {
    let zeros: Vec<Complex64> = (0..degree).map(|_| disk_point(rng, max_radius)).collect();
    BlaschkeProduct::from_points(unimodular(rng), &zeros).expect("zeros inside the disk")
}

/// Independent samples, uniform in the closed unit disk.
pub fn bounded_boundary<R: Rng>(rng: &mut R, grid: BoundaryGrid) -> BoundaryFunction {
    BoundaryFunction::from_fn(grid, |_| disk_point(rng, 1.0))
}
