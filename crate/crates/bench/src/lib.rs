//! Shared inputs for the criterion benchmarks.

use hardylab::{BoundaryFunction, BoundaryGrid, Polynomial};
use num_complex::Complex64;

/// `(z + z² + … + z^degree) / degree`, sup-norm 1.
pub fn averaged_monomials(degree: usize) -> Polynomial {
    let mut coeffs = vec![Complex64::new(0.0, 0.0)];
    coeffs.extend(std::iter::repeat_n(Complex64::new(1.0 / degree as f64, 0.0), degree));
    Polynomial::new(coeffs)
}

/// A unimodular-bounded grid function with a jump and a smooth part.
pub fn rough_boundary(grid: BoundaryGrid) -> BoundaryFunction {
    BoundaryFunction::from_fn(grid, |z| {
        let step = if z.im >= 0.0 { 0.6 } else { -0.2 };
        Complex64::new(step, 0.0) + 0.3 * z * z
    })
}
