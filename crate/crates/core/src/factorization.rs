//! Singular inner functions of atomic measures, outer functions built from a
//! boundary log-modulus, and quotients `f̃/g̃` of boundary values with an
//! inner denominator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{fourier_coefficients, Analytic};
use crate::calculus::compensated_sum;
use crate::disk::BoundaryFunction;
use crate::error::{invalid, Error, Result};

/// Largest radius at which an outer function is evaluated.
pub const MAX_OUTER_RADIUS: f64 = 1.0 - 1e-6;

/// Tolerance on `|g̃| = 1` for quotient denominators and multipliers.
pub const INNER_TOL: f64 = 1e-9;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Points this close to the unit circle are treated as boundary points by
/// [`SingularInner`].
const ON_CIRCLE: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub position: Complex64,
    pub mass: f64,
}

/// A finite positive atomic measure on the circle.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SingularMeasure {
    atoms: Vec<Atom>,
}

impl SingularMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for (i, atom) in atoms.iter().enumerate() {
            if !(atom.mass > 0.0 && atom.mass.is_finite()) {
                return Err(invalid(format!("atom {i} has non-positive mass {}", atom.mass)));
            }
            if !((atom.position.norm() - 1.0).abs() <= 1e-12) {
                return Err(invalid(format!("atom {i} is not on the unit circle")));
            }
            if atoms[..i].iter().any(|b| (b.position - atom.position).norm() <= 1e-14) {
                return Err(invalid(format!("atom {i} repeats an earlier position")));
            }
        }
        let atoms = atoms
            .into_iter()
            .map(|a| Atom { position: a.position / a.position.norm(), mass: a.mass })
            .collect();
        Ok(Self { atoms })
    }

    /// Atoms given as `(θ_j, μ_j)` pairs.
    pub fn from_angles(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(theta, mass)| Atom { position: Complex64::from_polar(1.0, theta), mass })
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }
}

/// `S(z) = exp(−Σ_j μ_j (ζ_j + z)/(ζ_j − z))`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SingularInner {
    measure: SingularMeasure,
}

impl SingularInner {
    pub fn new(measure: SingularMeasure) -> Self {
        Self { measure }
    }

    pub fn measure(&self) -> &SingularMeasure {
        &self.measure
    }

    /// Rejects points outside the closed disk and atom positions.
    pub fn try_eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + 1e-15 {
            return Err(invalid(format!("{z} is outside the closed disk")));
        }
        if self.measure.atoms.iter().any(|a| (a.position - z).norm() <= 1e-15) {
            return Err(invalid(format!("{z} is an atom of the singular measure")));
        }
        Ok(self.kernel_exp(z))
    }

    fn kernel_exp(&self, z: Complex64) -> Complex64 {
        let r = z.norm();
        if (r - 1.0).abs() <= ON_CIRCLE {
            // (a + ζ)/(a − ζ) is purely imaginary for |ζ| = 1; rounding the
            // point off the circle would otherwise put a real part of size
            // ε/|a − ζ|² into the exponent near an atom
            let w = z / r;
            let phase = self.measure.atoms.iter().fold(0.0, |acc, a| {
                acc + a.mass * 2.0 * (w * a.position.conj()).im / (a.position - w).norm_sqr()
            });
            return Complex64::from_polar(1.0, -phase);
        }
        let exponent = self
            .measure
            .atoms
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, a| acc + a.mass * (a.position + z) / (a.position - z));
        (-exponent).exp()
    }
}

impl Analytic for SingularInner {
    /// At an atom the radial limit is 0, which is what this returns.
    fn eval(&self, z: Complex64) -> Complex64 {
        self.try_eval(z).unwrap_or(Complex64::new(0.0, 0.0))
    }

    fn bound(&self) -> f64 {
        1.0
    }
}

/// Free-function form of [`SingularInner::try_eval`] restricted to the open disk.
pub fn singular_inner_eval(mu: &SingularMeasure, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(invalid(format!("{z} is not in the open disk")));
    }
    SingularInner::new(mu.clone()).try_eval(z)
}

/// Value of an outer function with an estimate of the discretization error in
/// the exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterValue {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// `F(z) = exp((1/2π) ∫ (e^{it} + z)/(e^{it} − z) log|f̃(e^{it})| dt)`.
///
/// The log-modulus samples are read as their trigonometric interpolant, whose
/// Herglotz integral is `ĉ_0 + 2 Σ_{m≥1} ĉ_m z^m`. This is the trapezoid
/// discretization of the kernel with the aliased copies of the kernel removed;
/// the plain trapezoid sum is not usable near the circle because the kernel
/// there is far narrower than the node spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterFunction {
    /// `ĉ_0, 2ĉ_1, …, 2ĉ_{N/2−1}, ĉ_{N/2}`.
    series: Vec<Complex64>,
    tail: f64,
    max_log: f64,
}

impl OuterFunction {
    pub fn from_log_modulus(logmod: &BoundaryFunction) -> Result<Self> {
        if logmod.values().iter().any(|v| !v.re.is_finite() || v.im.abs() > 1e-12) {
            return Err(invalid("log-modulus samples must be finite and real"));
        }
        let real = logmod.map(|v| Complex64::new(v.re, 0.0));
        let spectrum = fourier_coefficients(&real);
        let half = spectrum.len() / 2;
        let mut series = Vec::with_capacity(half + 1);
        series.push(spectrum[0]);
        series.extend(spectrum[1..half].iter().map(|c| c * 2.0));
        series.push(spectrum[half]);
        // size of the top quarter of the spectrum as a proxy for what the grid misses
        let tail = 2.0 * spectrum[half / 2..=half].iter().map(|c| c.norm()).sum::<f64>();
        let max_log = real.values().iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
        Ok(Self { series, tail, max_log })
    }

    /// Rejects `|z| > 1 − 10⁻⁶`.
    pub fn eval_with_estimate(&self, z: Complex64) -> Result<OuterValue> {
        if z.norm() > MAX_OUTER_RADIUS {
            return Err(invalid(format!(
                "outer functions are evaluated only for |z| ≤ {MAX_OUTER_RADIUS}"
            )));
        }
        Ok(self.eval_unchecked(z))
    }

    fn eval_unchecked(&self, z: Complex64) -> OuterValue {
        let exponent = self.series.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        let value = exponent.exp();
        OuterValue { value, error_estimate: value.norm() * self.tail.exp_m1() }
    }
}

impl Analytic for OuterFunction {
    /// Points beyond the evaluation cap are pulled radially onto `|z| = 1 − 10⁻⁶`.
    fn eval(&self, z: Complex64) -> Complex64 {
        let r = z.norm();
        let z = if r > MAX_OUTER_RADIUS { z * (MAX_OUTER_RADIUS / r) } else { z };
        self.eval_unchecked(z).value
    }

    fn bound(&self) -> f64 {
        self.max_log.exp()
    }
}

/// Free-function form of [`OuterFunction::eval_with_estimate`].
pub fn outer_eval(logmod: &BoundaryFunction, z: Complex64) -> Result<OuterValue> {
    OuterFunction::from_log_modulus(logmod)?.eval_with_estimate(z)
}

/// Deviation of `|f|` from 1 over the nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InnerReport {
    pub max_deviation: f64,
    pub mean_deviation: f64,
}

impl InnerReport {
    pub fn is_unimodular(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

pub fn inner_check(f: &BoundaryFunction) -> InnerReport {
    let devs = f.values().iter().map(|v| (v.norm() - 1.0).abs());
    let max_deviation = devs.clone().fold(0.0, f64::max);
    let mean_deviation = compensated_sum(devs) / f.len() as f64;
    InnerReport { max_deviation, mean_deviation }
}

/// `f̃ / g̃` with `|g̃| = 1` at every node.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientFunction {
    numerator: BoundaryFunction,
    denominator: BoundaryFunction,
}

impl QuotientFunction {
    pub fn new(numerator: BoundaryFunction, denominator: BoundaryFunction) -> Result<Self> {
        numerator.check_grid(&denominator)?;
        let report = inner_check(&denominator);
        if !report.is_unimodular(INNER_TOL) {
            return Err(Error::NotUnimodular { deviation: report.max_deviation });
        }
        Ok(Self { numerator, denominator })
    }

    /// `f̃ / 1`.
    pub fn from_numerator(numerator: BoundaryFunction) -> Self {
        let denominator = BoundaryFunction::constant(numerator.grid(), ONE);
        Self { numerator, denominator }
    }

    pub fn numerator(&self) -> &BoundaryFunction {
        &self.numerator
    }

    pub fn denominator(&self) -> &BoundaryFunction {
        &self.denominator
    }

    /// Nodewise `f̃ / g̃`.
    pub fn values(&self) -> BoundaryFunction {
        self.numerator.zip_with(&self.denominator, |f, g| f / g).expect("grids checked at construction")
    }

    /// `max |f̃/g̃| = max |f̃|`.
    pub fn sup_norm(&self) -> f64 {
        self.values().sup_norm()
    }

    /// `(f̃₁ g̃₂ + f̃₂ g̃₁) / (g̃₁ g̃₂)`.
    pub fn add(&self, other: &QuotientFunction) -> Result<QuotientFunction> {
        self.numerator.check_grid(&other.numerator)?;
        let numerator = BoundaryFunction::new(
            self.numerator.grid(),
            (0..self.numerator.len())
                .map(|k| {
                    self.numerator.values()[k] * other.denominator.values()[k]
                        + other.numerator.values()[k] * self.denominator.values()[k]
                })
                .collect(),
        )?;
        let denominator = self.denominator.zip_with(&other.denominator, |a, b| a * b)?;
        Ok(Self { numerator, denominator })
    }

    /// `f̃₁ f̃₂ / (g̃₁ g̃₂)`.
    pub fn mul(&self, other: &QuotientFunction) -> Result<QuotientFunction> {
        Ok(Self {
            numerator: self.numerator.zip_with(&other.numerator, |a, b| a * b)?,
            denominator: self.denominator.zip_with(&other.denominator, |a, b| a * b)?,
        })
    }

    /// `c f̃ / g̃`.
    pub fn scale(&self, c: Complex64) -> QuotientFunction {
        Self { numerator: self.numerator.map(|v| v * c), denominator: self.denominator.clone() }
    }
}

/// Sum, product and scalar multiple in one call, mirroring the three
/// pointwise formulas.
pub fn quotient_ops(
    p: &QuotientFunction,
    q: &QuotientFunction,
    c: Complex64,
) -> Result<(QuotientFunction, QuotientFunction, QuotientFunction)> {
    Ok((p.add(q)?, p.mul(q)?, p.scale(c)))
}
