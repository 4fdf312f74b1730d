//! Blaschke products, their zero sequences, and the classification data
//! (Blaschke sums, Frostman sums, separation products, ratio tests).
//!
//! Zeros are stored as a unimodular direction `u` together with the defect
//! `d = 1 − |a|` rather than as the point `a = u (1 − d)`. Sequences that
//! accumulate at the circle (the second example sequence has
//! `d = 2^{−2^n}`) keep their precision this way: every formula below is
//! written in terms of `(u, d)` so that nothing cancels.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::Analytic;
use crate::error::{invalid, Result};

/// Degree above which products are multiplied pairwise instead of left to right.
pub const PAIRWISE_DEGREE: usize = 256;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A zero `a = u (1 − d)` of a Blaschke product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    direction: Complex64,
    defect: f64,
    ln_defect: f64,
}

impl Zero {
    /// Zero at the point `a`, `|a| < 1`. The origin gets direction 1.
    pub fn new(a: Complex64) -> Result<Self> {
        let r = a.norm();
        if !(r < 1.0) {
            return Err(invalid(format!("zero {a} is not inside the unit disk")));
        }
        let direction = if r == 0.0 { ONE } else { a / r };
        let defect = 1.0 - r;
        Ok(Self { direction, defect, ln_defect: defect.ln() })
    }

    /// Zero given by direction and `1 − |a|`, `0 < defect ≤ 1`.
    pub fn from_defect(direction: Complex64, defect: f64) -> Result<Self> {
        if !(defect > 0.0 && defect <= 1.0) {
            return Err(invalid(format!("zero defect {defect} outside (0, 1]")));
        }
        Ok(Self { direction: unit(direction)?, defect, ln_defect: defect.ln() })
    }

    /// Zero given by direction and `ln(1 − |a|)`. Defects below the smallest
    /// positive double are kept in logarithmic form; the stored defect then
    /// reads as 0 and evaluation treats the factor as its boundary limit.
    pub fn from_ln_defect(direction: Complex64, ln_defect: f64) -> Result<Self> {
        if !(ln_defect <= 0.0) {
            return Err(invalid(format!("log defect {ln_defect} must be ≤ 0")));
        }
        Ok(Self { direction: unit(direction)?, defect: ln_defect.exp(), ln_defect })
    }

    pub fn point(&self) -> Complex64 {
        self.direction * (1.0 - self.defect)
    }

    pub fn direction(&self) -> Complex64 {
        self.direction
    }

    /// `1 − |a|`.
    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn ln_defect(&self) -> f64 {
        self.ln_defect
    }

    pub fn modulus(&self) -> f64 {
        1.0 - self.defect
    }

    /// `1 − |a|²`, computed as `d (2 − d)`.
    pub fn one_minus_modulus_sq(&self) -> f64 {
        self.defect * (2.0 - self.defect)
    }

    /// The normalized factor `(|a|/a) (a − z) / (1 − ā z)`, which is `−z`
    /// for `a = 0`.
    pub fn factor(&self, z: Complex64) -> Complex64 {
        let w = self.direction.conj() * z;
        let one_minus_w = ONE - w;
        let num = one_minus_w - self.defect;
        let den = one_minus_w + w * self.defect;
        if den == Complex64::new(0.0, 0.0) {
            // z coincides with a zero too close to the circle to separate
            return Complex64::new(0.0, 0.0);
        }
        num / den
    }
}

fn unit(direction: Complex64) -> Result<Complex64> {
    let r = direction.norm();
    if !((r - 1.0).abs() <= 1e-12) {
        return Err(invalid(format!("zero direction {direction} is not unimodular")));
    }
    Ok(direction / r)
}

/// `ρ(a, b)` evaluated from the `(u, d)` representation of both zeros.
pub fn zero_distance(a: &Zero, b: &Zero) -> f64 {
    let c = b.direction.conj() * a.direction;
    let (d, e) = (a.defect, b.defect);
    let num = (c - ONE) - c * d + e;
    let den = (ONE - c) + c * (d + e - d * e);
    if den.norm() == 0.0 {
        return 0.0;
    }
    (num / den).norm()
}

/// `B(z) = λ ∏ (|a_n|/a_n) (a_n − z)/(1 − ā_n z)`; a finite product, or the
/// truncation of an infinite one carrying a bound on the omitted tail
/// `Σ_{n>N} (1 − |a_n|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    lambda: Complex64,
    zeros: Vec<Zero>,
    tail_bound: f64,
}

impl BlaschkeProduct {
    pub fn new(lambda: Complex64, zeros: Vec<Zero>) -> Result<Self> {
        Self::truncated(lambda, zeros, 0.0)
    }

    pub fn from_points(lambda: Complex64, points: &[Complex64]) -> Result<Self> {
        let zeros = points.iter().map(|&a| Zero::new(a)).collect::<Result<_>>()?;
        Self::new(lambda, zeros)
    }

    /// Unimodular constant (degree 0).
    pub fn constant(lambda: Complex64) -> Result<Self> {
        Self::new(lambda, Vec::new())
    }

    pub fn truncated(lambda: Complex64, zeros: Vec<Zero>, tail_bound: f64) -> Result<Self> {
        let r = lambda.norm();
        if !((r - 1.0).abs() <= 1e-12) {
            return Err(invalid(format!("Blaschke constant |λ| = {r} is not unimodular")));
        }
        if !(tail_bound >= 0.0) {
            return Err(invalid("tail bound must be nonnegative"));
        }
        Ok(Self { lambda: lambda / r, zeros, tail_bound })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn is_finite(&self) -> bool {
        self.tail_bound == 0.0
    }

    /// Partial Blaschke sum over all stored zeros.
    pub fn condition_sum(&self) -> f64 {
        self.zeros.iter().map(Zero::defect).sum()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if self.zeros.len() > PAIRWISE_DEGREE {
            let factors: Vec<Complex64> = self.zeros.iter().map(|a| a.factor(z)).collect();
            self.lambda * pairwise_product(&factors)
        } else {
            self.zeros.iter().fold(self.lambda, |acc, a| acc * a.factor(z))
        }
    }

    /// Bound on `|B_N(z) − B(z)|` for `|z| ≤ r` when this product truncates
    /// an infinite one: each omitted factor satisfies
    /// `|1 − b_a(z)| ≤ (1 − |a|)(1 + r)/(1 − r)`.
    pub fn truncation_error(&self, r: f64) -> f64 {
        if self.tail_bound == 0.0 {
            return 0.0;
        }
        if r >= 1.0 {
            return f64::INFINITY;
        }
        (self.tail_bound * (1.0 + r) / (1.0 - r)).exp_m1()
    }
}

impl Analytic for BlaschkeProduct {
    fn eval(&self, z: Complex64) -> Complex64 {
        BlaschkeProduct::eval(self, z)
    }

    fn bound(&self) -> f64 {
        1.0
    }
}

fn pairwise_product(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => ONE,
        1 => xs[0],
        n => pairwise_product(&xs[..n / 2]) * pairwise_product(&xs[n / 2..]),
    }
}

fn check_len(zeros: &[Zero], n: usize) -> Result<()> {
    if n > zeros.len() {
        return Err(invalid(format!("requested {n} terms but only {} zeros supplied", zeros.len())));
    }
    Ok(())
}

/// `Σ_{n≤N} (1 − |a_n|)`.
pub fn blaschke_condition(zeros: &[Zero], n: usize) -> Result<f64> {
    check_len(zeros, n)?;
    Ok(zeros[..n].iter().map(Zero::defect).sum())
}

/// Individual terms `(1 − |a_n|²) / |ζ − a_n|²` of the Frostman series.
pub fn frostman_terms(zeros: &[Zero], zeta: Complex64, n: usize) -> Result<Vec<f64>> {
    check_len(zeros, n)?;
    if !((zeta.norm() - 1.0).abs() <= 1e-12) {
        return Err(invalid(format!("Frostman point {zeta} is not on the unit circle")));
    }
    Ok(zeros[..n]
        .iter()
        .map(|a| {
            // ζ − a = (ζ − u) + u d, exact when ζ = u
            let gap = (zeta - a.direction) + a.direction * a.defect;
            a.one_minus_modulus_sq() / gap.norm_sqr()
        })
        .collect())
}

/// `Σ_{n≤N} (1 − |a_n|²) / |ζ − a_n|²`.
pub fn frostman_sum(zeros: &[Zero], zeta: Complex64, n: usize) -> Result<f64> {
    Ok(frostman_terms(zeros, zeta, n)?.iter().sum())
}

/// For each `n ≤ N`, the product `∏_{m≤N, m≠n} ρ(a_n, a_m)`.
pub fn separation_products(zeros: &[Zero], n: usize) -> Result<Vec<f64>> {
    check_len(zeros, n)?;
    if n < 2 {
        return Err(invalid("separation products need at least two zeros"));
    }
    let zs = &zeros[..n];
    Ok((0..n)
        .map(|i| {
            (0..n).filter(|&j| j != i).map(|j| zero_distance(&zs[i], &zs[j])).product()
        })
        .collect())
}

/// Ratios `(1 − |a_{n+1}|)/(1 − |a_n|)` for `n < N`.
pub fn thin_ratio_test(zeros: &[Zero], n: usize) -> Result<Vec<f64>> {
    check_len(zeros, n)?;
    let zs = &zeros[..n];
    for (i, pair) in zs.windows(2).enumerate() {
        if pair[1].ln_defect > pair[0].ln_defect {
            return Err(invalid(format!(
                "zero moduli decrease between positions {} and {}",
                i + 1,
                i + 2
            )));
        }
    }
    Ok(zs
        .windows(2)
        .map(|p| {
            if p[0].defect.is_normal() && p[1].defect.is_normal() {
                p[1].defect / p[0].defect
            } else {
                (p[1].ln_defect - p[0].ln_defect).exp()
            }
        })
        .collect())
}

/// `a_n = 1/(n²+1) + n² e^{i/n}/(n²+1)`, `n = 1..=N`.
///
/// `1 − |a_n|²` has the closed form `4 n² sin²(1/2n) / (n²+1)²`, used for the
/// defect so that it is accurate even where `|a_n|` rounds towards 1.
pub fn example1_zeros(n: usize) -> Vec<Zero> {
    (1..=n)
        .map(|k| {
            let k = k as f64;
            let k2 = k * k;
            let a = (Complex64::new(1.0, 0.0) + Complex64::from_polar(k2, 1.0 / k)) / (k2 + 1.0);
            let s = (0.5 / k).sin();
            let one_minus_sq = 4.0 * k2 * s * s / ((k2 + 1.0) * (k2 + 1.0));
            let defect = one_minus_sq / (1.0 + a.norm());
            Zero { direction: a / a.norm(), defect, ln_defect: defect.ln() }
        })
        .collect()
}

/// `a_n = 1 − 2^{−2^n}`, `n = 1..=N`, stored through `ln(1 − a_n) = −2^n ln 2`.
pub fn example2_zeros(n: usize) -> Vec<Zero> {
    (1..=n)
        .map(|k| {
            let exponent = 2f64.powi(k as i32);
            Zero {
                direction: ONE,
                defect: pow2_neg(exponent),
                ln_defect: -exponent * LN_2,
            }
        })
        .collect()
}

/// `2^{−e}` for a nonnegative integer-valued `e`, exact down to the smallest
/// subnormal and 0 below it.
fn pow2_neg(e: f64) -> f64 {
    if e > 1074.0 {
        0.0
    } else {
        // powi is exact for powers of two in range
        0.5f64.powi(e as i32)
    }
}

/// Truncation of the first example product to `n` zeros. The omitted tail
/// satisfies `1 − |a_k| ≤ 1/(k²+1)² < k^{−4}`, so `Σ_{k>n} ≤ 1/(3n³)`.
pub fn example1_product(n: usize) -> Result<BlaschkeProduct> {
    if n == 0 {
        return Err(invalid("example products need at least one zero"));
    }
    let nf = n as f64;
    BlaschkeProduct::truncated(ONE, example1_zeros(n), 1.0 / (3.0 * nf * nf * nf))
}

/// Truncation of the second example product to `n` zeros. Successive
/// defects shrink by at least 1/4, so the tail is at most `4/3 · 2^{−2^{n+1}}`.
pub fn example2_product(n: usize) -> Result<BlaschkeProduct> {
    if n == 0 {
        return Err(invalid("example products need at least one zero"));
    }
    let next = pow2_neg(2f64.powi(n as i32 + 1));
    let tail = (next * 4.0 / 3.0).max(f64::from_bits(1));
    BlaschkeProduct::truncated(ONE, example2_zeros(n), tail)
}
