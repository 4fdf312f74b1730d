//! Quadrature on the circle and the operators built on it: circle averages,
//! the mean-value and unit-spread checks, dilations, the Nevanlinna
//! characteristic, radial limits, and the dyadic cyclic averages `T_n`.
//!
//! All quadrature is the uniform trapezoid rule on a [`BoundaryGrid`], which
//! integrates trigonometric polynomials of degree below the grid size
//! exactly.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{Analytic, Composed, Dilated};
use crate::disk::{BoundaryFunction, BoundaryGrid, MoebiusAutomorphism};
use crate::error::{invalid, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Neumaier-compensated sum of real values.
pub(crate) fn compensated_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn compensated_mean(values: &[Complex64]) -> Complex64 {
    let n = values.len() as f64;
    Complex64::new(
        compensated_sum(values.iter().map(|v| v.re)) / n,
        compensated_sum(values.iter().map(|v| v.im)) / n,
    )
}

/// Mean of the node values (trapezoid rule for `(1/2π) ∫ f dθ`).
pub fn circle_average(f: &BoundaryFunction) -> Complex64 {
    compensated_mean(f.values())
}

/// Boundary samples of an evaluator on `grid`.
pub fn sample<F: Analytic + ?Sized>(f: &F, grid: BoundaryGrid) -> BoundaryFunction {
    let values: Vec<Complex64> = (0..grid.len()).into_par_iter().map(|k| f.eval(grid.node(k))).collect();
    BoundaryFunction::new(grid, values).expect("sample length matches grid")
}

/// Circle average of an evaluator sampled on `grid`.
pub fn circle_average_of<F: Analytic + ?Sized>(f: &F, grid: BoundaryGrid) -> Complex64 {
    circle_average(&sample(f, grid))
}

fn check_open_disk(a: Complex64, what: &str) -> Result<()> {
    if !(a.norm() < 1.0) {
        return Err(invalid(format!("{what} {a} is not in the open disk")));
    }
    Ok(())
}

/// `|avg_θ f(φ_a(e^{iθ})) − f(a)|`; vanishes for analytic `f` up to
/// quadrature error.
pub fn mean_value_check<F: Analytic>(f: &F, a: Complex64, grid: BoundaryGrid) -> Result<f64> {
    check_open_disk(a, "mean-value point")?;
    let phi = MoebiusAutomorphism::involution(a)?;
    let avg = circle_average_of(&Composed::new(f, phi), grid);
    Ok((avg - f.eval(a)).norm())
}

/// Best candidate found by [`unit_spread_search`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadRecord {
    /// `|avg(f ∘ φ_a)|` at the maximizing candidate.
    pub value: f64,
    pub argmax: Complex64,
    pub index: usize,
    /// The circle average itself.
    pub average: Complex64,
    /// Unimodular `c` with `c · average = value`.
    pub corrector: Complex64,
}

pub(crate) fn spread_value<F: Analytic>(f: &F, a: Complex64, grid: BoundaryGrid) -> Result<Complex64> {
    let phi = MoebiusAutomorphism::involution(a)?;
    let avg = {
        let comp = Composed::new(f, phi);
        let values: Vec<Complex64> = grid.nodes().map(|z| comp.eval(z)).collect();
        compensated_mean(&values)
    };
    Ok(avg)
}

pub(crate) fn corrector_for(avg: Complex64) -> Complex64 {
    let r = avg.norm();
    if r > 0.0 {
        avg.conj() / r
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// Maximizes `|avg(f ∘ φ_a)|` over the candidate points. Ties keep the
/// earliest candidate.
pub fn unit_spread_search<F: Analytic>(
    f: &F,
    candidates: &[Complex64],
    grid: BoundaryGrid,
) -> Result<SpreadRecord> {
    if candidates.is_empty() {
        return Err(invalid("unit spread search needs at least one candidate"));
    }
    for &a in candidates {
        check_open_disk(a, "candidate")?;
    }
    let averages: Vec<Complex64> = candidates
        .par_iter()
        .map(|&a| spread_value(f, a, grid))
        .collect::<Result<_>>()?;
    let (index, average) = averages
        .iter()
        .copied()
        .enumerate()
        .fold((0, averages[0]), |best, (i, v)| if v.norm() > best.1.norm() { (i, v) } else { best });
    Ok(SpreadRecord {
        value: average.norm(),
        argmax: candidates[index],
        index,
        average,
        corrector: corrector_for(average),
    })
}

/// `z ↦ f(r z)` for `0 < r < 1`.
pub fn dilate<F: Analytic>(f: F, r: f64) -> Result<Dilated<F>> {
    Dilated::new(f, r)
}

/// `log⁺ x`: `log x` for `x ≥ 1`, else 0.
pub fn log_plus(x: f64) -> f64 {
    if x >= 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// Trapezoid approximation of `(1/2π) ∫ log⁺ |f(r e^{it})| dt`.
pub fn nevanlinna_characteristic<F: Analytic>(f: &F, r: f64, grid: BoundaryGrid) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid(format!("radius {r} outside (0, 1)")));
    }
    let n = grid.len() as f64;
    Ok(compensated_sum(grid.nodes().map(|z| log_plus(f.eval(z * r).norm()))) / n)
}

/// `T_n f = 2^{−n} Σ_{g ∈ G_n} f(g ·)` where `G_n` is generated by `e^{2πi/2^n}`.
///
/// Computed as `T_n = A_n ⋯ A_1` with `A_j h = ½(h + ψ h)`, `ψ` the rotation by
/// `2^{m−j}` nodes. Each step is exactly invariant under the rotations it has
/// already averaged over, so `T_n T_k = T_{max(n,k)}` holds bit for bit.
pub fn cyclic_average(f: &BoundaryFunction, n: u32) -> Result<BoundaryFunction> {
    let m = f.grid().log2_size();
    if n > m {
        return Err(invalid(format!("averaging level {n} exceeds grid level {m}")));
    }
    let size = f.len();
    let mut current = f.values().to_vec();
    for j in 1..=n {
        let shift = 1usize << (m - j);
        current = (0..size)
            .map(|k| (current[k] + current[(k + size - shift) % size]) * 0.5)
            .collect();
    }
    BoundaryFunction::new(f.grid(), current)
}

/// The dyadic arc `[e^{2πik/2^n}, e^{2πi(k+1)/2^n})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicCell {
    pub k: usize,
    pub n: u32,
}

impl DyadicCell {
    /// Node indices of `grid` lying in the cell.
    pub fn node_range(&self, grid: BoundaryGrid) -> std::ops::Range<usize> {
        let width = grid.len() >> self.n;
        self.k * width..(self.k + 1) * width
    }
}

/// The `2^n` cells of level `n`.
pub fn dyadic_cells(grid: BoundaryGrid, n: u32) -> Result<Vec<DyadicCell>> {
    if n > grid.log2_size() {
        return Err(invalid(format!("cell level {n} exceeds grid level {}", grid.log2_size())));
    }
    Ok((0..1usize << n).map(|k| DyadicCell { k, n }).collect())
}

/// `f · 1_cell`.
pub fn cell_restrict(f: &BoundaryFunction, cell: DyadicCell) -> Result<BoundaryFunction> {
    if cell.n > f.grid().log2_size() || cell.k >= 1 << cell.n {
        return Err(invalid(format!("cell ({}, {}) does not fit the grid", cell.k, cell.n)));
    }
    let range = cell.node_range(f.grid());
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| if range.contains(&i) { v } else { ZERO })
        .collect();
    BoundaryFunction::new(f.grid(), values)
}

/// `(1/N) Σ f_k h_k`, the finite form of `∫ f h dm` with `h` an `L¹` density.
pub fn weak_star_pair(f: &BoundaryFunction, h: &BoundaryFunction) -> Result<Complex64> {
    f.check_grid(h)?;
    let products: Vec<Complex64> = f.values().iter().zip(h.values()).map(|(a, b)| a * b).collect();
    Ok(compensated_mean(&products))
}

/// `(1/N) Σ |h_k|`.
pub fn l1_mean(h: &BoundaryFunction) -> f64 {
    compensated_sum(h.values().iter().map(|v| v.norm())) / h.len() as f64
}

/// A finite family of `L¹` test densities.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    densities: Vec<BoundaryFunction>,
}

impl Panel {
    pub fn new(densities: Vec<BoundaryFunction>) -> Result<Self> {
        let Some(first) = densities.first() else {
            return Err(invalid("a panel needs at least one density"));
        };
        for d in &densities[1..] {
            first.check_grid(d)?;
        }
        Ok(Self { densities })
    }

    /// `{1, cos θ, sin θ, cos 2θ, sin 2θ, cos 3θ, sin 3θ, (1 + cos θ)/‖1 + cos θ‖₁}`.
    pub fn default_for(grid: BoundaryGrid) -> Self {
        let real = |f: &dyn Fn(f64) -> f64| {
            BoundaryFunction::from_fn(grid, |z| Complex64::new(f(z.arg()), 0.0))
        };
        let mut densities = vec![
            BoundaryFunction::constant(grid, Complex64::new(1.0, 0.0)),
            real(&|t| t.cos()),
            real(&|t| t.sin()),
            real(&|t| (2.0 * t).cos()),
            real(&|t| (2.0 * t).sin()),
            real(&|t| (3.0 * t).cos()),
            real(&|t| (3.0 * t).sin()),
        ];
        let bump = real(&|t| 1.0 + t.cos());
        let mass = l1_mean(&bump);
        densities.push(bump.map(|v| v / mass));
        Self { densities }
    }

    pub fn densities(&self) -> &[BoundaryFunction] {
        &self.densities
    }

    pub fn grid(&self) -> BoundaryGrid {
        self.densities[0].grid()
    }

    pub fn len(&self) -> usize {
        self.densities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.densities.is_empty()
    }

    /// Pairings of `f` against every density.
    pub fn pairings(&self, f: &BoundaryFunction) -> Result<Vec<Complex64>> {
        self.densities.iter().map(|h| weak_star_pair(f, h)).collect()
    }

    /// `max_j |⟨f − c·1, h_j⟩|`.
    pub fn distance_to_constant(&self, f: &BoundaryFunction, c: Complex64) -> Result<f64> {
        let shifted = f.map(|v| v - c);
        Ok(self.pairings(&shifted)?.iter().map(|p| p.norm()).fold(0.0, f64::max))
    }
}

/// Outcome of [`radial_limit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialLimit {
    /// `f(r_max e^{iθ})`.
    pub estimate: Complex64,
    /// `|f(r_{k+1} e^{iθ}) − f(r_k e^{iθ})|`.
    pub increments: Vec<f64>,
}

/// Samples `f(r e^{iθ})` along increasing radii. Non-convergence shows up in
/// the increments, never as an error.
pub fn radial_limit<F: Analytic + ?Sized>(f: &F, theta: f64, radii: &[f64]) -> Result<RadialLimit> {
    if radii.is_empty() {
        return Err(invalid("radial limit needs at least one radius"));
    }
    if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("radii must be strictly increasing in (0, 1)"));
    }
    let dir = Complex64::from_polar(1.0, theta);
    let values: Vec<Complex64> = radii.iter().map(|&r| f.eval(dir * r)).collect();
    Ok(RadialLimit {
        estimate: *values.last().expect("nonempty"),
        increments: values.windows(2).map(|w| (w[1] - w[0]).norm()).collect(),
    })
}

/// Radii `1 − 10^{−k}` for `k = 1..=digits`.
pub fn decimal_radii(digits: u32) -> Vec<f64> {
    (1..=digits).map(|k| 1.0 - 10f64.powi(-(k as i32))).collect()
}

/// Square lattice of spacing `step` restricted to `|z| ≤ 1 − step`.
pub fn disk_mesh(step: f64) -> Result<Vec<Complex64>> {
    if !(step > 0.0 && step < 0.5) {
        return Err(invalid(format!("mesh step {step} outside (0, 0.5)")));
    }
    let limit = 1.0 - step;
    let count = (limit / step).floor() as i64;
    let mut points = Vec::new();
    for i in -count..=count {
        for j in -count..=count {
            let z = Complex64::new(i as f64 * step, j as f64 * step);
            if z.norm() <= limit {
                points.push(z);
            }
        }
    }
    Ok(points)
}
