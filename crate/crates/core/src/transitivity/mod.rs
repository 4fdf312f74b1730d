//! Weighted composition isometries `f ↦ ψ̃ · (f ∘ φ)`, their orbits, and the
//! finite-resolution convex-hull experiments built on them.

mod hull;
mod marshall;
mod step1;

pub use hull::{hull_distance, hull_distance_with, HullResult};
pub use marshall::{marshall_approximate, AtomSpec, CellError, ConvexCombination, MarshallParams, MarshallResult};
pub use step1::{step1_demo, Representative, SpreadStep, Step1Input, Step1Report};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::Analytic;
use crate::blaschke::BlaschkeProduct;
use crate::disk::{BoundaryFunction, BoundaryGrid, MoebiusAutomorphism};
use crate::error::{Error, Result};
use crate::factorization::{inner_check, INNER_TOL};

/// Node lookups accept points this close to a grid node.
const NODE_TOL: f64 = 1e-12;

/// A unimodular function on the circle used as the outer weight `ψ̃`.
#[derive(Debug, Clone, PartialEq)]
pub enum Multiplier {
    Constant(Complex64),
    /// Boundary values of a finite Blaschke product.
    Inner(BlaschkeProduct),
    /// Conjugated boundary values of a finite Blaschke product.
    ConjugateInner(BlaschkeProduct),
    /// Grid samples; only defined at the grid nodes.
    Sampled(BoundaryFunction),
    Product(Box<Multiplier>, Box<Multiplier>),
    /// `ψ ∘ φ`.
    Composed(Box<Multiplier>, MoebiusAutomorphism),
}

impl Multiplier {
    pub fn at(&self, zeta: Complex64) -> Result<Complex64> {
        Ok(match self {
            Multiplier::Constant(c) => *c,
            Multiplier::Inner(b) => b.eval(zeta),
            Multiplier::ConjugateInner(b) => b.eval(zeta).conj(),
            Multiplier::Sampled(f) => f.values()[lookup(f.grid(), zeta)?],
            Multiplier::Product(a, b) => a.at(zeta)? * b.at(zeta)?,
            Multiplier::Composed(inner, phi) => inner.at(phi.eval(zeta))?,
        })
    }

    pub fn sample(&self, grid: BoundaryGrid) -> Result<BoundaryFunction> {
        let values = grid.nodes().map(|z| self.at(z)).collect::<Result<_>>()?;
        BoundaryFunction::new(grid, values)
    }
}

fn lookup(grid: BoundaryGrid, zeta: Complex64) -> Result<usize> {
    grid.node_index(zeta, NODE_TOL).ok_or(Error::OffGrid { re: zeta.re, im: zeta.im })
}

/// The isometry `f ↦ ψ̃ · (f ∘ φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCompositionOp {
    pub multiplier: Multiplier,
    pub map: MoebiusAutomorphism,
}

impl WeightedCompositionOp {
    pub fn new(multiplier: Multiplier, map: MoebiusAutomorphism) -> Self {
        Self { multiplier, map }
    }

    pub fn identity() -> Self {
        Self::new(Multiplier::Constant(Complex64::new(1.0, 0.0)), MoebiusAutomorphism::identity())
    }

    /// The boundary rotation `ψ_ζ` for `ζ` the `j`-th node of `grid`.
    pub fn grid_rotation(grid: BoundaryGrid, j: usize) -> Self {
        let map = MoebiusAutomorphism::rotation(grid.node(j).conj()).expect("grid nodes are unimodular");
        Self::new(Multiplier::Constant(Complex64::new(1.0, 0.0)), map)
    }

    /// The operator applying `self` first and `next` second: multiplier
    /// `ψ′ · (ψ ∘ φ′)`, map `φ ∘ φ′`.
    pub fn then(&self, next: &WeightedCompositionOp) -> WeightedCompositionOp {
        WeightedCompositionOp {
            multiplier: Multiplier::Product(
                Box::new(next.multiplier.clone()),
                Box::new(Multiplier::Composed(Box::new(self.multiplier.clone()), next.map)),
            ),
            map: self.map.compose(&next.map),
        }
    }
}

/// What an operator acts on.
pub enum Source<'a> {
    Analytic(&'a dyn Analytic),
    /// Grid samples; the operator's map must send nodes to nodes.
    Sampled(&'a BoundaryFunction),
    /// The (lazily evaluated) image of a source under an operator.
    Applied(&'a WeightedCompositionOp, Box<Source<'a>>),
}

impl Source<'_> {
    pub fn at(&self, zeta: Complex64) -> Result<Complex64> {
        match self {
            Source::Analytic(f) => Ok(f.eval(zeta)),
            Source::Sampled(f) => Ok(f.values()[lookup(f.grid(), zeta)?]),
            Source::Applied(op, inner) => Ok(op.multiplier.at(zeta)? * inner.at(op.map.eval(zeta))?),
        }
    }
}

/// Node `k` of the result is `ψ̃(ζ_k) · x(φ(ζ_k))`. Fails if the multiplier
/// deviates from unimodular by more than `1e−9` on the grid.
pub fn apply_op(op: &WeightedCompositionOp, x: &Source<'_>, grid: BoundaryGrid) -> Result<BoundaryFunction> {
    let psi = op.multiplier.sample(grid)?;
    let report = inner_check(&psi);
    if !report.is_unimodular(INNER_TOL) {
        return Err(Error::NotUnimodular { deviation: report.max_deviation });
    }
    let values = grid
        .nodes()
        .zip(psi.values())
        .map(|(z, &w)| Ok(w * x.at(op.map.eval(z))?))
        .collect::<Result<_>>()?;
    BoundaryFunction::new(grid, values)
}

/// `[apply_op(T, x) for T in ops]`.
pub fn orbit_sample(
    x: &Source<'_>,
    ops: &[WeightedCompositionOp],
    grid: BoundaryGrid,
) -> Result<Vec<BoundaryFunction>> {
    ops.par_iter().map(|op| apply_op(op, x, grid)).collect()
}
