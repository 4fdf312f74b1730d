//! Numerical toolkit for bounded analytic functions on the unit disk: Möbius
//! automorphisms, Blaschke products, boundary quadrature and averaging,
//! inner/outer factorization, and convex-hull experiments with weighted
//! composition isometries.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons reject NaN

pub mod analytic;
pub mod blaschke;
pub mod calculus;
pub mod disk;
pub mod error;
pub mod factorization;
pub mod io;
pub mod minimax;
pub mod sampling;
pub mod transitivity;

pub use analytic::{Analytic, CauchyExtension, Composed, Constant, Dilated, FnAnalytic, Polynomial, Product};
pub use blaschke::{
    blaschke_condition, example1_product, example1_zeros, example2_product, example2_zeros, frostman_sum,
    frostman_terms, separation_products, thin_ratio_test, zero_distance, BlaschkeProduct, Zero,
};
pub use calculus::{
    circle_average, circle_average_of, cyclic_average, dilate, disk_mesh, l1_mean, mean_value_check,
    nevanlinna_characteristic, radial_limit, sample, unit_spread_search, weak_star_pair, Panel, RadialLimit,
    SpreadRecord,
};
pub use disk::{pseudo_hyperbolic, rotate_boundary, BoundaryFunction, BoundaryGrid, MoebiusAutomorphism};
pub use error::{Error, Result};
pub use factorization::{
    inner_check, outer_eval, quotient_ops, singular_inner_eval, InnerReport, OuterFunction, QuotientFunction,
    SingularInner, SingularMeasure,
};
pub use minimax::{MinimaxOptions, MinimaxProblem, MinimaxSolution};
pub use transitivity::{
    apply_op, hull_distance, hull_distance_with, marshall_approximate, orbit_sample, step1_demo, AtomSpec, ConvexCombination,
    CellError, HullResult, MarshallParams, MarshallResult, Multiplier, Representative, Source, Step1Input, Step1Report,
    WeightedCompositionOp,
};
