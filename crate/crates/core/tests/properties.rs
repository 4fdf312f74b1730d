use std::f64::consts::TAU;

use hardylab::{
    circle_average, cyclic_average, pseudo_hyperbolic, sample, weak_star_pair, Analytic, BlaschkeProduct,
    BoundaryFunction, BoundaryGrid, MoebiusAutomorphism, Panel, Polynomial, QuotientFunction, SingularInner,
    SingularMeasure, OuterFunction, Zero,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn disk(max_r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..=max_r, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn circle() -> impl Strategy<Value = Complex64> {
    (0.0..TAU).prop_map(|t| Complex64::from_polar(1.0, t))
}

fn automorphism(max_r: f64) -> impl Strategy<Value = MoebiusAutomorphism> {
    (disk(max_r), circle()).prop_map(|(a, l)| MoebiusAutomorphism::new(a, l).unwrap())
}

fn polynomial(max_degree: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=max_degree + 1).prop_filter_map(
        "nonzero coefficients",
        |c| Polynomial::normalized(c.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).ok(),
    )
}

fn blaschke(max_degree: usize) -> impl Strategy<Value = BlaschkeProduct> {
    (circle(), prop::collection::vec(disk(0.95), 0..=max_degree))
        .prop_map(|(l, zs)| BlaschkeProduct::from_points(l, &zs).unwrap())
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn automorphisms_preserve_the_circle(phi in automorphism(0.99), zeta in circle()) {
        prop_assert!((phi.eval(zeta).norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn automorphisms_map_disk_into_disk(phi in automorphism(0.99), z in disk(0.999)) {
        prop_assert!(phi.eval(z).norm() < 1.0);
    }

    #[test]
    fn composition_is_associative(
        p in automorphism(0.9), q in automorphism(0.9), r in automorphism(0.9), z in disk(0.95)
    ) {
        let left = p.compose(&q).compose(&r);
        let right = p.compose(&q.compose(&r));
        prop_assert!(close(left.eval(z), right.eval(z), 1e-12));
        prop_assert!(close(left.eval(z), p.eval(q.eval(r.eval(z))), 1e-12));
    }

    #[test]
    fn inverse_undoes(p in automorphism(0.9), z in disk(0.95)) {
        prop_assert!(close(p.inverse().eval(p.eval(z)), z, 1e-12));
        prop_assert!(close(p.compose(&p.inverse()).eval(z), z, 1e-12));
    }

    #[test]
    fn pseudo_hyperbolic_is_a_symmetric_invariant_metric(
        z in disk(0.95), w in disk(0.95), u in disk(0.95), phi in automorphism(0.9)
    ) {
        let d = pseudo_hyperbolic(z, w).unwrap();
        prop_assert!((0.0..1.0).contains(&d));
        prop_assert!((d - pseudo_hyperbolic(w, z).unwrap()).abs() <= 1e-14);
        let moved = pseudo_hyperbolic(phi.eval(z), phi.eval(w)).unwrap();
        prop_assert!((d - moved).abs() <= 1e-12);
        // ρ is a metric
        let via = pseudo_hyperbolic(z, u).unwrap() + pseudo_hyperbolic(u, w).unwrap();
        prop_assert!(d <= via + 1e-14);
    }

    #[test]
    fn rotation_is_an_isometry(values in prop::collection::vec(disk(1.0), 64), j in 0usize..200) {
        let grid = BoundaryGrid::new(6).unwrap();
        let f = BoundaryFunction::new(grid, values).unwrap();
        let g = f.rotate(j);
        prop_assert_eq!(g.sup_norm(), f.sup_norm());
        prop_assert_eq!(g.rotate(64 - j % 64), f);
    }

    #[test]
    fn blaschke_products_are_unimodular_on_the_circle(b in blaschke(64), zeta in circle()) {
        prop_assert!((b.eval(zeta).norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn blaschke_products_vanish_at_their_zeros(b in blaschke(8)) {
        for z in b.zeros() {
            prop_assert!(b.eval(z.point()).norm() <= 1e-12);
        }
    }

    #[test]
    fn blaschke_covariance_under_automorphisms(
        zs in prop::collection::vec(disk(0.9), 1..6), phi in automorphism(0.8), zeta in circle()
    ) {
        // B ∘ φ is again a Blaschke product with zeros φ⁻¹(a_n)
        let one = Complex64::new(1.0, 0.0);
        let b = BlaschkeProduct::from_points(one, &zs).unwrap();
        let pulled: Vec<Complex64> = zs.iter().map(|&a| phi.inverse().eval(a)).collect();
        let c = BlaschkeProduct::from_points(one, &pulled).unwrap();
        let composed = b.eval(phi.eval(zeta));
        prop_assert!((composed.norm() - 1.0).abs() <= 1e-10);
        let z = zeta * 0.3;
        let ratio = b.eval(phi.eval(z)) / c.eval(z);
        prop_assert!((ratio.norm() - 1.0).abs() <= 1e-9);
        prop_assert!(close(ratio, b.eval(phi.eval(zeta)) / c.eval(zeta), 1e-9));
    }

    #[test]
    fn condition_and_frostman_partials_grow(
        zs in prop::collection::vec(disk(0.99), 2..20), zeta in circle()
    ) {
        let zeros: Vec<Zero> = zs.iter().map(|&a| Zero::new(a).unwrap()).collect();
        let mut last = (0.0, 0.0);
        for n in 1..=zeros.len() {
            let c = hardylab::blaschke_condition(&zeros, n).unwrap();
            let f = hardylab::frostman_sum(&zeros, zeta, n).unwrap();
            prop_assert!(c >= last.0 && f >= last.1);
            last = (c, f);
        }
    }

    #[test]
    fn cyclic_averages_compose_to_the_coarser(
        values in prop::collection::vec(disk(1.0), 256), n in 0u32..=8, k in 0u32..=8
    ) {
        let grid = BoundaryGrid::new(8).unwrap();
        let f = BoundaryFunction::new(grid, values).unwrap();
        let both = cyclic_average(&cyclic_average(&f, k).unwrap(), n).unwrap();
        prop_assert_eq!(both, cyclic_average(&f, n.max(k)).unwrap());
    }

    #[test]
    fn cyclic_averages_contract_and_keep_the_mean(
        values in prop::collection::vec(disk(1.0), 256), n in 0u32..=8
    ) {
        let grid = BoundaryGrid::new(8).unwrap();
        let f = BoundaryFunction::new(grid, values).unwrap();
        let t = cyclic_average(&f, n).unwrap();
        prop_assert!(t.sup_norm() <= f.sup_norm());
        prop_assert!(close(circle_average(&t), circle_average(&f), 1e-15));
    }

    #[test]
    fn dyadic_data_keeps_its_mean_exactly(bits in prop::collection::vec(0u8..=1, 256), n in 0u32..=8) {
        let grid = BoundaryGrid::new(8).unwrap();
        let f = BoundaryFunction::new(
            grid,
            bits.iter().map(|&b| Complex64::new(f64::from(b), 0.0)).collect(),
        ).unwrap();
        prop_assert_eq!(circle_average(&cyclic_average(&f, n).unwrap()), circle_average(&f));
    }

    #[test]
    fn indicator_panel_distance_decays(start in 0usize..1024, len in 0usize..1024) {
        let grid = BoundaryGrid::new(10).unwrap();
        let end = (start + len).min(1024);
        let f = BoundaryFunction::indicator(grid, start..end);
        let panel = Panel::default_for(grid);
        let mean = circle_average(&f);
        let d: Vec<f64> = (0..=10)
            .map(|n| panel.distance_to_constant(&cyclic_average(&f, n).unwrap(), mean).unwrap())
            .collect();
        prop_assert!(d.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        prop_assert!(d[8] <= 1e-3);
    }

    #[test]
    fn pairing_obeys_the_holder_bound(
        values in prop::collection::vec(disk(1.0), 128), dens in prop::collection::vec(disk(3.0), 128)
    ) {
        let grid = BoundaryGrid::new(7).unwrap();
        let f = BoundaryFunction::new(grid, values).unwrap();
        let h = BoundaryFunction::new(grid, dens).unwrap();
        let p = weak_star_pair(&f, &h).unwrap();
        prop_assert!(p.norm() <= f.sup_norm() * hardylab::l1_mean(&h) * (1.0 + 1e-12));
    }

    #[test]
    fn nevanlinna_characteristic_is_nondecreasing(p in polynomial(8)) {
        let grid = BoundaryGrid::new(10).unwrap();
        let scaled = Polynomial::new(p.coeffs().iter().map(|c| c * 3.0).collect());
        let mut last = f64::NEG_INFINITY;
        for r in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            let t = hardylab::nevanlinna_characteristic(&scaled, r, grid).unwrap();
            prop_assert!(t >= last - 1e-12);
            last = t;
        }
    }

    #[test]
    fn mean_value_identity(p in polynomial(16), a in disk(0.9)) {
        let grid = BoundaryGrid::new(10).unwrap();
        prop_assert!(hardylab::mean_value_check(&p, a, grid).unwrap() <= 1e-9);
    }

    #[test]
    fn singular_inner_is_bounded_by_one(
        atoms in prop::collection::vec((0.0..TAU, 0.01..3.0f64), 1..4), z in disk(0.999)
    ) {
        let s = SingularInner::new(SingularMeasure::from_angles(&atoms).unwrap());
        prop_assert!(s.eval(z).norm() <= 1.0 + 1e-15);
    }

    #[test]
    fn outer_modulus_is_bounded_by_the_boundary_max(
        coeffs in prop::collection::vec(-0.5..0.5f64, 1..5), z in disk(0.95)
    ) {
        let grid = BoundaryGrid::new(10).unwrap();
        let logmod = BoundaryFunction::from_fn(grid, |w| {
            let t = w.arg();
            let v: f64 = coeffs.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * t).cos()).sum();
            Complex64::new(v, 0.0)
        });
        let max = logmod.values().iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
        let f = OuterFunction::from_log_modulus(&logmod).unwrap();
        prop_assert!(f.eval(z).norm() <= max.exp() * (1.0 + 1e-12));
    }

    #[test]
    fn factors_multiply_nodewise(b in blaschke(4), theta in 0.0..TAU, mass in 0.1..2.0f64, z in disk(0.9)) {
        // B·S·F evaluated as a product equals the product of the factor values
        let grid = BoundaryGrid::new(8).unwrap();
        let s = SingularInner::new(SingularMeasure::from_angles(&[(theta, mass)]).unwrap());
        let logmod = BoundaryFunction::from_fn(grid, |w| Complex64::new(0.3 * w.re, 0.0));
        let f = OuterFunction::from_log_modulus(&logmod).unwrap();
        let parts: Vec<std::sync::Arc<dyn Analytic>> =
            vec![std::sync::Arc::new(b.clone()), std::sync::Arc::new(s.clone()), std::sync::Arc::new(f.clone())];
        let prod = hardylab::Product::new(parts);
        prop_assert!(close(prod.eval(z), b.eval(z) * s.eval(z) * f.eval(z), 1e-14));
        prop_assert!(prod.eval(z).norm() <= (0.3f64).exp() * (1.0 + 1e-12));
    }

    #[test]
    fn quotient_algebra(
        p in polynomial(6), q in polynomial(6), r in polynomial(6),
        b1 in blaschke(3), b2 in blaschke(3), b3 in blaschke(3), c in disk(2.0)
    ) {
        let grid = BoundaryGrid::new(7).unwrap();
        let quot = |f: &Polynomial, g: &BlaschkeProduct| {
            QuotientFunction::new(sample(f, grid), sample(g, grid)).unwrap()
        };
        let (x, y, w) = (quot(&p, &b1), quot(&q, &b2), quot(&r, &b3));
        let diff = |a: &QuotientFunction, b: &QuotientFunction| a.values().max_abs_diff(&b.values()).unwrap();
        // associativity and distributivity
        prop_assert!(diff(&x.add(&y).unwrap().add(&w).unwrap(), &x.add(&y.add(&w).unwrap()).unwrap()) <= 1e-10);
        prop_assert!(diff(&x.mul(&y).unwrap().mul(&w).unwrap(), &x.mul(&y.mul(&w).unwrap()).unwrap()) <= 1e-10);
        prop_assert!(
            diff(&x.mul(&y.add(&w).unwrap()).unwrap(), &x.mul(&y).unwrap().add(&x.mul(&w).unwrap()).unwrap())
                <= 1e-10
        );
        // norm inequalities
        prop_assert!(x.add(&y).unwrap().sup_norm() <= x.sup_norm() + y.sup_norm() + 1e-12);
        prop_assert!(x.mul(&y).unwrap().sup_norm() <= x.sup_norm() * y.sup_norm() + 1e-12);
        prop_assert!((x.scale(c).sup_norm() - c.norm() * x.sup_norm()).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn repeated_zeros_have_full_multiplicity(
        a in disk(0.9), others in prop::collection::vec(disk(0.9), 0..4), m in 1usize..4, d in 1e-3..1e-2f64
    ) {
        // a zero repeated m times: |B(a + δ)| ~ |δ|^m, and B over its factors is nonzero at a
        let one = Complex64::new(1.0, 0.0);
        let mut zs = vec![a; m];
        zs.extend(others.iter().copied());
        let b = BlaschkeProduct::from_points(one, &zs).unwrap();
        prop_assert!(b.eval(a).norm() <= 1e-10);
        let rest = BlaschkeProduct::from_points(one, &others).unwrap();
        let step = Complex64::new(d, 0.0);
        let single = Zero::new(a).unwrap();
        let quotient = b.eval(a + step) / single.factor(a + step).powu(m as u32);
        prop_assert!(quotient.norm() > 0.0);
        prop_assert!((quotient - rest.eval(a + step)).norm() <= 1e-8 * (1.0 + rest.eval(a + step).norm()));
    }
}
