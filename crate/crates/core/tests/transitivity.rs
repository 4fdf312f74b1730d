use hardylab::sampling::{self, seeded};
use hardylab::{
    apply_op, circle_average, cyclic_average, hull_distance, inner_check, marshall_approximate, orbit_sample,
    sample, step1_demo, BoundaryFunction, BoundaryGrid, MarshallParams, MoebiusAutomorphism, Multiplier, Panel,
    Polynomial, QuotientFunction, Source, Step1Input, WeightedCompositionOp,
};
use hardylab::Analytic;
use num_complex::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[test]
fn identity_op_returns_boundary_samples() {
    let grid = BoundaryGrid::new(8).unwrap();
    let f = sampling::polynomial(&mut seeded(1), 5);
    let out = apply_op(&WeightedCompositionOp::identity(), &Source::Analytic(&f), grid).unwrap();
    assert!(out.max_abs_diff(&sample(&f, grid)).unwrap() <= 1e-15);
}

#[test]
fn constant_multiplier_keeps_the_norm() {
    let grid = BoundaryGrid::new(12).unwrap();
    let mut rng = seeded(2);
    let f = sampling::polynomial(&mut rng, 6);
    for _ in 0..10 {
        let phi = sampling::automorphism(&mut rng, 0.9);
        let op = WeightedCompositionOp::new(Multiplier::Constant(sampling::unimodular(&mut rng)), phi);
        let out = apply_op(&op, &Source::Analytic(&f), grid).unwrap();
        let moved = BoundaryFunction::from_fn(grid, |z| f.eval(phi.eval(z)));
        assert!((out.sup_norm() - moved.sup_norm()).abs() <= 1e-9);
    }
}

#[test]
fn blaschke_orbits_stay_inner() {
    let grid = BoundaryGrid::new(9).unwrap();
    let mut rng = seeded(3);
    let b = sampling::blaschke(&mut rng, 4, 0.8);
    let ops: Vec<_> = (0..8)
        .map(|_| {
            WeightedCompositionOp::new(
                Multiplier::Inner(sampling::blaschke(&mut rng, 2, 0.7)),
                sampling::automorphism(&mut rng, 0.9),
            )
        })
        .collect();
    for out in orbit_sample(&Source::Analytic(&b), &ops, grid).unwrap() {
        assert!(inner_check(&out).max_deviation <= 1e-9);
    }
}

#[test]
fn conjugate_multiplier_reaches_the_constant() {
    let grid = BoundaryGrid::new(8).unwrap();
    let b = sampling::blaschke(&mut seeded(4), 3, 0.8);
    let ops = [
        WeightedCompositionOp::identity(),
        WeightedCompositionOp::new(Multiplier::ConjugateInner(b.clone()), MoebiusAutomorphism::identity()),
    ];
    let orbit = orbit_sample(&Source::Analytic(&b), &ops, grid).unwrap();
    let one = BoundaryFunction::constant(grid, ONE);
    assert!(orbit[1].max_abs_diff(&one).unwrap() <= 1e-12);
}

#[test]
fn rotations_of_the_half_indicator_are_distinct() {
    let grid = BoundaryGrid::new(6).unwrap();
    let f = BoundaryFunction::half_indicator(grid);
    let ops: Vec<_> = (0..16).map(|j| WeightedCompositionOp::grid_rotation(grid, j)).collect();
    let orbit = orbit_sample(&Source::Sampled(&f), &ops, grid).unwrap();
    for (j, g) in orbit.iter().enumerate() {
        assert_eq!(g, &f.rotate(j));
        assert!(orbit[..j].iter().all(|h| h != g));
    }
}

#[test]
fn non_unimodular_multiplier_is_rejected() {
    let grid = BoundaryGrid::new(6).unwrap();
    let f = Polynomial::new(vec![ONE]);
    let op = WeightedCompositionOp::new(Multiplier::Constant(Complex64::new(0.5, 0.0)), MoebiusAutomorphism::identity());
    assert!(apply_op(&op, &Source::Analytic(&f), grid).is_err());
}

#[test]
fn composed_operators_act_in_sequence() {
    let grid = BoundaryGrid::new(12).unwrap();
    let mut rng = seeded(5);
    let f = sampling::polynomial(&mut rng, 8);
    for _ in 0..10 {
        let t = WeightedCompositionOp::new(
            Multiplier::Inner(sampling::blaschke(&mut rng, 2, 0.8)),
            sampling::automorphism(&mut rng, 0.9),
        );
        let u = WeightedCompositionOp::new(
            Multiplier::ConjugateInner(sampling::blaschke(&mut rng, 3, 0.8)),
            sampling::automorphism(&mut rng, 0.9),
        );
        let stepwise = apply_op(&u, &Source::Applied(&t, Box::new(Source::Analytic(&f))), grid).unwrap();
        let direct = apply_op(&t.then(&u), &Source::Analytic(&f), grid).unwrap();
        assert!(stepwise.max_abs_diff(&direct).unwrap() <= 1e-9);
    }
}

#[test]
fn uniform_rotation_average_reaches_the_mean() {
    let grid = BoundaryGrid::new(8).unwrap();
    let f = sampling::bounded_boundary(&mut seeded(6), grid);
    let samples: Vec<_> = (0..grid.len()).map(|j| f.rotate(j)).collect();
    let target = BoundaryFunction::constant(grid, circle_average(&f));
    let out = hull_distance(&target, &samples, &Panel::default_for(grid)).unwrap();
    assert!(out.uniform_distance <= 1e-10);
    assert!(out.distance <= out.uniform_distance);
    // the uniform combination is the full cyclic average
    let avg = cyclic_average(&f, grid.log2_size()).unwrap();
    assert!(avg.max_abs_diff(&target).unwrap() <= 1e-15);
}

#[test]
fn hull_distance_shrinks_with_more_samples_and_fewer_densities() {
    let grid = BoundaryGrid::new(7).unwrap();
    let mut rng = seeded(7);
    let panel = Panel::default_for(grid);
    for _ in 0..5 {
        let target = sampling::bounded_boundary(&mut rng, grid).map(|v| v * 0.5);
        let pool: Vec<_> = (0..12).map(|_| sampling::bounded_boundary(&mut rng, grid)).collect();
        let mut last = f64::INFINITY;
        for n in 1..=pool.len() {
            let d = hull_distance(&target, &pool[..n], &panel).unwrap();
            assert!(d.converged);
            assert!(d.distance <= last * (1.0 + 1e-9) + 1e-12, "{} after {}", d.distance, last);
            last = d.distance;
        }
        let mut last = f64::INFINITY;
        for m in (1..=panel.len()).rev() {
            let small = Panel::new(panel.densities()[..m].to_vec()).unwrap();
            let d = hull_distance(&target, &pool[..4], &small).unwrap();
            assert!(d.distance <= last * (1.0 + 1e-9) + 1e-12);
            last = d.distance;
        }
        // the certified lower bound is consistent
        let d = hull_distance(&target, &pool, &panel).unwrap();
        assert!(d.lower_bound <= d.distance);
        let w: f64 = d.weights.iter().sum();
        assert!((w - 1.0).abs() <= 1e-12 && d.weights.iter().all(|&x| x >= 0.0));
    }
}

#[test]
fn marshall_reaches_the_lattice_threshold() {
    // brute force over a coarse atom lattice reached 1.5700924586837752e-16
    let eps_star = 1.5700924586837752e-16;
    let half = Complex64::new(0.5, 0.0);
    let target = Polynomial::new(vec![Complex64::new(0.0, 0.0), half, half]);
    let out = marshall_approximate(&target, &MarshallParams::new(4, 2, 11)).unwrap();
    assert!(out.error <= eps_star + 1e-12, "{}", out.error);
    let w: f64 = out.combination.weights().iter().sum();
    assert!((w - 1.0).abs() <= 1e-12);
    assert!(out.combination.atoms().iter().all(|b| b.degree() <= 2));
}

#[test]
fn marshall_cells_never_get_worse() {
    let target = Polynomial::new(vec![
        Complex64::new(0.3, 0.0),
        Complex64::new(0.0, -0.2),
        Complex64::new(0.4, 0.0),
    ]);
    let out = marshall_approximate(&target, &MarshallParams::new(3, 2, 5)).unwrap();
    let cell = |k: usize, d: usize| {
        out.cells.iter().find(|c| c.atoms == k && c.max_degree == d).unwrap().error
    };
    for k in 1..=3 {
        for d in 0..=2 {
            if k > 1 {
                assert!(cell(k, d) <= cell(k - 1, d));
            }
            if d > 0 {
                assert!(cell(k, d) <= cell(k, d - 1));
            }
        }
    }
    // a smaller run follows the same table
    let small = marshall_approximate(&target, &MarshallParams::new(2, 1, 5)).unwrap();
    assert_eq!(small.cells.last().unwrap().error, cell(2, 1));
}

#[test]
fn step1_unit_and_reduced_quotient_hit_one() {
    let grid = BoundaryGrid::new(8).unwrap();
    let mesh = hardylab::disk_mesh(0.2).unwrap();
    let one = Polynomial::new(vec![ONE]);
    let r = step1_demo(Step1Input::Analytic(&one), &mesh, grid).unwrap();
    assert!((r.best - 1.0).abs() <= 1e-12);
    let b = sampling::blaschke(&mut seeded(8), 3, 0.7);
    let s = sample(&b, grid);
    let q = QuotientFunction::new(s.clone(), s).unwrap();
    let r = step1_demo(Step1Input::Quotient(&q), &mesh, grid).unwrap();
    assert!((r.best - 1.0).abs() <= 1e-12);
}

#[test]
fn step1_records_improve_as_the_mesh_refines() {
    let grid = BoundaryGrid::new(9).unwrap();
    let b = hardylab::BlaschkeProduct::from_points(ONE, &[Complex64::new(0.5, 0.3)]).unwrap();
    let mut last = 0.0;
    for h in [0.2, 0.1, 0.05] {
        let mesh = hardylab::disk_mesh(h).unwrap();
        let r = step1_demo(Step1Input::Analytic(&b), &mesh, grid).unwrap();
        assert!(r.best >= last && r.best <= 1.0 + 1e-12);
        assert!(r.records.windows(2).all(|w| w[1].value >= w[0].value));
        last = r.best;
    }
    assert!(last > 0.9);
}
