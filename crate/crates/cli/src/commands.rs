use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::Args;
use hardylab::calculus::decimal_radii;
use hardylab::sampling;
use hardylab::{
    circle_average, cyclic_average, disk_mesh, example1_zeros, example2_zeros, frostman_terms, hull_distance_with,
    mean_value_check, nevanlinna_characteristic, orbit_sample, separation_products, singular_inner_eval,
    step1_demo, thin_ratio_test, BoundaryFunction, BoundaryGrid, MarshallParams, MinimaxOptions, OuterFunction, Panel,
    QuotientFunction, SingularMeasure, Source, Step1Input, WeightedCompositionOp, Zero,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config;
use crate::CliError;

pub const MEANVALUE_ANCHOR: &str = "the circle average of f∘φ_a equals f(a) for f in the disk algebra";
pub const SPREAD_ANCHOR: &str =
    "a unit vector x admits a_n in the disk and unimodular c_n with c_n·avg(x∘φ_{a_n}) → 1";
pub const FROSTMAN_ANCHOR: &str = "Frostman series Σ (1−|a_n|²)/|ζ−a_n|² at a boundary point ζ";
pub const THIN_ANCHOR: &str = "a thin sequence has separation products ∏_{m≠n} ρ(a_n, a_m) tending to 1";
pub const AVERAGE_ANCHOR: &str =
    "dyadic rotation averages of a bounded function converge weak-star to its circle average";
pub const FACTOR_ANCHOR: &str =
    "inner-outer factorization: the outer factor is determined by log|f| on the circle";
pub const APPROX_ANCHOR: &str = "the norm-closed convex hull of Blaschke products is the unit ball of H^∞";
pub const ORBIT_ANCHOR: &str =
    "the weak-star closed convex hull of an isometry orbit of a unit vector is the unit ball";
pub const NEVANLINNA_ANCHOR: &str = "the Nevanlinna characteristic T(r) is nondecreasing in r";

pub struct Context {
    pub grid: BoundaryGrid,
    pub grid_echo: Value,
    pub seed: Option<u64>,
}

impl Context {
    fn rng(&self) -> sampling::SeededRng {
        sampling::seeded(self.seed.expect("seed checked before dispatch"))
    }
}

pub struct Report {
    pub metrics: Value,
    pub csv: Option<String>,
    /// Set when a solver did not converge.
    pub failure: Option<String>,
}

impl Report {
    fn new(metrics: Value, csv: Option<String>) -> Self {
        Self { metrics, csv, failure: None }
    }
}

fn nondecreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0])
}

fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

fn read_zeros(path: &Path) -> Result<Vec<Zero>, CliError> {
    let file =
        File::open(path).map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
    Ok(hardylab::io::read_zeros(BufReader::new(file))?)
}

fn zero_source(example: u8, zeros: &Option<PathBuf>, n: usize) -> Result<Vec<Zero>, CliError> {
    match (zeros, example) {
        (Some(path), _) => read_zeros(path),
        (None, 1) => Ok(example1_zeros(n)),
        (None, 2) => Ok(example2_zeros(n)),
        (None, e) => Err(CliError::Config(format!("unknown example {e}; expected 1 or 2"))),
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanvalueArgs {
    /// Number of random polynomials
    #[arg(long, default_value_t = 20)]
    pub functions: usize,
    /// Number of random points per polynomial
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, default_value_t = 16)]
    pub degree: usize,
    #[arg(long, default_value_t = 0.9)]
    pub max_radius: f64,
}

pub fn meanvalue(a: &MeanvalueArgs, ctx: &Context) -> Result<Report, CliError> {
    if !(a.max_radius > 0.0 && a.max_radius < 1.0) || a.functions == 0 || a.points == 0 {
        return Err(CliError::Config("need functions, points > 0 and max_radius in (0, 1)".into()));
    }
    let mut rng = ctx.rng();
    let mut csv = String::from("function,point,re,im,error\n");
    let mut errors = Vec::new();
    for i in 0..a.functions {
        let f = sampling::polynomial(&mut rng, a.degree);
        for j in 0..a.points {
            let p = sampling::disk_point(&mut rng, a.max_radius);
            let e = mean_value_check(&f, p, ctx.grid)?;
            let _ = writeln!(csv, "{i},{j},{:e},{:e},{:e}", p.re, p.im, e);
            errors.push(e);
        }
    }
    let max = errors.iter().copied().fold(0.0, f64::max);
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    Ok(Report::new(json!({ "checks": errors.len(), "max_error": max, "mean_error": mean }), Some(csv)))
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpreadArgs {
    /// Analytic target (const:, poly:, blaschke:, example1:, example2:, singular:)
    #[arg(long, default_value = "blaschke:0.5:0.3")]
    pub target: String,
    /// Inner denominator; the search then runs on target/denominator
    #[arg(long)]
    pub denominator: Option<String>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.1, 0.05])]
    pub mesh_steps: Vec<f64>,
}

pub fn spread(a: &SpreadArgs, ctx: &Context) -> Result<Report, CliError> {
    if a.mesh_steps.is_empty() {
        return Err(CliError::Config("mesh_steps is empty".into()));
    }
    let f = config::analytic_target(&a.target)?;
    let quotient = match &a.denominator {
        Some(spec) => {
            let g = config::analytic_target(spec)?;
            let num = BoundaryFunction::from_fn(ctx.grid, |z| f.eval(z));
            let den = BoundaryFunction::from_fn(ctx.grid, |z| g.eval(z));
            Some(QuotientFunction::new(num, den)?)
        }
        None => None,
    };
    let mut csv = String::from("step,best,deficiency,records\n");
    let mut sweep = Vec::new();
    let mut last = None;
    for &h in &a.mesh_steps {
        let mesh = disk_mesh(h)?;
        let input = match &quotient {
            Some(q) => Step1Input::Quotient(q),
            None => Step1Input::Analytic(f.as_ref()),
        };
        let report = step1_demo(input, &mesh, ctx.grid)?;
        let _ = writeln!(csv, "{h},{:e},{:e},{}", report.best, report.deficiency, report.records.len());
        sweep.push(json!({
            "step": h,
            "mesh_points": mesh.len(),
            "best": report.best,
            "deficiency": report.deficiency,
            "argmax": report.records.last().map(|r| r.point),
        }));
        last = Some(report);
    }
    let last = last.expect("nonempty sweep");
    Ok(Report::new(
        json!({
            "representative": last.representative,
            "analyticity_defect": last.analyticity_defect,
            "sweep": sweep,
            "finest_records": last.records,
            "best": last.best,
            "deficiency": last.deficiency,
        }),
        Some(csv),
    ))
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrostmanArgs {
    /// Built-in zero sequence (1 or 2)
    #[arg(long, default_value_t = 1)]
    pub example: u8,
    /// File of zeros (`re im` per line) used instead of an example
    #[arg(long)]
    pub zeros: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Angle of the boundary point ζ
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
}

pub fn frostman(a: &FrostmanArgs, _ctx: &Context) -> Result<Report, CliError> {
    let zeros = zero_source(a.example, &a.zeros, a.n)?;
    let zeta = Complex64::from_polar(1.0, a.theta);
    let terms = frostman_terms(&zeros, zeta, a.n)?;
    let mut csv = String::from("n,term,partial_sum\n");
    let mut partial = 0.0;
    let mut sums = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        partial += t;
        sums.push(partial);
        let _ = writeln!(csv, "{},{:e},{:e}", i + 1, t, partial);
    }
    let checkpoints: Vec<Value> = (0..)
        .map(|k| 10usize.pow(k))
        .take_while(|&n| n <= a.n)
        .map(|n| json!({ "n": n, "partial_sum": sums[n - 1] }))
        .collect();
    let mut metrics = json!({
        "terms": a.n,
        "sum": partial,
        "last_term": terms.last(),
        "checkpoints": checkpoints,
        "first_index_above_1e6": sums.iter().position(|&s| s > 1e6).map(|i| i + 1),
    });
    if a.zeros.is_none() && a.example == 1 {
        let dev = terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let n = (i + 1) as f64;
                (t * n * n - 1.0).abs()
            })
            .fold(0.0, f64::max);
        metrics["max_rel_dev_from_inverse_square"] = json!(dev);
    }
    if a.n <= 64 {
        metrics["term_list"] = json!(terms);
    }
    Ok(Report::new(metrics, Some(csv)))
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThinArgs {
    #[arg(long, default_value_t = 2)]
    pub example: u8,
    #[arg(long)]
    pub zeros: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
}

pub fn thin(a: &ThinArgs, _ctx: &Context) -> Result<Report, CliError> {
    let zeros = zero_source(a.example, &a.zeros, a.n)?;
    let ratios = thin_ratio_test(&zeros, a.n)?;
    let products = separation_products(&zeros, a.n)?;
    let argmin = products
        .iter()
        .enumerate()
        .fold(0, |best, (i, &p)| if p < products[best] { i } else { best });
    let mut metrics = json!({
        "ratios": ratios,
        "separation_products": products,
        "min_index": argmin + 1,
        "nondecreasing_from_min": nondecreasing(&products[argmin..]),
        "strictly_increasing": products.windows(2).all(|w| w[1] > w[0]),
        "last_gap": 1.0 - products[a.n - 1],
        "blaschke_condition": hardylab::blaschke_condition(&zeros, a.n)?,
    });
    if a.zeros.is_none() && a.example == 2 {
        let expected: Vec<f64> = (1..a.n).map(|k| 2f64.powf(-(2f64.powi(k as i32)))).collect();
        let dev = ratios.iter().zip(&expected).map(|(r, e)| (r - e).abs()).fold(0.0, f64::max);
        metrics["ratio_max_abs_dev"] = json!(dev);
    }
    let mut csv = String::from("n,separation_product,ratio\n");
    for (i, p) in products.iter().enumerate() {
        let r = ratios.get(i).map(|r| format!("{r:e}")).unwrap_or_default();
        let _ = writeln!(csv, "{},{:e},{}", i + 1, p, r);
    }
    Ok(Report::new(metrics, Some(csv)))
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AverageArgs {
    /// Boundary target (half-indicator, one, exp, indicator:A:B, file:PATH)
    #[arg(long, default_value = "half-indicator")]
    pub target: String,
    /// Last averaging level; defaults to two below the grid level
    #[arg(long)]
    pub max_n: Option<u32>,
}

pub fn average(a: &AverageArgs, ctx: &Context) -> Result<Report, CliError> {
    let f = config::boundary_target(&a.target, ctx.grid)?;
    let c = circle_average(&f);
    let panel = Panel::default_for(ctx.grid);
    let mut csv = String::from("n,panel_distance,sup_deviation,average_drift\n");
    let mut distances = Vec::new();
    let mut drift: f64 = 0.0;
    let max_n = a.max_n.unwrap_or(ctx.grid.log2_size().saturating_sub(2));
    for n in 0..=max_n {
        let t = cyclic_average(&f, n)?;
        let d = panel.distance_to_constant(&t, c)?;
        let sup = t.values().iter().map(|v| (v - c).norm()).fold(0.0, f64::max);
        let avg_drift = (circle_average(&t) - c).norm();
        drift = drift.max(avg_drift);
        let _ = writeln!(csv, "{n},{d:e},{sup:e},{avg_drift:e}");
        distances.push(d);
    }
    Ok(Report::new(
        json!({
            "circle_average": c,
            "panel_distances": distances,
            "nonincreasing": nonincreasing(&distances),
            "final_distance": distances.last(),
            "max_average_drift": drift,
        }),
        Some(csv),
    ))
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorArgs {
    /// Log-modulus data (cos:A, shift:S, file:PATH)
    #[arg(long, default_value = "cos:0.5")]
    pub logmod: String,
    #[arg(long, default_value_t = 1.0 - 1e-4)]
    pub radius: f64,
    /// Singular measure atoms as THETA:MASS
    #[arg(long, value_delimiter = ',', default_values_t = ["0:1".to_string()])]
    pub atoms: Vec<String>,
    /// File of `theta, mass` lines used instead of --atoms
    #[arg(long)]
    pub measure: Option<PathBuf>,
    /// Angle of the radial probe of the singular factor
    #[arg(long, default_value_t = PI)]
    pub probe_theta: f64,
}

pub fn factor(a: &FactorArgs, ctx: &Context) -> Result<Report, CliError> {
    let logmod = config::log_modulus(&a.logmod, ctx.grid)?;
    let outer = OuterFunction::from_log_modulus(&logmod)?;
    let mut max_abs: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    let mut estimate: f64 = 0.0;
    for (z, l) in ctx.grid.nodes().zip(logmod.values()) {
        let v = outer.eval_with_estimate(z * a.radius)?;
        let expected = l.re.exp();
        max_abs = max_abs.max((v.value.norm() - expected).abs());
        max_rel = max_rel.max((v.value.norm() / expected - 1.0).abs());
        estimate = estimate.max(v.error_estimate);
    }

    let measure = match &a.measure {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
            hardylab::io::read_measure(BufReader::new(file))?
        }
        None => {
            let pairs = a
                .atoms
                .iter()
                .map(|s| {
                    let (t, m) = s.split_once(':').ok_or_else(|| CliError::Config(format!("atom {s:?} is not THETA:MASS")))?;
                    let p = |x: &str| x.trim().parse::<f64>().map_err(|_| CliError::Config(format!("bad atom {s:?}")));
                    Ok((p(t)?, p(m)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            SingularMeasure::from_angles(&pairs)?
        }
    };
    let mass = measure.total_mass();
    let s0 = singular_inner_eval(&measure, Complex64::new(0.0, 0.0))?;
    let probe = Complex64::from_polar(1.0, a.probe_theta);
    let radii = decimal_radii(6);
    let moduli = radii
        .iter()
        .map(|&r| Ok(singular_inner_eval(&measure, probe * r)?.norm()))
        .collect::<Result<Vec<f64>, CliError>>()?;
    let mut csv = String::from("radius,singular_modulus\n");
    for (r, m) in radii.iter().zip(&moduli) {
        let _ = writeln!(csv, "{r:e},{m:e}");
    }
    Ok(Report::new(
        json!({
            "outer": {
                "radius": a.radius,
                "max_abs_error": max_abs,
                "max_rel_error": max_rel,
                "error_estimate": estimate,
            },
            "singular": {
                "total_mass": mass,
                "value_at_origin": s0,
                "origin_error": (s0 - Complex64::new((-mass).exp(), 0.0)).norm(),
                "probe_radii": radii,
                "probe_moduli": moduli,
            },
        }),
        Some(csv),
    ))
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxArgs {
    /// Analytic target with sup-norm at most 1
    #[arg(long, default_value = "const:0.5")]
    pub target: String,
    #[arg(long, default_value_t = 2)]
    pub atoms: usize,
    #[arg(long, default_value_t = 0)]
    pub degree: usize,
    #[arg(long, default_value_t = 10)]
    pub starts: usize,
    /// Objective evaluations per local search
    #[arg(long, default_value_t = 500)]
    pub budget: usize,
}

pub fn approx(a: &ApproxArgs, ctx: &Context) -> Result<Report, CliError> {
    let f = config::analytic_target(&a.target)?;
    let params = MarshallParams {
        atoms: a.atoms,
        max_degree: a.degree,
        grid: ctx.grid,
        starts: a.starts,
        seed: ctx.seed.expect("seed checked before dispatch"),
        max_evaluations: a.budget,
    };
    let out = hardylab::marshall_approximate(f.as_ref(), &params)?;
    let mut csv = String::from("atoms,max_degree,error\n");
    for c in &out.cells {
        let _ = writeln!(csv, "{},{},{:e}", c.atoms, c.max_degree, c.error);
    }
    Ok(Report::new(
        json!({
            "error": out.error,
            "lower_bound": out.lower_bound,
            "weights": out.combination.weights(),
            "atoms": out.atom_specs,
            "cells": out.cells,
            "evaluations": out.evaluations,
            "budget_exhausted": out.budget_exhausted,
        }),
        Some(csv),
    ))
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitArgs {
    /// Boundary target; a seeded random function in the closed disk if absent
    #[arg(long)]
    pub target: Option<String>,
    /// Number of evenly spaced grid rotations (defaults to one per node)
    #[arg(long)]
    pub rotations: Option<usize>,
    /// Cutting-plane rounds allowed to the hull solver
    #[arg(long, default_value_t = 80)]
    pub max_rounds: usize,
}

pub fn orbit(a: &OrbitArgs, ctx: &Context) -> Result<Report, CliError> {
    let grid = ctx.grid;
    let f = match &a.target {
        Some(spec) => config::boundary_target(spec, grid)?,
        None => sampling::bounded_boundary(&mut ctx.rng(), grid),
    };
    let count = a.rotations.unwrap_or(grid.len());
    if count == 0 || count > grid.len() || !grid.len().is_multiple_of(count) {
        return Err(CliError::Config(format!("rotations must divide {} nodes", grid.len())));
    }
    let stride = grid.len() / count;
    let ops: Vec<WeightedCompositionOp> =
        (0..count).map(|j| WeightedCompositionOp::grid_rotation(grid, j * stride)).collect();
    let samples = orbit_sample(&Source::Sampled(&f), &ops, grid)?;
    let norm = f.sup_norm();
    let norm_dev = samples.iter().map(|s| (s.sup_norm() - norm).abs()).fold(0.0, f64::max);
    let c = circle_average(&f);
    let target = BoundaryFunction::constant(grid, c);
    let options = MinimaxOptions { max_rounds: a.max_rounds, ..MinimaxOptions::default() };
    let hull = hull_distance_with(&target, &samples, &Panel::default_for(grid), &options)?;
    let mut report = Report::new(
        json!({
            "sup_norm": norm,
            "orbit_size": samples.len(),
            "orbit_norm_deviation": norm_dev,
            "circle_average": c,
            "distance": hull.distance,
            "uniform_distance": hull.uniform_distance,
            "lower_bound": hull.lower_bound,
            "converged": hull.converged,
            "max_weight": hull.weights.iter().copied().fold(0.0, f64::max),
        }),
        None,
    );
    if !hull.converged {
        report.failure = Some("hull distance solver did not converge".into());
    }
    Ok(report)
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NevanlinnaArgs {
    #[arg(long, default_value = "poly:0.5,2")]
    pub target: String,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.3, 0.5, 0.7, 0.9, 0.99])]
    pub radii: Vec<f64>,
}

pub fn nevanlinna(a: &NevanlinnaArgs, ctx: &Context) -> Result<Report, CliError> {
    let f = config::analytic_target(&a.target)?;
    let values = a
        .radii
        .iter()
        .map(|&r| Ok(nevanlinna_characteristic(&f, r, ctx.grid)?))
        .collect::<Result<Vec<f64>, CliError>>()?;
    let mut csv = String::from("radius,characteristic\n");
    for (r, t) in a.radii.iter().zip(&values) {
        let _ = writeln!(csv, "{r},{t:e}");
    }
    let max_drop = values.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
    Ok(Report::new(
        json!({ "characteristic": values, "nondecreasing": nondecreasing(&values), "max_drop": max_drop }),
        Some(csv),
    ))
}
