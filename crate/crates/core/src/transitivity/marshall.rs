//! Approximation of a function in the unit ball of `H^∞` by convex
//! combinations of finite Blaschke products, measured in the sup-norm over a
//! boundary grid.
//!
//! Given atoms, the best weights solve a linear minimax program over the
//! simplex (see [`crate::minimax`]). Atom parameters are improved by seeded
//! compass search. The search is organised as a table of cells `(k, deg)`:
//! cell `(k, deg)` keeps the best of its own fresh starts, the polished cell
//! `(k − 1, deg)` extended by the best monomial atom `λ z^j` (`j ≤ deg`, `λ`
//! an eighth root of unity), and the polished cell `(k, deg − 1)`. Errors are
//! therefore nonincreasing in both `k` and `deg` for a fixed seed.
//!
//! Fresh starts are, in order: `k` greedily chosen monomial atoms, evenly
//! spread monomials of degree `deg`, spread monomials of mixed degree, then
//! seeded random atoms. A cell whose inherited candidates are already exact
//! skips its fresh starts, and fresh starts stop at the first exact one.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::Analytic;
use crate::blaschke::BlaschkeProduct;
use crate::disk::BoundaryGrid;
use crate::error::{invalid, Result};
use crate::minimax::{MinimaxOptions, MinimaxProblem};

/// Local search stops once the error falls below this.
const EXACT: f64 = 1e-15;
const MIN_STEP: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarshallParams {
    /// Number of atoms `K`.
    pub atoms: usize,
    /// Maximum atom degree `d`.
    pub max_degree: usize,
    pub grid: BoundaryGrid,
    /// Fresh starts per cell.
    pub starts: usize,
    pub seed: u64,
    /// Objective evaluations allowed per local search.
    pub max_evaluations: usize,
}

impl MarshallParams {
    pub fn new(atoms: usize, max_degree: usize, seed: u64) -> Self {
        Self {
            atoms,
            max_degree,
            grid: BoundaryGrid::new(6).expect("64-node grid"),
            starts: 10,
            seed,
            max_evaluations: 500,
        }
    }
}

/// One atom: `λ = e^{i·angle}` and its zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub angle: f64,
    pub zeros: Vec<Complex64>,
}

impl AtomSpec {
    pub fn product(&self) -> Result<BlaschkeProduct> {
        BlaschkeProduct::from_points(Complex64::from_polar(1.0, self.angle), &self.zeros)
    }
}

/// `Σ wᵢ Bᵢ` with `wᵢ ≥ 0`, `Σ wᵢ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexCombination {
    weights: Vec<f64>,
    atoms: Vec<BlaschkeProduct>,
}

impl ConvexCombination {
    pub fn new(weights: Vec<f64>, atoms: Vec<BlaschkeProduct>) -> Result<Self> {
        if weights.is_empty() || weights.len() != atoms.len() {
            return Err(invalid("weights and atoms must be nonempty and of equal length"));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(invalid("weights must be nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights, atoms })
    }

    /// Clamps negative weights to zero and rescales to unit sum.
    pub fn renormalize(weights: &[f64], atoms: Vec<BlaschkeProduct>) -> Result<Self> {
        let clamped: Vec<f64> = weights.iter().map(|&w| if w > 0.0 { w } else { 0.0 }).collect();
        let total: f64 = clamped.iter().sum();
        if !(total > 0.0) {
            return Err(invalid("weights have no positive mass"));
        }
        Self::new(clamped.iter().map(|w| w / total).collect(), atoms)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atoms(&self) -> &[BlaschkeProduct] {
        &self.atoms
    }
}

impl Analytic for ConvexCombination {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.weights.iter().zip(&self.atoms).map(|(&w, b)| b.eval(z) * w).sum()
    }
    fn bound(&self) -> f64 {
        1.0
    }
}

/// Best error found for one `(k, deg)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellError {
    pub atoms: usize,
    pub max_degree: usize,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarshallResult {
    pub combination: ConvexCombination,
    pub atom_specs: Vec<AtomSpec>,
    /// `max_k |Σ wᵢ Bᵢ(ζ_k) − target(ζ_k)|` after renormalization.
    pub error: f64,
    /// Lower bound for the weight subproblem at the returned atoms.
    pub lower_bound: f64,
    pub cells: Vec<CellError>,
    pub evaluations: usize,
    /// Some local search stopped on the evaluation budget.
    pub budget_exhausted: bool,
    pub seed: u64,
}

/// Atom degrees plus a flat coordinate vector: per atom, the angle of `λ`
/// followed by `(Re p, Im p)` for each zero `a = p/√(1 + |p|²)`.
#[derive(Debug, Clone, PartialEq)]
struct State {
    degrees: Vec<usize>,
    coords: Vec<f64>,
}

impl State {
    fn specs(&self) -> Vec<AtomSpec> {
        let mut at = 0;
        self.degrees
            .iter()
            .map(|&deg| {
                let angle = self.coords[at];
                let zeros = (0..deg)
                    .map(|j| {
                        let p = Complex64::new(self.coords[at + 1 + 2 * j], self.coords[at + 2 + 2 * j]);
                        p / (1.0 + p.norm_sqr()).sqrt()
                    })
                    .collect();
                at += 1 + 2 * deg;
                AtomSpec { angle, zeros }
            })
            .collect()
    }

    /// Appends `e^{i·angle} B` where `B` has `deg` zeros at the origin.
    fn push_monomial(&mut self, deg: usize, angle: f64) {
        self.degrees.push(deg);
        self.coords.push(angle);
        self.coords.extend(std::iter::repeat_n(0.0, 2 * deg));
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    state: State,
    weights: Vec<f64>,
    error: f64,
    evaluations: usize,
    exhausted: bool,
}

struct Objective<'a> {
    grid: BoundaryGrid,
    target: &'a [Complex64],
}

impl Objective<'_> {
    /// Weights solve the subproblem to relative accuracy `1e−6` unless
    /// `tight`; the value is always the exact objective at those weights.
    fn eval(&self, state: &State, incumbent: Option<&[f64]>, tight: bool) -> Option<(f64, Vec<f64>)> {
        let atoms = state.specs().iter().map(|s| s.product()).collect::<Result<Vec<_>>>().ok()?;
        let rows = self.grid.nodes().map(|z| atoms.iter().map(|b| b.eval(z)).collect()).collect();
        let problem = MinimaxProblem::new(rows, self.target.to_vec()).ok()?;
        let mut options = MinimaxOptions::default();
        if !tight {
            options.rel_tol = 1e-6;
        }
        let sol = problem.solve_from(&options, incumbent).ok()?;
        Some((sol.value, sol.weights))
    }

    /// Adds `k` monomial atoms `λ z^j` (`j ≤ deg`, `λ` an eighth root of
    /// unity) one at a time, each chosen to minimise the loose objective.
    fn greedy_monomials(&self, k: usize, deg: usize) -> (State, usize) {
        let mut state = State { degrees: Vec::new(), coords: Vec::new() };
        let mut evaluations = 0;
        for _ in 0..k {
            let mut best: Option<(f64, State)> = None;
            for j in 0..=deg {
                for q in 0..8 {
                    let mut y = state.clone();
                    y.push_monomial(j, TAU * q as f64 / 8.0);
                    evaluations += 1;
                    if let Some((e, _)) = self.eval(&y, None, false) {
                        if best.as_ref().is_none_or(|(b, _)| e < *b) {
                            best = Some((e, y));
                        }
                    }
                }
            }
            match best {
                Some((_, y)) => state = y,
                None => state.push_monomial(deg, 0.0),
            }
        }
        (state, evaluations)
    }

    /// Compass search over all coordinates, starting from `state`.
    fn polish(&self, state: State, incumbent: Option<&[f64]>, budget: usize) -> Candidate {
        let (mut error, mut weights) = self
            .eval(&state, incumbent, true)
            .unwrap_or((f64::INFINITY, vec![1.0 / state.degrees.len() as f64; state.degrees.len()]));
        let mut x = state;
        let mut evaluations = 1;
        let mut step = 0.5;
        let n = x.coords.len();
        while step > MIN_STEP && error > EXACT && evaluations < budget && n > 0 {
            let mut improved = false;
            'sweep: for i in 0..n {
                for sign in [1.0, -1.0] {
                    if evaluations >= budget {
                        break 'sweep;
                    }
                    let mut y = x.clone();
                    y.coords[i] += sign * step;
                    evaluations += 1;
                    if let Some((e, w)) = self.eval(&y, None, false) {
                        if e < error {
                            x = y;
                            error = e;
                            weights = w;
                            improved = true;
                            break;
                        }
                    }
                }
            }
            step = if improved { (step * 1.5).min(1.0) } else { step * 0.5 };
        }
        let exhausted = evaluations >= budget && error > EXACT && step > MIN_STEP;
        if let Some((e, w)) = self.eval(&x, Some(&weights), true) {
            if e < error {
                error = e;
                weights = w;
            }
        }
        Candidate { state: x, weights, error, evaluations, exhausted }
    }
}

/// Monomial atoms with evenly spread unimodular constants; degree `deg`
/// throughout, or cycling through `0..=deg` when `mixed`.
fn spread_start(k: usize, deg: usize, mixed: bool) -> State {
    let mut s = State { degrees: Vec::new(), coords: Vec::new() };
    for i in 0..k {
        let d = if mixed { i % (deg + 1) } else { deg };
        s.push_monomial(d, TAU * i as f64 / k as f64);
    }
    s
}

fn random_start(rng: &mut ChaCha8Rng, k: usize, deg: usize) -> State {
    let mut s = State { degrees: Vec::new(), coords: Vec::new() };
    for _ in 0..k {
        let d = rng.gen_range(0..=deg);
        s.degrees.push(d);
        s.coords.push(rng.gen_range(0.0..TAU));
        for _ in 0..d {
            let a = Complex64::from_polar(0.9 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU));
            let p = a / (1.0 - a.norm_sqr()).sqrt();
            s.coords.push(p.re);
            s.coords.push(p.im);
        }
    }
    s
}

fn cell_seed(seed: u64, k: usize, deg: usize, start: usize) -> u64 {
    seed ^ ((k as u64) << 48) ^ ((deg as u64) << 32) ^ (start as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn better(a: Candidate, b: Candidate) -> Candidate {
    if b.error < a.error {
        b
    } else {
        a
    }
}

/// Searches for `K` atoms of degree at most `d` and simplex weights that
/// minimise the sup-error against `target` on the grid nodes.
pub fn marshall_approximate<F: Analytic + ?Sized>(target: &F, params: &MarshallParams) -> Result<MarshallResult> {
    if params.atoms == 0 || params.starts == 0 || params.max_evaluations == 0 {
        return Err(invalid("atoms, starts and evaluation budget must be positive"));
    }
    if !(target.bound() <= 1.0 + 1e-12) {
        return Err(invalid(format!("target bound {} exceeds 1", target.bound())));
    }
    let samples: Vec<Complex64> = params.grid.nodes().map(|z| target.eval(z)).collect();
    let sup = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !(sup <= 1.0 + 1e-9) {
        return Err(invalid(format!("target sup-norm {sup} on the grid exceeds 1")));
    }
    let objective = Objective { grid: params.grid, target: &samples };
    let budget = params.max_evaluations;

    let mut table: Vec<Vec<Candidate>> = Vec::with_capacity(params.atoms);
    let mut cells = Vec::new();
    let mut evaluations = 0;
    let mut exhausted = false;
    for k in 1..=params.atoms {
        let mut row: Vec<Candidate> = Vec::with_capacity(params.max_degree + 1);
        for deg in 0..=params.max_degree {
            let mut all = Vec::new();
            if k > 1 {
                let prev = &table[k - 2][deg];
                let mut w = prev.weights.clone();
                w.push(0.0);
                let mut extended: Option<(f64, State)> = None;
                for j in 0..=deg {
                    for q in 0..8 {
                        let mut state = prev.state.clone();
                        state.push_monomial(j, TAU * q as f64 / 8.0);
                        if let Some((e, _)) = objective.eval(&state, Some(&w), false) {
                            if extended.as_ref().is_none_or(|(best, _)| e < *best) {
                                extended = Some((e, state));
                            }
                        }
                    }
                }
                evaluations += 8 * (deg + 1);
                if let Some((_, state)) = extended {
                    all.push(objective.polish(state, Some(&w), budget));
                }
            }
            if deg > 0 {
                let prev = &row[deg - 1];
                all.push(objective.polish(prev.state.clone(), Some(&prev.weights), budget));
            }
            for s in 0..params.starts {
                if all.iter().any(|c| c.error <= EXACT) {
                    break;
                }
                let start = if s == 0 {
                    let (state, used) = objective.greedy_monomials(k, deg);
                    evaluations += used;
                    state
                } else if s < 3 {
                    spread_start(k, deg, s == 2)
                } else {
                    random_start(&mut ChaCha8Rng::seed_from_u64(cell_seed(params.seed, k, deg, s)), k, deg)
                };
                all.push(objective.polish(start, None, budget));
            }
            evaluations += all.iter().map(|c| c.evaluations).sum::<usize>();
            exhausted |= all.iter().any(|c| c.exhausted);
            let best = all.into_iter().reduce(better).expect("at least one start");
            cells.push(CellError { atoms: k, max_degree: deg, error: best.error });
            row.push(best);
        }
        table.push(row);
    }

    let best = table.pop().and_then(|mut r| r.pop()).expect("nonempty table");
    let atom_specs = best.state.specs();
    let atoms = atom_specs.iter().map(|s| s.product()).collect::<Result<Vec<_>>>()?;
    let rows = params.grid.nodes().map(|z| atoms.iter().map(|b| b.eval(z)).collect()).collect();
    let problem = MinimaxProblem::new(rows, samples.clone())?;
    let solution = problem.solve_from(&MinimaxOptions::default(), Some(&best.weights))?;
    let combination = ConvexCombination::renormalize(&solution.weights, atoms)?;
    let error = params
        .grid
        .nodes()
        .zip(&samples)
        .map(|(z, &t)| (combination.eval(z) - t).norm())
        .fold(0.0, f64::max);
    Ok(MarshallResult {
        combination,
        atom_specs,
        error,
        lower_bound: solution.lower_bound,
        cells,
        evaluations,
        budget_exhausted: exhausted,
        seed: params.seed,
    })
}
