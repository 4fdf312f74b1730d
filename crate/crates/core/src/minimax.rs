//! Complex minimax over the probability simplex:
//!
//! ```text
//! minimize   max_j | Σ_i A_{j,i} w_i − b_j |   over  w_i ≥ 0, Σ w_i = 1.
//! ```
//!
//! Each modulus is replaced by the supporting half-planes
//! `Re(ū (A_j w − b_j)) ≤ t` for a set of unit directions `u`. Over the
//! simplex that relaxation is the value of a finite matrix game, solved
//! exactly by a dense simplex method. Directions are added where the true
//! modulus exceeds the relaxation (Kelley cutting planes) until the lower
//! bound from the relaxation and the objective at the current weights agree.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimaxOptions {
    /// Directions per residual in the first relaxation.
    pub initial_directions: usize,
    pub max_rounds: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_cuts_per_round: usize,
}

impl Default for MinimaxOptions {
    fn default() -> Self {
        Self {
            initial_directions: 4,
            max_rounds: 80,
            abs_tol: 1e-14,
            rel_tol: 1e-10,
            max_cuts_per_round: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaxSolution {
    pub weights: Vec<f64>,
    /// Objective at `weights`.
    pub value: f64,
    /// Certified lower bound on the optimum.
    pub lower_bound: f64,
    pub rounds: usize,
    pub converged: bool,
}

/// Residual matrix `A` (rows = residuals, columns = simplex coordinates) and
/// offsets `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimaxProblem {
    rows: Vec<Vec<Complex64>>,
    offsets: Vec<Complex64>,
    columns: usize,
}

impl MinimaxProblem {
    pub fn new(rows: Vec<Vec<Complex64>>, offsets: Vec<Complex64>) -> Result<Self> {
        if rows.is_empty() {
            return Err(invalid("minimax problem has no residuals"));
        }
        if rows.len() != offsets.len() {
            return Err(invalid("residual rows and offsets differ in length"));
        }
        let columns = rows[0].len();
        if columns == 0 || rows.iter().any(|r| r.len() != columns) {
            return Err(invalid("residual rows must share a positive column count"));
        }
        if rows.iter().flatten().chain(&offsets).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("minimax data must be finite"));
        }
        Ok(Self { rows, offsets, columns })
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn residuals(&self, w: &[f64]) -> Vec<Complex64> {
        self.rows
            .iter()
            .zip(&self.offsets)
            .map(|(row, &b)| row.iter().zip(w).fold(-b, |acc, (&a, &wi)| acc + a * wi))
            .collect()
    }

    pub fn objective(&self, w: &[f64]) -> f64 {
        self.residuals(w).iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    pub fn solve(&self, options: &MinimaxOptions) -> Result<MinimaxSolution> {
        self.solve_from(options, None)
    }

    /// Like [`solve`](Self::solve), but never returns weights worse than
    /// `incumbent` (which must lie in the simplex).
    pub fn solve_from(&self, options: &MinimaxOptions, incumbent: Option<&[f64]>) -> Result<MinimaxSolution> {
        let k = self.columns;
        let uniform = vec![1.0 / k as f64; k];
        let mut best_w = uniform.clone();
        let mut best = self.objective(&uniform);
        if let Some(w) = incumbent {
            if w.len() != k || w.iter().any(|&x| !(x >= 0.0)) || (w.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(invalid("incumbent weights are not a point of the simplex"));
            }
            let v = self.objective(w);
            if v < best {
                best = v;
                best_w = w.to_vec();
            }
        }
        if k == 1 {
            return Ok(MinimaxSolution { weights: vec![1.0], value: best, lower_bound: best, rounds: 0, converged: true });
        }

        let dirs = options.initial_directions.max(3);
        let mut cuts: Vec<(usize, Complex64)> = (0..self.rows.len())
            .flat_map(|j| (0..dirs).map(move |d| (j, Complex64::from_polar(1.0, TAU * d as f64 / dirs as f64))))
            .collect();
        let mut lower = f64::NEG_INFINITY;
        let mut converged = false;
        let mut rounds = 0;

        while rounds < options.max_rounds {
            rounds += 1;
            let (w, value) = self.solve_relaxation(&cuts)?;
            lower = lower.max(value);
            let residuals = self.residuals(&w);
            let upper = residuals.iter().map(|r| r.norm()).fold(0.0, f64::max);
            if upper < best {
                best = upper;
                best_w = w;
            }
            if best - lower <= options.abs_tol + options.rel_tol * best {
                converged = true;
                break;
            }
            let mut violated: Vec<(usize, f64)> = residuals
                .iter()
                .enumerate()
                .map(|(j, r)| (j, r.norm()))
                .filter(|&(_, m)| m > lower + options.abs_tol)
                .collect();
            violated.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            let before = cuts.len();
            for &(j, m) in violated.iter().take(options.max_cuts_per_round) {
                let u = residuals[j] / m;
                if !cuts.iter().any(|&(jj, uu)| jj == j && (uu - u).norm() < 1e-13) {
                    cuts.push((j, u));
                }
            }
            if cuts.len() == before {
                // the relaxation is already tight at every violated residual
                converged = best - lower <= 1e3 * (options.abs_tol + options.rel_tol * best);
                break;
            }
        }

        Ok(MinimaxSolution { weights: best_w, value: best, lower_bound: lower.min(best).max(0.0), rounds, converged })
    }

    /// Solves `min_w max_c Re(ū_c (A_{j_c} w − b_{j_c}))` over the simplex.
    fn solve_relaxation(&self, cuts: &[(usize, Complex64)]) -> Result<(Vec<f64>, f64)> {
        let k = self.columns;
        let mut payoff: Vec<f64> = Vec::with_capacity(cuts.len() * k);
        for &(j, u) in cuts {
            let uc = u.conj();
            let b = self.offsets[j];
            payoff.extend(self.rows[j].iter().map(|&a| (uc * (a - b)).re));
        }
        let lowest = payoff.iter().copied().fold(f64::INFINITY, f64::min);
        let shift = 1.0 - lowest;
        payoff.iter_mut().for_each(|p| *p += shift);
        let (x, total) = max_sum_packing(&payoff, cuts.len(), k)?;
        let weights: Vec<f64> = x.iter().map(|xi| xi / total).collect();
        Ok((weights, 1.0 / total - shift))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    Slack(usize),
    Column(usize),
}

impl Var {
    fn order(self, columns: usize) -> usize {
        match self {
            Var::Column(j) => j,
            Var::Slack(i) => columns + i,
        }
    }
}

/// `maximize Σ x  s.t.  P x ≤ 1, x ≥ 0` for a strictly positive `rows × cols`
/// matrix `P` (row-major). The origin is feasible and the region is bounded,
/// so a single simplex phase suffices. Returns `(x, Σ x)`.
fn max_sum_packing(p: &[f64], rows: usize, cols: usize) -> Result<(Vec<f64>, f64)> {
    const EPS: f64 = 1e-12;
    let mut t = p.to_vec();
    let mut rhs = vec![1.0_f64; rows];
    let mut obj = vec![1.0; cols];
    let mut basic: Vec<Var> = (0..rows).map(Var::Slack).collect();
    let mut nonbasic: Vec<Var> = (0..cols).map(Var::Column).collect();
    let bland_after = 50 * (rows + cols);
    let max_iter = 200 * (rows + cols) + 1000;

    for iter in 0..max_iter {
        let entering = if iter < bland_after {
            (0..cols).filter(|&c| obj[c] > EPS).max_by(|&a, &b| obj[a].total_cmp(&obj[b]).then(b.cmp(&a)))
        } else {
            (0..cols).filter(|&c| obj[c] > EPS).min_by_key(|&c| nonbasic[c].order(cols))
        };
        let Some(c) = entering else {
            let mut x = vec![0.0; cols];
            for (i, var) in basic.iter().enumerate() {
                if let Var::Column(j) = *var {
                    x[j] = rhs[i].max(0.0);
                }
            }
            let total: f64 = x.iter().sum();
            if !(total > 0.0) {
                return Err(invalid("degenerate matrix game"));
            }
            return Ok((x, total));
        };

        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            let a = t[i * cols + c];
            if a > EPS {
                let ratio = rhs[i] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        let better = ratio < lr - 1e-15 * lr.abs().max(1.0)
                            || (ratio <= lr + 1e-15 * lr.abs().max(1.0)
                                && basic[i].order(cols) < basic[li].order(cols));
                        if better { Some((i, ratio)) } else { Some((li, lr)) }
                    }
                };
            }
        }
        let Some((r, _)) = leave else {
            return Err(invalid("matrix game relaxation is unbounded"));
        };

        let piv = t[r * cols + c];
        let pivot_row: Vec<f64> = t[r * cols..(r + 1) * cols].to_vec();
        let pivot_rhs = rhs[r];
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = t[i * cols + c];
            if factor == 0.0 {
                continue;
            }
            let ratio = factor / piv;
            let row = &mut t[i * cols..(i + 1) * cols];
            for (k, v) in row.iter_mut().enumerate() {
                if k != c {
                    *v -= ratio * pivot_row[k];
                }
            }
            row[c] = -ratio;
            rhs[i] -= ratio * pivot_rhs;
        }
        let oc = obj[c] / piv;
        for k in 0..cols {
            if k != c {
                obj[k] -= oc * pivot_row[k];
            }
        }
        obj[c] = -oc;
        for k in 0..cols {
            if k != c {
                t[r * cols + k] = pivot_row[k] / piv;
            }
        }
        t[r * cols + c] = 1.0 / piv;
        rhs[r] = pivot_rhs / piv;
        std::mem::swap(&mut basic[r], &mut nonbasic[c]);
    }
    Err(invalid("simplex iteration limit reached"))
}
