use serde::{Deserialize, Serialize};

use crate::calculus::Panel;
use crate::disk::BoundaryFunction;
use crate::error::{invalid, Result};
use crate::minimax::{MinimaxOptions, MinimaxProblem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullResult {
    /// `max_j |⟨Σ wᵢ sᵢ − target, h_j⟩|` at `weights`.
    pub distance: f64,
    pub weights: Vec<f64>,
    /// Certified lower bound on the projected distance.
    pub lower_bound: f64,
    /// Distance at uniform weights.
    pub uniform_distance: f64,
    pub converged: bool,
}

/// Distance from `target` to the convex hull of `samples`, measured through
/// the pairings with the densities of `panel`.
pub fn hull_distance(target: &BoundaryFunction, samples: &[BoundaryFunction], panel: &Panel) -> Result<HullResult> {
    hull_distance_with(target, samples, panel, &MinimaxOptions::default())
}

pub fn hull_distance_with(
    target: &BoundaryFunction,
    samples: &[BoundaryFunction],
    panel: &Panel,
    options: &MinimaxOptions,
) -> Result<HullResult> {
    if samples.is_empty() {
        return Err(invalid("hull distance needs at least one sample"));
    }
    let offsets = panel.pairings(target)?;
    let columns: Vec<_> = samples.iter().map(|s| panel.pairings(s)).collect::<Result<_>>()?;
    let rows = (0..panel.len()).map(|j| columns.iter().map(|c| c[j]).collect()).collect();
    let problem = MinimaxProblem::new(rows, offsets)?;
    let uniform = vec![1.0 / samples.len() as f64; samples.len()];
    let uniform_distance = problem.objective(&uniform);
    let solution = problem.solve(options)?;
    Ok(HullResult {
        distance: solution.value,
        weights: solution.weights,
        lower_bound: solution.lower_bound,
        uniform_distance,
        converged: solution.converged,
    })
}
