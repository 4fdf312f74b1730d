use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{Analytic, CauchyExtension};
use crate::calculus::{corrector_for, spread_value};
use crate::disk::BoundaryGrid;
use crate::error::{invalid, Result};
use crate::factorization::QuotientFunction;

/// Quotients whose Fourier data has at most this much negative-frequency
/// mass are treated as analytic.
const ANALYTIC_TOL: f64 = 1e-9;

pub enum Step1Input<'a> {
    Analytic(&'a dyn Analytic),
    Quotient(&'a QuotientFunction),
}

/// Which function the spread search ran on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representative {
    Analytic,
    /// The quotient itself was analytic on the grid.
    QuotientValues,
    /// The quotient multiplied by its denominator.
    Numerator,
}

/// A new record in the mesh scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadStep {
    pub index: usize,
    pub point: Complex64,
    /// `|avg(f ∘ φ_a)|`.
    pub value: f64,
    pub corrector: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step1Report {
    pub representative: Representative,
    /// Negative-frequency mass of the quotient data (0 for analytic input).
    pub analyticity_defect: f64,
    pub records: Vec<SpreadStep>,
    pub best: f64,
    /// `1 − best`.
    pub deficiency: f64,
}

/// Scans `mesh` in order of increasing modulus and reports each new maximum
/// of `|avg(f ∘ φ_a)|` together with the unimodular corrector `c` making
/// `c · avg` real and positive.
pub fn step1_demo(x: Step1Input<'_>, mesh: &[Complex64], grid: BoundaryGrid) -> Result<Step1Report> {
    if mesh.is_empty() {
        return Err(invalid("step1 needs a nonempty mesh"));
    }
    if mesh.iter().any(|a| !(a.norm() < 1.0)) {
        return Err(invalid("mesh points must lie in the open disk"));
    }
    let extension;
    let (f, representative, analyticity_defect): (&dyn Analytic, _, _) = match x {
        Step1Input::Analytic(f) => (f, Representative::Analytic, 0.0),
        Step1Input::Quotient(q) => {
            let values = CauchyExtension::from_boundary(&q.values());
            let defect = values.analyticity_defect();
            if defect <= ANALYTIC_TOL {
                extension = values;
                (&extension, Representative::QuotientValues, defect)
            } else {
                extension = CauchyExtension::from_boundary(q.numerator());
                (&extension, Representative::Numerator, defect)
            }
        }
    };

    let mut order: Vec<usize> = (0..mesh.len()).collect();
    order.sort_by(|&i, &j| mesh[i].norm().total_cmp(&mesh[j].norm()));
    let averages: Vec<Complex64> =
        order.par_iter().map(|&i| spread_value(&f, mesh[i], grid)).collect::<Result<_>>()?;

    let mut records: Vec<SpreadStep> = Vec::new();
    for (&i, &avg) in order.iter().zip(&averages) {
        let value = avg.norm();
        if records.last().is_none_or(|r| value > r.value) {
            records.push(SpreadStep { index: i, point: mesh[i], value, corrector: corrector_for(avg) });
        }
    }
    let best = records.last().map_or(0.0, |r| r.value);
    Ok(Step1Report { representative, analyticity_defect, records, best, deficiency: 1.0 - best })
}
