use serde::{Deserialize, Serialize};

use super::ExpansionSchedule;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Slack for floating-point residue in filled-in monotone curves.
pub const LEGALITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorLegality {
    /// Adjacent days on which the level drops by more than the tolerance.
    pub monotonicity_violations: usize,
    /// Days with a level below 1 or above that day's cap.
    pub range_violations: usize,
    pub is_legal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegalityReport {
    pub per_vector: Vec<VectorLegality>,
    /// Fraction of basis vectors that are legal.
    pub aggregate_legality: f64,
}

/// Checks each column of `w` as a level trajectory: characters never lose
/// levels and never leave `[1, cap(day)]`.
pub fn legality_report(w: &DenseMatrix, schedule: &ExpansionSchedule, day_axis: &[u32]) -> Result<LegalityReport> {
    if w.rows() != day_axis.len() {
        return Err(Error::Dimension(format!(
            "basis has {} rows, day axis {} entries",
            w.rows(),
            day_axis.len()
        )));
    }
    let k = w.cols();
    let mut monotone = vec![0usize; k];
    let mut range = vec![0usize; k];
    for (r, &day) in day_axis.iter().enumerate() {
        let cap = schedule.cap(day);
        let row = w.row(r);
        for (j, &x) in row.iter().enumerate() {
            let inside = cap.is_some_and(|cap| x >= 1.0 - LEGALITY_TOLERANCE && x <= cap + LEGALITY_TOLERANCE);
            range[j] += usize::from(!inside);
            if r > 0 && x < w.get(r - 1, j) - LEGALITY_TOLERANCE {
                monotone[j] += 1;
            }
        }
    }
    let per_vector: Vec<VectorLegality> = monotone
        .into_iter()
        .zip(range)
        .map(|(m, r)| VectorLegality {
            monotonicity_violations: m,
            range_violations: r,
            is_legal: m == 0 && r == 0,
        })
        .collect();
    let legal = per_vector.iter().filter(|v| v.is_legal).count();
    Ok(LegalityReport {
        aggregate_legality: legal as f64 / k as f64,
        per_vector,
    })
}
