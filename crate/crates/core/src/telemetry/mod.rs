//! Level-per-day telemetry: ingestion, gap filling, legality of basis
//! vectors against the expansion schedule, hard assignment, and a synthetic
//! population generator.

mod assign;
mod ingest;
mod interpolate;
mod legality;
mod schedule;
mod synthetic;

pub use assign::{hard_assign, Assignment};
pub use ingest::{load_telemetry, load_telemetry_from_source, write_telemetry_csv};
pub use interpolate::interpolate_missing;
pub use legality::{legality_report, LegalityReport, VectorLegality, LEGALITY_TOLERANCE};
pub use schedule::ExpansionSchedule;
pub use synthetic::{generate_population, Phase, PlantedCurve, SyntheticSpec};

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Data matrix `V (d×n)`: one row per calendar day, one column per player.
#[derive(Debug, Clone, PartialEq)]
pub struct TelemetryMatrix {
    matrix: DenseMatrix,
    day_axis: Vec<u32>,
    player_ids: Vec<String>,
    /// Row-major `d×n`; false where the value was filled in.
    observed_mask: Vec<bool>,
}

impl TelemetryMatrix {
    pub fn new(
        matrix: DenseMatrix,
        day_axis: Vec<u32>,
        player_ids: Vec<String>,
        observed_mask: Vec<bool>,
    ) -> Result<Self> {
        if matrix.rows() != day_axis.len() || matrix.cols() != player_ids.len() {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but axes are {} days x {} players",
                matrix.rows(),
                matrix.cols(),
                day_axis.len(),
                player_ids.len()
            )));
        }
        if observed_mask.len() != matrix.values().len() {
            return Err(Error::Dimension(format!(
                "mask has {} entries, matrix {}",
                observed_mask.len(),
                matrix.values().len()
            )));
        }
        if day_axis.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation {
                message: "day axis must be strictly increasing".into(),
                rows: Vec::new(),
            });
        }
        let mut seen = HashSet::with_capacity(player_ids.len());
        if let Some(dup) = player_ids.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(Error::Validation {
                message: format!("duplicate player id `{dup}`"),
                rows: Vec::new(),
            });
        }
        Ok(TelemetryMatrix {
            matrix,
            day_axis,
            player_ids,
            observed_mask,
        })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    pub fn day_axis(&self) -> &[u32] {
        &self.day_axis
    }

    pub fn player_ids(&self) -> &[String] {
        &self.player_ids
    }

    pub fn observed_mask(&self) -> &[bool] {
        &self.observed_mask
    }

    pub fn days(&self) -> usize {
        self.day_axis.len()
    }

    pub fn players(&self) -> usize {
        self.player_ids.len()
    }

    pub fn is_observed(&self, day_row: usize, player: usize) -> bool {
        self.observed_mask[day_row * self.players() + player]
    }

    pub fn observed_fraction(&self) -> f64 {
        let seen = self.observed_mask.iter().filter(|&&b| b).count();
        seen as f64 / self.observed_mask.len() as f64
    }

    /// Checks every observed level against `[1, cap(day)]` and returns the
    /// `(day_row, player)` cells that fall outside.
    pub fn out_of_range_cells(&self, schedule: &ExpansionSchedule) -> Vec<(usize, usize)> {
        let n = self.players();
        let mut bad = Vec::new();
        for (r, &day) in self.day_axis.iter().enumerate() {
            let cap = schedule.cap(day);
            for (c, &x) in self.matrix.row(r).iter().enumerate() {
                if self.observed_mask[r * n + c] && !cap.is_some_and(|cap| (1.0..=cap).contains(&x)) {
                    bad.push((r, c));
                }
            }
        }
        bad
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut DenseMatrix, &[u32], &[String], &[bool]) {
        (
            &mut self.matrix,
            &self.day_axis,
            &self.player_ids,
            &self.observed_mask,
        )
    }
}
