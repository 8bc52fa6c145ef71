use std::path::Path;

use rand::seq::index;
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::{ExpansionSchedule, TelemetryMatrix};
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, RandomSeed};

/// One leveling phase: from `start_day` on, gain `leveling_rate` levels per
/// day until `target_level`, never passing the cap of the day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub start_day: u32,
    pub leveling_rate: f64,
    pub target_level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedCurve {
    pub phases: Vec<Phase>,
}

impl PlantedCurve {
    /// Day-by-day levels starting from level 1. A phase blocked by the cap
    /// resumes as soon as the cap is raised.
    pub fn levels(&self, days: usize, schedule: &ExpansionSchedule) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(days);
        let mut level: f64 = 1.0;
        for day in 0..days as u32 {
            let cap = schedule.cap(day).ok_or_else(|| {
                Error::config("schedule", format!("no level cap defined for day {day}"))
            })?;
            let active = self.phases.iter().rev().find(|p| p.start_day <= day);
            if let Some(p) = active {
                let next = (level + p.leveling_rate).min(p.target_level).min(cap);
                level = level.max(next);
            }
            out.push(level);
        }
        Ok(out)
    }

    fn validate(&self, index: usize, schedule: &ExpansionSchedule) -> Result<()> {
        let field = format!("archetype_curves[{index}]");
        if self.phases.is_empty() {
            return Err(Error::config(&field, "needs at least one phase"));
        }
        if self.phases.windows(2).any(|w| w[0].start_day >= w[1].start_day) {
            return Err(Error::config(&field, "phase start days must be strictly increasing"));
        }
        for p in &self.phases {
            if !(p.leveling_rate > 0.0) || !p.leveling_rate.is_finite() {
                return Err(Error::config(&field, "leveling_rate must be positive"));
            }
            if !(p.target_level >= 1.0) || p.target_level > schedule.max_cap() {
                return Err(Error::Validation {
                    message: format!(
                        "{field}: target level {} is not reachable under caps up to {}",
                        p.target_level,
                        schedule.max_cap()
                    ),
                    rows: Vec::new(),
                });
            }
        }
        Ok(())
    }
}

/// Configuration of a synthetic player population: planted archetype
/// curves plus strictly interior mixtures of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_players: usize,
    pub days: usize,
    pub schedule: ExpansionSchedule,
    pub archetype_curves: Vec<PlantedCurve>,
    #[serde(default = "default_shrink")]
    pub mixture_shrink: f64,
    #[serde(default = "default_missing")]
    pub missing_fraction: f64,
    #[serde(default)]
    pub seed: RandomSeed,
}

fn default_shrink() -> f64 {
    0.9
}

fn default_missing() -> f64 {
    0.03
}

impl Default for SyntheticSpec {
    /// 2000 players over 200 days with eight planted behaviors.
    fn default() -> Self {
        Self::scaled(200, 2000, RandomSeed(0))
    }
}

impl SyntheticSpec {
    /// Eight player archetypes laid out over a `days`-long horizon under the
    /// WoW-like schedule stretched to the same horizon.
    pub fn scaled(days: usize, n_players: usize, seed: RandomSeed) -> Self {
        let horizon = days as f64;
        let at = |frac: f64| (frac * horizon).round() as u32;
        // (start, duration) as fractions of the horizon.
        let phase = |start: f64, duration: f64, from: f64, target: f64| Phase {
            start_day: at(start),
            leveling_rate: (target - from) / (duration * horizon).round().max(1.0),
            target_level: target,
        };
        let curves = vec![
            // slow casual
            vec![phase(0.0, 0.95, 1.0, 20.0)],
            // hardcore, always at the cap
            vec![phase(0.0, 0.04, 1.0, 80.0)],
            // late starter
            vec![phase(0.5, 0.3, 1.0, 80.0)],
            // early quitter
            vec![phase(0.0, 0.15, 1.0, 40.0)],
            // steady
            vec![phase(0.0, 1.0, 1.0, 80.0)],
            // returning player
            vec![phase(0.0, 0.1, 1.0, 30.0), phase(0.6, 0.1, 30.0, 70.0)],
            // mid-life joiner
            vec![phase(0.25, 0.05, 1.0, 70.0), phase(0.62, 0.03, 70.0, 80.0)],
            // stops at the first cap
            vec![phase(0.0, 0.3, 1.0, 60.0)],
        ];
        SyntheticSpec {
            n_players,
            days,
            schedule: ExpansionSchedule::wow_scaled(days as u32),
            archetype_curves: curves.into_iter().map(|phases| PlantedCurve { phases }).collect(),
            mixture_shrink: default_shrink(),
            missing_fraction: default_missing(),
            seed,
        }
    }

    pub fn k(&self) -> usize {
        self.archetype_curves.len()
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("synthetic", e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Format {
            path: path.to_owned(),
            message: e.to_string(),
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.days == 0 || self.days > u32::MAX as usize {
            return Err(Error::config("days", "must be a positive day count"));
        }
        if self.archetype_curves.is_empty() {
            return Err(Error::config("archetype_curves", "needs at least one curve"));
        }
        if self.n_players < self.k() {
            return Err(Error::config(
                "n_players",
                format!("{} players cannot hold {} planted curves", self.n_players, self.k()),
            ));
        }
        if !(self.mixture_shrink > 0.0 && self.mixture_shrink < 1.0) {
            return Err(Error::config("mixture_shrink", "must lie in (0, 1)"));
        }
        if !(0.0..1.0).contains(&self.missing_fraction) {
            return Err(Error::config("missing_fraction", "must lie in [0, 1)"));
        }
        for (i, c) in self.archetype_curves.iter().enumerate() {
            c.validate(i, &self.schedule)?;
        }
        Ok(())
    }
}

/// Generates the population and the column index of each planted curve.
///
/// Planted columns are the curves verbatim. Every other column is
/// `shrink · Σ λ_j curve_j + (1 − shrink) · mean_curve` with Dirichlet(1)
/// weights, which puts it strictly inside the hull of the curves. Cells are
/// then hidden independently with probability `missing_fraction` (values
/// zeroed, mask false), keeping at least one observation per player.
pub fn generate_population(spec: &SyntheticSpec) -> Result<(TelemetryMatrix, Vec<usize>)> {
    spec.validate()?;
    let (d, n, k) = (spec.days, spec.n_players, spec.k());
    let curves: Vec<Vec<f64>> = spec
        .archetype_curves
        .iter()
        .map(|c| c.levels(d, &spec.schedule))
        .collect::<Result<_>>()?;
    let mean: Vec<f64> = (0..d)
        .map(|r| curves.iter().map(|c| c[r]).sum::<f64>() / k as f64)
        .collect();

    let mut rng = spec.seed.rng();
    let planted = index::sample(&mut rng, n, k).into_vec();
    let mut planted_at = vec![None; n];
    for (j, &c) in planted.iter().enumerate() {
        planted_at[c] = Some(j);
    }
    let shrink = spec.mixture_shrink;
    // Mixing weights, column-major k per player.
    let mut weights = vec![0.0; n * k];
    for c in 0..n {
        if planted_at[c].is_some() {
            continue;
        }
        let w = &mut weights[c * k..(c + 1) * k];
        for x in w.iter_mut() {
            *x = rng.sample::<f64, _>(Exp1);
        }
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x = shrink * *x / total);
    }

    let mut values = vec![0.0; d * n];
    for (r, row) in values.chunks_mut(n).enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            *slot = match planted_at[c] {
                Some(j) => curves[j][r],
                None => {
                    let mix: f64 = (0..k).map(|j| weights[c * k + j] * curves[j][r]).sum();
                    mix + (1.0 - shrink) * mean[r]
                }
            };
        }
    }

    let mut mask = vec![true; d * n];
    if spec.missing_fraction > 0.0 {
        for m in mask.iter_mut() {
            *m = !rng.random_bool(spec.missing_fraction);
        }
        for c in 0..n {
            if (0..d).all(|r| !mask[r * n + c]) {
                mask[c] = true;
            }
        }
        for (v, &m) in values.iter_mut().zip(&mask) {
            if !m {
                *v = 0.0;
            }
        }
    }

    let width = (n.max(2) - 1).to_string().len();
    let ids = (0..n).map(|c| format!("p{c:0width$}")).collect();
    let t = TelemetryMatrix::new(
        DenseMatrix::new(d, n, values)?,
        (0..d as u32).collect(),
        ids,
        mask,
    )?;
    Ok((t, planted))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_curves_are_monotone_and_capped() {
        let spec = SyntheticSpec::default();
        for c in &spec.archetype_curves {
            let levels = c.levels(spec.days, &spec.schedule).unwrap();
            assert!(levels.windows(2).all(|w| w[0] <= w[1]));
            for (day, &l) in levels.iter().enumerate() {
                assert!(l >= 1.0 && l <= spec.schedule.cap(day as u32).unwrap());
            }
        }
    }

    #[test]
    fn hardcore_curve_waits_for_expansions() {
        let spec = SyntheticSpec::default();
        let levels = spec.archetype_curves[1].levels(spec.days, &spec.schedule).unwrap();
        assert_eq!(levels[33], 60.0);
        assert_eq!(*levels.last().unwrap(), 80.0);
    }

    #[test]
    fn no_missing_means_full_mask() {
        let spec = SyntheticSpec {
            missing_fraction: 0.0,
            n_players: 50,
            ..SyntheticSpec::default()
        };
        let (t, planted) = generate_population(&spec).unwrap();
        assert!(t.observed_mask().iter().all(|&b| b));
        assert_eq!(planted.len(), 8);
    }

    #[test]
    fn unreachable_target_is_rejected() {
        let mut spec = SyntheticSpec::default();
        spec.archetype_curves[0].phases[0].target_level = 85.0;
        assert!(matches!(generate_population(&spec), Err(Error::Validation { .. })));
    }

    #[test]
    fn toml_round_trip() {
        let spec = SyntheticSpec::default();
        let back = SyntheticSpec::from_toml_str(&spec.to_toml_string()).unwrap();
        assert_eq!(back, spec);
    }
}
