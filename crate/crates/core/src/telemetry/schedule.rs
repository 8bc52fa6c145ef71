use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reference horizon (days) of the shipped WoW-like schedule.
const WOW_HORIZON: f64 = 2555.0;

/// Piecewise-constant level cap over calendar days.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u32, f64)>", into = "Vec<(u32, f64)>")]
pub struct ExpansionSchedule {
    breakpoints: Vec<(u32, f64)>,
}

impl ExpansionSchedule {
    pub fn new(breakpoints: Vec<(u32, f64)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::config("schedule", "needs at least one breakpoint"));
        }
        for w in breakpoints.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::config("schedule", "day indices must be strictly increasing"));
            }
            if w[0].1 >= w[1].1 {
                return Err(Error::config("schedule", "level caps must be strictly increasing"));
            }
        }
        if let Some(&(day, cap)) = breakpoints.iter().find(|(_, cap)| !(cap.is_finite() && *cap >= 1.0)) {
            return Err(Error::config(
                "schedule",
                format!("cap {cap} at day {day} must be a finite level >= 1"),
            ));
        }
        Ok(ExpansionSchedule { breakpoints })
    }

    /// Caps 60 → 70 → 80 with the two raises at days 440 and 1510.
    pub fn wow_default() -> Self {
        ExpansionSchedule {
            breakpoints: vec![(0, 60.0), (440, 70.0), (1510, 80.0)],
        }
    }

    /// The default schedule with its breakpoints stretched to `days`.
    pub fn wow_scaled(days: u32) -> Self {
        let mut breakpoints: Vec<(u32, f64)> = Vec::new();
        for (day, cap) in Self::wow_default().breakpoints {
            let scaled = (day as f64 * days as f64 / WOW_HORIZON).round() as u32;
            match breakpoints.last_mut() {
                Some(last) if last.0 >= scaled => last.1 = cap,
                _ => breakpoints.push((scaled, cap)),
            }
        }
        ExpansionSchedule { breakpoints }
    }

    pub fn breakpoints(&self) -> &[(u32, f64)] {
        &self.breakpoints
    }

    /// Cap of the last breakpoint at or before `day`; `None` before the first.
    pub fn cap(&self, day: u32) -> Option<f64> {
        let idx = self.breakpoints.partition_point(|&(d, _)| d <= day);
        idx.checked_sub(1).map(|i| self.breakpoints[i].1)
    }

    pub fn max_cap(&self) -> f64 {
        self.breakpoints.last().map_or(0.0, |b| b.1)
    }

    /// Reads a `day_index,level_cap` CSV with header.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| csv_error(path, e))?;
        let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["day_index", "level_cap"] {
            return Err(Error::Parse {
                path: path.to_owned(),
                line: 1,
                message: "expected header `day_index,level_cap`".into(),
            });
        }
        let mut breakpoints = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| csv_error(path, e))?;
            let line = record.position().map_or(0, |p| p.line());
            let parse_err = |what: &str| Error::Parse {
                path: path.to_owned(),
                line,
                message: format!("invalid {what}"),
            };
            let day = record[0].parse::<u32>().map_err(|_| parse_err("day_index"))?;
            let cap = record[1].parse::<f64>().map_err(|_| parse_err("level_cap"))?;
            breakpoints.push((day, cap));
        }
        if breakpoints.is_empty() {
            return Err(Error::EmptyInput(format!("{} has no breakpoints", path.display())));
        }
        Self::new(breakpoints)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("day_index,level_cap\n");
        for (day, cap) in &self.breakpoints {
            out.push_str(&format!("{day},{cap}\n"));
        }
        out
    }
}

impl TryFrom<Vec<(u32, f64)>> for ExpansionSchedule {
    type Error = Error;

    fn try_from(value: Vec<(u32, f64)>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<ExpansionSchedule> for Vec<(u32, f64)> {
    fn from(s: ExpansionSchedule) -> Self {
        s.breakpoints
    }
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        kind => Error::Parse {
            path: path.to_owned(),
            line,
            message: format!("{kind:?}"),
        },
    }
}
