use super::TelemetryMatrix;
use crate::error::{Error, Result};

/// Fills unobserved cells of every player column: linear in the day index
/// between the surrounding observations, holding the first observed level
/// before it and the last observed level after it. Observed cells and the
/// mask are left untouched, so filled cells stay marked as unobserved.
pub fn interpolate_missing(mut t: TelemetryMatrix) -> Result<TelemetryMatrix> {
    let (matrix, days, ids, mask) = t.parts_mut();
    let (d, n) = matrix.shape();
    // Row of the most recent observation per column.
    let mut last: Vec<Option<usize>> = vec![None; n];

    for r in 0..d {
        for c in 0..n {
            if !mask[r * n + c] {
                continue;
            }
            let level = matrix.get(r, c);
            match last[c] {
                None => {
                    for g in 0..r {
                        matrix.set(g, c, level);
                    }
                }
                Some(a) if a + 1 < r => {
                    let start = matrix.get(a, c);
                    let span = f64::from(days[r] - days[a]);
                    for g in (a + 1)..r {
                        let t = f64::from(days[g] - days[a]) / span;
                        matrix.set(g, c, start + (level - start) * t);
                    }
                }
                Some(_) => {}
            }
            last[c] = Some(r);
        }
    }

    for (c, seen) in last.iter().enumerate() {
        match *seen {
            None => {
                return Err(Error::Validation {
                    message: format!("player `{}` has no observations", ids[c]),
                    rows: Vec::new(),
                })
            }
            Some(a) => {
                let level = matrix.get(a, c);
                for g in (a + 1)..d {
                    matrix.set(g, c, level);
                }
            }
        }
    }
    Ok(t)
}
