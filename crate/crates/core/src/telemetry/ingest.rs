use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{self, Read};
use std::path::Path;

use super::schedule::csv_error;
use super::{ExpansionSchedule, TelemetryMatrix};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

const HEADER: [&str; 3] = ["player_id", "day_index", "level"];
/// Offending rows listed in a validation error.
const MAX_LISTED_ROWS: usize = 1000;

/// Reads a long-form `player_id,day_index,level` CSV into a `days × players`
/// matrix. See [`load_telemetry_from_source`].
pub fn load_telemetry(path: impl AsRef<Path>, schedule: &ExpansionSchedule) -> Result<TelemetryMatrix> {
    let path = path.as_ref();
    load_telemetry_from_source(|| File::open(path), path, schedule)
}

/// Pivots long-form records from `open()` into a [`TelemetryMatrix`].
///
/// The source is read twice: once to collect the day axis and player set and
/// validate every row, once to fill the matrix. The day axis is the sorted
/// set of observed days; players are ordered by their first observed day,
/// then by id. Repeated `(player, day)` rows keep the highest level.
pub fn load_telemetry_from_source<R, F>(mut open: F, label: &Path, schedule: &ExpansionSchedule) -> Result<TelemetryMatrix>
where
    R: Read,
    F: FnMut() -> io::Result<R>,
{
    let mut first_day: HashMap<Vec<u8>, u32> = HashMap::new();
    let mut days: HashSet<u32> = HashSet::new();
    let mut offending: Vec<u64> = Vec::new();
    let mut offending_total = 0usize;
    let mut rows = 0u64;

    for_each_record(open().map_err(|e| Error::io(label, e))?, label, |line, id, day, level| {
        rows += 1;
        if !schedule.cap(day).is_some_and(|cap| level >= 1.0 && level <= cap) {
            offending_total += 1;
            if offending.len() < MAX_LISTED_ROWS {
                offending.push(line);
            }
        }
        days.insert(day);
        match first_day.get_mut(id) {
            Some(d) => *d = (*d).min(day),
            None => {
                std::str::from_utf8(id).map_err(|_| Error::Parse {
                    path: label.to_owned(),
                    line,
                    message: "player_id is not valid UTF-8".into(),
                })?;
                first_day.insert(id.to_vec(), day);
            }
        }
        Ok(())
    })?;

    if rows == 0 {
        return Err(Error::EmptyInput(format!("{} has no telemetry rows", label.display())));
    }
    if offending_total > 0 {
        let listed: Vec<String> = offending.iter().map(u64::to_string).collect();
        return Err(Error::Validation {
            message: format!(
                "{}: {offending_total} row(s) with level outside [1, cap(day)] (lines {}{})",
                label.display(),
                listed.join(", "),
                if offending_total > listed.len() { ", ..." } else { "" }
            ),
            rows: offending,
        });
    }

    let mut day_axis: Vec<u32> = days.into_iter().collect();
    day_axis.sort_unstable();
    let mut players: Vec<(u32, Vec<u8>)> = first_day.into_iter().map(|(id, d)| (d, id)).collect();
    players.sort_unstable();
    let column_of: HashMap<&[u8], usize> = players
        .iter()
        .enumerate()
        .map(|(c, (_, id))| (id.as_slice(), c))
        .collect();

    let (d, n) = (day_axis.len(), players.len());
    let mut matrix = DenseMatrix::zeros(d, n);
    let mut mask = vec![false; d * n];
    for_each_record(open().map_err(|e| Error::io(label, e))?, label, |line, id, day, level| {
        let changed = || Error::Parse {
            path: label.to_owned(),
            line,
            message: "source changed between passes".into(),
        };
        let c = *column_of.get(id).ok_or_else(changed)?;
        let r = day_axis.binary_search(&day).map_err(|_| changed())?;
        let slot = &mut mask[r * n + c];
        if !*slot || level > matrix.get(r, c) {
            matrix.set(r, c, level);
        }
        *slot = true;
        Ok(())
    })?;

    drop(column_of);
    let player_ids = players
        .into_iter()
        .map(|(_, id)| String::from_utf8(id).expect("checked on first pass"))
        .collect();
    TelemetryMatrix::new(matrix, day_axis, player_ids, mask)
}

fn for_each_record<R: Read>(
    source: R,
    label: &Path,
    mut f: impl FnMut(u64, &[u8], u32, f64) -> Result<()>,
) -> Result<()> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(io::BufReader::with_capacity(1 << 20, source));
    let headers = reader.byte_headers().map_err(|e| csv_error(label, e))?;
    if headers.is_empty() {
        return Err(Error::EmptyInput(format!("{} is empty", label.display())));
    }
    if headers.iter().ne(HEADER.iter().map(|h| h.as_bytes())) {
        return Err(Error::Parse {
            path: label.to_owned(),
            line: 1,
            message: format!("expected header `{}`", HEADER.join(",")),
        });
    }
    let mut record = csv::ByteRecord::new();
    loop {
        match reader.read_byte_record(&mut record) {
            Ok(false) => return Ok(()),
            Ok(true) => {}
            Err(e) => return Err(csv_error(label, e)),
        }
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::Parse {
            path: label.to_owned(),
            line,
            message,
        };
        if record.len() != 3 {
            return Err(bad(format!("expected 3 fields, found {}", record.len())));
        }
        let id = &record[0];
        if id.is_empty() {
            return Err(bad("empty player_id".into()));
        }
        let day = parse::<u32>(&record[1]).ok_or_else(|| bad("day_index must be a non-negative integer".into()))?;
        let level = parse::<f64>(&record[2])
            .filter(|x| x.is_finite())
            .ok_or_else(|| bad("level must be a finite number".into()))?;
        f(line, id, day, level)?;
    }
}

fn parse<T: std::str::FromStr>(bytes: &[u8]) -> Option<T> {
    std::str::from_utf8(bytes).ok()?.parse().ok()
}

/// Writes the observed cells of `t` as long-form CSV, player by player.
pub fn write_telemetry_csv(t: &TelemetryMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer.write_record(HEADER).map_err(|e| csv_error(path, e))?;
    let values = t.matrix();
    for (c, id) in t.player_ids().iter().enumerate() {
        for (r, day) in t.day_axis().iter().enumerate() {
            if t.is_observed(r, c) {
                writer
                    .write_record([id.as_str(), &day.to_string(), &values.get(r, c).to_string()])
                    .map_err(|e| csv_error(path, e))?;
            }
        }
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load_str(text: &str) -> Result<TelemetryMatrix> {
        let bytes = text.as_bytes().to_vec();
        load_telemetry_from_source(
            || Ok(io::Cursor::new(bytes.clone())),
            Path::new("mem.csv"),
            &ExpansionSchedule::wow_default(),
        )
    }

    #[test]
    fn fully_observed_pivot() {
        let t = load_str("player_id,day_index,level\na,0,1\na,1,2\na,2,3\nb,0,5\nb,1,5\nb,2,6\n").unwrap();
        assert_eq!(t.matrix().shape(), (3, 2));
        assert!(t.observed_mask().iter().all(|&b| b));
        assert_eq!(t.matrix().column(1), vec![5.0, 5.0, 6.0]);
    }

    #[test]
    fn gap_is_unobserved() {
        let t = load_str("player_id,day_index,level\np1,1,3\np1,3,4\np2,2,9\n").unwrap();
        assert_eq!(t.day_axis(), &[1, 2, 3]);
        assert!(!t.is_observed(1, 0));
        assert!(t.is_observed(0, 0) && t.is_observed(2, 0));
    }

    #[test]
    fn duplicate_rows_keep_the_maximum() {
        let t = load_str("player_id,day_index,level\np1,5,20\np1,5,21\np1,5,19\n").unwrap();
        assert_eq!(t.matrix().get(0, 0), 21.0);
    }

    #[test]
    fn players_ordered_by_first_day_then_id() {
        let t = load_str("player_id,day_index,level\nz,3,1\ny,1,1\nx,3,1\n").unwrap();
        assert_eq!(t.player_ids(), &["y", "x", "z"]);
    }

    #[test]
    fn parse_error_carries_line() {
        match load_str("player_id,day_index,level\na,0,1\na,zero,2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(load_str("player_id,day_index,level\na,-1,2\n"), Err(Error::Parse { .. })));
        assert!(matches!(load_str("id,day,level\na,1,2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn level_validation_lists_rows() {
        match load_str("player_id,day_index,level\na,0,61\na,1,30\nb,500,0.5\n") {
            Err(Error::Validation { rows, .. }) => assert_eq!(rows, vec![2, 4]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(load_str(""), Err(Error::EmptyInput(_))));
        assert!(matches!(load_str("player_id,day_index,level\n"), Err(Error::EmptyInput(_))));
    }
}
