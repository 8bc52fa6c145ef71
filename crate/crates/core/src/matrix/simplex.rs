use crate::error::{Error, Result};

/// Inputs already on the simplex within this slack are returned unchanged,
/// which makes the projection exactly idempotent.
const FEASIBLE_SLACK: f64 = 1e-12;

/// Euclidean projection onto the probability simplex `{x : x ≥ 0, Σx = 1}`
/// by the sort-and-threshold method.
pub fn project_to_simplex(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::Arity("cannot project an empty vector".into()));
    }
    let mut out = v.to_vec();
    project_in_place(&mut out);
    Ok(out)
}

pub(crate) fn project_in_place(v: &mut [f64]) {
    debug_assert!(!v.is_empty());
    if v.iter().all(|&x| x >= 0.0) && (v.iter().sum::<f64>() - 1.0).abs() <= FEASIBLE_SLACK {
        return;
    }
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}
