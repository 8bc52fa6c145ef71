use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Determinants smaller than this fraction of `max_sq_dist^(m-1)` are
/// treated as round-off and the volume clamped to zero.
const DEGENERACY_RATIO: f64 = 1e-12;

/// `(m-1)`-dimensional volume of the simplex spanned by `points`, from the
/// Cayley–Menger determinant of their pairwise squared distances.
pub fn cayley_menger_volume<P: AsRef<[f64]>>(points: &[P]) -> Result<f64> {
    cayley_menger_squared_volume(points).map(f64::sqrt)
}

/// Squared simplex volume; same ordering as the volume, no square root.
pub fn cayley_menger_squared_volume<P: AsRef<[f64]>>(points: &[P]) -> Result<f64> {
    let m = points.len();
    if m < 2 {
        return Err(Error::Arity(format!("a simplex needs at least 2 points, got {m}")));
    }
    let dim = points[0].as_ref().len();
    if let Some(bad) = points.iter().position(|p| p.as_ref().len() != dim) {
        return Err(Error::Dimension(format!(
            "point {bad} has dimension {}, expected {dim}",
            points[bad].as_ref().len()
        )));
    }
    let mut sq = vec![0.0; m * m];
    for i in 0..m {
        for j in (i + 1)..m {
            let d = super::dense::sq_dist(points[i].as_ref(), points[j].as_ref());
            sq[i * m + j] = d;
            sq[j * m + i] = d;
        }
    }
    Ok(squared_volume_from_distances(m, |i, j| sq[i * m + j]))
}

/// Squared volume of the simplex on `m` vertices whose pairwise squared
/// distances are `sq(i, j)`. Builds the bordered `(m+1)×(m+1)` matrix and
/// takes its determinant by LU with partial pivoting.
pub(crate) fn squared_volume_from_distances(m: usize, sq: impl Fn(usize, usize) -> f64) -> f64 {
    debug_assert!(m >= 2);
    let size = m + 1;
    let mut a = vec![0.0; size * size];
    let mut scale: f64 = 0.0;
    for i in 0..size {
        for j in 0..size {
            a[i * size + j] = match (i, j) {
                (0, 0) => 0.0,
                (0, _) | (_, 0) => 1.0,
                (i, j) if i == j => 0.0,
                (i, j) => {
                    let d = sq(i - 1, j - 1);
                    scale = scale.max(d);
                    d
                }
            };
        }
    }
    if scale == 0.0 {
        return 0.0;
    }
    let det = lu_determinant(&a, size);
    let k = (m - 1) as i32;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let signed = sign * det;
    if signed <= DEGENERACY_RATIO * scale.powi(k) {
        return 0.0;
    }
    let factorial: f64 = (1..m).map(|i| i as f64).product();
    signed / (2f64.powi(k) * factorial * factorial)
}

/// LU with partial pivoting carried out in double-double arithmetic. The
/// bordered matrix is badly conditioned for thin simplices and plain `f64`
/// elimination loses up to seven digits there.
fn lu_determinant(a: &[f64], n: usize) -> f64 {
    let mut a: Vec<TwoFloat> = a.iter().map(|&x| TwoFloat::from(x)).collect();
    let mut det = TwoFloat::from(1.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x * n + col].hi().abs().total_cmp(&a[y * n + col].hi().abs()))
            .unwrap();
        let p = a[pivot * n + col];
        if p.hi() == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        det *= p;
        for r in (col + 1)..n {
            let f = a[r * n + col] / p;
            if f.hi() != 0.0 {
                for j in col..n {
                    let t = f * a[col * n + j];
                    a[r * n + j] -= t;
                }
            }
        }
    }
    det.hi() + det.lo()
}
