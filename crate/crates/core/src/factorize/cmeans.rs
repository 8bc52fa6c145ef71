use super::{relative_change, FactorizationResult, Method, SolverOptions};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::par;

/// Fuzzy c-means, started from the same farthest-first centroids as k-means.
pub fn cmeans(v: &DenseMatrix, opts: &SolverOptions) -> Result<FactorizationResult> {
    opts.validate(v)?;
    let points = v.transpose();
    let start = super::farthest_first(&points, opts.k, opts.seed);
    cmeans_from(v, &v.select_columns(&start), opts)
}

/// Fuzzy c-means from explicit initial centroids (columns of `init`).
///
/// Alternates the membership update `u_j = 1 / Σ_l (d_j/d_l)^(2/(m-1))` with
/// the weighted-mean centroid update until the objective
/// `Σ_ij u_ji^m ‖v_i − w_j‖²` changes by less than the tolerance.
pub fn cmeans_from(v: &DenseMatrix, init: &DenseMatrix, opts: &SolverOptions) -> Result<FactorizationResult> {
    opts.validate(v)?;
    let m = opts.fuzzifier_m;
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::config("fuzzifier_m", format!("must be > 1, got {m}")));
    }
    if init.rows() != v.rows() || init.cols() != opts.k {
        return Err(Error::Dimension(format!(
            "initial centroids are {}x{}, expected {}x{}",
            init.rows(),
            init.cols(),
            v.rows(),
            opts.k
        )));
    }
    let points = v.transpose();
    let mut centroids = init.transpose();
    let mut trace: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        iterations += 1;
        let u = memberships(&points, &centroids, m);
        let next = weighted_centroids(&points, &u, &centroids, m);
        let objective = fuzzy_objective(&points, &next, &u, m);
        let done = trace
            .last()
            .is_some_and(|&prev| relative_change(prev, objective) < opts.tolerance)
            || objective == 0.0;
        trace.push(objective);
        centroids = next;
        if done {
            converged = true;
            break;
        }
    }

    let u = memberships(&points, &centroids, m);
    let w = centroids.transpose();
    let h = u.transpose();
    let reconstruction_error = super::residual_norm(v, &w, &h, None)?;
    Ok(FactorizationResult {
        method: Method::Cmeans,
        w,
        h,
        centering: None,
        reconstruction_error,
        iterations,
        converged,
        objective_trace: trace,
    })
}

/// Memberships (`k×n`) of the columns of `v` in the centroids (columns of
/// `w`) for fuzzifier `m`.
pub fn fuzzy_memberships(v: &DenseMatrix, w: &DenseMatrix, m: f64) -> Result<DenseMatrix> {
    if v.rows() != w.rows() {
        return Err(Error::Dimension(format!(
            "data has {} rows, centroids {}",
            v.rows(),
            w.rows()
        )));
    }
    Ok(memberships(&v.transpose(), &w.transpose(), m).transpose())
}

/// Rows of the result are points, columns are centroids.
fn memberships(points: &DenseMatrix, centroids: &DenseMatrix, m: f64) -> DenseMatrix {
    let k = centroids.rows();
    let power = 1.0 / (m - 1.0);
    let rows = par::map_range(points.rows(), |i| {
        let p = points.row(i);
        let d: Vec<f64> = (0..k)
            .map(|j| crate::matrix::sq_dist(p, centroids.row(j)))
            .collect();
        let mut u = vec![0.0; k];
        if let Some(hit) = d.iter().position(|&x| x == 0.0) {
            u[hit] = 1.0;
            return u;
        }
        // Ratios against the nearest centroid keep every term in (0, 1].
        let nearest = d.iter().copied().fold(f64::INFINITY, f64::min);
        for (uj, &dj) in u.iter_mut().zip(&d) {
            *uj = (nearest / dj).powf(power);
        }
        let total: f64 = u.iter().sum();
        u.iter_mut().for_each(|x| *x /= total);
        u
    });
    DenseMatrix::from_raw(points.rows(), k, rows.concat())
}

fn weighted_centroids(points: &DenseMatrix, u: &DenseMatrix, previous: &DenseMatrix, m: f64) -> DenseMatrix {
    let (n, d, k) = (points.rows(), points.cols(), u.cols());
    let mut out = vec![0.0; k * d];
    par::for_each_chunk_mut(&mut out, d, |j, acc| {
        let mut total = 0.0;
        for i in 0..n {
            let weight = u.get(i, j).powf(m);
            if weight > 0.0 {
                total += weight;
                crate::matrix::axpy_into(acc, weight, points.row(i));
            }
        }
        if total > 0.0 {
            acc.iter_mut().for_each(|x| *x /= total);
        } else {
            acc.copy_from_slice(previous.row(j));
        }
    });
    DenseMatrix::from_raw(k, d, out)
}

fn fuzzy_objective(points: &DenseMatrix, centroids: &DenseMatrix, u: &DenseMatrix, m: f64) -> f64 {
    par::map_range(points.rows(), |i| {
        (0..centroids.rows())
            .map(|j| {
                let d = crate::matrix::sq_dist(points.row(i), centroids.row(j));
                u.get(i, j).powf(m) * d
            })
            .sum::<f64>()
    })
    .iter()
    .sum()
}
