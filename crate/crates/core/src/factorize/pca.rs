use nalgebra::{DMatrix, SVD};

use super::{FactorizationResult, Method, SolverOptions};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Truncated singular decomposition: `W` holds the top-`k` left singular
/// vectors, `H = Wᵀ(V − c)`. Uncentered unless `center_pca` is set.
pub fn pca(v: &DenseMatrix, opts: &SolverOptions) -> Result<FactorizationResult> {
    opts.validate(v)?;
    let (d, n, k) = (v.rows(), v.cols(), opts.k);
    if k > d.min(n) {
        return Err(Error::config(
            "k",
            format!("k = {k} exceeds min(d, n) = {}", d.min(n)),
        ));
    }
    let centering = opts.center_pca.then(|| v.column_mean());
    let mut x = DMatrix::from_row_slice(d, n, v.values());
    if let Some(c) = &centering {
        for (r, &mu) in c.iter().enumerate() {
            x.row_mut(r).add_scalar_mut(-mu);
        }
    }
    let svd = SVD::try_new(x.clone(), true, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("singular value decomposition did not converge".into()))?;
    let u = svd.u.as_ref().expect("requested U");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]).then(a.cmp(&b)));

    let mut w = DenseMatrix::zeros(d, k);
    for (j, &src) in order.iter().take(k).enumerate() {
        let col = u.column(src);
        // Sign convention: the largest-magnitude entry is positive.
        let pivot = (0..d)
            .max_by(|&a, &b| col[a].abs().total_cmp(&col[b].abs()).then(b.cmp(&a)))
            .unwrap();
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..d {
            w.set(r, j, sign * col[r]);
        }
    }
    let centered = DenseMatrix::new(d, n, x.transpose().as_slice().to_vec())?;
    let h = w.t_matmul(&centered)?;
    let reconstruction_error = super::residual_norm(v, &w, &h, centering.as_deref())?;
    Ok(FactorizationResult {
        method: Method::Pca,
        w,
        h,
        centering,
        reconstruction_error,
        iterations: 0,
        converged: true,
        objective_trace: Vec::new(),
    })
}
