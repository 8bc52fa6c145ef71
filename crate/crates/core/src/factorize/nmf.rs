use rand::Rng;

use super::{relative_change, FactorizationResult, Method, SolverOptions};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Floor for the denominators of the multiplicative updates.
const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Non-negative matrix factorization by Lee–Seung multiplicative updates
/// for the Frobenius objective.
pub fn nmf(v: &DenseMatrix, opts: &SolverOptions) -> Result<FactorizationResult> {
    opts.validate(v)?;
    if opts.k > v.rows() {
        return Err(Error::config(
            "k",
            format!("k = {} exceeds the number of rows {}", opts.k, v.rows()),
        ));
    }
    if let Some(pos) = v.values().iter().position(|&x| x < 0.0) {
        return Err(Error::Domain(format!(
            "NMF needs a non-negative matrix; entry ({}, {}) is {}",
            pos / v.cols(),
            pos % v.cols(),
            v.values()[pos]
        )));
    }
    let (d, n, k) = (v.rows(), v.cols(), opts.k);
    let mean = v.values().iter().sum::<f64>() / v.values().len() as f64;
    let scale = if mean > 0.0 { (mean / k as f64).sqrt() } else { 1.0 };
    let mut rng = opts.seed.rng();
    let mut w = DenseMatrix::from_raw(d, k, (0..d * k).map(|_| rng.random::<f64>() * scale).collect());
    let mut h = DenseMatrix::from_raw(k, n, (0..k * n).map(|_| rng.random::<f64>() * scale).collect());

    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;

        // H ← H ∘ (WᵀV) / (WᵀW H)
        let numer = w.t_matmul(v)?;
        let denom = w.t_matmul(&w)?.matmul(&h)?;
        multiplicative_step(&mut h, &numer, &denom);

        // W ← W ∘ (VHᵀ) / (W HHᵀ)
        let numer = v.matmul_t(&h)?;
        let denom = w.matmul(&h.matmul_t(&h)?)?;
        multiplicative_step(&mut w, &numer, &denom);

        let err = super::residual_norm(v, &w, &h, None)?;
        let objective = err * err;
        let done = trace
            .last()
            .is_some_and(|&prev| relative_change(prev, objective) < opts.tolerance)
            || objective == 0.0;
        trace.push(objective);
        if done {
            converged = true;
            break;
        }
    }

    let reconstruction_error = super::residual_norm(v, &w, &h, None)?;
    Ok(FactorizationResult {
        method: Method::Nmf,
        w,
        h,
        centering: None,
        reconstruction_error,
        iterations,
        converged,
        objective_trace: trace,
    })
}

fn multiplicative_step(target: &mut DenseMatrix, numer: &DenseMatrix, denom: &DenseMatrix) {
    for ((x, &a), &b) in target
        .values_mut()
        .iter_mut()
        .zip(numer.values())
        .zip(denom.values())
    {
        *x *= a / b.max(DENOMINATOR_FLOOR);
    }
}
