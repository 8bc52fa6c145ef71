//! Baseline factorizations of a data matrix `V (d×n)` into basis vectors
//! `W (d×k)` and coefficients `H (k×n)`, all judged by the same residual
//! `‖V − WH‖_F`.

mod cmeans;
mod kmeans;
mod nmf;
mod pca;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, RandomSeed};

pub use cmeans::{cmeans, cmeans_from, fuzzy_memberships};
pub use kmeans::kmeans;
pub(crate) use kmeans::farthest_first;
pub use nmf::nmf;
pub use pca::pca;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Kmeans,
    Cmeans,
    Nmf,
    Pca,
    Archetypal,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Kmeans,
        Method::Cmeans,
        Method::Nmf,
        Method::Pca,
        Method::Archetypal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Kmeans => "kmeans",
            Method::Cmeans => "cmeans",
            Method::Nmf => "nmf",
            Method::Pca => "pca",
            Method::Archetypal => "archetypal",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::config("methods", format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationResult {
    pub method: Method,
    /// Basis vectors as columns, `d×k`.
    pub w: DenseMatrix,
    /// Coefficients, `k×n`.
    pub h: DenseMatrix,
    /// Column mean subtracted before factorizing (centered PCA only).
    pub centering: Option<Vec<f64>>,
    /// `‖V − c·1ᵀ − WH‖_F`, the norm rather than its square.
    pub reconstruction_error: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Method objective after every iteration (empty for direct methods).
    pub objective_trace: Vec<f64>,
}

impl FactorizationResult {
    pub fn k(&self) -> usize {
        self.w.cols()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub k: usize,
    pub max_iterations: usize,
    /// Stop once the relative objective change drops below this.
    pub tolerance: f64,
    /// Fuzzifier exponent for c-means.
    pub fuzzifier_m: f64,
    pub center_pca: bool,
    pub seed: RandomSeed,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            k: 8,
            max_iterations: 300,
            tolerance: 1e-6,
            fuzzifier_m: 2.0,
            center_pca: false,
            seed: RandomSeed(0),
        }
    }
}

impl SolverOptions {
    pub fn with_k(k: usize) -> Self {
        SolverOptions {
            k,
            ..Default::default()
        }
    }

    pub(crate) fn validate(&self, v: &DenseMatrix) -> Result<()> {
        if self.k == 0 {
            return Err(Error::config("k", "must be positive"));
        }
        if self.k > v.cols() {
            return Err(Error::config(
                "k",
                format!("k = {} exceeds the number of columns {}", self.k, v.cols()),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::config("max_iterations", "must be positive"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::config("tolerance", "must be positive"));
        }
        Ok(())
    }
}

/// Squared residual of every column: `‖vᵢ − c − W hᵢ‖²`.
pub fn column_residuals(
    v: &DenseMatrix,
    w: &DenseMatrix,
    h: &DenseMatrix,
    centering: Option<&[f64]>,
) -> Result<Vec<f64>> {
    if w.rows() != v.rows() || h.cols() != v.cols() || w.cols() != h.rows() {
        return Err(Error::Dimension(format!(
            "V is {}x{}, W is {}x{}, H is {}x{}",
            v.rows(),
            v.cols(),
            w.rows(),
            w.cols(),
            h.rows(),
            h.cols()
        )));
    }
    if let Some(c) = centering {
        if c.len() != v.rows() {
            return Err(Error::Dimension(format!(
                "centering has length {}, expected {}",
                c.len(),
                v.rows()
            )));
        }
    }
    let k = w.cols();
    Ok(v.column_sweep(|r, c0, seg, acc| {
        let wr = w.row(r);
        let offset = centering.map_or(0.0, |c| c[r]);
        for (t, (a, &x)) in acc.iter_mut().zip(seg).enumerate() {
            let mut pred = offset;
            for (j, &wj) in wr.iter().enumerate().take(k) {
                pred += wj * h.get(j, c0 + t);
            }
            let e = x - pred;
            *a += e * e;
        }
    }))
}

/// Frobenius norm of the residual `V − c·1ᵀ − WH`.
pub fn reconstruction_error(v: &DenseMatrix, result: &FactorizationResult) -> Result<f64> {
    residual_norm(v, &result.w, &result.h, result.centering.as_deref())
}

pub(crate) fn residual_norm(
    v: &DenseMatrix,
    w: &DenseMatrix,
    h: &DenseMatrix,
    centering: Option<&[f64]>,
) -> Result<f64> {
    Ok(column_residuals(v, w, h, centering)?.iter().sum::<f64>().sqrt())
}

/// Relative objective decrease between iterations.
pub(crate) fn relative_change(previous: f64, current: f64) -> f64 {
    if previous == 0.0 {
        return 0.0;
    }
    (previous - current).abs() / previous.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("svd".parse::<Method>().is_err());
    }

    #[test]
    fn residual_of_exact_and_zero_factors() {
        let v = DenseMatrix::from_columns(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let w = DenseMatrix::from_columns(&[vec![1.0, 2.0]]).unwrap();
        let h = DenseMatrix::new(1, 2, vec![1.0, 2.0]).unwrap();
        assert_eq!(residual_norm(&v, &w, &h, None).unwrap(), 0.0);
        let zw = DenseMatrix::zeros(2, 1);
        let zh = DenseMatrix::zeros(1, 2);
        assert_eq!(residual_norm(&v, &zw, &zh, None).unwrap(), v.frobenius_norm());
        assert!(matches!(
            residual_norm(&v, &zw, &DenseMatrix::zeros(1, 3), None),
            Err(Error::Dimension(_))
        ));
    }
}
