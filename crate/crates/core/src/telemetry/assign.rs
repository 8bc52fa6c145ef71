use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorize::{FactorizationResult, Method};
use crate::matrix::DenseMatrix;
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub labels: Vec<usize>,
    pub histogram: Vec<usize>,
}

/// Maps every column of `v` to one basis vector. Clustering methods use
/// their own coefficients (the unary position for k-means, the largest
/// membership for c-means); the others take the nearest basis vector,
/// shifted by the centering vector when there is one. Ties go to the lowest
/// index.
pub fn hard_assign(v: &DenseMatrix, result: &FactorizationResult) -> Result<Assignment> {
    let (w, h) = (&result.w, &result.h);
    if w.rows() != v.rows() || h.cols() != v.cols() || h.rows() != w.cols() {
        return Err(Error::Dimension(format!(
            "V is {}x{} but W is {}x{} and H is {}x{}",
            v.rows(),
            v.cols(),
            w.rows(),
            w.cols(),
            h.rows(),
            h.cols()
        )));
    }
    let k = w.cols();
    let labels: Vec<usize> = match result.method {
        Method::Kmeans | Method::Cmeans => {
            par::map_range(v.cols(), |i| {
                let col: Vec<f64> = (0..k).map(|j| h.get(j, i)).collect();
                par::argmax(&col).unwrap_or(0)
            })
        }
        Method::Nmf | Method::Pca | Method::Archetypal => {
            let distances: Vec<Vec<f64>> = (0..k)
                .map(|j| {
                    let mut target = w.column(j);
                    if let Some(c) = &result.centering {
                        target.iter_mut().zip(c).for_each(|(t, m)| *t += m);
                    }
                    v.column_sq_distances(&target)
                })
                .collect::<Result<_>>()?;
            par::map_range(v.cols(), |i| {
                let col: Vec<f64> = distances.iter().map(|d| d[i]).collect();
                par::argmin(&col).unwrap_or(0)
            })
        }
    };
    let mut histogram = vec![0usize; k];
    for &l in &labels {
        histogram[l] += 1;
    }
    Ok(Assignment { labels, histogram })
}
