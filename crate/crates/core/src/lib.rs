//! Player clustering by matrix factorization.
//!
//! Five methods factor a `days × players` level matrix `V ≈ WH` under the
//! same Frobenius objective: k-means, fuzzy c-means, NMF, PCA, and
//! archetypal analysis by simplex volume maximization. The [`compare`]
//! module runs them side by side on telemetry or synthetic populations.
//!
//! Per-column scans run on rayon when the default `parallel` feature is on
//! and sequentially otherwise, with bit-identical results.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod archetypes;
pub mod compare;
mod error;
pub mod factorize;
pub mod matrix;
mod par;
pub mod telemetry;

pub use archetypes::{archetypal_analysis, sivm_select, solve_convex_coefficients, ArchetypeSelection, ConvexSolveOptions};
pub use error::{Error, Result};
pub use factorize::{cmeans, kmeans, nmf, pca, reconstruction_error, FactorizationResult, Method, SolverOptions};
pub use matrix::{DenseMatrix, RandomSeed};
pub use telemetry::{ExpansionSchedule, TelemetryMatrix};

/// Runs `method` on `v`.
pub fn factorize(method: Method, v: &DenseMatrix, opts: &SolverOptions) -> Result<FactorizationResult> {
    match method {
        Method::Kmeans => kmeans(v, opts),
        Method::Cmeans => cmeans(v, opts),
        Method::Nmf => nmf(v, opts),
        Method::Pca => pca(v, opts),
        Method::Archetypal => archetypal_analysis(v, opts),
    }
}
