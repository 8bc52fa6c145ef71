//! Archetypal analysis by simplex volume maximization: archetypes are
//! actual data columns chosen greedily to span a simplex of maximal volume,
//! and every column is then expressed as a convex mixture of them.

mod convex;
mod sivm;

pub use convex::{solve_convex_coefficients, ConvexSolveOptions, ConvexSolveReport};
pub use sivm::{sivm_select, ArchetypeSelection};

use crate::error::{Error, Result};
use crate::factorize::{FactorizationResult, Method, SolverOptions};
use crate::matrix::DenseMatrix;

pub fn archetypal_analysis(v: &DenseMatrix, opts: &SolverOptions) -> Result<FactorizationResult> {
    archetypal_analysis_with(v, opts, &ConvexSolveOptions::default())
}

pub fn archetypal_analysis_with(
    v: &DenseMatrix,
    opts: &SolverOptions,
    convex: &ConvexSolveOptions,
) -> Result<FactorizationResult> {
    if opts.k < 2 {
        return Err(Error::config("k", "archetypal analysis needs k >= 2"));
    }
    opts.validate(v)?;
    let selection = sivm_select(v, opts.k, opts.seed)?;
    let w = v.select_columns(&selection.indices);
    let report = convex::solve_with_report(v, &w, convex)?;
    let reconstruction_error = crate::factorize::residual_norm(v, &w, &report.coefficients, None)?;
    Ok(FactorizationResult {
        method: Method::Archetypal,
        w,
        h: report.coefficients,
        centering: None,
        reconstruction_error,
        iterations: report.max_iterations,
        converged: report.unconverged_columns == 0,
        objective_trace: Vec::new(),
    })
}
