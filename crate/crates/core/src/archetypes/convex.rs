use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, DenseMatrix};
use crate::par;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexSolveOptions {
    /// Stop once the projected-gradient norm falls below this fraction of
    /// the gradient scale `2·max|WᵀW|`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for ConvexSolveOptions {
    fn default() -> Self {
        ConvexSolveOptions {
            tolerance: 1e-8,
            max_iterations: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexSolveReport {
    /// `k×n`, every column on the probability simplex.
    pub coefficients: DenseMatrix,
    pub max_iterations: usize,
    pub unconverged_columns: usize,
}

/// For every column `vᵢ`, the point `hᵢ` of the probability simplex
/// minimizing `‖vᵢ − W hᵢ‖²`.
pub fn solve_convex_coefficients(
    v: &DenseMatrix,
    w: &DenseMatrix,
    opts: &ConvexSolveOptions,
) -> Result<DenseMatrix> {
    solve_with_report(v, w, opts).map(|r| r.coefficients)
}

pub(crate) fn solve_with_report(
    v: &DenseMatrix,
    w: &DenseMatrix,
    opts: &ConvexSolveOptions,
) -> Result<ConvexSolveReport> {
    if w.rows() != v.rows() {
        return Err(Error::Dimension(format!(
            "archetypes have {} rows, data has {}",
            w.rows(),
            v.rows()
        )));
    }
    if !(opts.tolerance > 0.0) {
        return Err(Error::config("tolerance", "must be positive"));
    }
    if opts.max_iterations == 0 {
        return Err(Error::config("max_iterations", "must be positive"));
    }
    let k = w.cols();
    let gram = w.t_matmul(w)?;
    let cross = w.t_matmul(v)?;
    let problem = Problem::new(&gram, opts);

    let solved: Vec<(Vec<f64>, usize, bool)> = par::map_range(v.cols(), |i| {
        let b: Vec<f64> = (0..k).map(|j| cross.get(j, i)).collect();
        problem.solve(&b)
    });

    let mut coefficients = DenseMatrix::zeros(k, v.cols());
    let mut max_iterations = 0;
    let mut unconverged_columns = 0;
    for (i, (h, iters, converged)) in solved.into_iter().enumerate() {
        for (j, x) in h.into_iter().enumerate() {
            coefficients.set(j, i, x);
        }
        max_iterations = max_iterations.max(iters);
        unconverged_columns += usize::from(!converged);
    }
    Ok(ConvexSolveReport {
        coefficients,
        max_iterations,
        unconverged_columns,
    })
}

/// `min_h hᵀGh − 2bᵀh` over the simplex, which is `‖v − Wh‖² − ‖v‖²`.
struct Problem<'a> {
    gram: &'a DenseMatrix,
    k: usize,
    lipschitz: f64,
    grad_scale: f64,
    opts: &'a ConvexSolveOptions,
}

impl<'a> Problem<'a> {
    fn new(gram: &'a DenseMatrix, opts: &'a ConvexSolveOptions) -> Self {
        let k = gram.rows();
        let max_abs = gram.values().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Problem {
            gram,
            k,
            lipschitz: 2.0 * spectral_norm(gram, 20),
            grad_scale: (2.0 * max_abs).max(f64::MIN_POSITIVE),
            opts,
        }
    }

    fn objective(&self, h: &[f64], b: &[f64]) -> f64 {
        let gh = self.gram_times(h);
        dot(h, &gh) - 2.0 * dot(b, h)
    }

    fn gram_times(&self, h: &[f64]) -> Vec<f64> {
        (0..self.k).map(|j| dot(self.gram.row(j), h)).collect()
    }

    fn gradient(&self, h: &[f64], b: &[f64]) -> Vec<f64> {
        self.gram_times(h)
            .iter()
            .zip(b)
            .map(|(g, bi)| 2.0 * (g - bi))
            .collect()
    }

    /// `‖h − P(h − ∇f / scale)‖`, scale-free so the tolerance is relative.
    fn projected_gradient_norm(&self, h: &[f64], grad: &[f64]) -> f64 {
        let mut step: Vec<f64> = h.iter().zip(grad).map(|(x, g)| x - g / self.grad_scale).collect();
        crate::matrix::simplex_project_in_place(&mut step);
        let diff: f64 = step.iter().zip(h).map(|(a, b)| (a - b) * (a - b)).sum();
        diff.sqrt()
    }

    /// Returns `(h, iterations, converged)`.
    fn solve(&self, b: &[f64]) -> (Vec<f64>, usize, bool) {
        let k = self.k;
        // Start from the best single archetype, so the result is never
        // worse than nearest-vertex assignment.
        let vertex_cost: Vec<f64> = (0..k).map(|j| self.gram.get(j, j) - 2.0 * b[j]).collect();
        let start = par::argmin(&vertex_cost).unwrap_or(0);
        if k == 1 {
            return (vec![1.0], 0, true);
        }
        match self.active_set(start, b) {
            Some((h, iters)) => (h, iters, true),
            None => {
                let mut h = vec![0.0; k];
                h[start] = 1.0;
                self.projected_gradient(h, b)
            }
        }
    }

    /// Primal active-set iteration over faces of the simplex. Gives up
    /// (`None`) on a singular face or when out of iterations.
    fn active_set(&self, start: usize, b: &[f64]) -> Option<(Vec<f64>, usize)> {
        let mut h = vec![0.0; self.k];
        h[start] = 1.0;
        let mut support = vec![start];
        for iter in 1..=self.opts.max_iterations {
            loop {
                let x = self.face_solve(&support, b)?;
                let blocking = support
                    .iter()
                    .filter(|&&j| x[j] < 0.0)
                    .map(|&j| (h[j] / (h[j] - x[j]), j))
                    .min_by(|a, b| a.0.total_cmp(&b.0));
                let Some((alpha, drop)) = blocking else {
                    h = x;
                    break;
                };
                for &j in &support {
                    h[j] += alpha * (x[j] - h[j]);
                }
                h[drop] = 0.0;
                support.retain(|&j| h[j] > 0.0);
                let total: f64 = support.iter().map(|&j| h[j]).sum();
                support.iter().for_each(|&j| h[j] /= total);
            }
            let grad = self.gradient(&h, b);
            let level = support.iter().map(|&j| grad[j]).sum::<f64>() / support.len() as f64;
            let slack = self.opts.tolerance * self.grad_scale;
            let entering = (0..self.k)
                .filter(|j| !support.contains(j))
                .min_by(|&x, &y| grad[x].total_cmp(&grad[y]))
                .filter(|&j| grad[j] < level - slack);
            match entering {
                Some(j) => support.push(j),
                None => return Some((h, iter)),
            }
        }
        None
    }

    fn projected_gradient(&self, mut h: Vec<f64>, b: &[f64]) -> (Vec<f64>, usize, bool) {
        let mut f = self.objective(&h, b);
        for iter in 1..=self.opts.max_iterations {
            let grad = self.gradient(&h, b);
            if self.projected_gradient_norm(&h, &grad) <= self.opts.tolerance || self.kkt_satisfied(&h, &grad)
            {
                return (h, iter - 1, true);
            }

            let mut step = if self.lipschitz > 0.0 { 1.0 / self.lipschitz } else { 1.0 };
            let mut moved = false;
            for _ in 0..60 {
                let mut candidate: Vec<f64> = h.iter().zip(&grad).map(|(x, g)| x - step * g).collect();
                crate::matrix::simplex_project_in_place(&mut candidate);
                let delta: Vec<f64> = candidate.iter().zip(&h).map(|(a, b)| a - b).collect();
                let model = f + dot(&grad, &delta) + dot(&delta, &delta) / (2.0 * step);
                let fc = self.objective(&candidate, b);
                if fc <= model {
                    if fc < f {
                        h = candidate;
                        f = fc;
                        moved = true;
                    }
                    break;
                }
                step *= 0.5;
            }

            let support: Vec<usize> = (0..self.k).filter(|&j| h[j] > 0.0).collect();
            if let Some(polished) = self.face_solve(&support, b) {
                if polished.iter().all(|&x| x >= 0.0) {
                    let fp = self.objective(&polished, b);
                    if fp <= f {
                        moved |= polished != h;
                        h = polished;
                        f = fp;
                    }
                }
            }
            if !moved {
                let grad = self.gradient(&h, b);
                let converged = self.kkt_satisfied(&h, &grad);
                return (h, iter, converged);
            }
        }
        let grad = self.gradient(&h, b);
        let converged = self.kkt_satisfied(&h, &grad);
        (h, self.opts.max_iterations, converged)
    }

    /// Optimality on the simplex: the gradient is equal across the support
    /// and no smaller anywhere off it, to within the tolerance.
    fn kkt_satisfied(&self, h: &[f64], grad: &[f64]) -> bool {
        let slack = self.opts.tolerance * self.grad_scale;
        let support: Vec<usize> = (0..self.k).filter(|&j| h[j] > 0.0).collect();
        let level = support.iter().map(|&j| grad[j]).fold(f64::INFINITY, f64::min);
        let top = support.iter().map(|&j| grad[j]).fold(f64::NEG_INFINITY, f64::max);
        top - level <= slack && (0..self.k).all(|j| h[j] > 0.0 || grad[j] >= level - slack)
    }

    /// Minimizer on the affine hull of the face spanned by `support`,
    /// possibly with negative entries. `None` when that face is singular.
    fn face_solve(&self, support: &[usize], b: &[f64]) -> Option<Vec<f64>> {
        let s = support.len();
        let mut out = vec![0.0; self.k];
        if s == 1 {
            out[support[0]] = 1.0;
            return Some(out);
        }
        // [2G_SS 1; 1ᵀ 0] [h_S; ν] = [2b_S; 1]
        let size = s + 1;
        let mut a = vec![0.0; size * size];
        let mut rhs = vec![0.0; size];
        for (r, &i) in support.iter().enumerate() {
            for (c, &j) in support.iter().enumerate() {
                a[r * size + c] = 2.0 * self.gram.get(i, j);
            }
            a[r * size + s] = 1.0;
            a[s * size + r] = 1.0;
            rhs[r] = 2.0 * b[i];
        }
        rhs[s] = 1.0;
        let x = solve_linear(&mut a, &mut rhs, size)?;
        if x.iter().any(|v| !v.is_finite()) {
            return None;
        }
        for (&j, &v) in support.iter().zip(&x[..s]) {
            out[j] = v;
        }
        // Renormalize away rounding in the sum constraint.
        let total: f64 = out.iter().sum();
        out.iter_mut().for_each(|v| *v /= total);
        Some(out)
    }
}

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
fn spectral_norm(m: &DenseMatrix, iterations: usize) -> f64 {
    let k = m.rows();
    let mut x = vec![1.0 / (k as f64).sqrt(); k];
    let mut estimate = 0.0;
    for _ in 0..iterations {
        let y: Vec<f64> = (0..k).map(|j| dot(m.row(j), &x)).collect();
        let norm = dot(&y, &y).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        estimate = norm;
        x = y.into_iter().map(|v| v / norm).collect();
    }
    estimate
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_linear(a: &mut [f64], b: &mut [f64], n: usize) -> Option<Vec<f64>> {
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))?;
        if a[pivot * n + col].abs() <= 1e-13 * scale {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            b.swap(pivot, col);
        }
        for r in (col + 1)..n {
            let f = a[r * n + col] / a[col * n + col];
            for j in col..n {
                a[r * n + j] -= f * a[col * n + j];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = ((r + 1)..n).map(|j| a[r * n + j] * x[j]).sum();
        x[r] = (b[r] - tail) / a[r * n + r];
    }
    Some(x)
}
