use rand::Rng;

use super::{relative_change, FactorizationResult, Method, SolverOptions};
use crate::error::Result;
use crate::matrix::{DenseMatrix, RandomSeed};
use crate::par;

/// Lloyd's algorithm from a farthest-first start. `H` is unary: column `i`
/// holds a single 1 in the row of its cluster.
pub fn kmeans(v: &DenseMatrix, opts: &SolverOptions) -> Result<FactorizationResult> {
    opts.validate(v)?;
    let points = v.transpose();
    let (n, d, k) = (v.cols(), v.rows(), opts.k);

    let mut centroids: Vec<Vec<f64>> = farthest_first(&points, k, opts.seed)
        .into_iter()
        .map(|i| points.row(i).to_vec())
        .collect();
    let mut labels: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        iterations += 1;
        let mut next = assign(&points, &centroids);
        repair_empty_clusters(&points, &centroids, &mut next, k);
        centroids = cluster_means(&points, &next, k, d);
        let objective: f64 = (0..n)
            .map(|i| sq(points.row(i), &centroids[next[i]]))
            .sum();
        let stalled = next == labels
            || trace
                .last()
                .is_some_and(|&prev| relative_change(prev, objective) < opts.tolerance)
            || objective == 0.0;
        trace.push(objective);
        labels = next;
        if stalled {
            converged = true;
            break;
        }
    }

    let w = DenseMatrix::from_columns(&centroids)?;
    let mut h = DenseMatrix::zeros(k, n);
    for (i, &l) in labels.iter().enumerate() {
        h.set(l, i, 1.0);
    }
    let reconstruction_error = super::residual_norm(v, &w, &h, None)?;
    Ok(FactorizationResult {
        method: Method::Kmeans,
        w,
        h,
        centering: None,
        reconstruction_error,
        iterations,
        converged,
        objective_trace: trace,
    })
}

/// Greedy farthest-first traversal over the rows of `points`, starting from
/// a seeded random row. Already-chosen rows are never picked twice.
pub(crate) fn farthest_first(points: &DenseMatrix, k: usize, seed: RandomSeed) -> Vec<usize> {
    let n = points.rows();
    let start = seed.rng().random_range(0..n);
    let mut chosen = vec![start];
    let mut nearest: Vec<f64> = (0..n).map(|i| sq(points.row(i), points.row(start))).collect();
    nearest[start] = f64::NEG_INFINITY;
    while chosen.len() < k {
        let next = par::argmax(&nearest).expect("k <= n");
        chosen.push(next);
        nearest[next] = f64::NEG_INFINITY;
        for (i, slot) in nearest.iter_mut().enumerate() {
            if *slot > 0.0 {
                *slot = slot.min(sq(points.row(i), points.row(next)));
            }
        }
    }
    chosen
}

fn assign(points: &DenseMatrix, centroids: &[Vec<f64>]) -> Vec<usize> {
    par::map_range(points.rows(), |i| {
        let p = points.row(i);
        let dists: Vec<f64> = centroids.iter().map(|c| sq(p, c)).collect();
        par::argmin(&dists).unwrap()
    })
}

/// Empty clusters take over the point farthest from its own centroid, drawn
/// from clusters that can spare one.
fn repair_empty_clusters(points: &DenseMatrix, centroids: &[Vec<f64>], labels: &mut [usize], k: usize) {
    let mut counts = vec![0usize; k];
    for &l in labels.iter() {
        counts[l] += 1;
    }
    while let Some(empty) = counts.iter().position(|&c| c == 0) {
        let spread: Vec<f64> = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                if counts[l] > 1 {
                    sq(points.row(i), &centroids[l])
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        let donor = par::argmax(&spread).expect("k <= n leaves a donor");
        counts[labels[donor]] -= 1;
        labels[donor] = empty;
        counts[empty] += 1;
    }
}

fn cluster_means(points: &DenseMatrix, labels: &[usize], k: usize, d: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; d]; k];
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for (s, &x) in sums[l].iter_mut().zip(points.row(i)) {
            *s += x;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        let c = c as f64;
        s.iter_mut().for_each(|x| *x /= c);
    }
    sums
}

use crate::matrix::sq_dist as sq;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn line(xs: &[f64]) -> DenseMatrix {
        DenseMatrix::new(1, xs.len(), xs.to_vec()).unwrap()
    }

    #[test]
    fn separated_pairs() {
        let v = line(&[0.0, 0.0, 10.0, 10.0]);
        let r = kmeans(&v, &SolverOptions::with_k(2)).unwrap();
        let mut c = r.w.row(0).to_vec();
        c.sort_by(f64::total_cmp);
        assert_eq!(c, vec![0.0, 10.0]);
        assert_eq!(r.reconstruction_error, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let v = DenseMatrix::from_columns(&[vec![1.0, 2.0], vec![3.0, -2.0], vec![5.0, 9.0]]).unwrap();
        let r = kmeans(&v, &SolverOptions::with_k(1)).unwrap();
        assert_eq!(r.w.column(0), v.column_mean());
    }

    #[test]
    fn k_larger_than_n_is_rejected() {
        let v = line(&[1.0, 2.0]);
        assert!(matches!(
            kmeans(&v, &SolverOptions::with_k(3)),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn duplicate_points_still_give_k_nonempty_clusters() {
        let v = line(&[1.0, 1.0, 1.0, 5.0]);
        let r = kmeans(&v, &SolverOptions::with_k(3)).unwrap();
        for j in 0..3 {
            assert!(r.h.row(j).iter().sum::<f64>() >= 1.0);
        }
        assert_eq!(r.reconstruction_error, 0.0);
    }
}
