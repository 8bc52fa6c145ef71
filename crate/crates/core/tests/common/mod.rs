//! Independent reference implementations used as test oracles. None of
//! these call into the library's numerical code paths.
#![allow(dead_code)]

use playprof::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0.0;
    for j in 0..n {
        let minor: Vec<Vec<f64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * m[0][j] * cofactor_det(&minor);
    }
    total
}

/// Simplex volume from the Gram determinant of edge vectors:
/// `sqrt(det(EᵀE)) / (m-1)!`.
pub fn gram_volume(points: &[Vec<f64>]) -> f64 {
    let m = points.len();
    let edges: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    let gram: Vec<Vec<f64>> = edges
        .iter()
        .map(|a| edges.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect())
        .collect();
    let det = cofactor_det(&gram).max(0.0);
    let fact: f64 = (1..m).map(|i| i as f64).product();
    det.sqrt() / fact
}

fn cross(o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Jarvis march. Returns hull vertex indices in counter-clockwise order,
/// collinear boundary points excluded.
pub fn gift_wrap(points: &[[f64; 2]]) -> Vec<usize> {
    let n = points.len();
    let start = (0..n)
        .min_by(|&a, &b| {
            points[a][0]
                .total_cmp(&points[b][0])
                .then(points[a][1].total_cmp(&points[b][1]))
        })
        .unwrap();
    let mut hull = vec![start];
    let mut current = start;
    loop {
        let mut next = if current == 0 { 1 } else { 0 };
        for cand in 0..n {
            if cand == current {
                continue;
            }
            let c = cross(&points[current], &points[next], &points[cand]);
            let farther = {
                let d = |i: usize| {
                    (points[i][0] - points[current][0]).powi(2) + (points[i][1] - points[current][1]).powi(2)
                };
                d(cand) > d(next)
            };
            if c < 0.0 || (c == 0.0 && farther) {
                next = cand;
            }
        }
        if next == start {
            break;
        }
        hull.push(next);
        current = next;
        if hull.len() > n {
            panic!("gift wrapping did not close");
        }
    }
    hull
}

/// True when `p` is a hull vertex or lies on a hull edge.
pub fn on_hull(points: &[[f64; 2]], p: usize) -> bool {
    let hull = gift_wrap(points);
    if hull.contains(&p) {
        return true;
    }
    let q = points[p];
    hull.iter().zip(hull.iter().cycle().skip(1)).any(|(&a, &b)| {
        let (a, b) = (points[a], points[b]);
        let c = cross(&a, &b, &q).abs();
        let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        let within = (q[0] - a[0]) * (b[0] - a[0]) + (q[1] - a[1]) * (b[1] - a[1]) >= 0.0
            && (q[0] - b[0]) * (a[0] - b[0]) + (q[1] - b[1]) * (a[1] - b[1]) >= 0.0;
        c <= 1e-12 * len.max(1.0) && within
    })
}

/// Area of the convex hull of the given points (shoelace on the wrapped hull).
pub fn hull_area(points: &[[f64; 2]]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let hull = gift_wrap(points);
    let mut twice = 0.0;
    for i in 0..hull.len() {
        let a = points[hull[i]];
        let b = points[hull[(i + 1) % hull.len()]];
        twice += a[0] * b[1] - b[0] * a[1];
    }
    twice.abs() / 2.0
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig
}

/// Minimum within-cluster sum of squares over every assignment of the
/// points to exactly `k` non-empty clusters.
pub fn exhaustive_kmeans_optimum(points: &[Vec<f64>], k: usize) -> f64 {
    let n = points.len();
    let mut labels = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        let mut used = vec![false; k];
        labels.iter().for_each(|&l| used[l] = true);
        if used.iter().all(|&u| u) {
            let mut sse = 0.0;
            for j in 0..k {
                let members: Vec<&Vec<f64>> = points.iter().zip(&labels).filter(|(_, &l)| l == j).map(|(p, _)| p).collect();
                let d = members[0].len();
                let mean: Vec<f64> = (0..d)
                    .map(|r| members.iter().map(|p| p[r]).sum::<f64>() / members.len() as f64)
                    .collect();
                sse += members
                    .iter()
                    .map(|p| p.iter().zip(&mean).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
                    .sum::<f64>();
            }
            best = best.min(sse);
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            labels[i] += 1;
            if labels[i] < k {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

/// Textbook fuzzy c-means fixed-point iteration from given centroids.
/// Returns memberships indexed `[point][cluster]`.
pub fn textbook_cmeans(points: &[Vec<f64>], init: &[Vec<f64>], m: f64, iterations: usize) -> Vec<Vec<f64>> {
    let mut c = init.to_vec();
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let member = |c: &[Vec<f64>]| -> Vec<Vec<f64>> {
        points
            .iter()
            .map(|p| {
                let d: Vec<f64> = c.iter().map(|cj| dist(p, cj)).collect();
                (0..c.len())
                    .map(|j| {
                        1.0 / d
                            .iter()
                            .map(|dl| (d[j] / dl).powf(2.0 / (m - 1.0)))
                            .sum::<f64>()
                    })
                    .collect()
            })
            .collect()
    };
    for _ in 0..iterations {
        let u = member(&c);
        for j in 0..c.len() {
            let weights: Vec<f64> = u.iter().map(|ui| ui[j].powf(m)).collect();
            let total: f64 = weights.iter().sum();
            for r in 0..c[j].len() {
                c[j][r] = points.iter().zip(&weights).map(|(p, w)| w * p[r]).sum::<f64>() / total;
            }
        }
    }
    member(&c)
}

/// Minimum of `‖v − W h‖²` over a grid on the 3-simplex with the given step.
pub fn simplex_grid_min(v: &[f64], w: &[Vec<f64>], step: f64) -> f64 {
    assert_eq!(w.len(), 3);
    let steps = (1.0 / step).round() as usize;
    let mut best = f64::INFINITY;
    for a in 0..=steps {
        for b in 0..=(steps - a) {
            let h = [a as f64 * step, b as f64 * step, (steps - a - b) as f64 * step];
            let r: f64 = (0..v.len())
                .map(|i| {
                    let pred: f64 = (0..3).map(|j| w[j][i] * h[j]).sum();
                    (v[i] - pred).powi(2)
                })
                .sum();
            best = best.min(r);
        }
    }
    best
}

/// Unit-square corners at indices 0..4 (shuffled in among the rest) plus
/// `interior` points strictly inside. Returns the data and corner indices.
pub fn square_with_interior(interior: usize, seed: u64) -> (Vec<[f64; 2]>, Vec<usize>) {
    let mut r = rng(seed);
    let mut pts: Vec<[f64; 2]> = (0..interior)
        .map(|_| [r.random_range(0.05..0.95), r.random_range(0.05..0.95)])
        .collect();
    let corners = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let mut idx = Vec::new();
    for (i, c) in corners.iter().enumerate() {
        let at = (i * 13 + 7) % (pts.len() + 1);
        pts.insert(at, *c);
        idx.iter_mut().for_each(|x: &mut usize| {
            if *x >= at {
                *x += 1
            }
        });
        idx.push(at);
    }
    idx.sort();
    (pts, idx)
}

pub fn matrix_2d(points: &[[f64; 2]]) -> DenseMatrix {
    DenseMatrix::from_columns(&points.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub fn uniform_points(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..n).map(|_| (0..dim).map(|_| r.random::<f64>()).collect()).collect()
}

/// All `r`-subsets of `0..n`.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.clone());
        let mut i = r;
        while i > 0 && idx[i - 1] == n - r + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
