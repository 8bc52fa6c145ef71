use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{squared_volume_from_distances, DenseMatrix, RandomSeed};
use crate::par;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchetypeSelection {
    /// Selected column indices, in selection order.
    pub indices: Vec<usize>,
    /// Volume of the simplex after each vertex was added. The first two
    /// entries are always 0.
    pub volumes: Vec<f64>,
}

/// Greedy simplex volume maximization over the columns of `v`.
///
/// The first vertex is the column farthest from the column farthest from a
/// seeded random start. Each further vertex maximizes the volume of the
/// simplex it forms with the vertices chosen so far, ties going to the lowest
/// column index. When every candidate would span zero volume (the data's
/// affine dimension is already exhausted) candidates are ranked by the summed
/// squared volumes of the simplices they form with the lower-dimensional
/// faces of the current selection instead.
///
/// Distances from each selected vertex to every column are computed once and
/// cached, so a greedy step only evaluates small Cayley–Menger determinants.
pub fn sivm_select(v: &DenseMatrix, k: usize, seed: RandomSeed) -> Result<ArchetypeSelection> {
    let n = v.cols();
    if k < 2 || k > n {
        return Err(Error::config(
            "k",
            format!("need 2 <= k <= n = {n}, got {k}"),
        ));
    }

    let start = seed.rng().random_range(0..n);
    let from_start = v.column_sq_distances(&v.column(start))?;
    let far = par::argmax(&from_start).unwrap();
    let from_far = v.column_sq_distances(&v.column(far))?;
    let first = par::argmax(&from_far).unwrap();

    let mut indices = vec![first];
    let mut volumes = vec![0.0];
    let mut cache: Vec<Vec<f64>> = vec![v.column_sq_distances(&v.column(first))?];
    let mut selected = vec![false; n];
    selected[first] = true;
    let mut degenerate = false;

    while indices.len() < k {
        let size = indices.len();
        let pair = |a: usize, b: usize, q: usize| -> f64 {
            // Vertex `size` stands for the candidate column q.
            match (a == size, b == size) {
                (true, true) => 0.0,
                (true, false) => cache[b][q],
                (false, true) => cache[a][q],
                (false, false) => cache[a][indices[b]],
            }
        };
        let usable: Vec<bool> = (0..n)
            .map(|q| !selected[q] && cache.iter().all(|row| row[q] > 0.0))
            .collect();

        let full: Vec<f64> = par::map_range(n, |q| {
            if usable[q] {
                squared_volume_from_distances(size + 1, |a, b| pair(a, b, q))
            } else {
                f64::NEG_INFINITY
            }
        });
        let (choice, volume) = match par::argmax(&full) {
            Some(q) if full[q] > 0.0 => (q, full[q].sqrt()),
            _ => {
                let q = face_fallback(size, n, &usable, &pair).unwrap_or_else(|| {
                    // Nothing distinct is left: take the lowest unselected column.
                    (0..n)
                        .find(|&q| usable[q])
                        .or_else(|| (0..n).find(|&q| !selected[q]))
                        .expect("k <= n")
                });
                if size == 1 {
                    degenerate = true;
                }
                (q, 0.0)
            }
        };
        indices.push(choice);
        // A single edge is not reported as a volume.
        volumes.push(if size == 1 { 0.0 } else { volume });
        selected[choice] = true;
        if indices.len() < k {
            cache.push(v.column_sq_distances(&v.column(choice))?);
        }
    }

    let selection = ArchetypeSelection { indices, volumes };
    if degenerate {
        return Err(Error::Degenerate { selection });
    }
    Ok(selection)
}

/// Scores usable candidates by `Σ_F vol²(F ∪ q)` over faces `F` of the
/// current selection, largest faces first, and returns the best candidate
/// at the first face size where any score is positive.
fn face_fallback(
    size: usize,
    n: usize,
    usable: &[bool],
    pair: &(impl Fn(usize, usize, usize) -> f64 + Sync),
) -> Option<usize> {
    for face in (1..size).rev() {
        let faces = subsets(size, face);
        let scores: Vec<f64> = par::map_range(n, |q| {
            if !usable[q] {
                return f64::NEG_INFINITY;
            }
            faces
                .iter()
                .map(|f| {
                    squared_volume_from_distances(face + 1, |a, b| {
                        let ia = if a == face { size } else { f[a] };
                        let ib = if b == face { size } else { f[b] };
                        pair(ia, ib, q)
                    })
                })
                .sum()
        });
        if let Some(q) = par::argmax(&scores) {
            if scores[q] > 0.0 {
                return Some(q);
            }
        }
    }
    None
}

/// All `r`-element subsets of `0..m` in lexicographic order.
fn subsets(m: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(r);
    fn rec(start: usize, m: usize, r: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == r {
            out.push(current.clone());
            return;
        }
        for i in start..m {
            current.push(i);
            rec(i + 1, m, r, current, out);
            current.pop();
        }
    }
    rec(0, m, r, &mut current, &mut out);
    out
}
