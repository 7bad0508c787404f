use num_complex::Complex64;

use super::VertexModel;
use crate::linalg::CMatrix;
use crate::tolerance::approx_eq;

fn rows_equal(b: &CMatrix, i: usize, j: usize, tol: f64) -> bool {
    (0..b.ncols()).all(|c| approx_eq(b[(i, c)], b[(j, c)], tol))
}

/// First twin pair `(i, j)`, `i < j`, whose rows of `B` agree within `tol`.
pub fn find_twins(m: &VertexModel, tol: f64) -> Option<(usize, usize)> {
    let n = m.colors();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| rows_equal(m.matrix(), i, j, tol))
}

pub fn is_twin_free(m: &VertexModel, tol: f64) -> bool {
    find_twins(m, tol).is_none()
}

/// Repeatedly merges twins `i, j` into `j` with weight `aᵢ + aⱼ`, or deletes
/// both when `aᵢ + aⱼ = 0`. The partition function is unchanged.
pub fn twin_reduce(m: &VertexModel, tol: f64) -> VertexModel {
    let mut a: Vec<Complex64> = m.weights().to_vec();
    let mut b = m.matrix().clone();
    while let Some((i, j)) = find_twins(&VertexModel::from_parts_unchecked(a.clone(), b.clone()), tol) {
        let sum = a[i] + a[j];
        let scale = a[i].norm().max(a[j].norm());
        let drop: Vec<usize> = if sum.norm() <= tol * (1.0 + scale) {
            vec![i, j]
        } else {
            a[j] = sum;
            vec![i]
        };
        let keep: Vec<usize> = (0..a.len()).filter(|x| !drop.contains(x)).collect();
        b = CMatrix::from_fn(keep.len(), keep.len(), |r, c| b[(keep[r], keep[c])]);
        a = keep.iter().map(|&x| a[x]).collect();
    }
    VertexModel::from_parts_unchecked(a, b)
}
