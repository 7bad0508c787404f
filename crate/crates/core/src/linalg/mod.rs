//! Dense complex linear algebra at desk scale.

mod eigen;
mod expm;
mod factor;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use eigen::{eig_real_symmetric, spectral_projectors, SpectralDecomposition, SpectralProjectors};
pub use expm::{
    expm, orthogonality_residual, random_complex_orthogonal, random_real_orthogonal,
    sample_orthogonal,
};
pub use factor::{factor_symmetric, SymmetricFactorization};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Largest matrix dimension accepted by the eigensolver.
pub const MAX_EIGEN_DIM: usize = 256;

/// Largest model size accepted by [`factor_symmetric`].
pub const MAX_FACTOR_DIM: usize = 64;

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `max |Im m_ij| <= tol * (1 + max |m_ij|)`.
pub fn is_real_matrix(m: &CMatrix, tol: f64) -> bool {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    m.iter().all(|z| z.im.abs() <= tol * (1.0 + scale))
}

/// `max |m_ij - m_ji|`.
pub fn symmetry_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).norm());
        }
    }
    worst
}

/// Number of pivots above `tol * (1 + ‖M‖_F)` under full-pivot elimination.
pub fn rank(m: &CMatrix, tol: f64) -> usize {
    let thresh = tol * (1.0 + frobenius(m));
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut r = 0;
    while r < rows.min(cols) {
        let mut best = (r, r, 0.0);
        for i in r..rows {
            for j in r..cols {
                let v = a[(i, j)].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= thresh {
            break;
        }
        a.swap_rows(r, best.0);
        a.swap_columns(r, best.1);
        let pivot = a[(r, r)];
        for i in r + 1..rows {
            let f = a[(i, r)] / pivot;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in r..cols {
                let t = a[(r, j)];
                a[(i, j)] -= f * t;
            }
        }
        r += 1;
    }
    r
}
