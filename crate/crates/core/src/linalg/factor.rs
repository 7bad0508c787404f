use num_complex::Complex64;

use super::{eig_real_symmetric, frobenius, symmetry_residual, CMatrix, RMatrix, MAX_FACTOR_DIM};
use crate::error::{Error, Result};

/// `B = UᵀU` with `U` of shape `rank(B) × n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricFactorization {
    pub u: CMatrix,
}

impl SymmetricFactorization {
    pub fn rank(&self) -> usize {
        self.u.nrows()
    }

    /// `‖UᵀU − B‖_F`.
    pub fn residual(&self, b: &CMatrix) -> f64 {
        frobenius(&(self.u.transpose() * &self.u - b))
    }

    /// `UU*`.
    pub fn gram_conjugate(&self) -> CMatrix {
        &self.u * self.u.adjoint()
    }
}

/// Factors a complex symmetric `B` as `UᵀU` with `rank(U) = rank(B)`.
///
/// Real `B` uses its spectral decomposition: rows `√λ qᵀ` over nonzero
/// eigenvalues, with `√λ = i√|λ|` for `λ < 0`, so that `UU*` is real
/// diagonal. Complex `B` uses symmetric rank-one reduction of the quadratic
/// form, pivoting on `e_p` or `e_p ± e_q` when the diagonal has vanished.
pub fn factor_symmetric(b: &CMatrix, tol: f64) -> Result<SymmetricFactorization> {
    let n = b.nrows();
    if b.ncols() != n {
        return Err(Error::ShapeMismatch(format!("{}x{} is not square", n, b.ncols())));
    }
    if n > MAX_FACTOR_DIM {
        return Err(Error::TooLarge(format!("factorization dimension {n} > {MAX_FACTOR_DIM}")));
    }
    let norm = frobenius(b);
    let asym = symmetry_residual(b);
    if asym > tol * (1.0 + norm) {
        return Err(Error::NotSymmetric(asym));
    }
    if b.iter().all(|z| z.im.abs() <= tol * (1.0 + z.re.abs())) {
        spectral(b, tol)
    } else {
        Ok(lagrange(b, tol))
    }
}

fn spectral(b: &CMatrix, tol: f64) -> Result<SymmetricFactorization> {
    let n = b.nrows();
    let real = RMatrix::from_fn(n, n, |i, j| 0.5 * (b[(i, j)].re + b[(j, i)].re));
    let dec = eig_real_symmetric(&real)?;
    let thresh = tol * (1.0 + frobenius(b));
    let kept: Vec<usize> = (0..n).filter(|&r| dec.eigenvalues[r].abs() > thresh).collect();
    let mut u = CMatrix::zeros(kept.len(), n);
    for (row, &r) in kept.iter().enumerate() {
        let lam = dec.eigenvalues[r];
        let root = if lam > 0.0 {
            Complex64::new(lam.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-lam).sqrt())
        };
        for c in 0..n {
            u[(row, c)] = root * dec.vectors[(c, r)];
        }
    }
    Ok(SymmetricFactorization { u })
}

fn lagrange(b: &CMatrix, tol: f64) -> SymmetricFactorization {
    let n = b.nrows();
    let thresh = tol * (1.0 + frobenius(b));
    let mut r = CMatrix::from_fn(n, n, |i, j| 0.5 * (b[(i, j)] + b[(j, i)]));
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for _ in 0..n {
        let largest = r.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if largest <= thresh {
            break;
        }
        // Candidate pivot directions y with value yᵀRy.
        let mut best_diag = 0;
        for p in 1..n {
            if r[(p, p)].norm() > r[(best_diag, best_diag)].norm() {
                best_diag = p;
            }
        }
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        y[best_diag] = Complex64::new(1.0, 0.0);
        let mut pivot = r[(best_diag, best_diag)];
        if pivot.norm() < 0.5 * largest {
            let (mut bp, mut bq) = (0, 1);
            for p in 0..n {
                for q in p + 1..n {
                    if r[(p, q)].norm() > r[(bp, bq)].norm() {
                        bp = p;
                        bq = q;
                    }
                }
            }
            for sign in [1.0, -1.0] {
                let val = r[(bp, bp)] + r[(bq, bq)] + 2.0 * sign * r[(bp, bq)];
                if val.norm() > pivot.norm() {
                    pivot = val;
                    y = vec![Complex64::new(0.0, 0.0); n];
                    y[bp] = Complex64::new(1.0, 0.0);
                    y[bq] = Complex64::new(sign, 0.0);
                }
            }
        }
        let yv = nalgebra::DVector::from_vec(y);
        let x = &r * &yv;
        let root = pivot.sqrt();
        rows.push(x.iter().map(|z| z / root).collect());
        r -= &x * x.transpose() / pivot;
    }
    let mut u = CMatrix::zeros(rows.len(), n);
    for (i, row) in rows.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    SymmetricFactorization { u }
}
