use super::{frobenius, to_complex, RMatrix, MAX_EIGEN_DIM};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 50;
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// `B = Q diag(λ) Qᵀ` with eigenvalues in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column eigenvectors.
    pub vectors: RMatrix,
}

impl SpectralDecomposition {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Eigenvalue clusters and their orthogonal projectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralProjectors {
    pub clusters: Vec<(f64, RMatrix)>,
}

/// Cyclic Jacobi eigensolver for real symmetric matrices (`n <= 64`).
///
/// Eigenvectors are normalized so that their first nonzero component is
/// positive.
pub fn eig_real_symmetric(b: &RMatrix) -> Result<SpectralDecomposition> {
    let n = b.nrows();
    if b.ncols() != n {
        return Err(Error::ShapeMismatch(format!("{}x{} is not square", n, b.ncols())));
    }
    if n > MAX_EIGEN_DIM {
        return Err(Error::TooLarge(format!("eigensolver dimension {n} > {MAX_EIGEN_DIM}")));
    }
    let norm = frobenius(&to_complex(b));
    for i in 0..n {
        for j in i + 1..n {
            let d = (b[(i, j)] - b[(j, i)]).abs();
            if d > 1e-9 * (1.0 + b[(i, j)].abs().max(b[(j, i)].abs())) {
                return Err(Error::NotSymmetric(d));
            }
        }
    }
    let mut a = RMatrix::from_fn(n, n, |i, j| 0.5 * (b[(i, j)] + b[(j, i)]));
    let mut v = RMatrix::identity(n, n);
    let target = OFF_DIAGONAL_TOL * norm.max(1.0);

    let off = |a: &RMatrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)] * a[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off(&a) <= target;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- Rᵀ A R with R = [[c, s], [-s, c]] in the (p, q) plane.
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        converged = off(&a) <= target;
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = RMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut q = v.column(i).into_owned();
        if let Some(first) = q.iter().find(|x| x.abs() > 1e-14) {
            if *first < 0.0 {
                q = -q;
            }
        }
        vectors.set_column(col, &q);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        vectors,
    })
}

/// Groups consecutive eigenvalues whose gap is at most
/// `cluster_tol * (1 + spectral radius)` and returns `Σ q qᵀ` per group.
pub fn spectral_projectors(dec: &SpectralDecomposition, cluster_tol: f64) -> SpectralProjectors {
    let n = dec.dim();
    let gap = cluster_tol * (1.0 + dec.spectral_radius());
    let mut clusters = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (dec.eigenvalues[end - 1] - dec.eigenvalues[end]).abs() <= gap {
            end += 1;
        }
        let mut p = RMatrix::zeros(n, n);
        for c in start..end {
            let q = dec.vectors.column(c);
            p += q * q.transpose();
        }
        let mean = dec.eigenvalues[start..end].iter().sum::<f64>() / (end - start) as f64;
        clusters.push((mean, p));
        start = end;
    }
    SpectralProjectors { clusters }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j_minus_i(n: usize) -> RMatrix {
        RMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 })
    }

    fn check_invariants(b: &RMatrix, dec: &SpectralDecomposition) {
        let n = b.nrows();
        let lam = RMatrix::from_diagonal(&nalgebra::DVector::from_vec(dec.eigenvalues.clone()));
        let res = (b * &dec.vectors - &dec.vectors * lam).norm();
        assert!(res <= 1e-10 * (1.0 + b.norm()), "residual {res}");
        let orth = (dec.vectors.transpose() * &dec.vectors - RMatrix::identity(n, n)).norm();
        assert!(orth <= 1e-12, "orthogonality {orth}");
    }

    #[test]
    fn swap_matrix() {
        let b = RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let dec = eig_real_symmetric(&b).unwrap();
        check_invariants(&b, &dec);
        assert!((dec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((dec.eigenvalues[1] + 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((dec.vectors[(0, 0)] - s).abs() < 1e-14 && (dec.vectors[(1, 0)] - s).abs() < 1e-14);
        assert!((dec.vectors[(0, 1)] - s).abs() < 1e-14 && (dec.vectors[(1, 1)] + s).abs() < 1e-14);
    }

    #[test]
    fn identity_and_j_minus_i() {
        let dec = eig_real_symmetric(&RMatrix::identity(3, 3)).unwrap();
        assert_eq!(dec.eigenvalues, vec![1.0, 1.0, 1.0]);
        let b = j_minus_i(3);
        let dec = eig_real_symmetric(&b).unwrap();
        check_invariants(&b, &dec);
        for (got, want) in dec.eigenvalues.iter().zip([2.0, -1.0, -1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let b = RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(matches!(eig_real_symmetric(&b), Err(Error::NotSymmetric(_))));
        assert!(matches!(
            eig_real_symmetric(&RMatrix::identity(MAX_EIGEN_DIM + 1, MAX_EIGEN_DIM + 1)),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn projectors_of_j_minus_i() {
        let dec = eig_real_symmetric(&j_minus_i(3)).unwrap();
        let p = spectral_projectors(&dec, 1e-9);
        assert_eq!(p.clusters.len(), 2);
        let j3 = RMatrix::from_element(3, 3, 1.0 / 3.0);
        assert!((p.clusters[0].0 - 2.0).abs() < 1e-12);
        assert!((&p.clusters[0].1 - &j3).norm() < 1e-12);
        assert!((p.clusters[1].0 + 1.0).abs() < 1e-12);
        assert!((&p.clusters[1].1 - (RMatrix::identity(3, 3) - j3)).norm() < 1e-12);
    }

    #[test]
    fn projectors_merge_close_values() {
        let dec = eig_real_symmetric(&RMatrix::identity(4, 4)).unwrap();
        let p = spectral_projectors(&dec, 1e-9);
        assert_eq!(p.clusters.len(), 1);
        assert!((&p.clusters[0].1 - RMatrix::identity(4, 4)).norm() < 1e-14);

        let d = RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0 + 1e-15]));
        let p = spectral_projectors(&eig_real_symmetric(&d).unwrap(), 1e-9);
        assert_eq!(p.clusters.len(), 1);
    }
}
