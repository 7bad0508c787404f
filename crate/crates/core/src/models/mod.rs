//! Vertex and edge coloring models and their partition functions.

mod contract;
mod edge;
mod eval;
mod profile;
mod twins;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::tolerance::{approx_eq, is_finite};

pub use edge::{exponents, EdgeModel, EdgeModelEval, EdgeModelTable, EvalTerm, Exponent};
pub use eval::{eval_edge, eval_edge_with, eval_vertex, eval_vertex_with, oracle_cycle, Backend};
pub use profile::{degree_profile, eval_via_profile, DegreeProfile};
pub use twins::{find_twins, is_twin_free, twin_reduce};

/// An `n`-color vertex coloring model: nonzero node weights `a` and a
/// symmetric edge-weight matrix `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexModel {
    a: Vec<Complex64>,
    b: CMatrix,
}

impl VertexModel {
    /// Validates shape, finiteness, nonzero weights and symmetry of `B`
    /// within `tol` (relative).
    pub fn new(a: Vec<Complex64>, b: CMatrix, tol: f64) -> Result<Self> {
        let n = a.len();
        if b.nrows() != n || b.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "{} weights but B is {}x{}",
                n,
                b.nrows(),
                b.ncols()
            )));
        }
        if !a.iter().chain(b.iter()).all(|z| is_finite(*z)) {
            return Err(Error::InvalidModel("non-finite entry".into()));
        }
        if let Some(i) = a.iter().position(|z| z.norm() <= tol) {
            return Err(Error::InvalidModel(format!("weight a[{i}] is zero")));
        }
        for i in 0..n {
            for j in i + 1..n {
                if !approx_eq(b[(i, j)], b[(j, i)], tol) {
                    return Err(Error::NotSymmetric((b[(i, j)] - b[(j, i)]).norm()));
                }
            }
        }
        Ok(VertexModel { a, b })
    }

    /// Real model from real weights and a real matrix given row-major.
    pub fn from_real(a: &[f64], rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let b = CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0));
        let a = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        VertexModel::new(a, b, 1e-9)
    }

    /// The model `(1, J - I)` counting proper `n`-colorings.
    pub fn proper_coloring(n: usize) -> Self {
        let b = CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(if i == j { 0.0 } else { 1.0 }, 0.0)
        });
        VertexModel {
            a: vec![Complex64::new(1.0, 0.0); n],
            b,
        }
    }

    /// Two colors with `B = [[1,1],[1,0]]`: counts independent sets.
    pub fn independent_set() -> Self {
        VertexModel::from_real(&[1.0, 1.0], &[&[1.0, 1.0], &[1.0, 0.0]]).expect("valid")
    }

    pub(crate) fn from_parts_unchecked(a: Vec<Complex64>, b: CMatrix) -> Self {
        VertexModel { a, b }
    }

    pub fn colors(&self) -> usize {
        self.a.len()
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.a
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.b
    }

    /// Real weights and real `B` within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.a
            .iter()
            .chain(self.b.iter())
            .all(|z| z.im.abs() <= tol * (1.0 + z.re.abs()))
    }

    /// Simultaneously permutes colors: new color `perm[i]` is old color `i`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.colors();
        if perm.len() != n {
            return Err(Error::ShapeMismatch("permutation length".into()));
        }
        let mut inv = vec![usize::MAX; n];
        for (i, &p) in perm.iter().enumerate() {
            if p >= n || inv[p] != usize::MAX {
                return Err(Error::ShapeMismatch("not a permutation".into()));
            }
            inv[p] = i;
        }
        let a = inv.iter().map(|&i| self.a[i]).collect();
        let b = CMatrix::from_fn(n, n, |r, c| self.b[(inv[r], inv[c])]);
        Ok(VertexModel { a, b })
    }
}
