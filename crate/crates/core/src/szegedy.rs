//! Vertex-to-edge model transform, realness of evaluation-form edge models,
//! the orthogonal group action and the reverse construction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    factor_symmetric, frobenius, is_real_matrix, orthogonality_residual, CMatrix,
    SymmetricFactorization,
};
use crate::models::{EdgeModel, EdgeModelEval, EdgeModelTable, EvalTerm, VertexModel};

/// Edge model `Σ aᵢ ev_{uᵢ}` built from the columns `uᵢ` of `U` with
/// `UᵀU = B`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformResult {
    pub edge_model: EdgeModelEval,
    pub factorization: SymmetricFactorization,
    /// Whether `UU*` is real, a necessary condition for a real edge model.
    pub uu_star_real: bool,
}

/// Point matrix with one column per term; rows beyond a point's length are zero.
pub fn point_matrix(h: &EdgeModelEval, rows: usize) -> CMatrix {
    let terms = h.terms();
    let mut w = CMatrix::zeros(rows, terms.len());
    for (j, t) in terms.iter().enumerate() {
        for (i, z) in t.point.iter().enumerate() {
            w[(i, j)] = *z;
        }
    }
    w
}

fn model_from_columns(weights: &[Complex64], u: &CMatrix) -> Result<EdgeModelEval> {
    let terms = weights
        .iter()
        .enumerate()
        .map(|(i, &a)| EvalTerm {
            weight: a,
            point: u.column(i).iter().copied().collect(),
        })
        .collect();
    EdgeModelEval::new(u.nrows(), terms)
}

/// Builds `h = Σ aᵢ ev_{uᵢ}` from `(a, B)`; `u` defaults to
/// [`factor_symmetric`] of `B`.
pub fn vertex_to_edge(
    m: &VertexModel,
    u: Option<&SymmetricFactorization>,
    tol: f64,
) -> Result<TransformResult> {
    let b = m.matrix();
    let factorization = match u {
        Some(f) => {
            if f.u.ncols() != m.colors() {
                return Err(Error::ShapeMismatch(format!(
                    "U has {} columns for {} colors",
                    f.u.ncols(),
                    m.colors()
                )));
            }
            let res = f.residual(b);
            if res > tol * (1.0 + frobenius(b)) {
                return Err(Error::FactorizationMismatch(res));
            }
            f.clone()
        }
        None => factor_symmetric(b, tol)?,
    };
    let edge_model = model_from_columns(m.weights(), &factorization.u)?;
    let uu_star_real = is_real_matrix(&factorization.gram_conjugate(), tol);
    Ok(TransformResult {
        edge_model,
        factorization,
        uu_star_real,
    })
}

/// Coefficient table `h(x^α) = Σ aᵢ uᵢ^α` for all `|α| <= d`.
pub fn materialize(h: &EdgeModelEval, d: usize) -> EdgeModelTable {

    let coeffs = crate::models::exponents(h.colors(), d)
        .into_iter()
        .map(|alpha| {
            let v = h.coefficient(&alpha).expect("exponent length matches k");
            (alpha, v)
        })
        .collect();
    EdgeModelTable::new(h.colors(), d, coeffs).expect("exponents within bound")
}

/// Outcome of the conjugation-closure test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realness {
    /// `pairing[i] = j` with `conj(uᵢ, aᵢ) = (uⱼ, aⱼ)`; an involution.
    Real { pairing: Vec<usize> },
    /// No term matches the conjugate of term `unmatched`.
    NotReal { unmatched: usize },
}

impl Realness {
    pub fn is_real(&self) -> bool {
        matches!(self, Realness::Real { .. })
    }
}

fn stacked_distance(p: &EvalTerm, q: &EvalTerm) -> f64 {
    let pts: f64 = p
        .point
        .iter()
        .zip(&q.point)
        .map(|(x, y)| (x.conj() - y).norm_sqr())
        .sum();
    (pts + (p.weight.conj() - q.weight).norm_sqr()).sqrt()
}

/// Tests whether the stacked vectors `(uᵢ; aᵢ)` are closed under complex
/// conjugation, which holds exactly when `h` is real valued.
pub fn is_real_edge_model(h: &EdgeModelEval, tol: f64) -> Result<Realness> {
    let terms = h.terms();
    let scale = terms
        .iter()
        .flat_map(|t| t.point.iter().chain(std::iter::once(&t.weight)))
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let thresh = tol * (1.0 + scale);
    let mut pairing = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        let mut candidates = (0..terms.len()).filter(|&j| stacked_distance(t, &terms[j]) <= thresh);
        match (candidates.next(), candidates.next()) {
            (None, _) => return Ok(Realness::NotReal { unmatched: i }),
            (Some(j), None) => pairing.push(j),
            (Some(j1), Some(j2)) => return Err(Error::TermsTooClose(j1, j2)),
        }
    }
    if let Some(i) = (0..pairing.len()).find(|&i| pairing[pairing[i]] != i) {
        return Ok(Realness::NotReal { unmatched: i });
    }
    Ok(Realness::Real { pairing })
}

/// Replaces each conjugate pair by an exact pair (averaging the two sides)
/// and self-paired terms by their real parts, so all coefficients are real.
pub fn snap_to_real(h: &EdgeModelEval, pairing: &[usize]) -> Result<EdgeModelEval> {
    let terms = h.terms();
    if pairing.len() != terms.len() {
        return Err(Error::ShapeMismatch("pairing length".into()));
    }
    let mut out = terms.to_vec();
    for (i, &j) in pairing.iter().enumerate() {
        if j == i {
            out[i].weight = Complex64::new(terms[i].weight.re, 0.0);
            out[i].point = terms[i].point.iter().map(|z| Complex64::new(z.re, 0.0)).collect();
        } else if i < j {
            let w = 0.5 * (terms[i].weight + terms[j].weight.conj());
            let p: Vec<Complex64> = terms[i]
                .point
                .iter()
                .zip(&terms[j].point)
                .map(|(x, y)| 0.5 * (x + y.conj()))
                .collect();
            out[j].weight = w.conj();
            out[j].point = p.iter().map(|z| z.conj()).collect();
            out[i].weight = w;
            out[i].point = p;
        }
    }
    EdgeModelEval::new(h.colors(), out)
}

/// `Σ aᵢ ev_{g·uᵢ}` with points zero-padded to length `l`.
pub fn apply_group(h: &EdgeModelEval, g: &CMatrix, l: usize, tol: f64) -> Result<EdgeModelEval> {
    if g.nrows() != l || g.ncols() != l {
        return Err(Error::ShapeMismatch(format!(
            "g is {}x{} but l = {l}",
            g.nrows(),
            g.ncols()
        )));
    }
    if l < h.colors() {
        return Err(Error::DimensionTooSmall {
            target: l,
            points: h.colors(),
        });
    }
    let res = orthogonality_residual(g);
    if res > tol * (1.0 + frobenius(g)) {
        return Err(Error::NotOrthogonal(res));
    }
    let moved = g * point_matrix(h, l);
    let weights: Vec<Complex64> = h.terms().iter().map(|t| t.weight).collect();
    model_from_columns(&weights, &moved)
}

/// The vertex model `(a, UᵀU)` with the same partition function as `h`.
pub fn evaluation_to_vertex(h: &EdgeModelEval) -> Result<VertexModel> {
    let u = point_matrix(h, h.colors());
    let b = u.transpose() * &u;
    let a = h.terms().iter().map(|t| t.weight).collect();
    VertexModel::new(a, b, 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Multigraph;
    use crate::linalg::random_real_orthogonal;
    use crate::models::{eval_edge, eval_vertex};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn k2() -> TransformResult {
        vertex_to_edge(&VertexModel::proper_coloring(2), None, 1e-9).unwrap()
    }

    #[test]
    fn k2_transform_terms() {
        let t = k2();
        assert_eq!(t.edge_model.colors(), 2);
        assert!(t.uu_star_real);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let terms = t.edge_model.terms();
        assert!((terms[0].point[0] - c(s, 0.0)).norm() < 1e-14);
        assert!((terms[0].point[1] - c(0.0, s)).norm() < 1e-14);
        assert!((terms[1].point[1] - c(0.0, -s)).norm() < 1e-14);
        assert_eq!(terms[0].weight, c(1.0, 0.0));
    }

    #[test]
    fn rank_zero_transform() {
        let m = VertexModel::new(vec![c(2.5, 0.0)], CMatrix::zeros(1, 1), 1e-9).unwrap();
        let t = vertex_to_edge(&m, None, 1e-9).unwrap();
        assert_eq!(t.edge_model.colors(), 0);
        assert_eq!(eval_edge(&t.edge_model, &Multigraph::complete(1)).unwrap(), c(2.5, 0.0));
        assert_eq!(eval_edge(&t.edge_model, &Multigraph::complete(2)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn independent_set_transform_is_uu_real() {
        let t = vertex_to_edge(&VertexModel::independent_set(), None, 1e-9).unwrap();
        assert_eq!(t.edge_model.colors(), 2);
        assert!(t.uu_star_real);
    }

    #[test]
    fn supplied_factorization_checked() {
        let bad = SymmetricFactorization {
            u: CMatrix::identity(2, 2),
        };
        assert!(matches!(
            vertex_to_edge(&VertexModel::proper_coloring(2), Some(&bad), 1e-9),
            Err(Error::FactorizationMismatch(_))
        ));
    }

    #[test]
    fn materialize_k2() {
        let t = materialize(&k2().edge_model, 2);
        let s2 = 2f64.sqrt();
        let want = [
            (vec![0, 0], c(2.0, 0.0)),
            (vec![1, 0], c(s2, 0.0)),
            (vec![0, 1], c(0.0, 0.0)),
            (vec![2, 0], c(1.0, 0.0)),
            (vec![1, 1], c(0.0, 0.0)),
            (vec![0, 2], c(-1.0, 0.0)),
        ];
        for (alpha, v) in want {
            assert!((t.coefficient(&alpha).unwrap() - v).norm() < 1e-14, "{alpha:?}");
        }
        assert_eq!(t.coeffs().len(), 6);
    }

    #[test]
    fn materialize_zero_point() {
        let h = EdgeModelEval::new(
            2,
            vec![EvalTerm {
                weight: c(1.0, 0.0),
                point: vec![c(0.0, 0.0); 2],
            }],
        )
        .unwrap();
        let t = materialize(&h, 3);
        for (alpha, v) in t.coeffs() {
            let want = if alpha.iter().all(|&e| e == 0) { 1.0 } else { 0.0 };
            assert_eq!(*v, c(want, 0.0));
        }
    }

    #[test]
    fn realness_examples() {
        assert_eq!(
            is_real_edge_model(&k2().edge_model, 1e-9).unwrap(),
            Realness::Real {
                pairing: vec![1, 0]
            }
        );
        let single = |w: Complex64, u: Complex64| {
            EdgeModelEval::new(1, vec![EvalTerm { weight: w, point: vec![u] }]).unwrap()
        };
        assert_eq!(
            is_real_edge_model(&single(c(1.0, 0.0), c(0.0, 1.0)), 1e-9).unwrap(),
            Realness::NotReal { unmatched: 0 }
        );
        assert_eq!(
            is_real_edge_model(&single(c(2.5, 0.0), c(1.0, 0.0)), 1e-9).unwrap(),
            Realness::Real { pairing: vec![0] }
        );
    }

    #[test]
    fn weight_mismatch_breaks_realness() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = EdgeModelEval::new(
            2,
            vec![
                EvalTerm { weight: c(1.0, 0.0), point: vec![c(s, 0.0), c(0.0, s)] },
                EvalTerm { weight: c(2.0, 0.0), point: vec![c(s, 0.0), c(0.0, -s)] },
            ],
        )
        .unwrap();
        assert_eq!(is_real_edge_model(&h, 1e-9).unwrap(), Realness::NotReal { unmatched: 0 });
    }

    #[test]
    fn ambiguous_pairing_is_an_error() {
        let h = EdgeModelEval::new(
            1,
            vec![
                EvalTerm { weight: c(1.0, 0.0), point: vec![c(1.0, 0.0)] },
                EvalTerm { weight: c(1.0, 0.0), point: vec![c(1.0, 0.0)] },
            ],
        )
        .unwrap();
        assert_eq!(is_real_edge_model(&h, 1e-9), Err(Error::TermsTooClose(0, 1)));
    }

    #[test]
    fn group_action_examples() {
        let h = k2().edge_model;
        let same = apply_group(&h, &CMatrix::identity(2, 2), 2, 1e-9).unwrap();
        assert_eq!(same, h);

        let padded = apply_group(&h, &CMatrix::identity(3, 3), 3, 1e-9).unwrap();
        assert!(padded.terms().iter().all(|t| t.point.len() == 3 && t.point[2] == c(0.0, 0.0)));

        let perm = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        let swapped = apply_group(&h, &perm, 2, 1e-9).unwrap();
        let r = random_real_orthogonal(4, 1.0, 3).unwrap();
        let rotated = apply_group(&h, &r, 4, 1e-9).unwrap();
        for n in 1..=8 {
            let g = Multigraph::cycle(n);
            let want = eval_edge(&h, &g).unwrap();
            for model in [&padded, &swapped, &rotated] {
                let got = eval_edge(model, &g).unwrap();
                assert!((got - want).norm() <= 1e-8 * (1.0 + want.norm()));
            }
        }
    }

    #[test]
    fn group_action_errors() {
        let h = k2().edge_model;
        assert!(matches!(
            apply_group(&h, &CMatrix::identity(1, 1), 1, 1e-9),
            Err(Error::DimensionTooSmall { .. })
        ));
        let not_orth = CMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(matches!(apply_group(&h, &not_orth, 2, 1e-9), Err(Error::NotOrthogonal(_))));
    }

    #[test]
    fn reverse_construction() {
        let m = evaluation_to_vertex(&k2().edge_model).unwrap();
        assert!((m.matrix() - VertexModel::proper_coloring(2).matrix()).norm() < 1e-12);
        assert_eq!(m.weights(), &[c(1.0, 0.0), c(1.0, 0.0)]);

        let single = EdgeModelEval::new(
            2,
            vec![EvalTerm { weight: c(1.0, 0.0), point: vec![c(1.0, 0.0), c(2.0, 0.0)] }],
        )
        .unwrap();
        let m = evaluation_to_vertex(&single).unwrap();
        assert_eq!(m.matrix()[(0, 0)], c(5.0, 0.0));

        let w = c(0.3, 0.7);
        let pair = EdgeModelEval::new(
            2,
            vec![
                EvalTerm { weight: w, point: vec![c(1.0, 0.5), c(0.2, -1.0)] },
                EvalTerm { weight: w.conj(), point: vec![c(1.0, -0.5), c(0.2, 1.0)] },
            ],
        )
        .unwrap();
        let m = evaluation_to_vertex(&pair).unwrap();
        // Off-diagonal entries are ‖u₁‖² (real); the diagonal entries are conjugates.
        assert!(m.matrix()[(0, 1)].im.abs() < 1e-12);
        assert!((m.matrix()[(0, 0)] - m.matrix()[(1, 1)].conj()).norm() < 1e-12);
        for n in 1..=6 {
            let g = Multigraph::cycle(n);
            let got = eval_vertex(&m, &g, None).unwrap();
            let want = eval_edge(&pair, &g).unwrap();
            assert!((got - want).norm() <= 1e-9 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn snap_makes_coefficients_exactly_real() {
        let h = k2().edge_model;
        let Realness::Real { pairing } = is_real_edge_model(&h, 1e-9).unwrap() else {
            panic!("K2 transform is real");
        };
        let snapped = snap_to_real(&h, &pairing).unwrap();
        assert!(materialize(&snapped, 6).max_imag() == 0.0);
    }
}
