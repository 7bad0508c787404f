use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Exponent vector `α` of the monomial `x^α`; entries may be zero.
pub type Exponent = Vec<u32>;

/// A linear functional on `ℂ[x_1..x_k]`, queried on monomials.
pub trait EdgeModel {
    /// Number of edge colors `k`.
    fn colors(&self) -> usize;

    /// Largest monomial degree the model can answer, if bounded.
    fn degree_bound(&self) -> Option<usize> {
        None
    }

    /// `h(x^α)`.
    fn coefficient(&self, alpha: &[u32]) -> Result<Complex64>;
}

/// One term `a · ev_u` of an evaluation-form model.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalTerm {
    pub weight: Complex64,
    pub point: Vec<Complex64>,
}

/// `h = Σ aᵢ ev_{uᵢ}` with `uᵢ ∈ ℂᵏ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeModelEval {
    k: usize,
    terms: Vec<EvalTerm>,
}

impl EdgeModelEval {
    pub fn new(k: usize, terms: Vec<EvalTerm>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if t.point.len() != k {
                return Err(Error::ShapeMismatch(format!(
                    "term {i} has a point of length {} but k = {k}",
                    t.point.len()
                )));
            }
            if t.weight == Complex64::new(0.0, 0.0) {
                return Err(Error::InvalidModel(format!("term {i} has zero weight")));
            }
        }
        Ok(EdgeModelEval { k, terms })
    }

    pub fn terms(&self) -> &[EvalTerm] {
        &self.terms
    }

    /// First pair of points closer than `tol` (relative), if any.
    pub fn coincident_points(&self, tol: f64) -> Option<(usize, usize)> {
        for i in 0..self.terms.len() {
            for j in i + 1..self.terms.len() {
                let (p, q) = (&self.terms[i].point, &self.terms[j].point);
                let dist = p
                    .iter()
                    .zip(q)
                    .map(|(x, y)| (x - y).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                let scale = p.iter().chain(q).map(|z| z.norm()).fold(0.0, f64::max);
                if dist <= tol * (1.0 + scale) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

impl EdgeModel for EdgeModelEval {
    fn colors(&self) -> usize {
        self.k
    }

    fn coefficient(&self, alpha: &[u32]) -> Result<Complex64> {
        if alpha.len() != self.k {
            return Err(Error::ShapeMismatch(format!(
                "exponent of length {} for k = {}",
                alpha.len(),
                self.k
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|t| {
                t.point
                    .iter()
                    .zip(alpha)
                    .fold(t.weight, |acc, (u, &e)| acc * u.powu(e))
            })
            .sum())
    }
}

/// Coefficient table `α ↦ h(x^α)` for `|α| <= d`; missing keys are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeModelTable {
    k: usize,
    d: usize,
    coeffs: BTreeMap<Exponent, Complex64>,
}

impl EdgeModelTable {
    pub fn new(k: usize, d: usize, coeffs: BTreeMap<Exponent, Complex64>) -> Result<Self> {
        for alpha in coeffs.keys() {
            if alpha.len() != k {
                return Err(Error::ShapeMismatch(format!(
                    "exponent {alpha:?} has length {} but k = {k}",
                    alpha.len()
                )));
            }
            let total: u32 = alpha.iter().sum();
            if total as usize > d {
                return Err(Error::DegreeExceedsTable {
                    degree: total as usize,
                    bound: d,
                });
            }
        }
        Ok(EdgeModelTable { k, d, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &BTreeMap<Exponent, Complex64> {
        &self.coeffs
    }

    /// Largest `|Im h(x^α)|` over stored coefficients.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.values().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

impl EdgeModel for EdgeModelTable {
    fn colors(&self) -> usize {
        self.k
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(self.d)
    }

    fn coefficient(&self, alpha: &[u32]) -> Result<Complex64> {
        if alpha.len() != self.k {
            return Err(Error::ShapeMismatch(format!(
                "exponent of length {} for k = {}",
                alpha.len(),
                self.k
            )));
        }
        let total = alpha.iter().sum::<u32>() as usize;
        if total > self.d {
            return Err(Error::DegreeExceedsTable {
                degree: total,
                bound: self.d,
            });
        }
        Ok(self
            .coeffs
            .get(alpha)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0)))
    }
}

/// All exponent vectors of length `k` with total degree at most `d`, in
/// lexicographic order.
pub fn exponents(k: usize, d: usize) -> Vec<Exponent> {
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(k, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, d as u32, &mut Vec::new(), &mut out);
    out
}
