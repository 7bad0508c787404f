//! Deciding edge reflection positivity of vertex coloring models.
//!
//! Real models are decided exactly through the eigenspace pairing test:
//! every color `i` needs a partner `j` with `aᵢ = aⱼ`, `Pe_i = Pe_j` on
//! positive eigenspaces and `Pe_i = −Pe_j` on negative ones. Complex models
//! are handled heuristically by searching for an orthogonal `g` that makes
//! the transformed edge model real.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kempf_ness::{find_conjugating_g, SearchOptions};
use crate::linalg::{
    eig_real_symmetric, factor_symmetric, is_real_matrix, spectral_projectors, RMatrix,
    SpectralProjectors,
};
use crate::models::{find_twins, EdgeModel, EdgeModelEval, VertexModel};
use crate::szegedy::{is_real_edge_model, snap_to_real, vertex_to_edge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErpStatus {
    #[serde(rename = "ERP")]
    Erp,
    #[serde(rename = "NOT_ERP")]
    NotErp,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl std::fmt::Display for ErpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ErpStatus::Erp => "ERP",
            ErpStatus::NotErp => "NOT_ERP",
            ErpStatus::Unknown => "UNKNOWN",
        })
    }
}

/// Why color `j` cannot be the partner of the witness color.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `|aᵢ − aⱼ|` exceeds the tolerance.
    Weight { j: usize, difference: f64 },
    /// `P_λ(eᵢ − sign·eⱼ) ≠ 0`, with `sign = +1` for `λ > 0` and `−1` for `λ < 0`.
    Projector {
        j: usize,
        eigenvalue: f64,
        sign: i8,
        residual: Vec<f64>,
        norm: f64,
    },
}

/// A color with no valid partner, and one violation for every candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureWitness {
    pub index: usize,
    pub violations: Vec<Violation>,
}

impl FailureWitness {
    /// Recomputes every recorded violation from `m` and checks that each
    /// candidate `j` is covered and each violation exceeds `tol`.
    pub fn verify(&self, m: &VertexModel, tol: f64) -> Result<bool> {
        let (a, b) = real_parts(m, tol)?;
        let n = a.len();
        if self.index >= n || self.violations.len() != n {
            return Ok(false);
        }
        let i = self.index;
        let dec = eig_real_symmetric(&b)?;
        let rho = dec.spectral_radius();
        let proj = spectral_projectors(&dec, tol);
        for (expected_j, v) in self.violations.iter().enumerate() {
            let ok = match v {
                Violation::Weight { j, .. } => {
                    *j == expected_j && !weights_match(a[i], a[*j], tol)
                }
                Violation::Projector {
                    j,
                    eigenvalue,
                    sign,
                    residual,
                    ..
                } => {
                    let Some((_, p)) = proj
                        .clusters
                        .iter()
                        .find(|(lam, _)| (lam - eigenvalue).abs() <= tol * (1.0 + rho))
                    else {
                        return Ok(false);
                    };
                    let fresh = projector_residual(p, i, *j, f64::from(*sign));
                    let recorded_norm = residual.iter().map(|x| x * x).sum::<f64>().sqrt();
                    *j == expected_j
                        && fresh.norm() > tol
                        && recorded_norm > tol
                        && (fresh.norm() - recorded_norm).abs() <= 1e-6 * (1.0 + recorded_norm)
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Outcome of a decision, with a real edge model certificate for `Erp` and
/// a failure witness for `NotErp`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErpVerdict {
    pub status: ErpStatus,
    pub certificate: Option<EdgeModelEval>,
    pub witness: Option<FailureWitness>,
    pub notes: Vec<String>,
}

fn weights_match(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
}

fn projector_residual(p: &RMatrix, i: usize, j: usize, sign: f64) -> nalgebra::DVector<f64> {
    p.column(i) - p.column(j) * sign
}

fn real_parts(m: &VertexModel, tol: f64) -> Result<(Vec<f64>, RMatrix)> {
    if !m.is_real(tol) {
        return Err(Error::NotRealModel(
            "weights and edge weights must be real".into(),
        ));
    }
    let n = m.colors();
    let a = m.weights().iter().map(|z| z.re).collect();
    let b = RMatrix::from_fn(n, n, |i, j| {
        0.5 * (m.matrix()[(i, j)].re + m.matrix()[(j, i)].re)
    });
    Ok((a, b))
}

fn check_twin_free(m: &VertexModel, tol: f64) -> Result<()> {
    match find_twins(m, tol) {
        Some((i, j)) => Err(Error::NotTwinFree(i, j)),
        None => Ok(()),
    }
}

/// First violated condition for the pair `(i, j)`, if any.
fn pair_violation(
    a: &[f64],
    proj: &SpectralProjectors,
    zero: f64,
    i: usize,
    j: usize,
    tol: f64,
) -> Option<Violation> {
    if !weights_match(a[i], a[j], tol) {
        return Some(Violation::Weight {
            j,
            difference: (a[i] - a[j]).abs(),
        });
    }
    for (lam, p) in &proj.clusters {
        let sign = if *lam > zero {
            1.0
        } else if *lam < -zero {
            -1.0
        } else {
            continue;
        };
        let r = projector_residual(p, i, j, sign);
        if r.norm() > tol {
            return Some(Violation::Projector {
                j,
                eigenvalue: *lam,
                sign: sign as i8,
                norm: r.norm(),
                residual: r.iter().copied().collect(),
            });
        }
    }
    None
}

/// Exact decision for a real twin-free model.
pub fn erp_decide_real(m: &VertexModel, tol: f64) -> Result<ErpVerdict> {
    let (a, b) = real_parts(m, tol)?;
    check_twin_free(m, tol)?;
    let n = a.len();
    let mut notes = Vec::new();
    if a.iter().any(|&x| x <= 0.0) {
        log::warn!("model has non-positive node weights");
        notes.push("node weights are not all positive".to_string());
    }
    let dec = eig_real_symmetric(&b)?;
    let zero = tol * (1.0 + dec.spectral_radius());
    let proj = spectral_projectors(&dec, tol);

    // Per color: Ok(partner) or Err(violations against every candidate).
    let partners: Vec<std::result::Result<usize, Vec<Violation>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut violations = Vec::with_capacity(n);
            for j in 0..n {
                match pair_violation(&a, &proj, zero, i, j, tol) {
                    None => return Ok(j),
                    Some(v) => violations.push(v),
                }
            }
            Err(violations)
        })
        .collect();

    let mut pairing = Vec::with_capacity(n);
    for (i, p) in partners.into_iter().enumerate() {
        match p {
            Ok(j) => pairing.push(j),
            Err(violations) => {
                notes.push(format!("color {i} has no conjugate partner"));
                return Ok(ErpVerdict {
                    status: ErpStatus::NotErp,
                    certificate: None,
                    witness: Some(FailureWitness {
                        index: i,
                        violations,
                    }),
                    notes,
                });
            }
        }
    }
    if (0..n).any(|i| pairing[pairing[i]] != i) {
        return Err(Error::Numerical("partner map is not an involution".into()));
    }
    let transform = vertex_to_edge(m, None, tol)?;
    let certificate = snap_to_real(&transform.edge_model, &pairing)?;
    notes.push("eigenspace pairing holds for every color".to_string());
    notes.push(format!(
        "certificate is the spectral transform with {} edge colors",
        certificate.colors()
    ));
    Ok(ErpVerdict {
        status: ErpStatus::Erp,
        certificate: Some(certificate),
        witness: None,
        notes,
    })
}

/// Whether the default factorization `B = UᵀU` has `UU*` real. Necessary,
/// not sufficient, for the model to be an edge model partition function.
pub fn necessary_condition(m: &VertexModel, tol: f64) -> Result<bool> {
    let f = factor_symmetric(m.matrix(), tol)?;
    Ok(is_real_matrix(&f.gram_conjugate(), tol))
}

/// How far beyond `k` the complex search extends the dimension `l`.
pub const EXTRA_DIMENSIONS: usize = 2;

/// Decision for a possibly complex twin-free model. Real models are
/// delegated to [`erp_decide_real`]; otherwise the result is `Erp` or
/// `Unknown`, never `NotErp`.
pub fn erp_decide_complex(
    m: &VertexModel,
    tol: f64,
    search: SearchOptions,
) -> Result<ErpVerdict> {
    check_twin_free(m, tol)?;
    if m.is_real(tol) {
        let mut v = erp_decide_real(m, tol)?;
        v.notes.insert(0, "model is real; decided exactly".to_string());
        return Ok(v);
    }
    let mut notes = Vec::new();
    let transform = vertex_to_edge(m, None, tol)?;
    let h = transform.edge_model;
    let k = h.colors();
    if !transform.uu_star_real {
        notes.push("UU* is not real for the default factorization".to_string());
    }
    if let Ok(r) = is_real_edge_model(&h, search.tol) {
        if let crate::szegedy::Realness::Real { pairing } = r {
            notes.push("transform is already conjugation closed".to_string());
            return Ok(ErpVerdict {
                status: ErpStatus::Erp,
                certificate: Some(snap_to_real(&h, &pairing)?),
                witness: None,
                notes,
            });
        }
    }
    for l in k..=k + EXTRA_DIMENSIONS {
        let report = find_conjugating_g(&h, l, search)?;
        if let Some(hit) = report.hit {
            notes.push(format!(
                "conjugating g found at l = {l} (restart {}, f = {:e})",
                hit.restart, hit.f
            ));
            return Ok(ErpVerdict {
                status: ErpStatus::Erp,
                certificate: Some(snap_to_real(&hit.model, &hit.pairing)?),
                witness: None,
                notes,
            });
        }
        notes.push(format!("no conjugating g found at l = {l}"));
    }
    Ok(ErpVerdict {
        status: ErpStatus::Unknown,
        certificate: None,
        witness: None,
        notes,
    })
}

/// Coefficients of `h` stay real: all stacked vectors pair up under
/// conjugation within `tol`.
pub fn certificate_is_real(h: &EdgeModelEval, tol: f64) -> bool {
    matches!(is_real_edge_model(h, tol), Ok(r) if r.is_real())
}
