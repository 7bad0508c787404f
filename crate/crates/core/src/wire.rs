//! JSON documents for graphs, fragments, models and command results.
//!
//! Complex numbers are `[re, im]` pairs; inputs may also give a plain real
//! number.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::erp::{ErpStatus, ErpVerdict, FailureWitness};
use crate::graph::{CanonicalKey, Fragment, Multigraph};
use crate::linalg::{CMatrix, RMatrix};
use crate::models::{EdgeModel, EdgeModelEval, EdgeModelTable, EvalTerm, VertexModel};
use crate::szegedy::TransformResult;

/// A complex number on input: `[re, im]` or a real number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WireComplex {
    Pair([f64; 2]),
    Real(f64),
}

impl From<WireComplex> for Complex64 {
    fn from(w: WireComplex) -> Self {
        match w {
            WireComplex::Pair([re, im]) => Complex64::new(re, im),
            WireComplex::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

impl From<Complex64> for WireComplex {
    fn from(z: Complex64) -> Self {
        WireComplex::Pair([z.re, z.im])
    }
}

fn count(x: i64, what: &str) -> Result<usize> {
    usize::try_from(x).map_err(|_| Error::NegativeCount(format!("{what} = {x}")))
}

fn matrix_to_wire(m: &CMatrix) -> Vec<Vec<WireComplex>> {
    m.row_iter()
        .map(|r| r.iter().map(|&z| z.into()).collect())
        .collect()
}

fn matrix_from_wire(rows: &[Vec<WireComplex>]) -> Result<CMatrix> {
    let n = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != c) {
        return Err(Error::ShapeMismatch("ragged matrix".into()));
    }
    Ok(CMatrix::from_fn(n, c, |i, j| rows[i][j].into()))
}

fn real_matrix_to_wire(m: &RMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: i64,
    pub edges: Vec<[i64; 2]>,
    #[serde(default)]
    pub circles: i64,
}

impl GraphDoc {
    pub fn from_graph(g: &Multigraph) -> Self {
        GraphDoc {
            vertices: g.vertex_count() as i64,
            edges: g.edges().iter().map(|&(u, v)| [u as i64, v as i64]).collect(),
            circles: g.circles() as i64,
        }
    }

    pub fn to_graph(&self) -> Result<Multigraph> {
        let vertices = count(self.vertices, "vertices")?;
        let circles = count(self.circles, "circles")?;
        let edges = self
            .edges
            .iter()
            .map(|&[u, v]| Ok((count(u, "endpoint")?, count(v, "endpoint")?)))
            .collect::<Result<Vec<_>>>()?;
        Multigraph::new(vertices, edges, circles)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FragmentDoc {
    #[serde(flatten)]
    pub graph: GraphDoc,
    pub open_ends: Vec<i64>,
}

impl FragmentDoc {
    pub fn from_fragment(f: &Fragment) -> Self {
        FragmentDoc {
            graph: GraphDoc::from_graph(f.graph()),
            open_ends: f.open_ends().iter().map(|&v| v as i64).collect(),
        }
    }

    pub fn to_fragment(&self) -> Result<Fragment> {
        let ends = self
            .open_ends
            .iter()
            .map(|&v| count(v, "open end"))
            .collect::<Result<Vec<_>>>()?;
        Fragment::new(self.graph.to_graph()?, ends)
    }
}

/// A fragment list, either bare or under a `"fragments"` key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FragmentListDoc {
    List(Vec<FragmentDoc>),
    Wrapped { fragments: Vec<FragmentDoc> },
}

impl FragmentListDoc {
    pub fn to_fragments(&self) -> Result<Vec<Fragment>> {
        let list = match self {
            FragmentListDoc::List(l) => l,
            FragmentListDoc::Wrapped { fragments } => fragments,
        };
        list.iter().map(FragmentDoc::to_fragment).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexModelDoc {
    pub a: Vec<WireComplex>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<WireComplex>>,
}

impl VertexModelDoc {
    pub fn from_model(m: &VertexModel) -> Self {
        VertexModelDoc {
            a: m.weights().iter().map(|&z| z.into()).collect(),
            b: matrix_to_wire(m.matrix()),
        }
    }

    pub fn to_model(&self, tol: f64) -> Result<VertexModel> {
        let b = if self.b.is_empty() {
            CMatrix::zeros(0, 0)
        } else {
            matrix_from_wire(&self.b)?
        };
        VertexModel::new(self.a.iter().map(|&z| z.into()).collect(), b, tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub a: WireComplex,
    pub u: Vec<WireComplex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeEvalDoc {
    pub k: usize,
    pub terms: Vec<TermDoc>,
}

impl EdgeEvalDoc {
    pub fn from_model(h: &EdgeModelEval) -> Self {
        EdgeEvalDoc {
            k: h.colors(),
            terms: h
                .terms()
                .iter()
                .map(|t| TermDoc {
                    a: t.weight.into(),
                    u: t.point.iter().map(|&z| z.into()).collect(),
                })
                .collect(),
        }
    }

    pub fn to_model(&self) -> Result<EdgeModelEval> {
        let terms = self
            .terms
            .iter()
            .map(|t| EvalTerm {
                weight: t.a.into(),
                point: t.u.iter().map(|&z| z.into()).collect(),
            })
            .collect();
        EdgeModelEval::new(self.k, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeTableDoc {
    pub k: usize,
    pub d: usize,
    /// Keys are comma-separated exponents, e.g. `"2,0,1"`.
    pub coeffs: BTreeMap<String, WireComplex>,
}

fn exponent_key(alpha: &[u32]) -> String {
    alpha.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl EdgeTableDoc {
    pub fn from_table(t: &EdgeModelTable) -> Self {
        EdgeTableDoc {
            k: t.colors(),
            d: t.degree(),
            coeffs: t
                .coeffs()
                .iter()
                .map(|(alpha, &z)| (exponent_key(alpha), z.into()))
                .collect(),
        }
    }

    pub fn to_table(&self) -> Result<EdgeModelTable> {
        let mut coeffs = BTreeMap::new();
        for (key, &z) in &self.coeffs {
            let alpha = if key.trim().is_empty() {
                Vec::new()
            } else {
                key.split(',')
                    .map(|s| {
                        let x: i64 = s
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad exponent key {key:?}")))?;
                        u32::try_from(x).map_err(|_| Error::NegativeCount(format!("exponent {x}")))
                    })
                    .collect::<Result<Vec<u32>>>()?
            };
            coeffs.insert(alpha, z.into());
        }
        EdgeModelTable::new(self.k, self.d, coeffs)
    }
}

/// An edge model in either representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeModelDoc {
    Eval(EdgeEvalDoc),
    Table(EdgeTableDoc),
}

/// Parsed edge model.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyEdgeModel {
    Eval(EdgeModelEval),
    Table(EdgeModelTable),
}

impl AnyEdgeModel {
    pub fn as_dyn(&self) -> &(dyn EdgeModel + Sync) {
        match self {
            AnyEdgeModel::Eval(h) => h,
            AnyEdgeModel::Table(t) => t,
        }
    }
}

impl EdgeModelDoc {
    pub fn to_model(&self) -> Result<AnyEdgeModel> {
        Ok(match self {
            EdgeModelDoc::Eval(d) => AnyEdgeModel::Eval(d.to_model()?),
            EdgeModelDoc::Table(d) => AnyEdgeModel::Table(d.to_table()?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueDoc {
    pub value: WireComplex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformDoc {
    pub edge_model: EdgeEvalDoc,
    #[serde(rename = "U")]
    pub u: Vec<Vec<WireComplex>>,
    pub uu_star_real: bool,
}

impl TransformDoc {
    pub fn from_result(r: &TransformResult) -> Self {
        TransformDoc {
            edge_model: EdgeEvalDoc::from_model(&r.edge_model),
            u: matrix_to_wire(&r.factorization.u),
            uu_star_real: r.uu_star_real,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub status: ErpStatus,
    pub certificate: Option<EdgeEvalDoc>,
    pub witness: Option<FailureWitness>,
    pub notes: Vec<String>,
}

impl VerdictDoc {
    pub fn from_verdict(v: &ErpVerdict) -> Self {
        VerdictDoc {
            status: v.status,
            certificate: v.certificate.as_ref().map(EdgeEvalDoc::from_model),
            witness: v.witness.clone(),
            notes: v.notes.clone(),
        }
    }

    pub fn to_verdict(&self) -> Result<ErpVerdict> {
        Ok(ErpVerdict {
            status: self.status,
            certificate: self.certificate.as_ref().map(EdgeEvalDoc::to_model).transpose()?,
            witness: self.witness.clone(),
            notes: self.notes.clone(),
        })
    }
}

/// Output of the connection-matrix and witness commands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionDoc {
    pub l: Option<usize>,
    pub fragments: Vec<CanonicalKey>,
    #[serde(rename = "M")]
    pub m: Vec<Vec<f64>>,
    /// Imaginary parts, present only when some entry is not real.
    #[serde(rename = "M_imag", default, skip_serializing_if = "Option::is_none")]
    pub m_imag: Option<Vec<Vec<f64>>>,
    pub psd: Option<bool>,
    pub min_eigenvalue: Option<f64>,
    pub witness: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadratic_form: Option<f64>,
}

impl ConnectionDoc {
    pub fn matrix(values: &CMatrix, tol: f64) -> (Vec<Vec<f64>>, Option<Vec<Vec<f64>>>) {
        let re = real_matrix_to_wire(&values.map(|z| z.re));
        let real = values.iter().all(|z| z.im.abs() <= tol * (1.0 + z.re.abs()));
        (re, (!real).then(|| real_matrix_to_wire(&values.map(|z| z.im))))
    }
}

/// Output of the kempf-ness-search command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnDoc {
    pub found: bool,
    pub l: usize,
    pub g: Option<Vec<Vec<WireComplex>>>,
    pub f: Option<f64>,
    pub f_history: Vec<f64>,
    pub certificate: Option<EdgeEvalDoc>,
}

impl KnDoc {
    pub fn g_matrix(g: &CMatrix) -> Vec<Vec<WireComplex>> {
        matrix_to_wire(g)
    }
}

/// Parses a JSON document into `T`, mapping syntax errors to [`Error::Parse`].
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Single-line JSON.
pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    serde_json::to_string(doc).map_err(|e| Error::Parse(e.to_string()))
}
