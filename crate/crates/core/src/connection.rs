//! Edge connection matrices over fragment corpora, PSD checks and the search
//! for negative quadratic forms.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{
    disjoint_union, enumerate_fragments, fragment_key, glue, CanonicalKey, CorpusBounds,
    Fragment, Multigraph,
};
use crate::linalg::{eig_real_symmetric, CMatrix, RMatrix};
use crate::models::{eval_vertex_with, Backend, VertexModel};

/// A graph invariant evaluated on circle-free graphs.
pub type Invariant<'a> = dyn Fn(&Multigraph) -> Result<Complex64> + Sync + 'a;

/// Partition function of `m` through the chosen backend.
pub fn vertex_invariant(m: &VertexModel, backend: Backend) -> impl Fn(&Multigraph) -> Result<Complex64> + Sync + '_ {
    move |g| eval_vertex_with(backend, m, g, None)
}

/// Evaluates `p` on `g`, handling circles through `circle_value`.
pub fn eval_with_circles(
    p: &Invariant<'_>,
    g: &Multigraph,
    circle_value: Option<Complex64>,
) -> Result<Complex64> {
    match (g.circles(), circle_value) {
        (0, _) => p(g),
        (c, Some(v)) => Ok(p(&g.without_circles())? * v.powu(c as u32)),
        (c, None) => Err(Error::CirclesUndefined(c)),
    }
}

/// `M[i][j] = p(Fᵢ * Fⱼ)` over an ordered fragment list.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionMatrix {
    pub l: usize,
    pub fragments: Vec<CanonicalKey>,
    pub values: CMatrix,
    pub circle_value: Option<Complex64>,
}

impl ConnectionMatrix {
    /// Real part of `M`, provided every imaginary part is within `tol`
    /// (relative to the entry).
    pub fn real(&self, tol: f64) -> Result<RMatrix> {
        if let Some(z) = self
            .values
            .iter()
            .find(|z| z.im.abs() > tol * (1.0 + z.re.abs()))
        {
            return Err(Error::NotRealModel(format!("connection matrix entry {z}")));
        }
        Ok(self.values.map(|z| z.re))
    }
}

/// Fills the connection matrix of `p` on `fragments`; all fragments must
/// have `l` open ends.
pub fn connection_matrix(
    p: &Invariant<'_>,
    l: usize,
    fragments: &[Fragment],
    circle_value: Option<Complex64>,
) -> Result<ConnectionMatrix> {
    if let Some(f) = fragments.iter().find(|f| f.labels() != l) {
        return Err(Error::LabelCountMismatch {
            left: f.labels(),
            right: l,
        });
    }
    let keys = fragments.iter().map(fragment_key).collect::<Result<Vec<_>>>()?;
    let t = fragments.len();
    let cells: Vec<(usize, usize)> = (0..t).flat_map(|i| (i..t).map(move |j| (i, j))).collect();
    let values: Vec<Complex64> = cells
        .par_iter()
        .map(|&(i, j)| {
            let g = glue(&fragments[i], &fragments[j])?;
            eval_with_circles(p, &g, circle_value)
        })
        .collect::<Result<_>>()?;
    let mut m = CMatrix::zeros(t, t);
    for (&(i, j), v) in cells.iter().zip(values) {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    Ok(ConnectionMatrix {
        l,
        fragments: keys,
        values: m,
        circle_value,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsdReport {
    pub psd: bool,
    pub min_eigenvalue: f64,
    /// Unit eigenvector of the minimal eigenvalue when not PSD.
    pub witness: Option<Vec<f64>>,
}

/// PSD iff the minimal eigenvalue is at least `−tol·(1 + ‖M‖_F)`.
pub fn psd_check(m: &RMatrix, tol: f64) -> Result<PsdReport> {
    let norm = m.norm();
    let asym = (m - m.transpose()).norm();
    if asym > 1e-9 * (1.0 + norm) {
        return Err(Error::NotSymmetric(asym));
    }
    if m.nrows() == 0 {
        return Ok(PsdReport {
            psd: true,
            min_eigenvalue: 0.0,
            witness: None,
        });
    }
    let dec = eig_real_symmetric(m)?;
    let last = dec.dim() - 1;
    let min = dec.eigenvalues[last];
    let psd = min >= -tol * (1.0 + norm);
    Ok(PsdReport {
        psd,
        min_eigenvalue: min,
        witness: (!psd).then(|| dec.vectors.column(last).iter().copied().collect()),
    })
}

/// A real combination `Σ λᵢ Fᵢ` of `l`-fragments with
/// `Σ λᵢλⱼ p(Fᵢ * Fⱼ) < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct NegativityWitness {
    pub l: usize,
    pub fragments: Vec<Fragment>,
    pub keys: Vec<CanonicalKey>,
    pub coefficients: Vec<f64>,
    /// `λᵀMλ`, recomputed with the reference evaluator.
    pub quadratic_form: f64,
    pub min_eigenvalue: f64,
    pub circle_value: Option<Complex64>,
}

impl NegativityWitness {
    /// `λᵀMλ` recomputed from scratch through the reference backend.
    pub fn recompute(&self, m: &VertexModel) -> Result<Complex64> {
        let p = vertex_invariant(m, Backend::Reference);
        let mut q = Complex64::new(0.0, 0.0);
        for (i, fi) in self.fragments.iter().enumerate() {
            for (j, fj) in self.fragments.iter().enumerate() {
                let g = glue(fi, fj)?;
                let v = eval_with_circles(&p, &g, self.circle_value)?;
                q += v * self.coefficients[i] * self.coefficients[j];
            }
        }
        Ok(q)
    }

    /// The recomputed form is real and below `−tol`.
    pub fn verify(&self, m: &VertexModel, tol: f64) -> Result<bool> {
        let q = self.recompute(m)?;
        Ok(q.re < -tol && q.im.abs() <= tol * (1.0 + q.re.abs()))
    }
}

const COEFFICIENT_FLOOR: f64 = 1e-12;

fn witness_from(
    m: &VertexModel,
    l: usize,
    fragments: &[Fragment],
    cm: &ConnectionMatrix,
    report: &PsdReport,
    tol: f64,
) -> Result<Option<NegativityWitness>> {
    let Some(vec) = &report.witness else {
        return Ok(None);
    };
    let support: Vec<usize> = (0..vec.len()).filter(|&i| vec[i].abs() > COEFFICIENT_FLOOR).collect();
    let mut w = NegativityWitness {
        l,
        fragments: support.iter().map(|&i| fragments[i].clone()).collect(),
        keys: support.iter().map(|&i| cm.fragments[i].clone()).collect(),
        coefficients: support.iter().map(|&i| vec[i]).collect(),
        quadratic_form: 0.0,
        min_eigenvalue: report.min_eigenvalue,
        circle_value: cm.circle_value,
    };
    let q = w.recompute(m)?;
    w.quadratic_form = q.re;
    Ok(w.verify(m, tol)?.then_some(w))
}

/// Searches `l = 1..=max_l` for a non-PSD connection matrix of `m`, first
/// on circle-free corpora and then, for each supplied real circle value, on
/// corpora with bare edges. Returns the first re-verified witness.
///
/// Best effort: finding nothing says nothing about reflection positivity.
pub fn witness_search(
    m: &VertexModel,
    max_l: usize,
    bounds: CorpusBounds,
    circle_values: &[f64],
    psd_tol: f64,
) -> Result<Option<NegativityWitness>> {
    let p = vertex_invariant(m, Backend::Optimized);
    for l in 1..=max_l {
        let mut runs: Vec<(CorpusBounds, Option<Complex64>)> =
            vec![(bounds.with_bare_edges(false), None)];
        for &c in circle_values {
            runs.push((bounds.with_bare_edges(true), Some(Complex64::new(c, 0.0))));
        }
        for (b, cv) in runs {
            let fragments = enumerate_fragments(l, b)?;
            let cm = connection_matrix(&p, l, &fragments, cv)?;
            let Ok(real) = cm.real(1e-9) else {
                log::debug!("connection matrix at l = {l} is not real; skipped");
                continue;
            };
            let report = psd_check(&real, psd_tol)?;
            if report.psd {
                continue;
            }
            let tol = psd_tol * (1.0 + real.norm());
            if let Some(w) = witness_from(m, l, &fragments, &cm, &report, tol)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// `p(∅) = 1` and `p(F ⊔ G) = p(F)·p(G)` for all pairs from `graphs`, within
/// `tol` relative to the product.
pub fn multiplicativity_check(p: &Invariant<'_>, graphs: &[Multigraph], tol: f64) -> Result<bool> {
    let empty = p(&Multigraph::empty())?;
    if (empty - Complex64::new(1.0, 0.0)).norm() > tol * 2.0 {
        return Ok(false);
    }
    let values = graphs.iter().map(|g| p(g)).collect::<Result<Vec<_>>>()?;
    for (i, f) in graphs.iter().enumerate() {
        for (j, g) in graphs.iter().enumerate().skip(i) {
            let prod = values[i] * values[j];
            let joint = p(&disjoint_union(f, g))?;
            if (joint - prod).norm() > tol * (1.0 + prod.norm()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
