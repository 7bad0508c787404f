use std::collections::BTreeMap;

use num_complex::Complex64;

use super::edge::{EdgeModel, EdgeModelTable, Exponent};
use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// The polynomial `Σ_φ ∏_v y_{φ(δ(v))}` in aggregated form: each distinct
/// multiset of vertex signatures with the number of edge colorings producing
/// it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub k: usize,
    pub d: usize,
    /// Sorted per-vertex signatures -> multiplicity.
    pub monomials: BTreeMap<Vec<Exponent>, u64>,
}

impl DegreeProfile {
    /// Sum of multiplicities; equals `k^|E|`.
    pub fn total(&self) -> u64 {
        self.monomials.values().sum()
    }
}

/// Expands a circle-free graph of maximum degree at most `d` over `k` edge colors.
pub fn degree_profile(g: &Multigraph, k: usize, d: usize) -> Result<DegreeProfile> {
    if g.circles() > 0 {
        return Err(Error::ShapeMismatch(
            "degree profiles are defined on circle-free graphs".into(),
        ));
    }
    let max = g.max_degree();
    if max > d {
        return Err(Error::DegreeExceedsTable {
            degree: max,
            bound: d,
        });
    }
    let nv = g.vertex_count();
    let ne = g.edge_count();
    let mut monomials = BTreeMap::new();
    if ne > 0 && k == 0 {
        return Ok(DegreeProfile { k, d, monomials });
    }
    let mut phi = vec![0usize; ne];
    loop {
        let mut sig = vec![vec![0u32; k]; nv];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            sig[u][phi[e]] += 1;
            sig[v][phi[e]] += 1;
        }
        sig.sort();
        *monomials.entry(sig).or_insert(0u64) += 1;

        let mut p = ne;
        let done = loop {
            if p == 0 {
                break true;
            }
            p -= 1;
            phi[p] += 1;
            if phi[p] < k {
                break false;
            }
            phi[p] = 0;
        };
        if done {
            break;
        }
    }
    Ok(DegreeProfile { k, d, monomials })
}

/// Evaluates the profile at the coefficients of `h`.
pub fn eval_via_profile(p: &DegreeProfile, h: &EdgeModelTable) -> Result<Complex64> {
    if h.colors() != p.k || h.degree() < p.d {
        return Err(Error::ShapeMismatch(format!(
            "profile has k={}, d={} but table has k={}, d={}",
            p.k,
            p.d,
            h.colors(),
            h.degree()
        )));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (sigs, &count) in &p.monomials {
        let mut term = Complex64::new(count as f64, 0.0);
        for s in sigs {
            term *= h.coefficient(s)?;
        }
        total += term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_two_colors() {
        let p = degree_profile(&Multigraph::complete(2), 2, 1).unwrap();
        let expected: BTreeMap<Vec<Exponent>, u64> = [
            (vec![vec![0, 1], vec![0, 1]], 1),
            (vec![vec![1, 0], vec![1, 0]], 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(p.monomials, expected);
    }

    #[test]
    fn k1_single_empty_signature() {
        let p = degree_profile(&Multigraph::complete(1), 3, 0).unwrap();
        assert_eq!(p.monomials.len(), 1);
        assert_eq!(p.monomials[&vec![vec![0, 0, 0]]], 1);
    }

    #[test]
    fn c3_aggregates_to_four() {
        let p = degree_profile(&Multigraph::cycle(3), 2, 2).unwrap();
        assert_eq!(p.total(), 8);
        assert_eq!(p.monomials.len(), 4);
    }

    #[test]
    fn degree_checked() {
        assert!(matches!(
            degree_profile(&Multigraph::cycle(3), 2, 1),
            Err(Error::DegreeExceedsTable { .. })
        ));
    }
}
