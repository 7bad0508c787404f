use std::collections::HashMap;

use num_complex::Complex64;

use super::contract::{contract, Factor};
use super::edge::EdgeModel;
use super::VertexModel;
use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// Evaluator backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    /// Full enumeration of all assignments in lexicographic order.
    Reference,
    /// Greedy variable elimination.
    #[default]
    Optimized,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Odometer over `[q]^len`, last position fastest. Calls `visit` on every
/// assignment in lexicographic order.
fn for_each_assignment(len: usize, q: usize, mut visit: impl FnMut(&[usize])) {
    if len > 0 && q == 0 {
        return;
    }
    let mut x = vec![0usize; len];
    loop {
        visit(&x);
        let mut p = len;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            x[p] += 1;
            if x[p] < q {
                break;
            }
            x[p] = 0;
        }
    }
}

/// Vertex-model partition function with the default (optimized) backend.
pub fn eval_vertex(
    m: &VertexModel,
    g: &Multigraph,
    circle_value: Option<Complex64>,
) -> Result<Complex64> {
    eval_vertex_with(Backend::Optimized, m, g, circle_value)
}

/// `Σ_ψ ∏_v a_ψ(v) ∏_uv B_ψ(u)ψ(v)`, times `circle_value^circles`.
pub fn eval_vertex_with(
    backend: Backend,
    m: &VertexModel,
    g: &Multigraph,
    circle_value: Option<Complex64>,
) -> Result<Complex64> {
    let circle_factor = match (g.circles(), circle_value) {
        (0, _) => one(),
        (c, Some(v)) => v.powu(c as u32),
        (c, None) => return Err(Error::CirclesUndefined(c)),
    };
    let n = m.colors();
    let a = m.weights();
    let b = m.matrix();
    let value = match backend {
        Backend::Reference => {
            let mut total = Complex64::new(0.0, 0.0);
            for_each_assignment(g.vertex_count(), n, |psi| {
                let mut term = psi.iter().fold(one(), |acc, &c| acc * a[c]);
                for &(u, v) in g.edges() {
                    term *= b[(psi[u], psi[v])];
                }
                total += term;
            });
            total
        }
        Backend::Optimized => {
            let mut factors: Vec<Factor> = (0..g.vertex_count())
                .map(|v| Factor {
                    vars: vec![v],
                    table: a.to_vec(),
                })
                .collect();
            for &(u, v) in g.edges() {
                if u == v {
                    factors.push(Factor {
                        vars: vec![u],
                        table: (0..n).map(|i| b[(i, i)]).collect(),
                    });
                } else {
                    // Edges are stored with u < v, so (u, v) is already ascending.
                    let mut table = Vec::with_capacity(n * n);
                    for i in 0..n {
                        for j in 0..n {
                            table.push(b[(i, j)]);
                        }
                    }
                    factors.push(Factor {
                        vars: vec![u, v],
                        table,
                    });
                }
            }
            contract(g.vertex_count(), n, factors)
        }
    };
    Ok(value * circle_factor)
}

fn check_degree<H: EdgeModel + ?Sized>(h: &H, g: &Multigraph) -> Result<()> {
    if let Some(d) = h.degree_bound() {
        let max = g.max_degree();
        if max > d {
            return Err(Error::DegreeExceedsTable {
                degree: max,
                bound: d,
            });
        }
    }
    Ok(())
}

/// Memoized `h(x^α)` lookups.
struct CoeffCache<'a, H: ?Sized> {
    h: &'a H,
    memo: HashMap<Vec<u32>, Complex64>,
}

impl<'a, H: EdgeModel + ?Sized> CoeffCache<'a, H> {
    fn new(h: &'a H) -> Self {
        CoeffCache {
            h,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, alpha: &[u32]) -> Result<Complex64> {
        if let Some(z) = self.memo.get(alpha) {
            return Ok(*z);
        }
        let z = self.h.coefficient(alpha)?;
        self.memo.insert(alpha.to_vec(), z);
        Ok(z)
    }
}

/// Edge-model partition function with the default (optimized) backend.
pub fn eval_edge<H: EdgeModel + ?Sized>(h: &H, g: &Multigraph) -> Result<Complex64> {
    eval_edge_with(Backend::Optimized, h, g)
}

/// `Σ_φ ∏_v h(∏_{e∈δ(v)} x_φ(e))`, times `k^circles`. Loops contribute
/// twice to their vertex's exponent.
pub fn eval_edge_with<H: EdgeModel + ?Sized>(
    backend: Backend,
    h: &H,
    g: &Multigraph,
) -> Result<Complex64> {
    check_degree(h, g)?;
    let k = h.colors();
    let circle_factor = Complex64::new(k as f64, 0.0).powu(g.circles() as u32);
    let mut cache = CoeffCache::new(h);
    let nv = g.vertex_count();

    // Incident edge ids per vertex, loops listed twice.
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push(e);
        incident[v].push(e);
    }

    let value = match backend {
        Backend::Reference => {
            let mut total = Complex64::new(0.0, 0.0);
            let mut err = None;
            let mut alpha = vec![0u32; k];
            for_each_assignment(g.edge_count(), k, |phi| {
                if err.is_some() {
                    return;
                }
                let mut term = one();
                for inc in &incident {
                    alpha.iter_mut().for_each(|x| *x = 0);
                    for &e in inc {
                        alpha[phi[e]] += 1;
                    }
                    match cache.get(&alpha) {
                        Ok(z) => term *= z,
                        Err(e) => {
                            err = Some(e);
                            return;
                        }
                    }
                }
                total += term;
            });
            if let Some(e) = err {
                return Err(e);
            }
            if g.edge_count() > 0 && k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                total
            }
        }
        Backend::Optimized => {
            let mut factors = Vec::with_capacity(nv);
            for inc in &incident {
                let mut vars = inc.clone();
                vars.sort_unstable();
                vars.dedup();
                // Multiplicity of each distinct incident edge (2 for loops).
                let mult: Vec<u32> = vars
                    .iter()
                    .map(|e| inc.iter().filter(|&&x| x == *e).count() as u32)
                    .collect();
                let mut table = Vec::with_capacity(k.pow(vars.len() as u32));
                let mut err = None;
                let mut alpha = vec![0u32; k];
                for_each_assignment(vars.len(), k, |colors| {
                    if err.is_some() {
                        return;
                    }
                    alpha.iter_mut().for_each(|x| *x = 0);
                    for (&c, &m) in colors.iter().zip(&mult) {
                        alpha[c] += m;
                    }
                    match cache.get(&alpha) {
                        Ok(z) => table.push(z),
                        Err(e) => err = Some(e),
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
                if vars.is_empty() || k > 0 {
                    factors.push(Factor { vars, table });
                }
            }
            contract(g.edge_count(), k, factors)
        }
    };
    Ok(value * circle_factor)
}

/// `tr((diag(a) B)^len)`: the transfer-matrix value of the cycle `C_len`
/// (`len = 1` is a loop, `len = 2` a double edge).
pub fn oracle_cycle(m: &VertexModel, len: usize) -> Complex64 {
    let n = m.colors();
    let mut t = m.matrix().clone();
    for i in 0..n {
        for j in 0..n {
            t[(i, j)] *= m.weights()[i];
        }
    }
    let mut p = crate::linalg::CMatrix::identity(n, n);
    for _ in 0..len {
        p = &p * &t;
    }
    p.trace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use crate::models::{EdgeModelEval, EvalTerm};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn both(m: &VertexModel, g: &Multigraph) -> Complex64 {
        let r = eval_vertex_with(Backend::Reference, m, g, None).unwrap();
        let o = eval_vertex_with(Backend::Optimized, m, g, None).unwrap();
        assert!((r - o).norm() <= 1e-9 * (1.0 + r.norm()), "{r} vs {o}");
        r
    }

    /// Proper colorings of a graph by backtracking, independent of the model code.
    fn count_proper(g: &Multigraph, n: usize) -> usize {
        fn rec(v: usize, g: &Multigraph, n: usize, col: &mut Vec<usize>) -> usize {
            if v == g.vertex_count() {
                return 1;
            }
            let mut total = 0;
            for c in 0..n {
                let ok = g.edges().iter().all(|&(a, b)| {
                    let get = |x: usize| match x.cmp(&v) {
                        std::cmp::Ordering::Equal => Some(c),
                        std::cmp::Ordering::Less => Some(col[x]),
                        std::cmp::Ordering::Greater => None,
                    };
                    match (get(a), get(b)) {
                        (Some(x), Some(y)) => x != y,
                        _ => true,
                    }
                });
                if ok {
                    col.push(c);
                    total += rec(v + 1, g, n, col);
                    col.pop();
                }
            }
            total
        }
        rec(0, g, n, &mut Vec::new())
    }

    #[test]
    fn proper_colorings() {
        let k3 = Multigraph::complete(3);
        assert_eq!(both(&VertexModel::proper_coloring(3), &k3), c(6.0));
        assert_eq!(count_proper(&k3, 3), 6);
        let c5 = Multigraph::cycle(5);
        assert_eq!(both(&VertexModel::proper_coloring(2), &c5), c(0.0));
        assert_eq!(count_proper(&c5, 2), 0);
        let c4 = Multigraph::cycle(4);
        assert_eq!(both(&VertexModel::proper_coloring(3), &c4), c(18.0));
        assert_eq!(count_proper(&c4, 3), 18);
    }

    #[test]
    fn independent_sets_of_c4() {
        assert_eq!(both(&VertexModel::independent_set(), &Multigraph::cycle(4)), c(7.0));
    }

    #[test]
    fn empty_graph_is_one() {
        let m = VertexModel::proper_coloring(3);
        assert_eq!(both(&m, &Multigraph::empty()), c(1.0));
        let empty_model = VertexModel::new(vec![], CMatrix::zeros(0, 0), 1e-9).unwrap();
        assert_eq!(both(&empty_model, &Multigraph::empty()), c(1.0));
        assert_eq!(both(&empty_model, &Multigraph::complete(1)), c(0.0));
    }

    #[test]
    fn circles_need_a_value() {
        let m = VertexModel::proper_coloring(2);
        assert_eq!(
            eval_vertex(&m, &Multigraph::circle(), None),
            Err(Error::CirclesUndefined(1))
        );
        let v = eval_vertex(&m, &Multigraph::circle(), Some(c(3.0))).unwrap();
        assert_eq!(v, c(3.0));
    }

    fn k2_transform() -> EdgeModelEval {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        EdgeModelEval::new(
            2,
            vec![
                EvalTerm {
                    weight: c(1.0),
                    point: vec![c(s), Complex64::new(0.0, s)],
                },
                EvalTerm {
                    weight: c(1.0),
                    point: vec![c(s), Complex64::new(0.0, -s)],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn edge_model_cycles() {
        let h = k2_transform();
        for (n, want) in [(3usize, 0.0), (4, 2.0)] {
            let g = Multigraph::cycle(n);
            let r = eval_edge_with(Backend::Reference, &h, &g).unwrap();
            let o = eval_edge_with(Backend::Optimized, &h, &g).unwrap();
            assert!((r - c(want)).norm() < 1e-12, "C{n}: {r}");
            assert!((o - c(want)).norm() < 1e-12, "C{n}: {o}");
        }
    }

    #[test]
    fn edge_model_circle_is_k() {
        let h = k2_transform();
        assert_eq!(eval_edge(&h, &Multigraph::circle()).unwrap(), c(2.0));
        let o3 = crate::graph::disjoint_union(
            &Multigraph::circle(),
            &crate::graph::disjoint_union(&Multigraph::circle(), &Multigraph::circle()),
        );
        assert_eq!(eval_edge(&h, &o3).unwrap(), c(8.0));
    }

    #[test]
    fn loops_count_twice() {
        // One vertex with a loop: Σ_c h(x_c^2).
        let h = k2_transform();
        let v = eval_edge(&h, &Multigraph::cycle(1)).unwrap();
        // h(x1^2) = 1, h(x2^2) = -1
        assert!(v.norm() < 1e-12);
        let m = VertexModel::proper_coloring(2);
        assert_eq!(both(&m, &Multigraph::cycle(1)), c(0.0));
    }

    #[test]
    fn oracle_cycle_examples() {
        assert!((oracle_cycle(&VertexModel::proper_coloring(2), 4) - c(2.0)).norm() < 1e-12);
        assert!((oracle_cycle(&VertexModel::proper_coloring(3), 4) - c(18.0)).norm() < 1e-12);
        assert!((oracle_cycle(&VertexModel::proper_coloring(3), 3) - c(6.0)).norm() < 1e-12);
    }
}
