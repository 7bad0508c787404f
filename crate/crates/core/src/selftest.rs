//! The acceptance suite: eleven fixture and property checks, shared by the
//! `selftest` command and the `acceptance` test target.
//!
//! Expected values come from brute-force oracles written here independently
//! of the evaluators under test.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::connection::{connection_matrix, psd_check, vertex_invariant, witness_search};
use crate::erp::{erp_decide_real, ErpStatus};
use crate::error::Result;
use crate::graph::{enumerate_fragments, enumerate_graphs, CorpusBounds, Multigraph};
use crate::kempf_ness::{
    critical_residual, descend, f, find_conjugating_g, gradient, retract, KnProblem,
    SearchOptions,
};
use crate::linalg::{
    expm, factor_symmetric, is_real_matrix, random_complex_orthogonal, random_real_orthogonal,
    rank, CMatrix, RMatrix,
};
use crate::models::{
    eval_edge, eval_vertex, is_twin_free, twin_reduce, Backend, EdgeModelEval,
    EvalTerm, VertexModel,
};
use crate::szegedy::{apply_group, is_real_edge_model, materialize, vertex_to_edge};

/// Result of one criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            fmt,
            "[{}] {:>2} {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

type Check = fn() -> Result<(bool, String)>;

/// Criteria in order: id, name, check.
pub const CRITERIA: [(usize, &str, Check); 11] = [
    (1, "vertex/edge equivalence", vertex_edge_equivalence),
    (2, "proper coloring fixtures", proper_coloring_fixtures),
    (3, "independent set fixture", independent_set_fixture),
    (4, "certificate soundness", certificate_soundness),
    (5, "decision coherence", decision_coherence),
    (6, "witness fixture", witness_fixture),
    (7, "gram direction", gram_direction),
    (8, "group invariance", group_invariance),
    (9, "kempf-ness suite", kempf_ness_suite),
    (10, "twin reduction", twin_reduction),
    (11, "linear algebra", linear_algebra),
];

/// Runs criterion `id` (1-based); errors count as failures.
pub fn run_criterion(id: usize) -> CriterionResult {
    let (id, name, check) = CRITERIA[id - 1];
    let start = Instant::now();
    let (passed, detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(run_criterion).collect()
}

// ---- oracles ----

/// `Σ_ψ ∏ a ∏ B` by enumerating every map `V → [n]` directly.
fn brute_vertex(m: &VertexModel, g: &Multigraph) -> Complex64 {
    let n = m.colors();
    let nv = g.vertex_count();
    let mut total = Complex64::new(0.0, 0.0);
    let mut psi = vec![0usize; nv];
    let count = n.pow(nv as u32);
    for mut code in 0..count {
        for x in psi.iter_mut() {
            *x = code % n;
            code /= n;
        }
        let mut w: Complex64 = psi.iter().map(|&c| m.weights()[c]).product();
        for &(u, v) in g.edges() {
            w *= m.matrix()[(psi[u], psi[v])];
        }
        total += w;
    }
    total
}

/// Homomorphisms into the simple graph `K_n` (no loops).
fn hom_complete(g: &Multigraph, n: usize) -> f64 {
    let nv = g.vertex_count();
    let mut total = 0.0;
    for mut code in 0..n.pow(nv as u32) {
        let mut psi = vec![0usize; nv];
        for x in psi.iter_mut() {
            *x = code % n;
            code /= n;
        }
        if g.edges().iter().all(|&(u, v)| psi[u] != psi[v]) {
            total += 1.0;
        }
    }
    total
}

/// Independent sets of a graph, by subsets.
fn independent_sets(g: &Multigraph) -> f64 {
    let nv = g.vertex_count();
    (0..1u32 << nv)
        .filter(|s| g.edges().iter().all(|&(u, v)| s & (1 << u) == 0 || s & (1 << v) == 0))
        .count() as f64
}

// ---- generators ----

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_square(r: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(r.gen_range(0.0..1.0), r.gen_range(0.0..1.0))
}

fn sym_complex(r: &mut ChaCha8Rng, n: usize, mut entry: impl FnMut(&mut ChaCha8Rng) -> Complex64) -> CMatrix {
    let mut b = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z = entry(r);
            b[(i, j)] = z;
            b[(j, i)] = z;
        }
    }
    b
}

fn random_complex_model(r: &mut ChaCha8Rng, n: usize) -> VertexModel {
    loop {
        let a: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(r.gen_range(0.2..1.0), r.gen_range(0.2..1.0)))
            .collect();
        let b = sym_complex(r, n, unit_square);
        let m = VertexModel::new(a, b, 1e-9).expect("valid random model");
        if is_twin_free(&m, 1e-6) {
            return m;
        }
    }
}

fn real_sym(r: &mut ChaCha8Rng, n: usize) -> RMatrix {
    let mut b = RMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = r.gen_range(-1.0..1.0);
            b[(i, j)] = x;
            b[(j, i)] = x;
        }
    }
    b
}

fn from_real_parts(a: &[f64], b: &RMatrix) -> VertexModel {
    VertexModel::new(
        a.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        b.map(|x| Complex64::new(x, 0.0)),
        1e-9,
    )
    .expect("valid model")
}

fn mixed_sign(b: &RMatrix) -> bool {
    let dec = crate::linalg::eig_real_symmetric(b).expect("small matrix");
    let thr = 1e-6 * (1.0 + dec.spectral_radius());
    dec.eigenvalues.iter().any(|&l| l > thr) && dec.eigenvalues.iter().any(|&l| l < -thr)
}

/// A real model that is reflection positive by construction: color `i`
/// carries `(xᵢ; i·yᵢ)` with `x` equal and `y` opposite on paired colors,
/// so `B = XᵀX − YᵀY` has the conjugation-closed factor `U = (X; iY)`.
fn planted_erp_model(r: &mut ChaCha8Rng, n: usize) -> VertexModel {
    loop {
        let pairs = r.gen_range(1..=n / 2);
        // Colors 2t and 2t+1 are paired for t < pairs; the rest are fixed.
        let partner = |i: usize| if i < 2 * pairs { i ^ 1 } else { i };
        let p = r.gen_range(1..=n);
        let q = r.gen_range(1..=pairs);
        let mut x = RMatrix::zeros(p, n);
        let mut y = RMatrix::zeros(q, n);
        let mut a = vec![0.0; n];
        for i in 0..n {
            let j = partner(i);
            if j < i {
                continue;
            }
            let w = r.gen_range(0.2..1.5);
            a[i] = w;
            a[j] = w;
            for row in 0..p {
                let v = r.gen_range(-1.0..1.0);
                x[(row, i)] = v;
                x[(row, j)] = v;
            }
            if j != i {
                for row in 0..q {
                    let v = r.gen_range(-1.0..1.0);
                    y[(row, i)] = v;
                    y[(row, j)] = -v;
                }
            }
        }
        let b = x.transpose() * &x - y.transpose() * &y;
        let m = from_real_parts(&a, &b);
        if mixed_sign(&b) && is_twin_free(&m, 1e-6) {
            return m;
        }
    }
}

fn random_mixed_model(r: &mut ChaCha8Rng, n: usize) -> VertexModel {
    loop {
        let a: Vec<f64> = (0..n).map(|_| r.gen_range(0.2..1.5)).collect();
        let b = real_sym(r, n);
        let m = from_real_parts(&a, &b);
        if mixed_sign(&b) && is_twin_free(&m, 1e-6) {
            return m;
        }
    }
}

fn random_edge_model(r: &mut ChaCha8Rng, k: usize, terms: usize) -> EdgeModelEval {
    let terms = (0..terms)
        .map(|_| EvalTerm {
            weight: Complex64::new(r.gen_range(0.2..1.0), r.gen_range(-1.0..1.0)),
            point: (0..k)
                .map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
                .collect(),
        })
        .collect();
    EdgeModelEval::new(k, terms).expect("valid terms")
}

/// Edge model whose stacked vectors are conjugation closed.
fn real_closed_edge_model(r: &mut ChaCha8Rng, k: usize) -> EdgeModelEval {
    let mut terms = Vec::new();
    for _ in 0..r.gen_range(1..=2) {
        let w = Complex64::new(r.gen_range(0.3..1.0), r.gen_range(-1.0..1.0));
        let p: Vec<Complex64> = (0..k)
            .map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
            .collect();
        terms.push(EvalTerm {
            weight: w.conj(),
            point: p.iter().map(|z| z.conj()).collect(),
        });
        terms.push(EvalTerm { weight: w, point: p });
    }
    terms.push(EvalTerm {
        weight: Complex64::new(r.gen_range(0.3..1.0), 0.0),
        point: (0..k).map(|_| Complex64::new(r.gen_range(-1.0..1.0), 0.0)).collect(),
    });
    EdgeModelEval::new(k, terms).expect("valid terms")
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

fn corpus() -> Result<Vec<Multigraph>> {
    enumerate_graphs(4, 6)
}

// ---- criteria ----

fn vertex_edge_equivalence() -> Result<(bool, String)> {
    let graphs = corpus()?;
    let worst: Vec<f64> = (0..200u64)
        .into_par_iter()
        .map(|s| -> Result<f64> {
            let mut r = rng(1000 + s);
            let n = r.gen_range(1..=3);
            let m = random_complex_model(&mut r, n);
            let h = vertex_to_edge(&m, None, 1e-9)?.edge_model;
            let mut worst = 0.0f64;
            for g in &graphs {
                let pv = eval_vertex(&m, g, None)?;
                let pe = eval_edge(&h, g)?;
                worst = worst.max(rel(pe, pv));
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let max = worst.iter().copied().fold(0.0, f64::max);
    // Spot-check the evaluator itself against direct enumeration.
    let m = random_complex_model(&mut rng(7), 3);
    let mut oracle_err = 0.0f64;
    for g in graphs.iter().step_by(7) {
        oracle_err = oracle_err.max(rel(eval_vertex(&m, g, None)?, brute_vertex(&m, g)));
    }
    Ok((
        max <= 1e-8 && oracle_err <= 1e-10,
        format!(
            "200 models x {} graphs, max relative gap {max:.2e}; evaluator vs enumeration {oracle_err:.2e}",
            graphs.len()
        ),
    ))
}

fn proper_coloring_fixtures() -> Result<(bool, String)> {
    let mut statuses = Vec::new();
    for n in 2..=5 {
        statuses.push(erp_decide_real(&VertexModel::proper_coloring(n), 1e-9)?.status);
    }
    let ok = statuses[0] == ErpStatus::Erp && statuses[1..].iter().all(|&s| s == ErpStatus::NotErp);
    let detail = statuses
        .iter()
        .enumerate()
        .map(|(i, s)| format!("n={}: {s}", i + 2))
        .collect::<Vec<_>>()
        .join(", ");
    Ok((ok, detail))
}

fn independent_set_fixture() -> Result<(bool, String)> {
    let m = VertexModel::independent_set();
    let status = erp_decide_real(&m, 1e-9)?.status;
    let c4 = Multigraph::cycle(4);
    let k2 = Multigraph::complete(2);
    let v4 = eval_vertex(&m, &c4, None)?;
    let v2 = eval_vertex(&m, &k2, None)?;
    let (o4, o2) = (independent_sets(&c4), independent_sets(&k2));
    let ok = status == ErpStatus::NotErp
        && (v4 - Complex64::new(o4, 0.0)).norm() <= 1e-12
        && (v2 - Complex64::new(o2, 0.0)).norm() <= 1e-12
        && o4 == 7.0
        && o2 == 3.0;
    Ok((ok, format!("{status}; C4 = {}, K2 = {}", v4.re, v2.re)))
}

fn certificate_soundness() -> Result<(bool, String)> {
    let m = VertexModel::proper_coloring(2);
    let v = erp_decide_real(&m, 1e-9)?;
    let Some(cert) = v.certificate else {
        return Ok((false, format!("no certificate ({})", v.status)));
    };
    let imag = materialize(&cert, 6).max_imag();
    let mut values = Vec::new();
    let mut ok = imag <= 1e-9;
    for len in 3..=8 {
        let g = Multigraph::cycle(len);
        let value = eval_edge(&cert, &g)?;
        let oracle = hom_complete(&g, 2);
        ok &= (value - Complex64::new(oracle, 0.0)).norm() <= 1e-9;
        values.push(value.re);
    }
    let expected = [0.0, 2.0, 0.0, 2.0, 0.0, 2.0];
    ok &= values
        .iter()
        .zip(expected)
        .all(|(v, e)| (v - e).abs() <= 1e-9);
    Ok((
        ok,
        format!("max |imag| {imag:.1e}; cycles C3..C8 = {:?}", values.iter().map(|v| v.round()).collect::<Vec<_>>()),
    ))
}

fn decision_coherence() -> Result<(bool, String)> {
    let mut agree = 0;
    let mut erp = 0;
    let mut planted_recovered = 0;
    for s in 0..100u64 {
        let mut r = rng(5000 + s);
        let n = r.gen_range(2..=4);
        let planted = s % 2 == 0;
        let m = if planted {
            planted_erp_model(&mut r, n)
        } else {
            random_mixed_model(&mut r, n)
        };
        let status = erp_decide_real(&m, 1e-9)?.status;
        let h = vertex_to_edge(&m, None, 1e-9)?.edge_model;
        let closed = is_real_edge_model(&h, 1e-9)?.is_real();
        if (status == ErpStatus::Erp) == closed {
            agree += 1;
        }
        if status == ErpStatus::Erp {
            erp += 1;
            if planted {
                planted_recovered += 1;
            }
        }
    }
    Ok((
        agree == 100,
        format!("{agree}/100 agree ({erp} ERP, {planted_recovered}/50 planted recovered)"),
    ))
}

fn witness_fixture() -> Result<(bool, String)> {
    let bounds = CorpusBounds::new(1, 4);
    let m = VertexModel::from_real(&[1.0, 1.0], &[&[0.0, -1.0], &[-1.0, 0.0]])?;
    let w = witness_search(&m, 3, bounds, &[], 1e-8)?;
    let (found, q, l) = match &w {
        Some(w) => (true, w.recompute(&m)?.re, w.l),
        None => (false, f64::NAN, 0),
    };
    let none_for_k3 = witness_search(&VertexModel::proper_coloring(3), 3, bounds, &[], 1e-8)?.is_none();
    Ok((
        found && (q + 2.0).abs() <= 1e-9 && none_for_k3,
        format!("witness at l = {l} with q = {q}; proper 3-coloring: {}", if none_for_k3 { "none" } else { "found" }),
    ))
}

fn gram_direction() -> Result<(bool, String)> {
    let m = VertexModel::proper_coloring(2);
    let p = vertex_invariant(&m, Backend::Optimized);
    let mut worst = f64::INFINITY;
    let mut ok = true;
    let mut sizes = Vec::new();
    for l in 0..=2 {
        let frags = enumerate_fragments(l, CorpusBounds::new(3, 4))?;
        let cm = connection_matrix(&p, l, &frags, None)?;
        let real = cm.real(1e-9)?;
        let report = psd_check(&real, 1e-8)?;
        let scaled = report.min_eigenvalue / (1.0 + real.norm());
        worst = worst.min(scaled);
        ok &= report.min_eigenvalue >= -1e-8 * (1.0 + real.norm());
        sizes.push(frags.len());
    }
    Ok((ok, format!("corpus sizes {sizes:?}, min eigenvalue / (1+|M|) = {worst:.2e}")))
}

fn group_invariance() -> Result<(bool, String)> {
    let graphs = corpus()?;
    let worst: Vec<f64> = (0..20u64)
        .into_par_iter()
        .map(|s| -> Result<f64> {
            let mut r = rng(9000 + s);
            let k = r.gen_range(1..=3);
            let terms = r.gen_range(1..=3);
            let h = random_edge_model(&mut r, k, terms);
            let base: Vec<Complex64> = graphs.iter().map(|g| eval_edge(&h, g)).collect::<Result<_>>()?;
            let mut worst = 0.0f64;
            for t in 0..20u64 {
                let l = r.gen_range(k..=4);
                let g = random_complex_orthogonal(l, 0.3, s * 100 + t)?;
                let moved = apply_group(&h, &g, l, 1e-9)?;
                for (graph, &pv) in graphs.iter().zip(&base) {
                    worst = worst.max(rel(eval_edge(&moved, graph)?, pv));
                }
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let max = worst.iter().copied().fold(0.0, f64::max);
    Ok((max <= 1e-7, format!("20 models x 20 g x {} graphs, max relative gap {max:.2e}", graphs.len())))
}

fn random_w(r: &mut ChaCha8Rng, l: usize, n: usize) -> CMatrix {
    CMatrix::from_fn(l, n, |_, _| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
}

fn kempf_ness_suite() -> Result<(bool, String)> {
    // (a) gradient against central differences along every iY direction
    let mut fd_worst = 0.0f64;
    for s in 0..50u64 {
        let mut r = rng(20_000 + s);
        let l = r.gen_range(2..=5);
        let n = r.gen_range(1..=5);
        let p = KnProblem::new(random_w(&mut r, l, n));
        let g = random_complex_orthogonal(l, 0.3, 20_000 + s)?;
        let grad = gradient(&p, &g)?;
        let eps = 1e-5;
        let mut diff = 0.0;
        let mut norm = 0.0;
        for a in 0..l {
            for b in a + 1..l {
                let mut y = RMatrix::zeros(l, l);
                y[(a, b)] = 1.0;
                y[(b, a)] = -1.0;
                let fp = f(&p, &retract(&g, &(&y * eps)))?;
                let fm = f(&p, &retract(&g, &(&y * -eps)))?;
                let fd = (fp - fm) / (2.0 * eps);
                let an = grad.dot(&y);
                diff += (fd - an).powi(2);
                norm += an * an;
            }
        }
        fd_worst = fd_worst.max(diff.sqrt() / norm.sqrt().max(1e-12));
    }
    let ok_a = fd_worst <= 1e-5;

    // (b) W = V·exp(iS) with V real and S real symmetric has WW* = VVᵀ real.
    let mut b_violations = 0;
    let mut b_residual = 0.0f64;
    for s in 0..100u64 {
        let mut r = rng(30_000 + s);
        let l = r.gen_range(1..=4);
        let n = r.gen_range(1..=4);
        let v = RMatrix::from_fn(l, n, |_, _| r.gen_range(-1.0..1.0));
        let sym = real_sym(&mut r, n);
        let unitary = expm(&sym.map(|x| Complex64::new(0.0, x)));
        let p = KnProblem::new(v.map(|x| Complex64::new(x, 0.0)) * unitary);
        b_residual = b_residual.max(critical_residual(&p));
        let fe = f(&p, &CMatrix::identity(l, l))?;
        for t in 0..10u64 {
            let g = random_complex_orthogonal(l, 0.5, 30_000 + s * 10 + t)?;
            if f(&p, &g)? < fe - 1e-9 {
                b_violations += 1;
            }
        }
    }
    let ok_b = b_violations == 0;

    // (c) descent strictly improves on non-critical W
    let mut c_success = 0;
    for s in 0..100u64 {
        let mut r = rng(40_000 + s);
        let l = r.gen_range(2..=4);
        let n = r.gen_range(1..=4);
        let p = loop {
            let p = KnProblem::new(random_w(&mut r, l, n));
            if critical_residual(&p) > 0.1 {
                break p;
            }
        };
        let fe = f(&p, &CMatrix::identity(l, l))?;
        let trace = descend(&p, &CMatrix::identity(l, l), 200, 0.5)?;
        let last = *trace.f_history.last().expect("history has the start");
        if last < fe - 1e-6 && trace.f_history.windows(2).all(|w| w[1] <= w[0]) {
            c_success += 1;
        }
    }
    let ok_c = c_success == 100;

    // (d) planted: a conjugation-closed model moved by a real orthogonal r
    let mut d_success = 0;
    for s in 0..20u64 {
        let mut r = rng(50_000 + s);
        let k = r.gen_range(1..=3);
        let h = real_closed_edge_model(&mut r, k);
        let rot = random_real_orthogonal(k, 1.0, 50_000 + s)?;
        let moved = apply_group(&h, &rot, k, 1e-9)?;
        let opts = SearchOptions {
            budget: 8 * 500,
            restarts: 8,
            seed: s,
            ..SearchOptions::default()
        };
        if find_conjugating_g(&moved, k, opts)?.hit.is_some() {
            d_success += 1;
        }
    }
    let ok_d = d_success >= 18;

    Ok((
        ok_a && ok_b && ok_c && ok_d,
        format!(
            "(a) fd gap {fd_worst:.1e}; (b) {b_violations} violations, residual {b_residual:.1e}; (c) {c_success}/100; (d) {d_success}/20"
        ),
    ))
}

fn twin_reduction() -> Result<(bool, String)> {
    let graphs = corpus()?;
    let results: Vec<(bool, f64)> = (0..100u64)
        .into_par_iter()
        .map(|s| -> Result<(bool, f64)> {
            let mut r = rng(60_000 + s);
            let n0 = r.gen_range(1..=3);
            let base = random_complex_model(&mut r, n0);
            // Append a twin of color c: weight chosen to cancel or not.
            let c = r.gen_range(0..n0);
            let zero_sum = s % 2 == 0;
            let w = if zero_sum {
                -base.weights()[c]
            } else {
                unit_square(&mut r) + Complex64::new(0.2, 0.0)
            };
            let n = n0 + 1;
            let src = |i: usize| if i == n0 { c } else { i };
            let b = CMatrix::from_fn(n, n, |i, j| base.matrix()[(src(i), src(j))]);
            let mut a = base.weights().to_vec();
            a.push(w);
            let m = VertexModel::new(a, b, 1e-9)?;
            let reduced = twin_reduce(&m, 1e-9);
            let mut worst = 0.0f64;
            for g in &graphs {
                worst = worst.max(rel(eval_vertex(&reduced, g, None)?, eval_vertex(&m, g, None)?));
            }
            Ok((is_twin_free(&reduced, 1e-9), worst))
        })
        .collect::<Result<_>>()?;
    let twin_free = results.iter().filter(|r| r.0).count();
    let max = results.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok((
        twin_free == 100 && max <= 1e-8,
        format!("{twin_free}/100 twin-free, max relative gap {max:.2e}"),
    ))
}

fn linear_algebra() -> Result<(bool, String)> {
    let mut residual_fail = 0;
    let mut rank_fail = 0;
    let mut gram_fail = 0;
    let mut reals = 0;
    for s in 0..500u64 {
        let mut r = rng(70_000 + s);
        let n = r.gen_range(1..=6);
        let real = s % 4 == 0;
        let full = r.gen_range(1..=n);
        let deficient = s % 3 == 0;
        let b = if deficient {
            // Rank at most `full`: VᵀV.
            let v = CMatrix::from_fn(full, n, |_, _| {
                if real {
                    Complex64::new(r.gen_range(-1.0..1.0), 0.0)
                } else {
                    Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
                }
            });
            v.transpose() * v
        } else if real {
            real_sym(&mut r, n).map(|x| Complex64::new(x, 0.0))
        } else {
            sym_complex(&mut r, n, |r| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
        };
        let fac = factor_symmetric(&b, 1e-9)?;
        let norm = b.norm();
        if fac.residual(&b) > 1e-9 * (1.0 + norm) {
            residual_fail += 1;
        }
        if rank(&fac.u, 1e-9) != rank(&b, 1e-9) {
            rank_fail += 1;
        }
        if real {
            reals += 1;
            if !is_real_matrix(&fac.gram_conjugate(), 1e-9) {
                gram_fail += 1;
            }
        }
    }
    Ok((
        residual_fail == 0 && rank_fail == 0 && gram_fail == 0,
        format!(
            "500 matrices ({reals} real): {residual_fail} residual, {rank_fail} rank, {gram_fail} UU* failures"
        ),
    ))
}
