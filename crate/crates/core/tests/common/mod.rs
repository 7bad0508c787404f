#![allow(dead_code)]

use erp_core::graph::Multigraph;
use erp_core::linalg::CMatrix;
use erp_core::models::{EdgeModelEval, EvalTerm, VertexModel};
use erp_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

/// Multigraphs with loops and parallel edges, up to `max_v` vertices and `max_e` edges.
pub fn arb_graph(max_v: usize, max_e: usize) -> impl Strategy<Value = Multigraph> {
    (1..=max_v).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_e)
            .prop_map(move |edges| Multigraph::new(n, edges, 0).expect("in range"))
    })
}

/// A random permutation of `0..n` from a seed.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, r.gen_range(0..=i));
    }
    p
}

pub fn complex_model(n: usize, seed: u64) -> VertexModel {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let a = (0..n)
        .map(|_| c(r.gen_range(0.2..1.0), r.gen_range(-1.0..1.0)))
        .collect();
    let mut b = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z = c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            b[(i, j)] = z;
            b[(j, i)] = z;
        }
    }
    VertexModel::new(a, b, 1e-9).expect("valid")
}

pub fn real_model(n: usize, seed: u64) -> VertexModel {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..n).map(|_| r.gen_range(0.2..1.5)).collect();
    let mut b = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z = c(r.gen_range(-1.0..1.0), 0.0);
            b[(i, j)] = z;
            b[(j, i)] = z;
        }
    }
    VertexModel::new(a.into_iter().map(|x| c(x, 0.0)).collect(), b, 1e-9).expect("valid")
}

pub fn edge_model(k: usize, terms: usize, seed: u64) -> EdgeModelEval {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let terms = (0..terms)
        .map(|_| EvalTerm {
            weight: c(r.gen_range(0.2..1.0), r.gen_range(-1.0..1.0)),
            point: (0..k)
                .map(|_| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
                .collect(),
        })
        .collect();
    EdgeModelEval::new(k, terms).expect("valid")
}

/// Reflection positive real model: `B = XᵀX − YᵀY` where paired colors
/// share `x` and have opposite `y`.
pub fn planted_erp_model(seed: u64) -> VertexModel {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let n = r.gen_range(2..=4);
    let pairs = r.gen_range(1..=n / 2);
    let partner = |i: usize| if i < 2 * pairs { i ^ 1 } else { i };
    let p = r.gen_range(1..=3);
    let mut a = vec![0.0; n];
    let mut x = vec![vec![0.0; n]; p];
    let mut y = vec![0.0; n];
    for i in 0..n {
        let j = partner(i);
        if j < i {
            continue;
        }
        let w = r.gen_range(0.2..1.5);
        a[i] = w;
        a[j] = w;
        for row in x.iter_mut() {
            let v = r.gen_range(-1.0..1.0);
            row[i] = v;
            row[j] = v;
        }
        if j != i {
            let v = r.gen_range(0.3..1.0);
            y[i] = v;
            y[j] = -v;
        }
    }
    let b = CMatrix::from_fn(n, n, |i, j| {
        let s: f64 = x.iter().map(|row| row[i] * row[j]).sum();
        c(s - y[i] * y[j], 0.0)
    });
    VertexModel::new(a.into_iter().map(|v| c(v, 0.0)).collect(), b, 1e-9).expect("valid")
}
