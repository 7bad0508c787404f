//! Variable elimination over dense factors with a shared domain size.
//!
//! Used by the optimized backends: vertex models eliminate vertex colors,
//! edge models eliminate edge colors.

use num_complex::Complex64;

/// A table over `vars` (ascending), row-major with the last variable fastest.
#[derive(Clone, Debug)]
pub(crate) struct Factor {
    pub vars: Vec<usize>,
    pub table: Vec<Complex64>,
}

impl Factor {
    #[cfg(test)]
    pub fn scalar(value: Complex64) -> Self {
        Factor {
            vars: Vec::new(),
            table: vec![value],
        }
    }
}

/// Sum over all assignments `[q]^num_vars` of the product of all factors.
pub(crate) fn contract(num_vars: usize, q: usize, mut factors: Vec<Factor>) -> Complex64 {
    if num_vars > 0 && q == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut scale = Complex64::new(1.0, 0.0);
    let mut alive = vec![true; num_vars];
    for _ in 0..num_vars {
        // Greedy: eliminate the variable whose neighborhood is smallest.
        let mut best: Option<(usize, usize)> = None;
        for v in (0..num_vars).filter(|&v| alive[v]) {
            let mut scope: Vec<usize> = factors
                .iter()
                .filter(|f| f.vars.binary_search(&v).is_ok())
                .flat_map(|f| f.vars.iter().copied())
                .collect();
            scope.sort_unstable();
            scope.dedup();
            let cost = scope.len();
            if best.is_none_or(|(_, c)| cost < c) {
                best = Some((v, cost));
            }
        }
        let (v, _) = best.expect("a live variable");
        alive[v] = false;

        let (touching, rest): (Vec<Factor>, Vec<Factor>) = factors
            .into_iter()
            .partition(|f| f.vars.binary_search(&v).is_ok());
        factors = rest;
        if touching.is_empty() {
            scale *= q as f64;
            continue;
        }
        factors.push(eliminate(v, q, &touching));
    }
    factors
        .iter()
        .map(|f| {
            debug_assert!(f.vars.is_empty());
            f.table[0]
        })
        .fold(scale, |acc, x| acc * x)
}

/// Multiplies `factors` and sums out `v`.
fn eliminate(v: usize, q: usize, factors: &[Factor]) -> Factor {
    let mut union: Vec<usize> = factors.iter().flat_map(|f| f.vars.iter().copied()).collect();
    union.sort_unstable();
    union.dedup();
    let vpos = union.binary_search(&v).expect("v in union");
    let out_vars: Vec<usize> = union.iter().copied().filter(|&x| x != v).collect();
    let width = union.len();

    // Stride of each union position inside each factor's table.
    let strides: Vec<Vec<usize>> = factors
        .iter()
        .map(|f| {
            let mut s = vec![0usize; width];
            let mut stride = 1;
            for &x in f.vars.iter().rev() {
                let p = union.binary_search(&x).expect("factor var in union");
                s[p] = stride;
                stride *= q;
            }
            s
        })
        .collect();
    let out_strides: Vec<usize> = {
        let mut s = vec![0usize; width];
        let mut stride = 1;
        for p in (0..width).rev() {
            if p != vpos {
                s[p] = stride;
                stride *= q;
            }
        }
        s
    };
    let out_len = q.pow(out_vars.len() as u32);
    let mut out = vec![Complex64::new(0.0, 0.0); out_len];

    let mut assign = vec![0usize; width];
    let mut idx = vec![0usize; factors.len()];
    let mut out_idx = 0usize;
    loop {
        let mut prod = Complex64::new(1.0, 0.0);
        for (f, &i) in factors.iter().zip(&idx) {
            prod *= f.table[i];
        }
        out[out_idx] += prod;

        // Odometer step, last position fastest.
        let mut p = width;
        loop {
            if p == 0 {
                return Factor {
                    vars: out_vars,
                    table: out,
                };
            }
            p -= 1;
            assign[p] += 1;
            for (k, s) in strides.iter().enumerate() {
                idx[k] += s[p];
            }
            out_idx += out_strides[p];
            if assign[p] < q {
                break;
            }
            for (k, s) in strides.iter().enumerate() {
                idx[k] -= s[p] * q;
            }
            out_idx -= out_strides[p] * q;
            assign[p] = 0;
        }
    }
}
