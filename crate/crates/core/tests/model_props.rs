mod common;

use common::{arb_graph, c, close, complex_model, edge_model, permutation};
use erp_core::graph::{disjoint_union, Multigraph};
use erp_core::linalg::CMatrix;
use erp_core::models::{
    degree_profile, eval_edge, eval_edge_with, eval_vertex, eval_vertex_with, eval_via_profile,
    is_twin_free, oracle_cycle, twin_reduce, Backend, VertexModel,
};
use erp_core::szegedy::materialize;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn backends_agree(g in arb_graph(4, 6), n in 1usize..=3, seed in any::<u64>()) {
        let m = complex_model(n, seed);
        let r = eval_vertex_with(Backend::Reference, &m, &g, None).unwrap();
        let o = eval_vertex_with(Backend::Optimized, &m, &g, None).unwrap();
        prop_assert!(close(o, r, 1e-10));
        let h = edge_model(n, 3, seed);
        let r = eval_edge_with(Backend::Reference, &h, &g).unwrap();
        let o = eval_edge_with(Backend::Optimized, &h, &g).unwrap();
        prop_assert!(close(o, r, 1e-10));
    }

    #[test]
    fn vertex_partition_function_is_multiplicative(
        g in arb_graph(3, 3), h in arb_graph(3, 3), seed in any::<u64>()
    ) {
        let m = complex_model(2, seed);
        let joint = eval_vertex(&m, &disjoint_union(&g, &h), None).unwrap();
        let prod = eval_vertex(&m, &g, None).unwrap() * eval_vertex(&m, &h, None).unwrap();
        prop_assert!(close(joint, prod, 1e-10));
    }

    #[test]
    fn edge_partition_function_is_multiplicative(
        g in arb_graph(3, 3), h in arb_graph(3, 3), seed in any::<u64>()
    ) {
        let m = edge_model(2, 2, seed);
        let joint = eval_edge(&m, &disjoint_union(&g, &h)).unwrap();
        let prod = eval_edge(&m, &g).unwrap() * eval_edge(&m, &h).unwrap();
        prop_assert!(close(joint, prod, 1e-10));
    }

    #[test]
    fn relabeling_preserves_values(g in arb_graph(5, 6), seed in any::<u64>()) {
        let m = complex_model(2, seed);
        let p = permutation(g.vertex_count(), seed ^ 0xabc);
        let h = g.relabel(&p).unwrap();
        prop_assert!(close(eval_vertex(&m, &h, None).unwrap(), eval_vertex(&m, &g, None).unwrap(), 1e-10));
    }

    #[test]
    fn color_permutation_preserves_values(g in arb_graph(4, 5), seed in any::<u64>()) {
        let m = complex_model(3, seed);
        let pm = m.permute(&permutation(3, seed)).unwrap();
        prop_assert!(close(eval_vertex(&pm, &g, None).unwrap(), eval_vertex(&m, &g, None).unwrap(), 1e-10));
    }

    #[test]
    fn table_matches_evaluation_form(g in arb_graph(4, 5), seed in any::<u64>()) {
        let h = edge_model(2, 3, seed);
        let d = g.max_degree();
        let table = materialize(&h, d);
        prop_assert!(close(eval_edge(&table, &g).unwrap(), eval_edge(&h, &g).unwrap(), 1e-10));
        let profile = degree_profile(&g, 2, d).unwrap();
        prop_assert!(close(eval_via_profile(&profile, &table).unwrap(), eval_edge(&h, &g).unwrap(), 1e-10));
    }

    #[test]
    fn twin_reduction_preserves_partition_function(
        g in arb_graph(4, 5), seed in any::<u64>(), cancel in any::<bool>()
    ) {
        let base = complex_model(2, seed);
        let w = if cancel { -base.weights()[0] } else { c(0.7, 0.1) };
        let src = [0usize, 1, 0];
        let b = CMatrix::from_fn(3, 3, |i, j| base.matrix()[(src[i], src[j])]);
        let mut a = base.weights().to_vec();
        a.push(w);
        let m = VertexModel::new(a, b, 1e-9).unwrap();
        let r = twin_reduce(&m, 1e-9);
        prop_assert!(is_twin_free(&r, 1e-9));
        prop_assert_eq!(r.colors(), if cancel { 1 } else { 2 });
        prop_assert!(close(eval_vertex(&r, &g, None).unwrap(), eval_vertex(&m, &g, None).unwrap(), 1e-8));
    }
}

#[test]
fn cycles_match_trace_oracle() {
    for seed in 0..20 {
        let m = complex_model(3, seed);
        for len in 1..=8 {
            let g = Multigraph::cycle(len);
            let value = eval_vertex(&m, &g, None).unwrap();
            assert!(close(value, oracle_cycle(&m, len), 1e-10), "C{len}");
        }
    }
}

#[test]
fn edge_model_circle_value_is_k() {
    let h = edge_model(3, 2, 1);
    assert_eq!(eval_edge(&h, &Multigraph::circle()).unwrap(), c(3.0, 0.0));
}

#[test]
fn proper_coloring_counts_chromatic_polynomial() {
    // P(K_n, q) = q(q-1)...(q-n+1)
    for n in 1..=4 {
        for q in 1..=4usize {
            let value = eval_vertex(&VertexModel::proper_coloring(q), &Multigraph::complete(n), None).unwrap();
            let expected: usize = (0..n).map(|i| q.saturating_sub(i)).product();
            assert_eq!(value, c(expected as f64, 0.0));
        }
    }
}
