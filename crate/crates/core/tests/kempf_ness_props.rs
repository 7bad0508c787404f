mod common;

use common::{c, edge_model};
use erp_core::kempf_ness::{
    critical_residual, descend, f, find_conjugating_g, gradient, KnProblem, SearchOptions,
};
use erp_core::linalg::{random_complex_orthogonal, random_real_orthogonal, CMatrix};
use erp_core::models::{eval_edge, EdgeModelEval, EvalTerm};
use erp_core::graph::enumerate_graphs;
use erp_core::szegedy::{apply_group, is_real_edge_model};
use proptest::prelude::*;

fn closed_model(seed: u64) -> EdgeModelEval {
    let h = edge_model(2, 1, seed);
    let t = h.terms()[0].clone();
    let conj = EvalTerm {
        weight: t.weight.conj(),
        point: t.point.iter().map(|z| z.conj()).collect(),
    };
    let real = EvalTerm {
        weight: c(0.8, 0.0),
        point: vec![c(0.3, 0.0), c(-0.9, 0.0)],
    };
    EdgeModelEval::new(2, vec![t, conj, real]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn real_left_translation_invariance(seed in any::<u64>()) {
        let p = KnProblem::from_edge_model(&edge_model(3, 3, seed), 3).unwrap();
        let g = random_complex_orthogonal(3, 0.4, seed).unwrap();
        let r = random_real_orthogonal(3, 1.0, seed ^ 1).unwrap();
        let a = f(&p, &g).unwrap();
        prop_assert!((f(&p, &(r * &g)).unwrap() - a).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn gradient_vanishes_iff_gram_is_real(seed in any::<u64>()) {
        let h = closed_model(seed);
        let p = KnProblem::from_edge_model(&h, 2).unwrap();
        // Conjugation closure makes WW* real.
        prop_assert!(critical_residual(&p) <= 1e-12);
        prop_assert!(gradient(&p, &CMatrix::identity(2, 2)).unwrap().norm() <= 1e-12);
        let g = random_complex_orthogonal(2, 0.5, seed).unwrap();
        let moved = KnProblem::new(g * p.w());
        prop_assert!(critical_residual(&moved) > 1e-6);
    }

    #[test]
    fn descent_is_monotone(seed in any::<u64>()) {
        let h = edge_model(3, 4, seed);
        let p = KnProblem::from_edge_model(&h, 3).unwrap();
        let g0 = random_complex_orthogonal(3, 0.3, seed).unwrap();
        let trace = descend(&p, &g0, 100, 0.5).unwrap();
        prop_assert!(trace.f_history.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(trace.point.orthogonality_residual <= 1e-8);
    }

    #[test]
    fn search_recovers_planted_complex_rotation(seed in any::<u64>(), extra in 0usize..=1) {
        let h = closed_model(seed);
        let l = 2 + extra;
        let g0 = random_complex_orthogonal(l, 0.4, seed).unwrap();
        let moved = apply_group(&h, &g0, l, 1e-9).unwrap();
        let opts = SearchOptions { seed, ..SearchOptions::default() };
        let report = find_conjugating_g(&moved, l, opts).unwrap();
        let hit = report.hit.expect("planted instance");
        prop_assert!(is_real_edge_model(&hit.model, 1e-8).unwrap().is_real());
        for g in enumerate_graphs(3, 3).unwrap() {
            let a = eval_edge(&hit.model, &g).unwrap();
            let b = eval_edge(&h, &g).unwrap();
            prop_assert!((a - b).norm() <= 1e-7 * (1.0 + b.norm()));
        }
    }
}

#[test]
fn search_is_deterministic() {
    let h = closed_model(3);
    let g0 = random_complex_orthogonal(3, 0.4, 3).unwrap();
    let moved = apply_group(&h, &g0, 3, 1e-9).unwrap();
    let opts = SearchOptions { seed: 11, ..SearchOptions::default() };
    assert_eq!(find_conjugating_g(&moved, 3, opts).unwrap(), find_conjugating_g(&moved, 3, opts).unwrap());
}
