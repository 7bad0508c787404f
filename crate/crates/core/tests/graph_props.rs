mod common;

use common::{arb_graph, permutation};
use erp_core::graph::{
    canonical_key, enumerate_fragments, fragment_key, glue, CorpusBounds, Fragment, Multigraph,
};
use erp_core::Error;
use proptest::prelude::*;

fn fragments(l: usize) -> Vec<Fragment> {
    enumerate_fragments(l, CorpusBounds::new(2, 4).with_bare_edges(true)).unwrap()
}

#[test]
fn glue_is_symmetric_up_to_isomorphism() {
    for l in 0..=2 {
        let fs = fragments(l);
        for f in fs.iter().step_by(3) {
            for h in fs.iter().step_by(5) {
                let fh = glue(f, h).unwrap();
                let hf = glue(h, f).unwrap();
                assert_eq!(canonical_key(&fh).unwrap(), canonical_key(&hf).unwrap());
            }
        }
    }
}

#[test]
fn glue_conserves_edges() {
    for l in 1..=3 {
        let fs = fragments(l);
        for f in fs.iter().step_by(2) {
            for h in fs.iter().step_by(3) {
                let g = glue(f, h).unwrap();
                let e = f.graph().edge_count() + h.graph().edge_count() - l;
                assert_eq!(g.edge_count(), e, "{f:?} * {h:?}");
                assert_eq!(
                    g.vertex_count(),
                    f.internal_count() + h.internal_count()
                );
            }
        }
    }
}

#[test]
fn circle_free_corpora_never_make_circles() {
    for l in 1..=3 {
        let fs = enumerate_fragments(l, CorpusBounds::new(2, 4)).unwrap();
        for f in &fs {
            for h in &fs {
                assert_eq!(glue(f, h).unwrap().circles(), 0);
            }
        }
    }
}

#[test]
fn bare_edges_make_circles() {
    let g = glue(&Fragment::bare_edge(), &Fragment::bare_edge()).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count(), g.circles()), (0, 0, 1));
}

#[test]
fn enumeration_is_duplicate_free_and_sorted() {
    for l in 0..=2 {
        let fs = fragments(l);
        let keys: Vec<_> = fs.iter().map(|f| fragment_key(f).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn canonical_key_size_limit() {
    let g = Multigraph::new(9, vec![], 0).unwrap();
    assert!(matches!(canonical_key(&g), Err(Error::TooLarge(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_key_invariant_under_relabeling(g in arb_graph(5, 6), seed in any::<u64>()) {
        let key = canonical_key(&g).unwrap();
        for t in 0..100u64 {
            let p = permutation(g.vertex_count(), seed.wrapping_add(t));
            prop_assert_eq!(&canonical_key(&g.relabel(&p).unwrap()).unwrap(), &key);
        }
    }

    #[test]
    fn fragment_key_invariant_under_internal_relabeling(idx in 0usize..200, seed in any::<u64>()) {
        let fs = fragments(2);
        let f = &fs[idx % fs.len()];
        let key = fragment_key(f).unwrap();
        let p = permutation(f.internal_count(), seed);
        prop_assert_eq!(fragment_key(&f.relabel_internal(&p).unwrap()).unwrap(), key);
    }
}
