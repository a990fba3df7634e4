use proptest::prelude::*;

use rigidkit::lq::signed_power;
use rigidkit::moves::{random_move, reduce};
use rigidkit::polytope::{kappa, maximising_facet, polytope_length};
use rigidkit::rng::rng_from_seed;
use rigidkit::suite::random_connected_graph;
use rigidkit::{
    apply_move, generate_tight_graph, is_sparse_bruteforce, is_sparse_pebble, Graph, PolytopeNorm,
    Scheme, SparsityParams,
};

fn graph(n: usize, density: f64, seed: u64) -> Graph {
    random_connected_graph(n, density, &mut rng_from_seed(seed))
}

fn params() -> impl Strategy<Value = SparsityParams> {
    prop_oneof![
        Just((2, 2)),
        Just((2, 3)),
        Just((2, 1)),
        Just((1, 1)),
        Just((3, 3))
    ]
    .prop_map(|(k, l)| SparsityParams::new(k, l).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pebble_game_matches_brute_force(n in 1usize..=9, density in 0.0f64..0.9, seed: u64, p in params()) {
        let g = graph(n, density, seed);
        let pebble = is_sparse_pebble(&g, p);
        let brute = is_sparse_bruteforce(&g, p).unwrap();
        prop_assert_eq!(pebble.is_sparse, brute.is_sparse);
        prop_assert_eq!(pebble.is_tight, brute.is_tight);
    }

    #[test]
    fn sparsity_survives_edge_removal(n in 2usize..=9, density in 0.0f64..0.6, seed: u64, pick: usize) {
        let g = graph(n, density, seed);
        let e = g.edges()[pick % g.edge_count()];
        if let Ok(h) = g.without_edge(e) {
            let p = SparsityParams::TWO_TWO;
            if is_sparse_pebble(&g, p).is_sparse {
                prop_assert!(is_sparse_pebble(&h, p).is_sparse);
            }
            prop_assert!(!is_sparse_pebble(&h, p).is_tight || !is_sparse_pebble(&g, p).is_sparse);
        }
    }

    #[test]
    fn moves_keep_counts_and_tightness(target in 1usize..=8, seed: u64, b: bool, extra: u64) {
        let scheme = if b { Scheme::B } else { Scheme::A };
        let (g, seq) = generate_tight_graph(target, scheme, seed);
        prop_assert!(seq.uses_only(scheme));
        let m = random_move(&g, scheme, &mut rng_from_seed(extra));
        let h = apply_move(&g, &m).unwrap();
        prop_assert_eq!(h.vertex_count(), g.vertex_count() + m.vertex_delta());
        prop_assert_eq!(h.edge_count(), g.edge_count() + 2 * m.vertex_delta());
        prop_assert!(is_sparse_pebble(&h, SparsityParams::TWO_TWO).is_tight);
    }

    #[test]
    fn reductions_replay(target in 1usize..=9, seed: u64, b: bool) {
        let scheme = if b { Scheme::B } else { Scheme::A };
        let (g, _) = generate_tight_graph(target, scheme, seed);
        let r = reduce(&g, Some(scheme)).unwrap();
        prop_assert!(r.sequence.uses_only(scheme));
        prop_assert_eq!(r.sequence.replay().unwrap(), g.relabel(&r.relabelling));
    }

    #[test]
    fn kappa_recovers_the_norm(a in prop::collection::vec(-5.0f64..5.0, 2), facets in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 2), 2..5)) {
        let Ok(p) = PolytopeNorm::new(facets) else { return Ok(()); };
        if maximising_facet(&a, &p).is_some() {
            let k = kappa(&a, &p);
            let dot: f64 = k.iter().zip(&a).map(|(x, y)| x * y).sum();
            prop_assert!((dot.abs() - polytope_length(&a, &p)).abs() <= 1e-12 * (1.0 + dot.abs()));
            let scaled: Vec<f64> = a.iter().map(|x| -3.0 * x).collect();
            prop_assert_eq!(maximising_facet(&scaled, &p), maximising_facet(&a, &p));
        }
    }

    #[test]
    fn signed_power_euler_identity(a in prop::collection::vec(-3.0f64..3.0, 1..4), q in 1.1f64..8.0) {
        let s = signed_power(&a, q - 1.0);
        let lhs: f64 = s.iter().zip(&a).map(|(x, y)| x * y).sum();
        let rhs: f64 = a.iter().map(|x| x.abs().powf(q)).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }
}
