use pcm_efficiency::digraph::build_digraph;
use pcm_efficiency::pcm::principal_eigenvector_from;
use pcm_efficiency::*;
use proptest::prelude::*;

fn matrix(max_n: usize) -> impl Strategy<Value = Pcm> {
    (3..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-2.2f64..2.2, n * (n - 1) / 2).prop_map(move |logs| {
            let mut it = logs.into_iter();
            Pcm::from_upper(n, |_, _| it.next().unwrap().exp()).unwrap()
        })
    })
}

fn with_weights(max_n: usize) -> impl Strategy<Value = (Pcm, Weights)> {
    matrix(max_n).prop_flat_map(|m| {
        let n = m.n();
        prop::collection::vec(-2.5f64..2.5, n).prop_map(move |logs| {
            let w = Weights::new(logs.iter().map(|v| v.exp()).collect()).unwrap();
            (m.clone(), w)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ratio_matrix_is_reciprocal(logs in prop::collection::vec(-4.0f64..4.0, 3..9)) {
        let w = Weights::new(logs.iter().map(|v| v.exp()).collect()).unwrap();
        let r = ratio_matrix(&w);
        for i in 0..r.n() {
            prop_assert_eq!(r.get(i, i), 1.0);
            for j in 0..r.n() {
                prop_assert!((r.get(i, j) * r.get(j, i) - 1.0).abs() < 1e-12);
            }
        }
        prop_assert!(r.is_consistent(1e-9));
    }

    #[test]
    fn perron_value_at_least_n(m in matrix(8)) {
        let (_, lambda) = principal_eigenvector(&m).unwrap();
        prop_assert!(lambda >= m.n() as f64 - 1e-9);
    }

    #[test]
    fn eigenvector_ignores_start(m in matrix(7), start in prop::collection::vec(0.05f64..5.0, 7)) {
        let n = m.n();
        let tol = Tol::default();
        let from_gm = principal_eigenvector(&m).unwrap().0;
        let (other, _) = principal_eigenvector_from(&m, &start[..n], &tol).unwrap();
        for (a, b) in from_gm.values().iter().zip(other.values()) {
            prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
        }
    }

    #[test]
    fn residuals_ignore_scale((m, w) in with_weights(7), c in prop::sample::select(vec![1e-3, 0.5, 7.0, 1e3])) {
        let a = residuals(&m, &w).unwrap();
        let b = residuals(&m, &w.scaled(c).unwrap()).unwrap();
        for i in 0..m.n() {
            for j in 0..m.n() {
                prop_assert!((a.get(i, j) - b.get(i, j)).abs() <= 1e-9 * (1.0 + a.get(i, j)));
            }
        }
    }

    #[test]
    fn geometric_mean_reproduces_consistent(logs in prop::collection::vec(-3.0f64..3.0, 3..9)) {
        let w = Weights::new(logs.iter().map(|v| v.exp()).collect()).unwrap().sum_one();
        let g = geometric_mean_vector(&ratio_matrix(&w));
        for (a, b) in g.values().iter().zip(w.values()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn digraph_ignores_scale((m, w) in with_weights(7), c in prop::sample::select(vec![1e-3, 1e3])) {
        let g1 = build_digraph(&m, &w, 1e-9).unwrap();
        let g2 = build_digraph(&m, &w.scaled(c).unwrap(), 1e-9).unwrap();
        prop_assert_eq!(g1.arcs(), g2.arcs());
    }

    #[test]
    fn components_partition_vertices((m, w) in with_weights(9)) {
        let g = build_digraph(&m, &w, 1e-9).unwrap();
        let parts = g.strongly_connected_components();
        let mut seen: Vec<usize> = parts.iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..m.n()).collect::<Vec<_>>());
        prop_assert!(parts.iter().all(|p| !p.is_empty()));
        // every pair gets at least one arc, so the digraph is semicomplete
        for i in 0..m.n() {
            for j in i + 1..m.n() {
                prop_assert!(g.has_arc(i, j) || g.has_arc(j, i));
            }
        }
    }

    #[test]
    fn lp_and_graph_agree((m, w) in with_weights(6)) {
        let r = test_efficiency(&m, &w).unwrap();
        prop_assert_eq!(r.is_efficient(), r.graph_verdict.strongly_connected);
        prop_assert_eq!(r.is_strongly_inefficient(), r.graph_verdict.acyclic_tournament);
        prop_assert!(r.lp_optimum <= 1e-7);
    }
}
