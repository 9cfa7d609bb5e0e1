mod common;

use common::*;
use pcm_efficiency::*;

const TAU: f64 = 1e-9;
const CUT: f64 = 1e-7;

#[test]
fn lp_optima_match_graph_characterizations() {
    let mut rng = rng(1);
    let mut seen = [0usize; 3];
    for m in corpus(150, 3, 7, 101) {
        for (label, w) in weight_family(&m, &mut rng) {
            let r = test_efficiency(&m, &w).unwrap_or_else(|e| panic!("{label}: {e}"));
            assert!(r.lp_optimum <= CUT);
            assert_eq!(r.lp_optimum.abs() <= CUT, r.graph_verdict.strongly_connected, "{label}");
            if let Some(o) = r.weak_lp_optimum {
                assert!(o <= CUT);
                assert_eq!(o < -CUT, r.graph_verdict.acyclic_tournament, "{label}");
            }
            assert_eq!(r.is_strongly_inefficient(), r.graph_verdict.acyclic_tournament);
            seen[match (r.is_efficient(), r.is_strongly_inefficient()) {
                (true, _) => 0,
                (false, false) => 1,
                (false, true) => 2,
            }] += 1;
        }
    }
    // the corpus reaches all three outcomes
    assert!(seen.iter().all(|&c| c > 20), "{seen:?}");
}

#[test]
fn eigenvector_is_never_strongly_inefficient() {
    for m in corpus(200, 3, 8, 202) {
        let (w, _) = principal_eigenvector(&m).unwrap();
        let r = test_weak_efficiency(&m, &w).unwrap();
        assert_eq!(r.weak_verdict, WeakVerdict::WeaklyEfficient);
    }
}

#[test]
fn geometric_mean_is_efficient() {
    for m in corpus(200, 3, 8, 303) {
        let r = test_efficiency(&m, &geometric_mean_vector(&m)).unwrap();
        assert!(r.is_efficient());
    }
}

#[test]
fn extracted_dominators_are_sound() {
    let mut rng = rng(4);
    for m in corpus(120, 3, 7, 404) {
        for (label, w) in weight_family(&m, &mut rng) {
            let r = test_efficiency(&m, &w).unwrap();
            let Some(d) = &r.dominator else {
                assert!(r.is_efficient(), "{label}");
                continue;
            };
            let rel = dominates(&m, d, &w, TAU).unwrap();
            assert!(rel.internal && rel.dominates, "{label}: {rel:?}");
            assert!(test_efficiency(&m, d).unwrap().is_efficient(), "{label}");

            if r.is_strongly_inefficient() {
                let s = test_weak_efficiency(&m, &w).unwrap();
                let d = s.dominator.as_ref().unwrap();
                let rel = dominates(&m, d, &w, TAU).unwrap();
                assert_eq!(rel.kind, DominanceKind::DominatesStrongly, "{label}");
                assert!(test_efficiency(&m, d).unwrap().is_efficient());
            }
        }
    }
}

#[test]
fn constructive_dominator_improves_every_entry() {
    let mut rng = rng(5);
    for m in corpus(200, 3, 8, 505) {
        let (w, order) = strongly_inefficient(&m, &mut rng);
        let d = acyclic_dominator(&m, &w, &order).unwrap();
        let (old, new) = (residuals(&m, &w).unwrap(), residuals(&m, &d).unwrap());
        for i in 0..m.n() {
            for j in 0..m.n() {
                if i != j {
                    assert!(new.get(i, j) < old.get(i, j), "({i},{j})");
                }
            }
        }
        // no slack is wasted: some pair along the path lands on its entry
        let tight = (0..m.n()).any(|k| {
            (k + 1..m.n()).any(|l| {
                let (a, b) = (order[k], order[l]);
                (d.values()[a] / d.values()[b] / m.get(a, b) - 1.0).abs() < 1e-12
            })
        });
        assert!(tight);
    }
}

#[test]
fn verdicts_ignore_scale() {
    let mut rng = rng(6);
    for m in corpus(80, 3, 7, 606) {
        for (label, w) in weight_family(&m, &mut rng) {
            let base = test_efficiency(&m, &w).unwrap();
            for c in [1e-3, 1e3] {
                let r = test_efficiency(&m, &w.scaled(c).unwrap()).unwrap();
                assert_eq!(r.verdict, base.verdict, "{label}");
                assert_eq!(r.weak_verdict, base.weak_verdict, "{label}");
                match (&r.dominator, &base.dominator) {
                    (Some(a), Some(b)) => {
                        for (x, y) in a.values().iter().zip(b.values()) {
                            assert!((x - y).abs() < 1e-9, "{label}: {x} vs {y}");
                        }
                    }
                    (None, None) => {}
                    _ => panic!("{label}: dominator presence changed with scale"),
                }
            }
        }
    }
}

#[test]
fn dominance_is_transitive_and_convex() {
    let mut rng = rng(7);
    let mut triples = 0;
    for m in corpus(300, 3, 6, 707) {
        let w = random_weights(m.n(), &mut rng);
        let r = test_efficiency(&m, &w).unwrap();
        let Some(d) = r.dominator else { continue };
        let doms = dominators_of(&m, &w, &d, &mut rng, 2);
        if doms.len() < 2 {
            continue;
        }
        let (p, q) = (&doms[0], &doms[1]);
        let mid = Weights::new(p.values().iter().zip(q.values()).map(|(a, b)| (a + b) / 2.0).collect()).unwrap();
        assert!(dominates(&m, &mid, &w, TAU).unwrap().dominates);

        // chain: something dominating p also dominates w
        for a in dominators_of(&m, p, &d, &mut rng, 1) {
            assert!(dominates(&m, &a, &w, TAU).unwrap().dominates);
        }
        triples += 1;
    }
    assert!(triples >= 100, "only {triples} triples");
}

#[test]
fn single_precision_agrees_on_clear_cases() {
    let mut rng = rng(8);
    for m in corpus(60, 3, 6, 808) {
        let m32 = pcm::PairwiseComparisonMatrix::<f32>::from_upper(m.n(), |i, j| m.get(i, j) as f32).unwrap();
        let w = random_weights(m.n(), &mut rng);
        let r64 = test_efficiency(&m, &w).unwrap();
        if r64.lp_optimum.abs() < 1e-3 && !r64.is_efficient() {
            continue;
        }
        let w32 = pcm::WeightVector::new(w.values().iter().map(|&x| x as f32).collect()).unwrap();
        let r32 = test_efficiency(&m32, &w32).unwrap();
        assert_eq!(r32.verdict, r64.verdict);
    }
}
