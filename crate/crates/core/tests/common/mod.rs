#![allow(dead_code)]

use pcm_efficiency::random::trial_seed;
use pcm_efficiency::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn example_a() -> Pcm {
    pcm::parse_matrix("1,1,4,9\n1,1,7,5\n1/4,1/7,1,4\n1/9,1/5,1/4,1", pcm::MatrixFormat::Csv).unwrap()
}

/// Sizes `lo..=hi`, alternating the two generator modes.
pub fn corpus(count: usize, lo: usize, hi: usize, seed: u64) -> Vec<Pcm> {
    (0..count as u64)
        .map(|k| {
            let n = lo + (k as usize) % (hi - lo + 1);
            let mode = if k % 2 == 0 {
                GeneratorMode::SaatyDiscrete
            } else {
                GeneratorMode::LognormalPerturbedConsistent
            };
            generate(&GeneratorSpec::new(n, mode, trial_seed(seed, k))).unwrap()
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ratios `w_i / w_j` exceed every entry along a random order, so the
/// digraph is an acyclic tournament.
pub fn strongly_inefficient(m: &Pcm, rng: &mut ChaCha8Rng) -> (Weights, Vec<usize>) {
    let n = m.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let spread = m.rows().iter().flatten().map(|a| a.ln().abs()).fold(0.0, f64::max);
    let step = spread + rng.random_range(0.05..1.0);
    let mut w = vec![0.0; n];
    for (rank, &item) in order.iter().enumerate() {
        w[item] = ((n - rank) as f64 * step).exp();
    }
    (Weights::new(w).unwrap(), order)
}

pub fn random_weights(n: usize, rng: &mut ChaCha8Rng) -> Weights {
    Weights::new((0..n).map(|_| rng.random_range(-2.5f64..2.5).exp()).collect()).unwrap()
}

/// Eigenvector with one ratio forced onto its matrix entry, which puts a
/// pair into the equality set.
pub fn tied(m: &Pcm) -> Weights {
    let mut w = principal_eigenvector(m).unwrap().0.into_values();
    w[1] = w[0] / m.get(0, 1);
    Weights::new(w).unwrap()
}

/// Every weight vector family the suites exercise for one matrix.
pub fn weight_family(m: &Pcm, rng: &mut ChaCha8Rng) -> Vec<(&'static str, Weights)> {
    vec![
        ("eigenvector", principal_eigenvector(m).unwrap().0),
        ("geometric_mean", geometric_mean_vector(m)),
        ("random", random_weights(m.n(), rng)),
        ("strongly_inefficient", strongly_inefficient(m, rng).0),
        ("tied", tied(m)),
    ]
}

/// Point `t` of the way from `w` to `d` in log space.
pub fn log_blend(w: &Weights, d: &Weights, t: f64) -> Weights {
    let (v, y) = (w.ln(), d.ln());
    Weights::new(v.iter().zip(&y).map(|(a, b)| (a + t * (b - a)).exp()).collect()).unwrap()
}

/// Dominating vectors of `w` that are not all on one ray: points of the log
/// segment toward the LP dominator, nudged and rescaled at random and kept
/// only when they still dominate.
pub fn dominators_of(m: &Pcm, w: &Weights, d: &Weights, rng: &mut ChaCha8Rng, k: usize) -> Vec<Weights> {
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < k && attempts < 200 {
        attempts += 1;
        let t = rng.random_range(0.05..1.0);
        let base = log_blend(w, d, t);
        let jitter = rng.random_range(0.0..0.02);
        let v: Vec<f64> = base
            .values()
            .iter()
            .map(|x| x * (1.0 + rng.random_range(-jitter..=jitter)))
            .collect();
        let c = rng.random_range(0.1..10.0);
        let cand = Weights::new(v.iter().map(|x| x * c).collect()).unwrap();
        if dominates(m, &cand, w, 0.0).unwrap().dominates {
            out.push(cand);
        }
    }
    out
}
