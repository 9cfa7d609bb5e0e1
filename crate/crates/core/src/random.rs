//! Seeded random comparison matrices and Monte-Carlo efficiency experiments.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), seeded through
//! `SeedableRng::seed_from_u64`. Both the stream cipher and the seed expansion
//! are fixed algorithms, so a seed names the same matrices on every platform.
//! Trial `k` of an experiment is seeded with `trial_seed(seed, k)`, which makes
//! each trial independent of scheduling and lets trials run in parallel.
//!
//! Neither generator is a canonical distribution for "random" comparison
//! matrices; both are conventions, and summaries say which one was used.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::efficiency::{test_efficiency, Verdict, WeakVerdict};
use crate::error::Error;
use crate::pcm::{principal_eigenvector, PairwiseComparisonMatrix};
use crate::{Result, Scalar};

pub const DEFAULT_SIGMA: f64 = 0.35;

const SAATY_SCALE: [f64; 17] = [
    1.0 / 9.0,
    1.0 / 8.0,
    1.0 / 7.0,
    1.0 / 6.0,
    1.0 / 5.0,
    1.0 / 4.0,
    1.0 / 3.0,
    1.0 / 2.0,
    1.0,
    2.0,
    3.0,
    4.0,
    5.0,
    6.0,
    7.0,
    8.0,
    9.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorMode {
    /// Upper-triangle entries drawn uniformly from `{1/9, ..., 1/2, 1, 2, ..., 9}`.
    SaatyDiscrete,
    /// A consistent matrix from log-uniform weights on `[1, 9]`, each upper
    /// entry multiplied by `exp(N(0, sigma))`.
    LognormalPerturbedConsistent,
}

impl GeneratorMode {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorMode::SaatyDiscrete => "saaty_discrete",
            GeneratorMode::LognormalPerturbedConsistent => "lognormal_perturbed_consistent",
        }
    }
}

impl std::str::FromStr for GeneratorMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "saaty_discrete" | "saaty" => Ok(GeneratorMode::SaatyDiscrete),
            "lognormal_perturbed_consistent" | "lognormal" => {
                Ok(GeneratorMode::LognormalPerturbedConsistent)
            }
            other => Err(format!("unknown generator mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n: usize,
    pub mode: GeneratorMode,
    /// Log-scale noise, used by the lognormal mode only.
    pub sigma: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(n: usize, mode: GeneratorMode, seed: u64) -> Self {
        GeneratorSpec {
            n,
            mode,
            sigma: DEFAULT_SIGMA,
            seed,
        }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    /// Same spec, reseeded for trial `k`.
    pub fn for_trial(&self, k: u64) -> Self {
        GeneratorSpec {
            seed: trial_seed(self.seed, k),
            ..*self
        }
    }

    fn check(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Precondition(format!("n = {} is below 3", self.n)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::Precondition(format!("sigma = {} is not a finite, nonnegative number", self.sigma)));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer applied to `seed + (k + 1) * 0x9e3779b97f4a7c15`.
pub fn trial_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Draws one matrix. Entries are generated above the diagonal and mirrored,
/// so reciprocity holds exactly.
pub fn generate(spec: &GeneratorSpec) -> Result<PairwiseComparisonMatrix<f64>> {
    generate_as(spec)
}

/// [`generate`] at another precision; the draws themselves are made in `f64`.
pub fn generate_as<T: Scalar>(spec: &GeneratorSpec) -> Result<PairwiseComparisonMatrix<T>> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let upper: Vec<f64> = match spec.mode {
        GeneratorMode::SaatyDiscrete => (0..n * (n - 1) / 2)
            .map(|_| SAATY_SCALE[rng.random_range(0..SAATY_SCALE.len())])
            .collect(),
        GeneratorMode::LognormalPerturbedConsistent => {
            let logw: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..9f64.ln())).collect();
            let noise = Normal::new(0.0, spec.sigma).expect("sigma checked");
            let mut out = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    let e = if spec.sigma == 0.0 { 0.0 } else { noise.sample(&mut rng) };
                    out.push((logw[i] - logw[j] + e).exp());
                }
            }
            out
        }
    };
    let mut it = upper.into_iter();
    PairwiseComparisonMatrix::from_upper(n, |_, _| T::lit(it.next().expect("upper triangle")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    Efficient,
    Inefficient,
    StronglyInefficient,
    Conflict,
    Error,
}

impl TrialOutcome {
    pub fn name(self) -> &'static str {
        match self {
            TrialOutcome::Efficient => "efficient",
            TrialOutcome::Inefficient => "inefficient",
            TrialOutcome::StronglyInefficient => "strongly_inefficient",
            TrialOutcome::Conflict => "conflict",
            TrialOutcome::Error => "error",
        }
    }

    pub fn is_inefficient(self) -> bool {
        matches!(self, TrialOutcome::Inefficient | TrialOutcome::StronglyInefficient)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub outcome: TrialOutcome,
    pub lp_optimum: Option<f64>,
    /// Largest residual reduction achieved by the reported dominator.
    pub gap: f64,
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub trials: u64,
    pub n: usize,
    pub mode: GeneratorMode,
    pub sigma: f64,
    pub seed: u64,
    /// Always "convention": no reference distribution exists for random
    /// comparison matrices.
    pub generator_status: &'static str,
    pub generator_algorithm: &'static str,
    pub eigenvector_inefficient_fraction: f64,
    pub eigenvector_strongly_inefficient_fraction: f64,
    /// Mean and maximum over inefficient trials, zero when there are none.
    pub mean_dominance_gap: f64,
    pub max_dominance_gap: f64,
    pub conflicts: u64,
    pub errors: u64,
}

impl ExperimentSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

pub fn run_trial(spec: &GeneratorSpec, k: u64) -> TrialRecord {
    let trial = spec.for_trial(k);
    let record = |outcome, lp_optimum, gap, message| TrialRecord {
        trial: k,
        seed: trial.seed,
        outcome,
        lp_optimum,
        gap,
        message,
    };
    let m = match generate(&trial) {
        Ok(m) => m,
        Err(e) => return record(TrialOutcome::Error, None, 0.0, Some(e.to_string())),
    };
    let result = principal_eigenvector(&m).and_then(|(w, _)| test_efficiency(&m, &w));
    match result {
        Ok(r) => {
            let outcome = match (r.verdict, r.weak_verdict) {
                (Verdict::Efficient, _) => TrialOutcome::Efficient,
                (_, WeakVerdict::StronglyInefficient) => TrialOutcome::StronglyInefficient,
                _ => TrialOutcome::Inefficient,
            };
            record(outcome, Some(r.lp_optimum), r.dominance_gap(), None)
        }
        Err(e @ Error::VerdictConflict { .. }) => {
            let opt = match &e {
                Error::VerdictConflict { lp_optimum, .. } => Some(*lp_optimum),
                _ => None,
            };
            record(TrialOutcome::Conflict, opt, 0.0, Some(e.to_string()))
        }
        Err(e) => record(TrialOutcome::Error, None, 0.0, Some(e.to_string())),
    }
}

/// Runs `trials` independent trials (in parallel) and keeps every record, in
/// trial order.
pub fn run_trials(spec: &GeneratorSpec, trials: u64) -> Result<Vec<TrialRecord>> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    spec.check()?;
    Ok((0..trials).into_par_iter().map(|k| run_trial(spec, k)).collect())
}

pub fn run_experiment(spec: &GeneratorSpec, trials: u64) -> Result<ExperimentSummary> {
    let records = run_trials(spec, trials)?;
    Ok(summarize(spec, &records))
}

/// Aggregates records sequentially in trial order, so the result does not
/// depend on how the trials were scheduled.
pub fn summarize(spec: &GeneratorSpec, records: &[TrialRecord]) -> ExperimentSummary {
    let trials = records.len() as u64;
    let mut inefficient = 0u64;
    let mut strong = 0u64;
    let mut conflicts = 0u64;
    let mut errors = 0u64;
    let mut gap_sum = 0.0;
    let mut gap_max = 0.0f64;
    for r in records {
        match r.outcome {
            TrialOutcome::Conflict => conflicts += 1,
            TrialOutcome::Error => errors += 1,
            TrialOutcome::StronglyInefficient => strong += 1,
            _ => {}
        }
        if r.outcome.is_inefficient() {
            inefficient += 1;
            gap_sum += r.gap;
            gap_max = gap_max.max(r.gap);
        }
    }
    let frac = |c: u64| if trials == 0 { 0.0 } else { c as f64 / trials as f64 };
    ExperimentSummary {
        trials,
        n: spec.n,
        mode: spec.mode,
        sigma: spec.sigma,
        seed: spec.seed,
        generator_status: "convention",
        generator_algorithm: "ChaCha8 seeded by seed_from_u64(splitmix64(seed, trial))",
        eigenvector_inefficient_fraction: frac(inefficient),
        eigenvector_strongly_inefficient_fraction: frac(strong),
        mean_dominance_gap: if inefficient == 0 {
            0.0
        } else {
            gap_sum / inefficient as f64
        },
        max_dominance_gap: gap_max,
        conflicts,
        errors,
    }
}

/// One line per trial: `trial,seed,verdict,lp_optimum,gap`.
pub fn records_to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from("trial,seed,verdict,lp_optimum,gap\n");
    for r in records {
        let opt = r.lp_optimum.map(|v| format!("{v:e}")).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{:e}", r.trial, r.seed, r.outcome.name(), opt, r.gap);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise_is_consistent() {
        for seed in 0..20 {
            let spec = GeneratorSpec::new(6, GeneratorMode::LognormalPerturbedConsistent, seed).with_sigma(0.0);
            assert!(generate(&spec).unwrap().is_consistent(1e-9));
        }
    }

    #[test]
    fn fixed_seed_repeats() {
        let spec = GeneratorSpec::new(4, GeneratorMode::SaatyDiscrete, 42);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = GeneratorSpec::new(4, GeneratorMode::SaatyDiscrete, 43);
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn saaty_entries_on_scale() {
        let m = generate(&GeneratorSpec::new(7, GeneratorMode::SaatyDiscrete, 5)).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                if i != j {
                    assert!(SAATY_SCALE.contains(&m.get(i, j)) || SAATY_SCALE.iter().any(|s| (1.0 / s) == m.get(i, j)));
                }
            }
        }
    }

    #[test]
    fn samples_always_validate() {
        for k in 0..10_000u64 {
            let mode = if k % 2 == 0 {
                GeneratorMode::SaatyDiscrete
            } else {
                GeneratorMode::LognormalPerturbedConsistent
            };
            let spec = GeneratorSpec::new(3 + (k % 6) as usize, mode, trial_seed(7, k));
            let m = generate(&spec).unwrap();
            // revalidate from raw rows at zero reciprocity tolerance
            let again = PairwiseComparisonMatrix::from_rows_with(m.rows(), 1e-15).unwrap();
            assert_eq!(again, m);
        }
    }

    #[test]
    fn bad_specs_are_rejected() {
        assert!(generate(&GeneratorSpec::new(2, GeneratorMode::SaatyDiscrete, 1)).is_err());
        let neg = GeneratorSpec::new(4, GeneratorMode::LognormalPerturbedConsistent, 1).with_sigma(-1.0);
        assert!(generate(&neg).is_err());
        assert!(run_experiment(&GeneratorSpec::new(4, GeneratorMode::SaatyDiscrete, 1), 0).is_err());
    }

    #[test]
    fn consistent_experiment_has_no_inefficiency() {
        let spec = GeneratorSpec::new(5, GeneratorMode::LognormalPerturbedConsistent, 3).with_sigma(0.0);
        let s = run_experiment(&spec, 50).unwrap();
        assert_eq!(s.eigenvector_inefficient_fraction, 0.0);
        assert_eq!(s.conflicts + s.errors, 0);
    }

    #[test]
    fn single_trial_summary() {
        let spec = GeneratorSpec::new(4, GeneratorMode::SaatyDiscrete, 11);
        let records = run_trials(&spec, 1).unwrap();
        let s = summarize(&spec, &records);
        assert_eq!(s.trials, 1);
        let expected = if records[0].outcome.is_inefficient() { 1.0 } else { 0.0 };
        assert_eq!(s.eigenvector_inefficient_fraction, expected);
    }

    #[test]
    fn saaty_four_by_four_shows_inefficiency() {
        let spec = GeneratorSpec::new(4, GeneratorMode::SaatyDiscrete, 2024);
        let a = run_experiment(&spec, 1000).unwrap();
        assert!(a.eigenvector_inefficient_fraction > 0.0);
        assert_eq!(a.conflicts, 0);
        assert_eq!(a, run_experiment(&spec, 1000).unwrap());
    }

    #[test]
    fn csv_has_one_row_per_trial() {
        let spec = GeneratorSpec::new(4, GeneratorMode::SaatyDiscrete, 9);
        let csv = records_to_csv(&run_trials(&spec, 12).unwrap());
        assert_eq!(csv.lines().count(), 13);
        assert!(csv.starts_with("trial,seed,verdict,lp_optimum,gap"));
    }
}
