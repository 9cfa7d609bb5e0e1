//! Efficiency and weak-efficiency tests with dominating-vector extraction.
//!
//! Every test runs both the digraph characterization and the matching linear
//! program and refuses to answer (with [`Error::VerdictConflict`]) when they
//! disagree. Dominating vectors taken from an LP are re-checked before they
//! are reported: their own digraph must be strongly connected and they must
//! dominate the input in the expected sense.

mod dominance;
mod programs;

use serde::Serialize;

use crate::digraph::{build_digraph, strongly_connected, GraphVerdict};
use crate::error::Error;
use crate::lp::{solve_with, LpStatus};
use crate::pcm::{PairwiseComparisonMatrix, WeightVector};
use crate::{Result, Scalar, Tolerances};

pub use dominance::{
    acyclic_dominator, dominates, improvement_rows, CertificateRow, DominanceKind,
    DominanceRelation,
};
pub use programs::{build_efficiency_lp, build_weak_lp, index_sets, IndexSets};

pub const REPORT_SCHEMA: &str = "report_v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Efficient,
    Inefficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeakVerdict {
    WeaklyEfficient,
    StronglyInefficient,
}

/// How one of the two programs was handled.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
#[serde(bound = "T: Scalar")]
pub enum LpRun<T> {
    /// Not needed: the answer followed from the index sets or the other test.
    Skipped { reason: String },
    Solved { optimum: T, iterations: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Provenance<T> {
    pub digraph: bool,
    pub efficiency_lp: LpRun<T>,
    pub weak_lp: LpRun<T>,
    /// `efficiency_lp`, `weak_lp`, or `weak_lp+efficiency_lp` when the strict
    /// dominator was itself inefficient and got replaced.
    pub dominator_source: Option<String>,
    /// Strictly dominating, weakly efficient vector from the weak program,
    /// kept when it was passed on to the efficiency program.
    pub weak_intermediate: Option<WeightVector<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct EfficiencyReport<T> {
    pub schema: &'static str,
    pub n: usize,
    /// Input vector, sum-one normalized.
    pub weights: WeightVector<T>,
    pub verdict: Verdict,
    pub weak_verdict: WeakVerdict,
    /// Optimum of the efficiency program, `0` when it was skipped.
    pub lp_optimum: T,
    pub weak_lp_optimum: Option<T>,
    pub index_sets: IndexSets,
    pub graph_verdict: GraphVerdict,
    pub dominator: Option<WeightVector<T>>,
    /// `dominator` rescaled to agree with `weights` on the item at the lower
    /// median of `weights / dominator`, so weights the dominator leaves alone
    /// read the same as in the input.
    pub dominator_aligned: Option<WeightVector<T>>,
    pub dominance: Option<DominanceRelation>,
    pub dominance_certificate: Vec<CertificateRow<T>>,
    /// Pairs whose arc decision fell within ten band widths of the threshold.
    pub near_threshold: Vec<(usize, usize)>,
    pub digraph_dot: String,
    pub provenance: Provenance<T>,
}

impl<T: Scalar> EfficiencyReport<T> {
    pub fn is_efficient(&self) -> bool {
        self.verdict == Verdict::Efficient
    }

    pub fn is_strongly_inefficient(&self) -> bool {
        self.weak_verdict == WeakVerdict::StronglyInefficient
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Largest residual reduction achieved by the dominator, zero without one.
    pub fn dominance_gap(&self) -> T {
        self.dominance_certificate
            .iter()
            .map(|r| r.old_residual - r.new_residual)
            .fold(T::zero(), T::max)
    }
}

struct EfficiencyOutcome<T> {
    efficient: bool,
    optimum: T,
    run: LpRun<T>,
    dominator: Option<WeightVector<T>>,
}

struct WeakOutcome<T> {
    weakly_efficient: bool,
    optimum: Option<T>,
    run: LpRun<T>,
    dominator: Option<WeightVector<T>>,
}

fn efficiency_core<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    sets: &IndexSets,
    graph: &GraphVerdict,
    tol: &Tolerances<T>,
) -> Result<EfficiencyOutcome<T>> {
    let outcome = match build_efficiency_lp(m, w, sets) {
        Err(Error::ConsistentInput) => EfficiencyOutcome {
            efficient: true,
            optimum: T::zero(),
            run: LpRun::Skipped {
                reason: "index set I is empty".into(),
            },
            dominator: None,
        },
        Err(e) => return Err(e),
        Ok(p) => {
            let sol = solve_with(&p, tol)?;
            if sol.status != LpStatus::Optimal {
                return Err(Error::Numerical(format!(
                    "efficiency program reported {:?}",
                    sol.status
                )));
            }
            let optimum = sol.optimum.expect("optimal solution has a value");
            let efficient = optimum >= -tol.optimum_cut;
            let dominator = if efficient {
                None
            } else {
                Some(WeightVector::from_log(&sol.assignment[..m.n()])?)
            };
            EfficiencyOutcome {
                efficient,
                optimum,
                run: LpRun::Solved {
                    optimum,
                    iterations: sol.iterations,
                },
                dominator,
            }
        }
    };
    if outcome.optimum > tol.optimum_cut {
        return Err(Error::Numerical(format!(
            "efficiency optimum {} is positive",
            outcome.optimum
        )));
    }
    if outcome.efficient != graph.strongly_connected {
        return Err(Error::VerdictConflict {
            test: "efficiency",
            lp_optimum: outcome.optimum.as_f64(),
            graph_says: if graph.strongly_connected {
                "strongly connected (efficient)".into()
            } else {
                format!("not strongly connected, components {:?}", graph.scc_partition)
            },
        });
    }
    Ok(outcome)
}

fn weak_core<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    sets: &IndexSets,
    graph: &GraphVerdict,
    tol: &Tolerances<T>,
) -> Result<WeakOutcome<T>> {
    let outcome = match build_weak_lp(m, w, sets) {
        Err(Error::EqualityWitness { i, j }) => WeakOutcome {
            weakly_efficient: true,
            optimum: None,
            run: LpRun::Skipped {
                reason: format!("items {} and {} match their entry", i + 1, j + 1),
            },
            dominator: None,
        },
        Err(e) => return Err(e),
        Ok(p) => {
            let sol = solve_with(&p, tol)?;
            if sol.status != LpStatus::Optimal {
                return Err(Error::Numerical(format!(
                    "weak efficiency program reported {:?}",
                    sol.status
                )));
            }
            let optimum = sol.optimum.expect("optimal solution has a value");
            let weakly_efficient = optimum >= -tol.optimum_cut;
            let dominator = if weakly_efficient {
                None
            } else {
                Some(WeightVector::from_log(&sol.assignment[..m.n()])?)
            };
            WeakOutcome {
                weakly_efficient,
                optimum: Some(optimum),
                run: LpRun::Solved {
                    optimum,
                    iterations: sol.iterations,
                },
                dominator,
            }
        }
    };
    if outcome.weakly_efficient == graph.acyclic_tournament {
        return Err(Error::VerdictConflict {
            test: "weak efficiency",
            lp_optimum: outcome.optimum.map_or(0.0, |v| v.as_f64()),
            graph_says: if graph.acyclic_tournament {
                "acyclic tournament (strongly inefficient)".into()
            } else {
                "contains a cycle or a tie (weakly efficient)".into()
            },
        });
    }
    Ok(outcome)
}

/// Verdict, near-threshold pairs and DOT text of one digraph.
type GraphSummary = (GraphVerdict, Vec<(usize, usize)>, String);

fn graph_of<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    tol: &Tolerances<T>,
) -> Result<GraphSummary> {
    let g = build_digraph(m, w, tol.arc_equality)?;
    Ok((strongly_connected(&g), g.near_threshold().to_vec(), g.to_dot()))
}

/// The dominator must be efficient (strongly connected digraph) and must
/// dominate `w` at least as strongly as `required` demands.
fn verify_dominator<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    dominator: &WeightVector<T>,
    require_strict: bool,
    tol: &Tolerances<T>,
) -> Result<DominanceRelation> {
    let (gv, _, _) = graph_of(m, dominator, tol)?;
    let relation = dominates(m, dominator, w, tol.arc_equality)?;
    let ok = gv.strongly_connected && relation.internal && (!require_strict || relation.strict);
    if !ok {
        return Err(Error::VerdictConflict {
            test: "dominator post-verification",
            lp_optimum: f64::NAN,
            graph_says: format!(
                "dominator strongly connected = {}, relation = {:?}",
                gv.strongly_connected, relation
            ),
        });
    }
    Ok(relation)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Route {
    Efficiency,
    Weak,
}

fn analyze<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    tol: &Tolerances<T>,
    route: Route,
) -> Result<EfficiencyReport<T>> {
    m.check_weights(w)?;
    let w = w.sum_one();
    let sets = index_sets(m, &w, tol.arc_equality)?;
    let (graph, near_threshold, dot) = graph_of(m, &w, tol)?;

    let eff = efficiency_core(m, &w, &sets, &graph, tol)?;
    let weak = if eff.efficient {
        WeakOutcome {
            weakly_efficient: true,
            optimum: None,
            run: LpRun::Skipped {
                reason: "efficient vectors are weakly efficient".into(),
            },
            dominator: None,
        }
    } else {
        weak_core(m, &w, &sets, &graph, tol)?
    };

    let mut weak_intermediate = None;
    let (dominator, source) = match (route, eff.dominator, weak.dominator) {
        (Route::Weak, _, Some(strict)) => {
            verify_strict_intermediate(m, &w, &strict, tol)?;
            let (g2, _, _) = graph_of(m, &strict, tol)?;
            let sets2 = index_sets(m, &strict, tol.arc_equality)?;
            let chained = efficiency_core(m, &strict, &sets2, &g2, tol)?;
            weak_intermediate = Some(strict.clone());
            match chained.dominator {
                Some(better) => (Some(better), Some("weak_lp+efficiency_lp")),
                None => (Some(strict), Some("weak_lp")),
            }
        }
        (_, Some(d), _) => (Some(d), Some("efficiency_lp")),
        (_, None, _) => (None, None),
    };

    let (dominance, dominance_certificate) = match &dominator {
        Some(d) => {
            let strict = weak_intermediate.is_some();
            let relation = verify_dominator(m, &w, d, strict, tol)?;
            (Some(relation), improvement_rows(m, d, &w, tol.arc_equality)?)
        }
        None => (None, Vec::new()),
    };

    let dominator_aligned = match &dominator {
        Some(d) => Some(align(&w, d)?),
        None => None,
    };

    Ok(EfficiencyReport {
        schema: REPORT_SCHEMA,
        n: m.n(),
        weights: w,
        verdict: if eff.efficient {
            Verdict::Efficient
        } else {
            Verdict::Inefficient
        },
        weak_verdict: if weak.weakly_efficient {
            WeakVerdict::WeaklyEfficient
        } else {
            WeakVerdict::StronglyInefficient
        },
        lp_optimum: eff.optimum,
        weak_lp_optimum: weak.optimum,
        index_sets: sets,
        graph_verdict: graph,
        dominator,
        dominator_aligned,
        dominance,
        dominance_certificate,
        near_threshold,
        digraph_dot: dot,
        provenance: Provenance {
            digraph: true,
            efficiency_lp: eff.run,
            weak_lp: weak.run,
            dominator_source: source.map(String::from),
            weak_intermediate,
        },
    })
}

fn align<T: Scalar>(w: &WeightVector<T>, d: &WeightVector<T>) -> Result<WeightVector<T>> {
    let mut ratios: Vec<T> = w.values().iter().zip(d.values()).map(|(&a, &b)| a / b).collect();
    ratios.sort_by(|a, b| a.partial_cmp(b).expect("finite weights"));
    d.scaled(ratios[(ratios.len() - 1) / 2])
}

fn verify_strict_intermediate<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    strict: &WeightVector<T>,
    tol: &Tolerances<T>,
) -> Result<()> {
    let relation = dominates(m, strict, w, tol.arc_equality)?;
    if relation.strict && relation.internal {
        Ok(())
    } else {
        Err(Error::VerdictConflict {
            test: "weak dominator post-verification",
            lp_optimum: f64::NAN,
            graph_says: format!("relation = {relation:?}"),
        })
    }
}

/// Efficiency test with the scalar's default tolerances.
///
/// Runs the digraph test and the efficiency program (skipped when `w`
/// reproduces the matrix). When `w` is inefficient the weak test runs too and
/// the report carries the efficient, internally dominating vector `exp(y*)`.
pub fn test_efficiency<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
) -> Result<EfficiencyReport<T>> {
    test_efficiency_with(m, w, &T::default_tolerances())
}

pub fn test_efficiency_with<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    tol: &Tolerances<T>,
) -> Result<EfficiencyReport<T>> {
    analyze(m, w, tol, Route::Efficiency)
}

/// Weak-efficiency test. When `w` is strongly inefficient, the strictly
/// dominating vector from the weak program is handed to the efficiency program
/// and replaced by its efficient dominator if it has one, so the reported
/// dominator is efficient and strictly dominates `w`.
pub fn test_weak_efficiency<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
) -> Result<EfficiencyReport<T>> {
    test_weak_efficiency_with(m, w, &T::default_tolerances())
}

pub fn test_weak_efficiency_with<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    tol: &Tolerances<T>,
) -> Result<EfficiencyReport<T>> {
    analyze(m, w, tol, Route::Weak)
}
