//! Pairwise dominance between weight vectors and the explicit strict dominator
//! of a strongly inefficient vector.

use serde::Serialize;

use crate::error::Error;
use crate::pcm::{residuals, PairwiseComparisonMatrix, WeightVector};
use crate::{Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceKind {
    None,
    Dominates,
    DominatesInternally,
    DominatesStrongly,
}

/// Which dominance notions hold for a (candidate, incumbent) pair. `kind`
/// names the strongest one, ranking strong above internal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DominanceRelation {
    pub kind: DominanceKind,
    /// No residual worse, at least one strictly better.
    pub dominates: bool,
    /// Every ratio stays between its old value and the entry, one moves strictly.
    pub internal: bool,
    /// Every off-diagonal residual strictly better.
    pub strict: bool,
}

/// Compares `candidate` against `incumbent` on the residuals `|x_i/x_j - a_ij|`.
///
/// Comparisons carry a relative slack of `tau` (scaled by `a_ij`), so values
/// that differ only by rounding count as equal.
pub fn dominates<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    candidate: &WeightVector<T>,
    incumbent: &WeightVector<T>,
    tau: T,
) -> Result<DominanceRelation> {
    let new = residuals(m, candidate)?;
    let old = residuals(m, incumbent)?;
    let (c, w) = (candidate.values(), incumbent.values());
    let n = m.n();

    let mut none_worse = true;
    let mut some_better = false;
    let mut all_better = true;
    let mut inside = true;
    let mut some_moved = false;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let a = m.get(i, j);
            let slack = tau * a;
            let (rn, ro) = (new.get(i, j), old.get(i, j));
            if rn > ro + slack {
                none_worse = false;
            }
            if rn < ro - slack {
                some_better = true;
            } else {
                all_better = false;
            }

            let r_old = w[i] / w[j];
            let r_new = c[i] / c[j];
            let tie = (r_old / a - T::one()).abs() <= tau;
            let rel = |x: T| x * tau;
            if tie {
                if (r_new / a - T::one()).abs() > tau {
                    inside = false;
                }
            } else if r_old > a {
                // must land in [a, r_old]
                if r_new < a - rel(a) || r_new > r_old + rel(r_old) {
                    inside = false;
                }
                if r_new < r_old - rel(r_old) {
                    some_moved = true;
                }
            } else {
                if r_new > a + rel(a) || r_new < r_old - rel(r_old) {
                    inside = false;
                }
                if r_new > r_old + rel(r_old) {
                    some_moved = true;
                }
            }
        }
    }
    let dominates = none_worse && some_better;
    let internal = inside && some_moved;
    let strict = all_better;
    let kind = if strict {
        DominanceKind::DominatesStrongly
    } else if internal {
        DominanceKind::DominatesInternally
    } else if dominates {
        DominanceKind::Dominates
    } else {
        DominanceKind::None
    };
    Ok(DominanceRelation {
        kind,
        dominates,
        internal,
        strict,
    })
}

/// Strict dominator built from an acyclic-tournament digraph.
///
/// `order` lists the nodes along the tournament's Hamiltonian path, so the
/// ratio of an earlier node over a later one overshoots the entry. With `o` the
/// order, `p_k = max_{i<k} a_{o_i o_k} / (w_{o_i} / w_{o_k})` for `k >= 2`, and
/// each node is scaled by the product of the multipliers after it; the first
/// two nodes of the path then match their entry exactly.
///
/// Those multipliers only bound pairs against their own column, so a ratio
/// between nodes further apart can be pushed past its entry (for
/// `a_12 = 1/4, a_13 = a_23 = 1, w = (4, 2, 1)` the ratio `w'_1/w'_3` lands on
/// `1/4`). When that happens the vector is rebuilt with one rate for every
/// step, `q = max_{i<k} (a_{o_i o_k} w_{o_k} / w_{o_i})^{1/(k-i)}`,
/// `w'_{o_k} = w_{o_k} q^{n-1-k}`, which keeps every ratio in
/// `[a, w_i/w_j)` by construction.
pub fn acyclic_dominator<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    order: &[usize],
) -> Result<WeightVector<T>> {
    m.check_weights(w)?;
    let n = m.n();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&k| k >= n || std::mem::replace(&mut seen[k], true)) {
        return Err(Error::Precondition(format!(
            "order {order:?} is not a permutation of 0..{n}"
        )));
    }
    let x = w.values();
    let mut multipliers = vec![T::one(); n];
    for k in 1..n {
        let to = order[k];
        let p = order[..k]
            .iter()
            .map(|&from| m.get(from, to) / (x[from] / x[to]))
            .fold(T::zero(), T::max);
        if p >= T::one() {
            return Err(Error::Precondition(format!(
                "multiplier {} at path position {} is not below 1; the vector is not strongly inefficient along this order",
                p,
                k + 1
            )));
        }
        multipliers[k] = p;
    }
    let mut scaled = vec![T::zero(); n];
    let mut tail = T::one();
    for k in (0..n).rev() {
        scaled[order[k]] = x[order[k]] * tail;
        tail = tail * multipliers[k];
    }
    if stays_above_entries(m, &scaled, order) {
        return WeightVector::new(scaled);
    }

    let mut q = T::zero();
    for k in 1..n {
        for i in 0..k {
            let (from, to) = (order[i], order[k]);
            let shrink = m.get(from, to) / (x[from] / x[to]);
            q = q.max(shrink.powf(T::one() / T::lit((k - i) as f64)));
        }
    }
    let uniform = (0..n)
        .map(|item| {
            let pos = order.iter().position(|&o| o == item).expect("permutation");
            x[item] * q.powi((n - 1 - pos) as i32)
        })
        .collect();
    WeightVector::new(uniform)
}

fn stays_above_entries<T: Scalar>(m: &PairwiseComparisonMatrix<T>, w: &[T], order: &[usize]) -> bool {
    let slack = T::epsilon() * T::lit(64.0);
    (0..order.len()).all(|k| {
        (k + 1..order.len()).all(|l| {
            let (i, j) = (order[k], order[l]);
            w[i] / w[j] >= m.get(i, j) * (T::one() - slack)
        })
    })
}

/// One improved cell of the residual matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CertificateRow<T> {
    pub i: usize,
    pub j: usize,
    pub old_residual: T,
    pub new_residual: T,
}

/// Cells where `candidate` strictly improves on `incumbent`.
pub fn improvement_rows<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    candidate: &WeightVector<T>,
    incumbent: &WeightVector<T>,
    tau: T,
) -> Result<Vec<CertificateRow<T>>> {
    let new = residuals(m, candidate)?;
    let old = residuals(m, incumbent)?;
    let n = m.n();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && new.get(i, j) < old.get(i, j) - tau * m.get(i, j) {
                rows.push(CertificateRow {
                    i,
                    j,
                    old_residual: old.get(i, j),
                    new_residual: new.get(i, j),
                });
            }
        }
    }
    Ok(rows)
}
