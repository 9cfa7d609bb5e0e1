//! Index sets and the two log-space linear programs.
//!
//! With `y = log x`, `v = log w`, `b = log A`, the efficiency program is
//!
//! ```text
//! min  sum_{(i,j) in I} -s_ij
//!      y_j - y_i         <= -b_ij        (i,j) in I
//!      y_i - y_j + s_ij  <= v_i - v_j    (i,j) in I
//!      y_i - y_j          = b_ij         (i,j) in J
//!      y_1 = 0,  y free,  s >= 0
//! ```
//!
//! and the weak-efficiency program replaces the per-pair `s_ij` by one shared
//! `s`. Both optima are `<= 0`; a strictly negative optimum certifies
//! (strong) inefficiency and `exp(y*)` is the dominating vector.

use serde::Serialize;

use crate::error::Error;
use crate::lp::{LpProblem, Relation, VarDomain};
use crate::pcm::{PairwiseComparisonMatrix, WeightVector};
use crate::{Result, Scalar};

/// `I`: ordered pairs where the ratio overshoots the entry. `J`: pairs `i < j`
/// matched within the equality band. Both sorted, zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSets {
    pub overshoot: Vec<(usize, usize)>,
    pub equal: Vec<(usize, usize)>,
}

impl IndexSets {
    pub fn i(&self) -> &[(usize, usize)] {
        &self.overshoot
    }

    pub fn j(&self) -> &[(usize, usize)] {
        &self.equal
    }
}

pub fn index_sets<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    tau_eq: T,
) -> Result<IndexSets> {
    m.check_weights(w)?;
    let x = w.values();
    let n = m.n();
    let mut overshoot = Vec::new();
    let mut equal = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let dev = x[i] / x[j] / m.get(i, j) - T::one();
            if dev.abs() <= tau_eq {
                equal.push((i, j));
            } else if dev > T::zero() {
                overshoot.push((i, j));
            } else {
                overshoot.push((j, i));
            }
        }
    }
    overshoot.sort_unstable();
    Ok(IndexSets { overshoot, equal })
}

fn y_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("y{i}")).collect()
}

fn pair_label(prefix: &str, (i, j): (usize, usize)) -> String {
    format!("{prefix}_{}_{}", i + 1, j + 1)
}

/// Efficiency program for `(m, w)`. Variables are `y_1..y_n` (free) followed by
/// one `s_ij >= 0` per pair of `I` in `sets` order. Rows come in the order
/// (order row, gap row) per `I` pair, then `J` equalities, then `y_1 = 0`.
pub fn build_efficiency_lp<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    sets: &IndexSets,
) -> Result<LpProblem<T>> {
    m.check_weights(w)?;
    if sets.overshoot.is_empty() {
        return Err(Error::ConsistentInput);
    }
    let n = m.n();
    let v = w.ln();
    let width = n + sets.overshoot.len();
    let mut names = y_names(n);
    names.extend(sets.overshoot.iter().map(|&(i, j)| format!("s{}_{}", i + 1, j + 1)));
    let mut objective = vec![T::zero(); width];
    for c in &mut objective[n..] {
        *c = -T::one();
    }
    let mut p = LpProblem::minimize(objective).with_names(names);
    for var in 0..n {
        p.set_domain(var, VarDomain::Free);
    }
    let one = T::one();
    for (k, &(i, j)) in sets.overshoot.iter().enumerate() {
        let b = m.get(i, j).ln();
        p.add_sparse(&[(j, one), (i, -one)], Relation::Le, -b, pair_label("order", (i, j)));
        p.add_sparse(
            &[(i, one), (j, -one), (n + k, one)],
            Relation::Le,
            v[i] - v[j],
            pair_label("gap", (i, j)),
        );
    }
    for &(i, j) in &sets.equal {
        p.add_sparse(&[(i, one), (j, -one)], Relation::Eq, m.get(i, j).ln(), pair_label("tie", (i, j)));
    }
    p.add_sparse(&[(0, one)], Relation::Eq, T::zero(), "anchor");
    Ok(p)
}

/// Weak-efficiency program: variables `y_1..y_n` (free) and a single `s >= 0`.
pub fn build_weak_lp<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    sets: &IndexSets,
) -> Result<LpProblem<T>> {
    m.check_weights(w)?;
    if let Some(&(i, j)) = sets.equal.first() {
        return Err(Error::EqualityWitness { i, j });
    }
    let n = m.n();
    let v = w.ln();
    let mut names = y_names(n);
    names.push("s".into());
    let mut objective = vec![T::zero(); n + 1];
    objective[n] = -T::one();
    let mut p = LpProblem::minimize(objective).with_names(names);
    for var in 0..n {
        p.set_domain(var, VarDomain::Free);
    }
    let one = T::one();
    for &(i, j) in &sets.overshoot {
        let b = m.get(i, j).ln();
        p.add_sparse(&[(j, one), (i, -one)], Relation::Le, -b, pair_label("order", (i, j)));
        p.add_sparse(
            &[(i, one), (j, -one), (n, one)],
            Relation::Le,
            v[i] - v[j],
            pair_label("gap", (i, j)),
        );
    }
    p.add_sparse(&[(0, one)], Relation::Eq, T::zero(), "anchor");
    Ok(p)
}
