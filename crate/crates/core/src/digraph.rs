//! The dominance digraph of a (matrix, weight vector) pair.
//!
//! Node `i` has an arc to `j` when `w_i / w_j >= a_ij`; an exact match gives a
//! pair of opposite arcs. The vector is efficient iff the digraph is strongly
//! connected, and strongly inefficient iff the digraph is the acyclic
//! tournament (equivalently, its outdegrees are exactly `0, 1, ..., n-1`).
//!
//! Node indices are zero-based in the API and one-based in DOT output.

use std::fmt::Write as _;

use serde::Serialize;

use crate::pcm::{PairwiseComparisonMatrix, WeightVector};
use crate::{Result, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct DominanceDigraph<T> {
    n: usize,
    adjacency: Vec<bool>,
    tolerance: T,
    /// Pairs `i < j` whose arc decision sat close enough to the equality band
    /// edge that rounding in the weights could have flipped it.
    near_threshold: Vec<(usize, usize)>,
}

/// Builds the digraph with relative equality band `tau_eq`: with
/// `q = (w_i / w_j) / a_ij`, both arcs are present when `|q - 1| <= tau_eq`,
/// otherwise only the arc from the item whose ratio overshoots.
pub fn build_digraph<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
    tau_eq: T,
) -> Result<DominanceDigraph<T>> {
    m.check_weights(w)?;
    let n = m.n();
    let x = w.values();
    let ten = T::lit(10.0);
    let mut adjacency = vec![false; n * n];
    let mut near_threshold = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let dev = x[i] / x[j] / m.get(i, j) - T::one();
            if dev.abs() <= tau_eq {
                adjacency[i * n + j] = true;
                adjacency[j * n + i] = true;
            } else if dev > T::zero() {
                adjacency[i * n + j] = true;
            } else {
                adjacency[j * n + i] = true;
            }
            if dev.abs() > tau_eq / ten && dev.abs() <= ten * tau_eq {
                near_threshold.push((i, j));
            }
        }
    }
    Ok(DominanceDigraph {
        n,
        adjacency,
        tolerance: tau_eq,
        near_threshold,
    })
}

impl<T: Scalar> DominanceDigraph<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tolerance(&self) -> T {
        self.tolerance
    }

    #[inline]
    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n + j]
    }

    pub fn is_bidirected(&self, i: usize, j: usize) -> bool {
        self.has_arc(i, j) && self.has_arc(j, i)
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_arc(i, j))
            .collect()
    }

    pub fn near_threshold(&self) -> &[(usize, usize)] {
        &self.near_threshold
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.has_arc(i, j))
    }

    pub fn outdegrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.successors(i).count()).collect()
    }

    /// Strongly connected components in reverse topological order of the
    /// condensation (sinks first), each sorted ascending.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        tarjan(self)
    }

    /// When the digraph is the acyclic tournament, returns its unique
    /// Hamiltonian path (nodes by descending outdegree).
    pub fn acyclic_tournament_order(&self) -> Option<Vec<usize>> {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                if self.is_bidirected(i, j) {
                    return None;
                }
            }
        }
        let out = self.outdegrees();
        let mut seen = vec![false; n];
        for &d in &out {
            if d >= n || seen[d] {
                return None;
            }
            seen[d] = true;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(out[i]));
        Some(order)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dominance {\n");
        for i in 0..self.n {
            let _ = writeln!(out, "  {};", i + 1);
        }
        for (i, j) in self.arcs() {
            let _ = writeln!(out, "  {} -> {};", i + 1, j + 1);
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphVerdict {
    pub strongly_connected: bool,
    pub scc_partition: Vec<Vec<usize>>,
    pub outdegrees: Vec<usize>,
    pub acyclic_tournament: bool,
    pub topological_order: Option<Vec<usize>>,
}

pub fn strongly_connected<T: Scalar>(g: &DominanceDigraph<T>) -> GraphVerdict {
    let scc_partition = g.strongly_connected_components();
    let topological_order = g.acyclic_tournament_order();
    GraphVerdict {
        strongly_connected: scc_partition.len() == 1,
        scc_partition,
        outdegrees: g.outdegrees(),
        acyclic_tournament: topological_order.is_some(),
        topological_order,
    }
}

/// Free-function form of [`DominanceDigraph::acyclic_tournament_order`].
pub fn is_acyclic_tournament<T: Scalar>(g: &DominanceDigraph<T>) -> Option<Vec<usize>> {
    g.acyclic_tournament_order()
}

// Iterative Tarjan; components come out sinks first.
fn tarjan<T: Scalar>(g: &DominanceDigraph<T>) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = g.n();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::with_capacity(n);
    let mut components = Vec::new();
    let mut counter = 0;
    // (node, next successor candidate)
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        while let Some(&mut (v, ref mut next)) = frames.last_mut() {
            if *next == 0 && index[v] == UNVISITED {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let mut descended = false;
            while *next < n {
                let u = *next;
                *next += 1;
                if !g.has_arc(v, u) {
                    continue;
                }
                if index[u] == UNVISITED {
                    frames.push((u, 0));
                    descended = true;
                    break;
                } else if on_stack[u] {
                    low[v] = low[v].min(index[u]);
                }
            }
            if descended {
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let u = stack.pop().expect("tarjan stack");
                    on_stack[u] = false;
                    component.push(u);
                    if u == v {
                        break;
                    }
                }
                component.sort_unstable();
                components.push(component);
            }
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcm::{parse_matrix, MatrixFormat};

    fn example_a() -> PairwiseComparisonMatrix<f64> {
        parse_matrix("1,1,4,9\n1,1,7,5\n1/4,1/7,1,4\n1/9,1/5,1/4,1", MatrixFormat::Csv).unwrap()
    }

    fn eigen_w() -> WeightVector<f64> {
        WeightVector::new(vec![0.404518, 0.436173, 0.110295, 0.049014]).unwrap()
    }

    fn powers(c: f64, n: usize) -> PairwiseComparisonMatrix<f64> {
        PairwiseComparisonMatrix::from_upper(n, |i, j| c.powi(j as i32 - i as i32)).unwrap()
    }

    fn pairs(one_based: &[(usize, usize)]) -> Vec<(usize, usize)> {
        one_based.iter().map(|&(i, j)| (i - 1, j - 1)).collect()
    }

    #[test]
    fn example_one_arcs() {
        let g = build_digraph(&example_a(), &eigen_w(), 1e-9).unwrap();
        assert_eq!(
            g.arcs(),
            pairs(&[(2, 1), (2, 4), (3, 1), (3, 2), (4, 1), (4, 3)])
        );
        let v = strongly_connected(&g);
        assert!(!v.strongly_connected);
        assert!(!v.acyclic_tournament);
        // node 1 is a sink; {2, 3, 4} form the cycle 2 -> 4 -> 3 -> 2
        assert_eq!(v.scc_partition, vec![vec![0], vec![1, 2, 3]]);
        assert!(g.has_arc(1, 3) && g.has_arc(3, 2) && g.has_arc(2, 1));
        assert!(is_acyclic_tournament(&g).is_none());
    }

    #[test]
    fn consistent_pair_is_complete() {
        let m = powers(2.0, 4);
        let w = WeightVector::new(vec![8.0, 4.0, 2.0, 1.0]).unwrap();
        let g = build_digraph(&m, &w, 1e-9).unwrap();
        assert_eq!(g.arcs().len(), 12);
        let v = strongly_connected(&g);
        assert!(v.strongly_connected);
        assert!(!v.acyclic_tournament);
        assert_eq!(v.scc_partition, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn example_three_is_acyclic_tournament() {
        let m = powers(2.0, 4);
        let w = WeightVector::new(vec![27.0, 9.0, 3.0, 1.0]).unwrap();
        let g = build_digraph(&m, &w, 1e-9).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.has_arc(i, j), i < j);
            }
        }
        let v = strongly_connected(&g);
        assert!(v.acyclic_tournament);
        assert_eq!(v.topological_order, Some(vec![0, 1, 2, 3]));
        let mut out = v.outdegrees.clone();
        out.sort_unstable();
        assert_eq!(out, vec![0, 1, 2, 3]);
        assert_eq!(v.scc_partition.len(), 4);
    }

    #[test]
    fn band_makes_bidirected_arcs() {
        let m = powers(2.0, 3);
        let w = WeightVector::new(vec![4.0 * (1.0 + 5e-10), 2.0, 1.0]).unwrap();
        let g = build_digraph(&m, &w, 1e-9).unwrap();
        assert!(g.is_bidirected(0, 1));
        assert!(g.near_threshold().contains(&(0, 1)));
        let strict = build_digraph(&m, &w, 0.0).unwrap();
        assert!(strict.has_arc(0, 1) && !strict.has_arc(1, 0));
    }

    #[test]
    fn dot_export() {
        let g = build_digraph(&example_a(), &eigen_w(), 1e-9).unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph dominance {"));
        assert!(dot.contains("  2 -> 1;"));
        assert_eq!(dot.matches("->").count(), 6);
    }
}
