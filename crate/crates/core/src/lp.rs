//! Dense two-phase primal simplex for small linear programs.
//!
//! Problems are `min c^T x` over rows `a^T x {<=, =, >=} b` with each variable
//! either nonnegative or free. Free variables are split into a difference of two
//! nonnegative columns. Pivoting uses the most negative reduced cost and falls
//! back to Bland's smallest-index rule after a run of degenerate pivots, so the
//! solver cannot cycle. The arithmetic is fully deterministic.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarDomain {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Constraint<T> {
    pub coefficients: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct LpProblem<T> {
    objective: Vec<T>,
    constraints: Vec<Constraint<T>>,
    domains: Vec<VarDomain>,
    names: Vec<String>,
}

impl<T: Scalar> LpProblem<T> {
    /// Minimize `objective`; all variables start out nonnegative.
    pub fn minimize(objective: Vec<T>) -> Self {
        let n = objective.len();
        LpProblem {
            objective,
            constraints: Vec::new(),
            domains: vec![VarDomain::NonNegative; n],
            names: (0..n).map(|j| format!("x{}", j + 1)).collect(),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.objective.len(), "one name per variable");
        self.names = names;
        self
    }

    pub fn set_domain(&mut self, var: usize, domain: VarDomain) {
        self.domains[var] = domain;
    }

    pub fn add_constraint(
        &mut self,
        coefficients: Vec<T>,
        relation: Relation,
        rhs: T,
        label: impl Into<String>,
    ) {
        assert_eq!(
            coefficients.len(),
            self.objective.len(),
            "constraint width must match the objective"
        );
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
            label: label.into(),
        });
    }

    /// Adds `sum coeff * x_var (rel) rhs` from a sparse term list.
    pub fn add_sparse(&mut self, terms: &[(usize, T)], relation: Relation, rhs: T, label: impl Into<String>) {
        let mut row = vec![T::zero(); self.objective.len()];
        for &(var, c) in terms {
            row[var] = row[var] + c;
        }
        self.add_constraint(row, relation, rhs, label);
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn domains(&self) -> &[VarDomain] {
        &self.domains
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Rows of the problem written out as a table: the objective, every
    /// constraint, and one `x >= 0` row per nonnegative variable.
    pub fn tabulated_rows(&self) -> usize {
        1 + self.constraints.len()
            + self
                .domains
                .iter()
                .filter(|d| **d == VarDomain::NonNegative)
                .count()
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        self.objective.iter().zip(x).map(|(&c, &v)| c * v).sum()
    }

    /// Human readable dump in the spirit of the CPLEX LP format.
    pub fn to_lp_text(&self) -> String {
        let mut out = String::from("Minimize\n obj:");
        write_expr(&mut out, &self.objective, &self.names);
        out.push_str("\nSubject To\n");
        for (k, c) in self.constraints.iter().enumerate() {
            let label = if c.label.is_empty() {
                format!("c{}", k + 1)
            } else {
                c.label.replace(' ', "_")
            };
            let _ = write!(out, " {label}:");
            write_expr(&mut out, &c.coefficients, &self.names);
            let _ = writeln!(out, " {} {}", c.relation, c.rhs);
        }
        out.push_str("Bounds\n");
        for (name, d) in self.names.iter().zip(&self.domains) {
            match d {
                VarDomain::Free => {
                    let _ = writeln!(out, " {name} free");
                }
                VarDomain::NonNegative => {
                    let _ = writeln!(out, " {name} >= 0");
                }
            }
        }
        out.push_str("End\n");
        out
    }
}

fn write_expr<T: Scalar>(out: &mut String, coefficients: &[T], names: &[String]) {
    let mut first = true;
    for (c, name) in coefficients.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let sign = if *c < T::zero() { '-' } else { '+' };
        if first && sign == '+' {
            let _ = write!(out, " {} {name}", c.abs());
        } else {
            let _ = write!(out, " {sign} {} {name}", c.abs());
        }
        first = false;
    }
    if first {
        out.push_str(" 0");
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Objective value, present when `status` is optimal.
    pub optimum: Option<T>,
    /// Values of the original variables; the last basic point reached when not optimal.
    pub assignment: Vec<T>,
    pub iterations: usize,
}

/// Signed violation of one row or variable bound; positive means violated.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Violation<T> {
    pub target: ViolationTarget,
    pub amount: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationTarget {
    Row(usize),
    Bound(usize),
}

/// Lists every row (and nonnegativity bound) violated by more than the
/// feasibility tolerance. Equality rows report the signed residual `lhs - rhs`.
pub fn check_feasibility<T: Scalar>(
    p: &LpProblem<T>,
    assignment: &[T],
    tol: &Tolerances<T>,
) -> Vec<Violation<T>> {
    assert_eq!(assignment.len(), p.num_vars(), "assignment width");
    let mut out = Vec::new();
    for (k, c) in p.constraints.iter().enumerate() {
        let lhs: T = c.coefficients.iter().zip(assignment).map(|(&a, &x)| a * x).sum();
        let amount = match c.relation {
            Relation::Le => lhs - c.rhs,
            Relation::Ge => c.rhs - lhs,
            Relation::Eq => lhs - c.rhs,
        };
        let violated = match c.relation {
            Relation::Eq => amount.abs() > tol.lp_feasibility,
            _ => amount > tol.lp_feasibility,
        };
        if violated {
            out.push(Violation {
                target: ViolationTarget::Row(k),
                amount,
            });
        }
    }
    for (j, (d, &x)) in p.domains.iter().zip(assignment).enumerate() {
        if *d == VarDomain::NonNegative && -x > tol.lp_feasibility {
            out.push(Violation {
                target: ViolationTarget::Bound(j),
                amount: -x,
            });
        }
    }
    out
}

/// Solves with the scalar's default tolerances.
pub fn solve<T: Scalar>(p: &LpProblem<T>) -> Result<LpSolution<T>> {
    solve_with(p, &T::default_tolerances())
}

pub fn solve_with<T: Scalar>(p: &LpProblem<T>, tol: &Tolerances<T>) -> Result<LpSolution<T>> {
    let mut tableau = Tableau::build(p);
    tableau.flush = tol.lp_pivot_floor;
    let mut iterations = 0;

    if tableau.num_artificial > 0 {
        let phase_one: Vec<T> = (0..tableau.width())
            .map(|j| if tableau.is_artificial(j) { T::one() } else { T::zero() })
            .collect();
        tableau.set_cost(&phase_one);
        match tableau.run(tol, &mut iterations, true)? {
            Phase::Optimal => {}
            Phase::Unbounded => return Err(Error::Numerical("phase one reported unbounded".into())),
        }
        if -tableau.cost_value() > tol.lp_feasibility {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                optimum: None,
                assignment: tableau.extract(p),
                iterations,
            });
        }
        tableau.drive_out_artificials(tol);
    }

    let cost = tableau.structural_cost(p);
    tableau.set_cost(&cost);
    let status = match tableau.run(tol, &mut iterations, false)? {
        Phase::Optimal => LpStatus::Optimal,
        Phase::Unbounded => LpStatus::Unbounded,
    };
    let assignment = tableau.extract(p);
    let optimum = (status == LpStatus::Optimal).then(|| p.objective_value(&assignment));
    if status == LpStatus::Optimal {
        if let Some(v) = check_feasibility(p, &assignment, tol).first() {
            return Err(Error::Numerical(format!(
                "optimal basis violates {:?} by {}",
                v.target, v.amount
            )));
        }
    }
    Ok(LpSolution {
        status,
        optimum,
        assignment,
        iterations,
    })
}

enum Phase {
    Optimal,
    Unbounded,
}

/// Column layout: structural columns (two per free variable), then slack and
/// surplus columns, then artificials. The last entry of every row is its rhs.
struct Tableau<T> {
    rows: Vec<Vec<T>>,
    /// Reduced costs; the last entry is minus the current objective value.
    cost: Vec<T>,
    basis: Vec<usize>,
    /// `(plus, minus)` structural columns of each original variable.
    columns: Vec<(usize, Option<usize>)>,
    num_structural: usize,
    first_artificial: usize,
    num_artificial: usize,
    /// Entries this small after a pivot are roundoff and get flushed to zero.
    flush: T,
}

impl<T: Scalar> Tableau<T> {
    fn build(p: &LpProblem<T>) -> Self {
        let mut columns = Vec::with_capacity(p.num_vars());
        let mut next = 0;
        for d in &p.domains {
            match d {
                VarDomain::NonNegative => {
                    columns.push((next, None));
                    next += 1;
                }
                VarDomain::Free => {
                    columns.push((next, Some(next + 1)));
                    next += 2;
                }
            }
        }
        let num_structural = next;

        // normalize every row to a nonnegative rhs
        let normalized: Vec<(Vec<T>, Relation, T)> = p
            .constraints
            .iter()
            .map(|c| {
                if c.rhs < T::zero() {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coefficients.iter().map(|&a| -a).collect(), flipped, -c.rhs)
                } else {
                    (c.coefficients.clone(), c.relation, c.rhs)
                }
            })
            .collect();

        let num_slack = normalized.iter().filter(|r| r.1 != Relation::Eq).count();
        let num_artificial = normalized.iter().filter(|r| r.1 != Relation::Le).count();
        let first_artificial = num_structural + num_slack;
        let width = first_artificial + num_artificial;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut slack, mut art) = (num_structural, first_artificial);
        for (coefficients, relation, rhs) in normalized {
            let mut row = vec![T::zero(); width + 1];
            for (var, &a) in coefficients.iter().enumerate() {
                let (plus, minus) = columns[var];
                row[plus] = a;
                if let Some(m) = minus {
                    row[m] = -a;
                }
            }
            row[width] = rhs;
            match relation {
                Relation::Le => {
                    row[slack] = T::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -T::one();
                    slack += 1;
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }

        Tableau {
            rows,
            cost: vec![T::zero(); width + 1],
            basis,
            columns,
            num_structural,
            first_artificial,
            num_artificial,
            flush: T::zero(),
        }
    }

    fn width(&self) -> usize {
        self.first_artificial + self.num_artificial
    }

    fn is_artificial(&self, col: usize) -> bool {
        col >= self.first_artificial
    }

    fn cost_value(&self) -> T {
        self.cost[self.width()]
    }

    fn structural_cost(&self, p: &LpProblem<T>) -> Vec<T> {
        let mut c = vec![T::zero(); self.width()];
        for (&obj, &(plus, minus)) in p.objective.iter().zip(&self.columns) {
            c[plus] = obj;
            if let Some(m) = minus {
                c[m] = -obj;
            }
        }
        c
    }

    /// Installs a cost vector and prices out the current basis.
    fn set_cost(&mut self, c: &[T]) {
        let width = self.width();
        let mut cost = c.to_vec();
        cost.push(T::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = c[b];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=width {
                cost[j] = cost[j] - cb * row[j];
            }
        }
        self.cost = cost;
    }

    fn run(&mut self, tol: &Tolerances<T>, iterations: &mut usize, phase_one: bool) -> Result<Phase> {
        let width = self.width();
        let mut degenerate_streak = 0usize;
        let bland_after = self.rows.len().max(8);
        loop {
            let bland = degenerate_streak >= bland_after;
            let mut candidates: Vec<usize> = (0..width)
                .filter(|&j| phase_one || !self.is_artificial(j))
                .filter(|&j| self.cost[j] < -tol.lp_reduced_cost)
                .collect();
            if candidates.is_empty() {
                return Ok(Phase::Optimal);
            }
            if !bland {
                // most negative first, ties by index; the sort is stable
                candidates.sort_by(|&a, &b| self.cost[a].partial_cmp(&self.cost[b]).unwrap());
            }

            let mut chosen = None;
            for &col in &candidates {
                match self.ratio_test(col, tol) {
                    Ratio::Row(r) => {
                        chosen = Some((r, col));
                        break;
                    }
                    Ratio::Unbounded => return Ok(Phase::Unbounded),
                    Ratio::TooSmall => continue,
                }
            }
            let Some((r, col)) = chosen else {
                return Err(Error::Numerical(format!(
                    "no pivot above {} among {} improving columns",
                    tol.lp_pivot_floor,
                    candidates.len()
                )));
            };

            *iterations += 1;
            if *iterations > tol.lp_max_iterations {
                return Err(Error::Numerical(format!(
                    "iteration cap {} reached",
                    tol.lp_max_iterations
                )));
            }
            if self.rows[r][width] <= tol.lp_feasibility {
                degenerate_streak += 1;
            } else {
                degenerate_streak = 0;
            }
            self.pivot(r, col);
        }
    }

    fn ratio_test(&self, col: usize, tol: &Tolerances<T>) -> Ratio {
        let width = self.width();
        let mut best: Option<(usize, T)> = None;
        let mut saw_tiny = false;
        for (r, row) in self.rows.iter().enumerate() {
            let a = row[col];
            if a > tol.lp_pivot_floor {
                let ratio = row[width].max(T::zero()) / a;
                let better = match best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < bv || (ratio == bv && self.basis[r] < self.basis[br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            } else if a > T::zero() {
                saw_tiny = true;
            }
        }
        match best {
            Some((r, _)) => Ratio::Row(r),
            None if saw_tiny => Ratio::TooSmall,
            None => Ratio::Unbounded,
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        for v in self.rows[r].iter_mut() {
            *v = *v * inv;
        }
        self.rows[r][col] = T::one();
        let pivot_row = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r {
                continue;
            }
            let f = row[col];
            if f.is_zero() {
                continue;
            }
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                let v = *x - f * p;
                *x = if v.abs() <= self.flush { T::zero() } else { v };
            }
            row[col] = T::zero();
        }
        let f = self.cost[col];
        if !f.is_zero() {
            for (c, &p) in self.cost.iter_mut().zip(&pivot_row) {
                let v = *c - f * p;
                *c = if v.abs() <= self.flush { T::zero() } else { v };
            }
            self.cost[col] = T::zero();
        }
        self.basis[r] = col;
    }

    /// Pivots zero-valued artificials out of the basis where some real column
    /// can take their place; rows where none can are redundant and keep the
    /// artificial at zero (artificials never re-enter in phase two).
    fn drive_out_artificials(&mut self, tol: &Tolerances<T>) {
        for r in 0..self.rows.len() {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            let col = (0..self.first_artificial)
                .filter(|&j| self.rows[r][j].abs() > tol.lp_pivot_floor)
                .max_by(|&a, &b| {
                    self.rows[r][a]
                        .abs()
                        .partial_cmp(&self.rows[r][b].abs())
                        .unwrap()
                        .then(b.cmp(&a))
                });
            if let Some(col) = col {
                self.pivot(r, col);
            }
        }
    }

    fn extract(&self, p: &LpProblem<T>) -> Vec<T> {
        let width = self.width();
        let mut value = vec![T::zero(); self.num_structural];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.num_structural {
                value[b] = row[width];
            }
        }
        p.domains
            .iter()
            .zip(&self.columns)
            .map(|(_, &(plus, minus))| match minus {
                Some(m) => value[plus] - value[m],
                None => value[plus],
            })
            .collect()
    }
}

enum Ratio {
    Row(usize),
    Unbounded,
    TooSmall,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    #[test]
    fn pinned_variable() {
        let mut p = LpProblem::<f64>::minimize(vec![-1.0]);
        p.add_constraint(vec![1.0], Relation::Le, 0.0, "cap");
        p.add_constraint(vec![1.0], Relation::Ge, 0.0, "floor");
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.optimum, Some(0.0));
        assert_eq!(s.assignment, vec![0.0]);
    }

    #[test]
    fn unbounded_ray() {
        let mut p = LpProblem::<f64>::minimize(vec![-1.0]);
        p.add_constraint(vec![1.0], Relation::Ge, 0.0, "floor");
        assert_eq!(solve(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_rows() {
        let mut p = LpProblem::<f64>::minimize(vec![1.0, 1.0]);
        p.add_constraint(vec![1.0, 1.0], Relation::Le, 1.0, "");
        p.add_constraint(vec![1.0, 1.0], Relation::Ge, 2.0, "");
        assert_eq!(solve(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn free_variables_go_negative() {
        // min x subject to x >= -3 with x free
        let mut p = LpProblem::<f64>::minimize(vec![1.0]);
        p.set_domain(0, VarDomain::Free);
        p.add_constraint(vec![1.0], Relation::Ge, -3.0, "");
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.assignment[0] + 3.0).abs() < 1e-12);
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut p = LpProblem::<f64>::minimize(vec![-3.0, -5.0]);
        p.add_constraint(vec![1.0, 0.0], Relation::Le, 4.0, "");
        p.add_constraint(vec![0.0, 2.0], Relation::Le, 12.0, "");
        p.add_constraint(vec![3.0, 2.0], Relation::Le, 18.0, "");
        let s = solve(&p).unwrap();
        assert!((s.optimum.unwrap() + 36.0).abs() < 1e-12);
        assert!((s.assignment[0] - 2.0).abs() < 1e-12);
        assert!((s.assignment[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_equalities() {
        let mut p = LpProblem::<f64>::minimize(vec![1.0, 2.0]);
        p.add_constraint(vec![1.0, 1.0], Relation::Eq, 1.0, "");
        p.add_constraint(vec![2.0, 2.0], Relation::Eq, 2.0, "");
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.optimum.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // classic instance on which Dantzig's rule cycles without anti-cycling
        let mut p = LpProblem::<f64>::minimize(vec![-0.75, 150.0, -0.02, 6.0]);
        p.add_constraint(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0, "");
        p.add_constraint(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0, "");
        p.add_constraint(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0, "");
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.optimum.unwrap() + 0.05).abs() < 1e-12);
    }

    #[test]
    fn feasibility_report() {
        let mut p = LpProblem::<f64>::minimize(vec![0.0, 0.0]);
        p.add_constraint(vec![1.0, 0.0], Relation::Le, -1.0, "neg");
        p.add_constraint(vec![0.0, 1.0], Relation::Le, 2.0, "pos");
        p.add_constraint(vec![1.0, 1.0], Relation::Eq, 0.5, "eq");
        let report = check_feasibility(&p, &[0.0, 0.0], &tol());
        assert_eq!(report.len(), 2);
        assert_eq!(report[0].target, ViolationTarget::Row(0));
        assert_eq!(report[0].amount, 1.0);
        assert_eq!(report[1].target, ViolationTarget::Row(2));
        assert_eq!(report[1].amount, -0.5);
        let empty = LpProblem::<f64>::minimize(vec![1.0]);
        assert!(check_feasibility(&empty, &[3.0], &tol()).is_empty());
        assert_eq!(
            check_feasibility(&empty, &[-1.0], &tol())[0].target,
            ViolationTarget::Bound(0)
        );
    }

    #[test]
    fn lp_text_dump() {
        let mut p = LpProblem::<f64>::minimize(vec![0.0, -1.0]).with_names(vec!["y1".into(), "s".into()]);
        p.set_domain(0, VarDomain::Free);
        p.add_constraint(vec![1.0, 1.0], Relation::Le, 2.5, "cap row");
        let text = p.to_lp_text();
        assert!(text.contains("obj: - 1 s"), "{text}");
        assert!(text.contains("cap_row: 1 y1 + 1 s <= 2.5"), "{text}");
        assert!(text.contains("y1 free"));
        assert!(text.contains("s >= 0"));
    }
}
