//! Pairwise comparison matrices, weight vectors and the weighting methods.

mod parse;
mod weights;

use serde::Serialize;

use crate::error::ValidationError;
use crate::{Result, Scalar};

pub use parse::{parse_entry, parse_matrix, parse_matrix_with, parse_weights, MatrixFormat};
pub use weights::{
    geometric_mean_vector, principal_eigenvector, principal_eigenvector_from, Normalization,
    WeightVector,
};

/// Positive reciprocal `n x n` matrix, `n >= 3`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct PairwiseComparisonMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Scalar> PairwiseComparisonMatrix<T> {
    /// Validates `rows` with the scalar's default reciprocity tolerance.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::from_rows_with(rows, T::default_tolerances().reciprocity)
    }

    pub fn from_rows_with(rows: Vec<Vec<T>>, reciprocity_tol: T) -> Result<Self> {
        let n = rows.len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(ValidationError::NotSquare {
                    row,
                    len: r.len(),
                    n,
                }
                .into());
            }
        }
        if n < 3 {
            return Err(ValidationError::TooSmall { n }.into());
        }
        let entries: Vec<T> = rows.into_iter().flatten().collect();
        let m = PairwiseComparisonMatrix { n, entries };
        m.validate(reciprocity_tol)?;
        Ok(m)
    }

    /// Builds the matrix from its strict upper triangle and mirrors reciprocals,
    /// so reciprocity holds up to one rounding per entry.
    pub fn from_upper<F: FnMut(usize, usize) -> T>(n: usize, mut upper: F) -> Result<Self> {
        if n < 3 {
            return Err(ValidationError::TooSmall { n }.into());
        }
        let mut entries = vec![T::one(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let a = upper(i, j);
                if !(a.is_finite() && a > T::zero()) {
                    return Err(ValidationError::NonPositive { i, j }.into());
                }
                entries[i * n + j] = a;
                entries[j * n + i] = a.recip();
            }
        }
        Ok(PairwiseComparisonMatrix { n, entries })
    }

    pub(crate) fn from_raw_unchecked(n: usize, entries: Vec<T>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        PairwiseComparisonMatrix { n, entries }
    }

    fn validate(&self, tol: T) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if !(a.is_finite() && a > T::zero()) {
                    return Err(ValidationError::NonPositive { i, j }.into());
                }
            }
        }
        for i in 0..n {
            let d = self.get(i, i);
            if (d - T::one()).abs() > tol {
                return Err(ValidationError::DiagonalNotOne {
                    i,
                    value: d.as_f64(),
                }
                .into());
            }
            for j in i + 1..n {
                let product = self.get(i, j) * self.get(j, i);
                if (product - T::one()).abs() > tol {
                    return Err(ValidationError::NotReciprocal {
                        i,
                        j,
                        product: product.as_f64(),
                    }
                    .into());
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `a_ij`, zero-based.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `true` iff `max |a_ij a_jk / a_ik - 1| <= tol` over all triples.
    pub fn is_consistent(&self, tol: T) -> bool {
        self.max_triad_deviation() <= tol
    }

    pub fn max_triad_deviation(&self) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let dev = (self.get(i, j) * self.get(j, k) / self.get(i, k) - T::one()).abs();
                    worst = worst.max(dev);
                }
            }
        }
        worst
    }

    /// Rejects weight vectors of the wrong length.
    pub fn check_weights(&self, w: &WeightVector<T>) -> Result<()> {
        if w.len() != self.n {
            return Err(ValidationError::WeightLength {
                len: w.len(),
                n: self.n,
            }
            .into());
        }
        Ok(())
    }
}

/// Free-function form of [`PairwiseComparisonMatrix::is_consistent`].
pub fn is_consistent<T: Scalar>(m: &PairwiseComparisonMatrix<T>, tol: T) -> bool {
    m.is_consistent(tol)
}

/// `|x_i / x_j - a_ij|` for every cell; the diagonal is exactly zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ResidualMatrix<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> ResidualMatrix<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.n + j]
    }

    pub fn max(&self) -> T {
        self.values.iter().fold(T::zero(), |m, &v| m.max(v))
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.values.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

pub fn residuals<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    w: &WeightVector<T>,
) -> Result<ResidualMatrix<T>> {
    m.check_weights(w)?;
    let n = m.n();
    let x = w.values();
    let mut values = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                values[i * n + j] = (x[i] / x[j] - m.get(i, j)).abs();
            }
        }
    }
    Ok(ResidualMatrix { n, values })
}

/// Consistent matrix `[w_i / w_j]` generated by `w`.
pub fn ratio_matrix<T: Scalar>(w: &WeightVector<T>) -> PairwiseComparisonMatrix<T> {
    let x = w.values();
    let n = x.len();
    let mut entries = Vec::with_capacity(n * n);
    for &xi in x {
        for &xj in x {
            entries.push(xi / xj);
        }
    }
    PairwiseComparisonMatrix::from_raw_unchecked(n, entries)
}
