use serde::{Deserialize, Serialize};

use super::PairwiseComparisonMatrix;
use crate::error::{Error, ValidationError};
use crate::{Result, Scalar, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    SumOne,
    FirstOne,
    None,
}

/// Strictly positive weights, tagged with how they were scaled.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct WeightVector<T> {
    values: Vec<T>,
    normalization: Normalization,
}

impl<T: Scalar> WeightVector<T> {
    /// Accepts any positive finite vector as-is.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(index) = values
            .iter()
            .position(|v| !(v.is_finite() && *v > T::zero()))
        {
            return Err(ValidationError::NonPositiveWeight { index }.into());
        }
        Ok(WeightVector {
            values,
            normalization: Normalization::None,
        })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn sum_one(&self) -> Self {
        let total: T = self.values.iter().copied().sum();
        WeightVector {
            values: self.values.iter().map(|&v| v / total).collect(),
            normalization: Normalization::SumOne,
        }
    }

    /// Rescales so the first component is exactly 1.
    pub fn first_one(&self) -> Self {
        let head = self.values[0];
        let mut values: Vec<T> = self.values.iter().map(|&v| v / head).collect();
        values[0] = T::one();
        WeightVector {
            values,
            normalization: Normalization::FirstOne,
        }
    }

    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| v * c).collect())
    }

    pub fn ln(&self) -> Vec<T> {
        self.values.iter().map(|v| v.ln()).collect()
    }

    /// `exp(y)` rescaled to sum one, computed with the max shifted out.
    pub fn from_log(y: &[T]) -> Result<Self> {
        let top = y.iter().copied().fold(T::neg_infinity(), T::max);
        Ok(Self::new(y.iter().map(|&v| (v - top).exp()).collect())?.sum_one())
    }
}

/// Row geometric means, sum-one normalized.
pub fn geometric_mean_vector<T: Scalar>(m: &PairwiseComparisonMatrix<T>) -> WeightVector<T> {
    let n = T::from_usize(m.n()).unwrap();
    // mean of logs instead of the raw product to stay clear of overflow
    let logs: Vec<T> = (0..m.n())
        .map(|i| m.row(i).iter().map(|a| a.ln()).sum::<T>() / n)
        .collect();
    WeightVector::from_log(&logs).expect("geometric means are positive")
}

/// Perron eigenvector (sum-one) and `lambda_max`, by power iteration started
/// from the row geometric means.
pub fn principal_eigenvector<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
) -> Result<(WeightVector<T>, T)> {
    let start = geometric_mean_vector(m);
    principal_eigenvector_from(m, start.values(), &T::default_tolerances())
}

pub fn principal_eigenvector_from<T: Scalar>(
    m: &PairwiseComparisonMatrix<T>,
    start: &[T],
    tol: &Tolerances<T>,
) -> Result<(WeightVector<T>, T)> {
    m.check_weights(&WeightVector::new(start.to_vec())?)?;
    let total: T = start.iter().copied().sum();
    let mut w: Vec<T> = start.iter().map(|&v| v / total).collect();
    let mut last_step = T::infinity();
    for _ in 0..tol.eigen_max_iterations {
        let aw = m.mul_vec(&w);
        let lambda: T = aw.iter().copied().sum();
        let next: Vec<T> = aw.iter().map(|&v| v / lambda).collect();
        last_step = next
            .iter()
            .zip(&w)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max);
        w = next;
        if last_step < tol.eigen_convergence {
            let lambda = rayleigh(m, &w);
            return Ok((WeightVector::new(w)?.sum_one(), lambda));
        }
    }
    Err(Error::Convergence {
        iterations: tol.eigen_max_iterations,
        last_step: last_step.as_f64(),
    })
}

// with w summing to one, sum(Aw) is the eigenvalue estimate
fn rayleigh<T: Scalar>(m: &PairwiseComparisonMatrix<T>, w: &[T]) -> T {
    let total: T = w.iter().copied().sum();
    m.mul_vec(w).into_iter().sum::<T>() / total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcm::{parse_matrix, MatrixFormat};

    fn example_a() -> PairwiseComparisonMatrix<f64> {
        parse_matrix("1,1,4,9\n1,1,7,5\n1/4,1/7,1,4\n1/9,1/5,1/4,1", MatrixFormat::Csv).unwrap()
    }

    #[test]
    fn eigenvector_of_example_one() {
        let (w, lambda) = principal_eigenvector(&example_a()).unwrap();
        let expected = [0.404518, 0.436173, 0.110295, 0.049014];
        for (a, b) in w.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        }
        assert!(lambda >= 4.0);
        assert_eq!(w.normalization(), Normalization::SumOne);
        let m = example_a();
        let aw = m.mul_vec(w.values());
        for (x, y) in aw.iter().zip(w.values()) {
            assert!((x - lambda * y).abs() <= 1e-10 * lambda);
        }
    }

    #[test]
    fn eigenvector_of_consistent_matrix() {
        let m = PairwiseComparisonMatrix::from_upper(4, |i, j| 2f64.powi(j as i32 - i as i32))
            .unwrap();
        let (w, lambda) = principal_eigenvector(&m).unwrap();
        for (a, b) in w.values().iter().zip([8.0, 4.0, 2.0, 1.0]) {
            assert!((a - b / 15.0).abs() < 1e-12);
        }
        assert!((lambda - 4.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_for_all_ones() {
        let m = PairwiseComparisonMatrix::from_rows(vec![vec![1.0f64; 5]; 5]).unwrap();
        let (w, lambda) = principal_eigenvector(&m).unwrap();
        assert!(w.values().iter().all(|&v| (v - 0.2).abs() < 1e-15));
        assert!((lambda - 5.0).abs() < 1e-12);
        let g = geometric_mean_vector(&m);
        assert!(g.values().iter().all(|&v| (v - 0.2).abs() < 1e-15));
    }

    #[test]
    fn geometric_mean_matches_row_products() {
        let m = example_a();
        // brute-force oracle: fourth root of each row product
        let raw: Vec<f64> = [1.0 * 1.0 * 4.0 * 9.0, 1.0 * 1.0 * 7.0 * 5.0, 0.25 / 7.0 * 4.0, 1.0 / 180.0]
            .iter()
            .map(|p: &f64| p.powf(0.25))
            .collect();
        let total: f64 = raw.iter().sum();
        let g = geometric_mean_vector(&m);
        for (a, b) in g.values().iter().zip(raw.iter().map(|v| v / total)) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
        // frozen from the oracle above
        let frozen = [0.42455184, 0.42157235, 0.10655666, 0.04731915];
        for (a, b) in g.values().iter().zip(frozen) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn runs_in_single_precision() {
        let m = PairwiseComparisonMatrix::<f32>::from_upper(4, |i, j| {
            [[1.0, 1.0, 4.0, 9.0], [0.0, 1.0, 7.0, 5.0], [0.0, 0.0, 1.0, 4.0]][i][j]
        })
        .unwrap();
        let (w, lambda) = principal_eigenvector(&m).unwrap();
        assert!((w.values()[0] - 0.404518).abs() < 1e-4);
        assert!(lambda > 4.0);
    }

    #[test]
    fn rejects_non_positive_weights() {
        assert!(WeightVector::new(vec![1.0, 0.0, 2.0]).is_err());
        assert!(WeightVector::new(vec![1.0, f64::NAN, 2.0]).is_err());
    }

    #[test]
    fn first_one_is_exact() {
        let w = WeightVector::new(vec![0.3, 0.5, 0.2]).unwrap().first_one();
        assert_eq!(w.values()[0], 1.0);
        assert_eq!(w.normalization(), Normalization::FirstOne);
        let s = w.sum_one();
        assert!((s.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
