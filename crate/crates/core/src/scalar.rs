//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

use crate::Tolerances;

/// Floating point type the crate can compute with: `f32` or `f64`.
///
/// Each implementation carries its own default tolerances; the `f64` values are
/// the reference ones, the `f32` values are loosened to what single precision
/// can actually resolve.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    fn default_tolerances() -> Tolerances<Self>;

    /// Converts an `f64` literal. Every `f64` is representable (possibly rounded)
    /// in every supported scalar, so this never fails.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// Rounds an exact rational once into this type.
    fn from_ratio(r: &Ratio<i128>) -> Self {
        Self::lit(ratio_to_f64(r))
    }
}

impl Scalar for f64 {
    fn default_tolerances() -> Tolerances<f64> {
        Tolerances {
            reciprocity: 1e-9,
            arc_equality: 1e-9,
            eigen_convergence: 1e-12,
            eigen_max_iterations: 100_000,
            lp_feasibility: 1e-8,
            lp_reduced_cost: 1e-9,
            lp_pivot_floor: 1e-12,
            lp_max_iterations: 10_000,
            optimum_cut: 1e-7,
        }
    }
}

impl Scalar for f32 {
    fn default_tolerances() -> Tolerances<f32> {
        Tolerances {
            reciprocity: 1e-5,
            arc_equality: 1e-5,
            eigen_convergence: 1e-6,
            eigen_max_iterations: 100_000,
            lp_feasibility: 1e-4,
            lp_reduced_cost: 1e-5,
            lp_pivot_floor: 1e-7,
            lp_max_iterations: 10_000,
            optimum_cut: 1e-3,
        }
    }
}

/// Correctly rounded conversion of `p/q` to the nearest `f64` when both parts
/// fit in 53 bits; falls back to a float division otherwise.
pub(crate) fn ratio_to_f64(r: &Ratio<i128>) -> f64 {
    const EXACT: i128 = 1 << 53;
    let (p, q) = (*r.numer(), *r.denom());
    if p.abs() < EXACT && q.abs() < EXACT {
        // both operands exact, IEEE division rounds once
        p as f64 / q as f64
    } else {
        r.to_f64().unwrap_or(f64::NAN)
    }
}
