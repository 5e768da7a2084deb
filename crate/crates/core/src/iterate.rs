use nalgebra::DVector;

use crate::error::{Error, Result};

/// A primal-dual pair `(x, y)` with `x` of length `d1` and `y` of length `d2`.
///
/// All entries are finite by construction; solvers re-check finiteness after
/// every update (a non-finite step aborts the run as diverged).
#[derive(Clone, Debug, PartialEq)]
pub struct Iterate {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
}

impl Iterate {
    pub fn new(x: DVector<f64>, y: DVector<f64>) -> Result<Self> {
        let it = Iterate { x, y };
        if !it.all_finite() {
            return Err(Error::NonFinite("iterate entries must be finite".into()));
        }
        Ok(it)
    }

    pub fn from_slices(x: &[f64], y: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(x), DVector::from_column_slice(y))
    }

    pub fn zeros(d1: usize, d2: usize) -> Self {
        Iterate {
            x: DVector::zeros(d1),
            y: DVector::zeros(d2),
        }
    }

    pub fn d1(&self) -> usize {
        self.x.len()
    }

    pub fn d2(&self) -> usize {
        self.y.len()
    }

    pub fn all_finite(&self) -> bool {
        self.x.iter().all(|v| v.is_finite()) && self.y.iter().all(|v| v.is_finite())
    }

    /// Largest coordinate magnitude over both blocks; drives the divergence guard.
    pub fn max_abs(&self) -> f64 {
        self.x
            .iter()
            .chain(self.y.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Squared Euclidean distance to another iterate of the same shape.
    pub fn dist_sq(&self, other: &Iterate) -> f64 {
        (&self.x - &other.x).norm_squared() + (&self.y - &other.y).norm_squared()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        let x = DVector::from_column_slice(&[1.0, f64::NAN]);
        let y = DVector::from_column_slice(&[0.0]);
        assert!(Iterate::new(x, y).is_err());
        assert!(Iterate::from_slices(&[f64::INFINITY], &[0.0]).is_err());
    }

    #[test]
    fn max_abs_spans_both_blocks() {
        let it = Iterate::from_slices(&[1.0, -3.0], &[2.0]).unwrap();
        assert_eq!(it.max_abs(), 3.0);
    }
}
