use nalgebra::DVector;

use crate::error::Result;
use crate::iterate::Iterate;
use crate::problems::{GradPair, MinimaxProblem};

/// The logistic-bilinear game `f(x, y) = log(1+e^x) + 3xy - log(1+e^y)`.
///
/// Used for the stability contrast between alternating and simultaneous
/// updates; it carries no exact best response and no analytic PL constants.
#[derive(Clone, Copy, Debug, Default)]
pub struct LogisticBilinear;

impl LogisticBilinear {
    pub fn new() -> Self {
        LogisticBilinear
    }
}

fn softplus(z: f64) -> f64 {
    // log(1 + e^z) without overflow for large |z|.
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl MinimaxProblem for LogisticBilinear {
    fn name(&self) -> &str {
        "logistic_bilinear"
    }

    fn d1(&self) -> usize {
        1
    }

    fn d2(&self) -> usize {
        1
    }

    fn value(&self, it: &Iterate) -> Result<f64> {
        self.check_dims(it)?;
        let (x, y) = (it.x[0], it.y[0]);
        Ok(softplus(x) + 3.0 * x * y - softplus(y))
    }

    fn grad(&self, it: &Iterate) -> Result<GradPair> {
        self.check_dims(it)?;
        let (x, y) = (it.x[0], it.y[0]);
        Ok((
            DVector::from_element(1, sigmoid(x) + 3.0 * y),
            DVector::from_element(1, 3.0 * x - sigmoid(y)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(x: f64, y: f64) -> Iterate {
        Iterate::from_slices(&[x], &[y]).unwrap()
    }

    #[test]
    fn value_at_origin_is_zero() {
        assert_eq!(LogisticBilinear.value(&at(0.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn value_at_one_zero() {
        let v = LogisticBilinear.value(&at(1.0, 0.0)).unwrap();
        let expected = (1.0 + 1.0_f64.exp()).ln() - 2.0_f64.ln();
        assert!((v - expected).abs() < 1e-15);
    }

    #[test]
    fn gradient_at_origin_is_half_pair() {
        let (gx, gy) = LogisticBilinear.grad(&at(0.0, 0.0)).unwrap();
        assert_eq!(gx[0], 0.5);
        assert_eq!(gy[0], -0.5);
    }

    #[test]
    fn no_exact_best_response() {
        assert!(!LogisticBilinear.has_exact_best_response());
        assert!(LogisticBilinear
            .best_response_y(&DVector::zeros(1))
            .is_err());
        assert!(LogisticBilinear.g_star().is_err());
        assert!(!LogisticBilinear.supports_potential());
    }

    #[test]
    fn softplus_is_stable_for_large_arguments() {
        let v = LogisticBilinear.value(&at(800.0, -800.0)).unwrap();
        assert!(v.is_finite());
        // softplus(800) ~ 800, softplus(-800) ~ 0, bilinear term dominates.
        assert!((v - (800.0 + 3.0 * 800.0 * -800.0)).abs() < 1e-9 * v.abs());
    }
}
