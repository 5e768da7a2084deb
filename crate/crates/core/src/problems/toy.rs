use nalgebra::DVector;

use crate::error::Result;
use crate::iterate::Iterate;
use crate::problems::{GradPair, MinimaxProblem};

/// The two-dimensional nonconvex-nonconcave test function
///
/// ```text
/// f(x, y) = x^2 + 3 sin^2(x) sin^2(y) - 4 y^2 - 10 sin^2(y)
/// ```
///
/// It satisfies the two-sided PL condition with `mu1 = 1/16` and
/// `mu2 = 1/14` (via the error-bound constants 1/2 and 2 and the blockwise
/// smoothness bounds 8 and 28), has the unique saddle point `(0, 0)`, and
/// exact responses `x*(y) = y*(x) = 0`, hence `g(x) = x^2` and `g* = 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ToyProblem;

impl ToyProblem {
    pub fn new() -> Self {
        ToyProblem
    }

    fn f(x: f64, y: f64) -> f64 {
        let sx = x.sin();
        let sy = y.sin();
        x * x + 3.0 * sx * sx * sy * sy - 4.0 * y * y - 10.0 * sy * sy
    }
}

impl MinimaxProblem for ToyProblem {
    fn name(&self) -> &str {
        "toy"
    }

    fn d1(&self) -> usize {
        1
    }

    fn d2(&self) -> usize {
        1
    }

    fn analytic_l(&self) -> Option<f64> {
        // max of the blockwise Hessian bounds (8, 28) and the cross bound 3.
        Some(28.0)
    }

    fn analytic_mu1(&self) -> Option<f64> {
        Some(1.0 / 16.0)
    }

    fn analytic_mu2(&self) -> Option<f64> {
        Some(1.0 / 14.0)
    }

    fn has_exact_best_response(&self) -> bool {
        true
    }

    fn saddle(&self) -> Option<Iterate> {
        Some(Iterate::zeros(1, 1))
    }

    fn value(&self, it: &Iterate) -> Result<f64> {
        self.check_dims(it)?;
        Ok(Self::f(it.x[0], it.y[0]))
    }

    fn grad(&self, it: &Iterate) -> Result<GradPair> {
        self.check_dims(it)?;
        let (x, y) = (it.x[0], it.y[0]);
        let (sx, sy) = (x.sin(), y.sin());
        let gx = 2.0 * x + 3.0 * sy * sy * (2.0 * x).sin();
        let gy = -8.0 * y + 3.0 * sx * sx * (2.0 * y).sin() - 10.0 * (2.0 * y).sin();
        Ok((
            DVector::from_element(1, gx),
            DVector::from_element(1, gy),
        ))
    }

    fn best_response_y(&self, _x: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(DVector::zeros(1))
    }

    fn g_value(&self, x: &DVector<f64>) -> Result<f64> {
        Ok(x[0] * x[0])
    }

    fn g_star(&self) -> Result<f64> {
        Ok(0.0)
    }

    fn min_x_value(&self, y: &DVector<f64>) -> Result<f64> {
        // x*(y) = 0 for every y.
        Ok(Self::f(0.0, y[0]))
    }
}
