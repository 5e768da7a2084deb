//! Minimax problem oracles.
//!
//! A [`MinimaxProblem`] bundles the objective `f(x, y)`, its full and
//! per-component gradients, analytic smoothness / PL constants when known,
//! and the exact auxiliary quantities (`best_response_y`, `g`, `g*`,
//! `min_x f`) that the potential-function diagnostics need.
//!
//! For finite-sum problems the component average must reproduce the full
//! gradient: `(1/n) sum_i grad f_i = grad f`.

mod csv_mat;
mod logistic_bilinear;
mod rls;
mod toy;

pub use csv_mat::{read_matrix_csv, read_vector_csv, write_matrix_csv, write_vector_csv};
pub use logistic_bilinear::LogisticBilinear;
pub use rls::{DatasetSpec, RlsDataset, RlsProblem};
pub use toy::ToyProblem;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::iterate::Iterate;

pub type GradPair = (DVector<f64>, DVector<f64>);

pub trait MinimaxProblem: Send + Sync {
    fn name(&self) -> &str;
    fn d1(&self) -> usize;
    fn d2(&self) -> usize;

    /// Number of finite-sum components; 1 for non-finite-sum problems.
    fn n_components(&self) -> usize {
        1
    }

    /// Joint Lipschitz-gradient modulus (sum-of-norms form), when known.
    fn analytic_l(&self) -> Option<f64> {
        None
    }

    /// PL constant of `f(., y)`, when known.
    fn analytic_mu1(&self) -> Option<f64> {
        None
    }

    /// PL constant of `-f(x, .)`, when known.
    fn analytic_mu2(&self) -> Option<f64> {
        None
    }

    fn has_exact_best_response(&self) -> bool {
        false
    }

    /// A known saddle point, for distance diagnostics.
    fn saddle(&self) -> Option<Iterate> {
        None
    }

    fn value(&self, it: &Iterate) -> Result<f64>;

    fn grad(&self, it: &Iterate) -> Result<GradPair>;

    /// Gradient of the `index`-th component `f_i`. Averaging over all
    /// components reproduces [`grad`](Self::grad). The default covers the
    /// singleton case `n_components() == 1`.
    fn component_grad(&self, index: usize, it: &Iterate) -> Result<GradPair> {
        if index >= self.n_components() {
            return Err(Error::ComponentIndexOutOfRange {
                index,
                n_components: self.n_components(),
            });
        }
        self.grad(it)
    }

    /// A maximizer of `f(x, .)`. Only for problems with
    /// `has_exact_best_response() == true`.
    fn best_response_y(&self, _x: &DVector<f64>) -> Result<DVector<f64>> {
        Err(self.unsupported("best_response_y"))
    }

    /// `g(x) = max_y f(x, y)`, evaluated through the exact best response.
    fn g_value(&self, x: &DVector<f64>) -> Result<f64> {
        let y = self.best_response_y(x)?;
        self.value(&Iterate {
            x: x.clone(),
            y,
        })
    }

    /// `g* = min_x g(x)`, in closed form per problem.
    fn g_star(&self) -> Result<f64> {
        Err(self.unsupported("g_star"))
    }

    /// `min_x f(x, y)` at fixed `y`; the inner minimum used by the PL grid
    /// certification.
    fn min_x_value(&self, _y: &DVector<f64>) -> Result<f64> {
        Err(self.unsupported("min_x_value"))
    }

    /// Whether potential metrics (`a`, `b`, `P`) can be computed exactly.
    fn supports_potential(&self) -> bool {
        self.has_exact_best_response() && self.g_star().is_ok()
    }

    fn check_dims(&self, it: &Iterate) -> Result<()> {
        if it.d1() != self.d1() || it.d2() != self.d2() {
            return Err(Error::DimensionMismatch {
                expected_d1: self.d1(),
                expected_d2: self.d2(),
                got_d1: it.d1(),
                got_d2: it.d2(),
            });
        }
        Ok(())
    }

    fn unsupported(&self, op: &'static str) -> Error {
        Error::Unsupported {
            op,
            problem: self.name().to_string(),
        }
    }
}
