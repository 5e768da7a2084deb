//! Robust least squares with a soft constraint:
//!
//! ```text
//! f(x, y) = ||Ax - y||_M^2 - lambda ||y - y0||_M^2,    M = C^T C  (PSD)
//! ```
//!
//! For `lambda > 1` this satisfies the two-sided PL condition. The finite-sum
//! decomposition uses the factor rows `c_i` of `C`:
//!
//! ```text
//! f_i(x, y) = n [ (c_i^T (Ax - y))^2 - lambda (c_i^T (y - y0))^2 ],
//! ```
//!
//! so `(1/n) sum_i f_i = f` exactly for any PSD `M`.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::iterate::Iterate;
use crate::problems::csv_mat::{read_matrix_csv, read_vector_csv, write_matrix_csv, write_vector_csv};
use crate::problems::{GradPair, MinimaxProblem};

/// Synthetic dataset recipes and CSV ingestion.
#[derive(Clone, Debug, PartialEq)]
pub enum DatasetSpec {
    /// Gaussian `A`, `y0 = A x* + eps`, `M = I`, `lambda = 3`.
    Dataset1,
    /// Correlated rows (`Sigma_ij = 2^{-|i-j|/10}`), rank-deficient `M` with
    /// positive eigenvalues uniform on `[0.2, 1.8]`, `lambda = 1.5`.
    Dataset3 { rank_fraction: f64 },
    /// `A.csv` and `y0.csv` from a directory; `M = I`, `lambda = 2`.
    FromCsv(PathBuf),
}

impl DatasetSpec {
    pub fn dataset3() -> Self {
        DatasetSpec::Dataset3 { rank_fraction: 0.8 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RlsDataset {
    /// Coefficient matrix, `n_samples x m`.
    pub a: DMatrix<f64>,
    /// Noisy target, length `n_samples`.
    pub y0: DVector<f64>,
    /// M-factor with `M = C^T C`, shape `r x n_samples`.
    pub c: DMatrix<f64>,
    /// Regularizer weight; must exceed 1 for two-sided PL.
    pub lambda_reg: f64,
}

impl RlsDataset {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_reg.is_finite() && self.lambda_reg > 1.0) {
            return Err(Error::invalid(format!(
                "lambda_reg must exceed 1, got {}",
                self.lambda_reg
            )));
        }
        if self.y0.len() != self.a.nrows() || self.c.ncols() != self.a.nrows() {
            return Err(Error::invalid(format!(
                "inconsistent dataset shapes: A is {}x{}, y0 has {}, C is {}x{}",
                self.a.nrows(),
                self.a.ncols(),
                self.y0.len(),
                self.c.nrows(),
                self.c.ncols()
            )));
        }
        if self.a.nrows() == 0 || self.a.ncols() == 0 || self.c.nrows() == 0 {
            return Err(Error::invalid("dataset dimensions must be positive"));
        }
        let finite = self.a.iter().all(|v| v.is_finite())
            && self.y0.iter().all(|v| v.is_finite())
            && self.c.iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite("dataset entries must be finite".into()));
        }
        Ok(())
    }

    /// Generate a dataset per `spec` with explicit dimensions and seed.
    /// Deterministic: the same arguments always produce the same dataset.
    pub fn generate(spec: &DatasetSpec, n_samples: usize, m: usize, seed: u64) -> Result<Self> {
        if n_samples == 0 || m == 0 {
            return Err(Error::invalid(format!(
                "dataset dimensions must be positive, got ({n_samples}, {m})"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match spec {
            DatasetSpec::Dataset1 => {
                let a = DMatrix::from_fn(n_samples, m, |_, _| normal(&mut rng));
                let y0 = noisy_target(&a, &mut rng);
                let ds = RlsDataset {
                    a,
                    y0,
                    c: DMatrix::identity(n_samples, n_samples),
                    lambda_reg: 3.0,
                };
                ds.validate()?;
                Ok(ds)
            }
            DatasetSpec::Dataset3 { rank_fraction } => {
                if !(*rank_fraction > 0.0 && *rank_fraction <= 1.0) {
                    return Err(Error::invalid(format!(
                        "rank_fraction must lie in (0, 1], got {rank_fraction}"
                    )));
                }
                // Row covariance Sigma_ij = 2^{-|i-j|/10}; rows of A are
                // L z with Sigma = L L^T, i.e. A = Z L^T.
                let sigma = DMatrix::from_fn(m, m, |i, j| {
                    2f64.powf(-((i as f64 - j as f64).abs()) / 10.0)
                });
                let chol = nalgebra::Cholesky::new(sigma)
                    .ok_or_else(|| Error::invalid("row covariance is not positive definite"))?;
                let z = DMatrix::from_fn(n_samples, m, |_, _| normal(&mut rng));
                let a = z * chol.l().transpose();
                let y0 = noisy_target(&a, &mut rng);
                let rank = ((rank_fraction * n_samples as f64).floor() as usize)
                    .clamp(1, n_samples);
                // Random orthonormal basis for range(M) via QR of a Gaussian.
                let g = DMatrix::from_fn(n_samples, rank, |_, _| normal(&mut rng));
                let q = g.qr().q();
                let mut c = q.transpose();
                for i in 0..rank {
                    let eig: f64 = rng.random_range(0.2..1.8);
                    c.row_mut(i).scale_mut(eig.sqrt());
                }
                let ds = RlsDataset {
                    a,
                    y0,
                    c,
                    lambda_reg: 1.5,
                };
                ds.validate()?;
                Ok(ds)
            }
            DatasetSpec::FromCsv(dir) => RlsDataset::from_csv_dir(dir),
        }
    }

    /// Ingest `A.csv` and `y0.csv` from `dir` with the externally-supplied
    /// dataset convention `M = I`, `lambda = 2`.
    pub fn from_csv_dir(dir: &Path) -> Result<Self> {
        let a = read_matrix_csv(BufReader::new(File::open(dir.join("A.csv"))?))?;
        let y0 = read_vector_csv(BufReader::new(File::open(dir.join("y0.csv"))?))?;
        let n = a.nrows();
        let ds = RlsDataset {
            a,
            y0,
            c: DMatrix::identity(n, n),
            lambda_reg: 2.0,
        };
        ds.validate()?;
        Ok(ds)
    }

    /// Export `A.csv`, `y0.csv`, `C.csv` into `dir` (created if missing).
    pub fn write_csv_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        write_matrix_csv(BufWriter::new(File::create(dir.join("A.csv"))?), &self.a)?;
        write_vector_csv(BufWriter::new(File::create(dir.join("y0.csv"))?), &self.y0)?;
        write_matrix_csv(BufWriter::new(File::create(dir.join("C.csv"))?), &self.c)?;
        Ok(())
    }

    pub fn n_samples(&self) -> usize {
        self.a.nrows()
    }

    pub fn m(&self) -> usize {
        self.a.ncols()
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn noisy_target(a: &DMatrix<f64>, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let m = a.ncols();
    let x_star = DVector::from_fn(m, |_, _| normal(rng));
    // eps ~ N(0, 0.01), i.e. standard deviation 0.1.
    let eps = DVector::from_fn(a.nrows(), |_, _| 0.1 * normal(rng));
    a * x_star + eps
}

/// Thin SVD retained for pseudo-inverse solves.
struct Pinv {
    u: DMatrix<f64>,
    v: DMatrix<f64>,
    inv_s: DVector<f64>,
}

impl Pinv {
    fn new(m: &DMatrix<f64>, tol_rel: f64) -> (Self, f64, f64) {
        let svd = m.clone().svd(true, true);
        let u = svd.u.expect("svd requested u");
        let v_t = svd.v_t.expect("svd requested v_t");
        let s = svd.singular_values;
        let smax = s.iter().cloned().fold(0.0_f64, f64::max);
        let tol = smax * tol_rel;
        let kept: Vec<usize> = (0..s.len()).filter(|&i| s[i] > tol).collect();
        let smin_pos = kept.iter().map(|&i| s[i]).fold(f64::INFINITY, f64::min);
        let uk = DMatrix::from_fn(u.nrows(), kept.len(), |r, c| u[(r, kept[c])]);
        let vk = DMatrix::from_fn(v_t.ncols(), kept.len(), |r, c| v_t[(kept[c], r)]);
        let inv_s = DVector::from_fn(kept.len(), |i, _| 1.0 / s[kept[i]]);
        (Pinv { u: uk, v: vk, inv_s }, smax, smin_pos)
    }

    /// Least-norm least-squares solution of `M x = z`.
    fn solve(&self, z: &DVector<f64>) -> DVector<f64> {
        let mut w = self.u.transpose() * z;
        w.component_mul_assign(&self.inv_s);
        &self.v * w
    }

    /// Orthogonal projection onto the row space (columns of `v`).
    fn project_rows(&self, w: &DVector<f64>) -> DVector<f64> {
        &self.v * (self.v.transpose() * w)
    }
}

const RANK_TOL: f64 = 1e-10;

/// Problem oracle for a concrete [`RlsDataset`].
pub struct RlsProblem {
    dataset: RlsDataset,
    /// `B = C A`, so that `||Ax - y||_M^2 = ||Bx - Cy||^2`.
    b: DMatrix<f64>,
    cy0: DVector<f64>,
    b_rows: Vec<DVector<f64>>,
    c_rows: Vec<DVector<f64>>,
    b_pinv: Pinv,
    c_pinv: Pinv,
    analytic_l: f64,
    mu1: f64,
    mu2: f64,
    x_ls: DVector<f64>,
    g_star: f64,
    saddle: Iterate,
}

impl RlsProblem {
    pub fn new(dataset: RlsDataset) -> Result<Self> {
        dataset.validate()?;
        let lam = dataset.lambda_reg;
        let b = &dataset.c * &dataset.a;
        let cy0 = &dataset.c * &dataset.y0;
        let (b_pinv, b_smax, b_smin_pos) = Pinv::new(&b, RANK_TOL);
        let (c_pinv, c_smax, c_smin_pos) = Pinv::new(&dataset.c, RANK_TOL);
        if !b_smin_pos.is_finite() || !c_smin_pos.is_finite() {
            return Err(Error::invalid("dataset factors must be nonzero"));
        }
        // Blockwise Lipschitz bounds; the cross-term uses the product bound
        // |A^T M| <= smax(B) smax(C), which keeps the modulus valid.
        let analytic_l = 2.0
            * (b_smax * b_smax)
                .max(b_smax * c_smax)
                .max((lam - 1.0) * c_smax * c_smax);
        let mu1 = 2.0 * b_smin_pos * b_smin_pos;
        let mu2 = 2.0 * (lam - 1.0) * c_smin_pos * c_smin_pos;
        let x_ls = b_pinv.solve(&cy0);
        let resid = &b * &x_ls - &cy0;
        let g_star = lam / (lam - 1.0) * resid.norm_squared();
        let b_rows: Vec<DVector<f64>> = (0..b.nrows()).map(|i| b.row(i).transpose()).collect();
        let c_rows: Vec<DVector<f64>> =
            (0..dataset.c.nrows()).map(|i| dataset.c.row(i).transpose()).collect();

        let mut problem = RlsProblem {
            dataset,
            b,
            cy0,
            b_rows,
            c_rows,
            b_pinv,
            c_pinv,
            analytic_l,
            mu1,
            mu2,
            x_ls,
            g_star,
            saddle: Iterate::zeros(0, 0),
        };
        let y_saddle = problem.best_response_y(&problem.x_ls.clone())?;
        problem.saddle = Iterate::new(problem.x_ls.clone(), y_saddle)?;
        Ok(problem)
    }

    pub fn generate(spec: &DatasetSpec, n_samples: usize, m: usize, seed: u64) -> Result<Self> {
        Self::new(RlsDataset::generate(spec, n_samples, m, seed)?)
    }

    pub fn dataset(&self) -> &RlsDataset {
        &self.dataset
    }

    pub fn x_least_squares(&self) -> &DVector<f64> {
        &self.x_ls
    }

    fn residuals(&self, it: &Iterate) -> (DVector<f64>, DVector<f64>) {
        let cy = &self.dataset.c * &it.y;
        let u = &self.b * &it.x - &cy;
        let v = cy - &self.cy0;
        (u, v)
    }
}

impl MinimaxProblem for RlsProblem {
    fn name(&self) -> &str {
        "rls"
    }

    fn d1(&self) -> usize {
        self.dataset.m()
    }

    fn d2(&self) -> usize {
        self.dataset.n_samples()
    }

    fn n_components(&self) -> usize {
        self.dataset.c.nrows()
    }

    fn analytic_l(&self) -> Option<f64> {
        Some(self.analytic_l)
    }

    fn analytic_mu1(&self) -> Option<f64> {
        Some(self.mu1)
    }

    fn analytic_mu2(&self) -> Option<f64> {
        Some(self.mu2)
    }

    fn has_exact_best_response(&self) -> bool {
        true
    }

    fn saddle(&self) -> Option<Iterate> {
        Some(self.saddle.clone())
    }

    fn value(&self, it: &Iterate) -> Result<f64> {
        self.check_dims(it)?;
        let (u, v) = self.residuals(it);
        Ok(u.norm_squared() - self.dataset.lambda_reg * v.norm_squared())
    }

    fn grad(&self, it: &Iterate) -> Result<GradPair> {
        self.check_dims(it)?;
        let lam = self.dataset.lambda_reg;
        let (u, v) = self.residuals(it);
        let gx = self.b.transpose() * (2.0 * &u);
        let w = -2.0 * u - 2.0 * lam * v;
        let gy = self.dataset.c.transpose() * w;
        Ok((gx, gy))
    }

    fn component_grad(&self, index: usize, it: &Iterate) -> Result<GradPair> {
        let n = self.n_components();
        if index >= n {
            return Err(Error::ComponentIndexOutOfRange {
                index,
                n_components: n,
            });
        }
        self.check_dims(it)?;
        let lam = self.dataset.lambda_reg;
        let nf = n as f64;
        let bi = &self.b_rows[index];
        let ci = &self.c_rows[index];
        let ciy = ci.dot(&it.y);
        let ui = bi.dot(&it.x) - ciy;
        let vi = ciy - self.cy0[index];
        let gx = bi * (2.0 * nf * ui);
        let gy = ci * (-2.0 * nf * ui - 2.0 * lam * nf * vi);
        Ok((gx, gy))
    }

    fn best_response_y(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.d1() {
            return Err(Error::DimensionMismatch {
                expected_d1: self.d1(),
                expected_d2: self.d2(),
                got_d1: x.len(),
                got_d2: self.d2(),
            });
        }
        // Stationarity of the concave quadratic in y:
        //   M ((1 - lambda) y + lambda y0 - A x) = 0,
        // solved on range(M); the null(M) component copies y0.
        let r = &self.dataset.a * x - &self.dataset.y0;
        let correction = self.c_pinv.project_rows(&r) / (self.dataset.lambda_reg - 1.0);
        Ok(&self.dataset.y0 - correction)
    }

    fn g_value(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.d1() {
            return Err(Error::DimensionMismatch {
                expected_d1: self.d1(),
                expected_d2: self.d2(),
                got_d1: x.len(),
                got_d2: self.d2(),
            });
        }
        let lam = self.dataset.lambda_reg;
        let resid = &self.b * x - &self.cy0;
        Ok(lam / (lam - 1.0) * resid.norm_squared())
    }

    fn g_star(&self) -> Result<f64> {
        Ok(self.g_star)
    }

    fn min_x_value(&self, y: &DVector<f64>) -> Result<f64> {
        if y.len() != self.d2() {
            return Err(Error::DimensionMismatch {
                expected_d1: self.d1(),
                expected_d2: self.d2(),
                got_d1: self.d1(),
                got_d2: y.len(),
            });
        }
        let cy = &self.dataset.c * y;
        let xhat = self.b_pinv.solve(&cy);
        let v = &cy - &self.cy0;
        Ok((&self.b * xhat - cy).norm_squared() - self.dataset.lambda_reg * v.norm_squared())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn tiny() -> RlsProblem {
        // A = [1; 2], y0 = (1, 0), C = I, lambda = 2.5.
        let ds = RlsDataset {
            a: DMatrix::from_row_slice(2, 1, &[1.0, 2.0]),
            y0: DVector::from_column_slice(&[1.0, 0.0]),
            c: DMatrix::identity(2, 2),
            lambda_reg: 2.5,
        };
        RlsProblem::new(ds).unwrap()
    }

    fn random_iterate(p: &RlsProblem, rng: &mut ChaCha8Rng, scale: f64) -> Iterate {
        Iterate::new(
            DVector::from_fn(p.d1(), |_, _| scale * normal(rng)),
            DVector::from_fn(p.d2(), |_, _| scale * normal(rng)),
        )
        .unwrap()
    }

    #[test]
    fn value_at_y_equals_ax_drops_first_term() {
        let p = tiny();
        for &x in &[0.0, 0.7, -2.0] {
            let xv = DVector::from_element(1, x);
            let y = &p.dataset.a * &xv;
            let it = Iterate::new(xv, y.clone()).unwrap();
            let expected = -p.dataset.lambda_reg * (&y - &p.dataset.y0).norm_squared();
            assert!((p.value(&it).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn tiny_g_star_closed_form() {
        // x_ls = 0.2, g* = (2.5/1.5) * 0.8 = 4/3.
        let p = tiny();
        assert!((p.x_least_squares()[0] - 0.2).abs() < 1e-12);
        assert!((p.g_star().unwrap() - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn grad_matches_central_differences() {
        let p = RlsProblem::generate(&DatasetSpec::Dataset1, 12, 5, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = 1e-6;
        for _ in 0..10 {
            let it = random_iterate(&p, &mut rng, 1.0);
            let (gx, gy) = p.grad(&it).unwrap();
            for k in 0..p.d1() {
                let mut plus = it.clone();
                let mut minus = it.clone();
                plus.x[k] += h;
                minus.x[k] -= h;
                let fd = (p.value(&plus).unwrap() - p.value(&minus).unwrap()) / (2.0 * h);
                assert!((fd - gx[k]).abs() / gx[k].abs().max(1.0) < 1e-6);
            }
            for k in 0..p.d2() {
                let mut plus = it.clone();
                let mut minus = it.clone();
                plus.y[k] += h;
                minus.y[k] -= h;
                let fd = (p.value(&plus).unwrap() - p.value(&minus).unwrap()) / (2.0 * h);
                assert!((fd - gy[k]).abs() / gy[k].abs().max(1.0) < 1e-6);
            }
        }
    }

    #[test]
    fn component_average_reproduces_full_gradient() {
        for spec in [DatasetSpec::Dataset1, DatasetSpec::dataset3()] {
            let p = RlsProblem::generate(&spec, 14, 6, 9).unwrap();
            let n = p.n_components();
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            for _ in 0..20 {
                let it = random_iterate(&p, &mut rng, 2.0);
                let (gx, gy) = p.grad(&it).unwrap();
                let mut sx = DVector::zeros(p.d1());
                let mut sy = DVector::zeros(p.d2());
                for i in 0..n {
                    let (cx, cy) = p.component_grad(i, &it).unwrap();
                    sx += cx;
                    sy += cy;
                }
                sx /= n as f64;
                sy /= n as f64;
                let rel_x = (&sx - &gx).norm() / gx.norm().max(1e-12);
                let rel_y = (&sy - &gy).norm() / gy.norm().max(1e-12);
                assert!(rel_x < 1e-10, "x rel err {rel_x}");
                assert!(rel_y < 1e-10, "y rel err {rel_y}");
            }
        }
    }

    #[test]
    fn component_index_out_of_range() {
        let p = tiny();
        let it = Iterate::zeros(1, 2);
        assert!(matches!(
            p.component_grad(2, &it),
            Err(Error::ComponentIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn best_response_is_a_maximizer() {
        let p = RlsProblem::generate(&DatasetSpec::dataset3(), 10, 4, 21).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..100 {
            let x = DVector::from_fn(p.d1(), |_, _| normal(&mut rng));
            let y_star = p.best_response_y(&x).unwrap();
            let f_star = p
                .value(&Iterate::new(x.clone(), y_star.clone()).unwrap())
                .unwrap();
            let delta = DVector::from_fn(p.d2(), |_, _| 0.5 * normal(&mut rng));
            let f_probe = p
                .value(&Iterate::new(x.clone(), &y_star + delta).unwrap())
                .unwrap();
            assert!(f_star >= f_probe - 1e-8);
        }
    }

    #[test]
    fn best_response_copies_null_space_component() {
        // C = [1, 0]: range(M) = span(e1); the e2 component of y* equals y0's.
        let ds = RlsDataset {
            a: DMatrix::from_row_slice(2, 1, &[1.0, -1.0]),
            y0: DVector::from_column_slice(&[0.3, -0.8]),
            c: DMatrix::from_row_slice(1, 2, &[1.0, 0.0]),
            lambda_reg: 2.0,
        };
        let p = RlsProblem::new(ds).unwrap();
        let x = DVector::from_element(1, 0.9);
        let y_star = p.best_response_y(&x).unwrap();
        assert_eq!(y_star[1], -0.8);
        // range component: y* = y0 - (Ax - y0)/(lambda-1) on e1.
        let expected = 0.3 - (0.9 - 0.3) / 1.0;
        assert!((y_star[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn g_matches_two_stage_grid_maximization() {
        let p = tiny();
        for &x in &[0.0, 0.5, -1.2] {
            let xv = DVector::from_element(1, x);
            let g = p.g_value(&xv).unwrap();
            // Coarse scan over y in [-6, 6]^2, then a refined scan around the
            // best cell; the objective is a concave quadratic in y.
            let mut best = f64::NEG_INFINITY;
            let mut arg = (0.0, 0.0);
            let coarse = 121;
            for i in 0..coarse {
                for j in 0..coarse {
                    let y1 = -6.0 + 12.0 * i as f64 / (coarse - 1) as f64;
                    let y2 = -6.0 + 12.0 * j as f64 / (coarse - 1) as f64;
                    let v = p
                        .value(&Iterate::from_slices(&[x], &[y1, y2]).unwrap())
                        .unwrap();
                    if v > best {
                        best = v;
                        arg = (y1, y2);
                    }
                }
            }
            let fine = 2001;
            for i in 0..fine {
                for j in 0..fine {
                    let y1 = arg.0 - 0.2 + 0.4 * i as f64 / (fine - 1) as f64;
                    let y2 = arg.1 - 0.2 + 0.4 * j as f64 / (fine - 1) as f64;
                    let v = p
                        .value(&Iterate::from_slices(&[x], &[y1, y2]).unwrap())
                        .unwrap();
                    best = best.max(v);
                }
            }
            assert!(
                (g - best).abs() < 1e-6,
                "g({x}) = {g} vs grid max {best}"
            );
        }
    }

    #[test]
    fn dataset_generation_is_deterministic() {
        for spec in [DatasetSpec::Dataset1, DatasetSpec::dataset3()] {
            let d1 = RlsDataset::generate(&spec, 30, 10, 42).unwrap();
            let d2 = RlsDataset::generate(&spec, 30, 10, 42).unwrap();
            assert_eq!(d1, d2);
            let d3 = RlsDataset::generate(&spec, 30, 10, 43).unwrap();
            assert_ne!(d1, d3);
        }
    }

    #[test]
    fn dataset1_shapes_and_constants() {
        let ds = RlsDataset::generate(&DatasetSpec::Dataset1, 25, 8, 0).unwrap();
        assert_eq!(ds.a.shape(), (25, 8));
        assert_eq!(ds.c, DMatrix::identity(25, 25));
        assert_eq!(ds.lambda_reg, 3.0);
        let p = RlsProblem::new(ds).unwrap();
        // M = I: mu2 = 2 (lambda - 1).
        assert!((p.analytic_mu2().unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn dataset3_rank_and_eigenvalues() {
        let ds = RlsDataset::generate(&DatasetSpec::dataset3(), 30, 10, 7).unwrap();
        assert_eq!(ds.c.nrows(), 24); // floor(0.8 * 30)
        let m = ds.c.transpose() * &ds.c;
        let eigs = m.symmetric_eigen().eigenvalues;
        let mut positive = 0;
        for &e in eigs.iter() {
            if e > 1e-8 {
                positive += 1;
                assert!(
                    (0.2 - 1e-8..=1.8 + 1e-8).contains(&e),
                    "eigenvalue {e} outside [0.2, 1.8]"
                );
            } else {
                assert!(e.abs() < 1e-8);
            }
        }
        assert_eq!(positive, 24);
    }

    #[test]
    fn dataset1_paper_dims_generate() {
        let ds = RlsDataset::generate(&DatasetSpec::Dataset1, 1000, 500, 1).unwrap();
        assert_eq!(ds.a.shape(), (1000, 500));
        assert_eq!(ds.y0.len(), 1000);
    }

    #[test]
    fn zero_dims_are_rejected() {
        assert!(RlsDataset::generate(&DatasetSpec::Dataset1, 0, 5, 0).is_err());
        assert!(RlsDataset::generate(&DatasetSpec::Dataset1, 5, 0, 0).is_err());
    }

    #[test]
    fn csv_export_reingests() {
        let dir = std::env::temp_dir().join(format!("rls_csv_test_{}", std::process::id()));
        let ds = RlsDataset::generate(&DatasetSpec::Dataset1, 8, 3, 5).unwrap();
        ds.write_csv_dir(&dir).unwrap();
        let back = RlsDataset::from_csv_dir(&dir).unwrap();
        assert_eq!(back.a, ds.a);
        assert_eq!(back.y0, ds.y0);
        // Ingestion convention: M = I, lambda = 2 regardless of origin.
        assert_eq!(back.c, DMatrix::identity(8, 8));
        assert_eq!(back.lambda_reg, 2.0);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn analytic_l_bounds_gradient_variation() {
        let p = RlsProblem::generate(&DatasetSpec::dataset3(), 12, 5, 2).unwrap();
        let l = p.analytic_l().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let it1 = random_iterate(&p, &mut rng, 2.0);
            let it2 = random_iterate(&p, &mut rng, 2.0);
            let (gx1, gy1) = p.grad(&it1).unwrap();
            let (gx2, gy2) = p.grad(&it2).unwrap();
            let denom = (&it1.x - &it2.x).norm() + (&it1.y - &it2.y).norm();
            assert!((&gx1 - &gx2).norm() <= l * denom * (1.0 + 1e-12));
            assert!((&gy1 - &gy2).norm() <= l * denom * (1.0 + 1e-12));
        }
    }

    #[test]
    fn lambda_at_most_one_is_rejected() {
        let ds = RlsDataset {
            a: DMatrix::identity(2, 2),
            y0: DVector::zeros(2),
            c: DMatrix::identity(2, 2),
            lambda_reg: 1.0,
        };
        assert!(RlsProblem::new(ds).is_err());
    }
}
