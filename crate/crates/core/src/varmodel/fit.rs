use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numstat::ols::{multi_from_projector, Projector};
use crate::series::Dataset;

/// An estimated VAR(p).
///
/// Regressor order within each equation is `[1?, y_{t-1}, ..., y_{t-p}]`,
/// each lag block holding all `k` variables in dataset order.
#[derive(Debug, Clone, Serialize)]
pub struct VarFit {
    pub names: Vec<String>,
    pub k: usize,
    pub p: usize,
    pub intercept: bool,
    /// `A_1..A_p`; entry `(i, j)` of `A_l` is the effect of variable `j` at
    /// lag `l` on equation `i`.
    #[serde(skip)]
    pub lag_matrices: Vec<DMatrix<f64>>,
    #[serde(skip)]
    pub constant: DVector<f64>,
    /// `T_eff x k`.
    #[serde(skip)]
    pub residuals: DMatrix<f64>,
    /// `E'E / T_eff`.
    #[serde(skip)]
    pub sigma: DMatrix<f64>,
    /// Positive infinity for an exact fit.
    pub loglik: f64,
    pub t_eff: usize,
    /// Regressors per equation, `k*p + intercept`.
    pub m: usize,
    #[serde(skip)]
    pub(crate) regressors: DMatrix<f64>,
    #[serde(skip)]
    pub(crate) xtx_inv: DMatrix<f64>,
}

impl VarFit {
    /// Position of `variable` at `lag` in an equation's regressor vector.
    pub fn regressor_index(&self, lag: usize, variable: usize) -> usize {
        debug_assert!(lag >= 1 && lag <= self.p && variable < self.k);
        usize::from(self.intercept) + (lag - 1) * self.k + variable
    }

    /// Coefficient vector of equation `eq` in regressor order.
    pub fn equation_coefficients(&self, eq: usize) -> DVector<f64> {
        let mut b = Vec::with_capacity(self.m);
        if self.intercept {
            b.push(self.constant[eq]);
        }
        for a in &self.lag_matrices {
            b.extend(a.row(eq).iter());
        }
        DVector::from_vec(b)
    }

    /// Coefficient covariance of equation `eq` with the unbiased residual
    /// variance `e'e / (T_eff - m)`.
    pub fn equation_covariance(&self, eq: usize) -> DMatrix<f64> {
        let s2 = self.residuals.column(eq).norm_squared() / (self.t_eff - self.m) as f64;
        &self.xtx_inv * s2
    }

    /// The `T_eff x m` regressor matrix.
    pub fn regressors(&self) -> &DMatrix<f64> {
        &self.regressors
    }
}

/// Rows `first..T` of the VAR(p) design: lagged levels plus an optional
/// intercept, and the matching responses.
pub(crate) fn design(data: &DMatrix<f64>, p: usize, intercept: bool, first: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let (t, k) = data.shape();
    let rows = t - first;
    let off = usize::from(intercept);
    let x = DMatrix::from_fn(rows, off + k * p, |r, c| {
        if c < off {
            1.0
        } else {
            let lag = (c - off) / k + 1;
            let var = (c - off) % k;
            data[(first + r - lag, var)]
        }
    });
    let y = data.rows(first, rows).into_owned();
    (y, x)
}

pub(crate) fn fit_window(ds: &Dataset, p: usize, intercept: bool, first: usize) -> Result<VarFit> {
    let data = ds.data();
    let (t, k) = data.shape();
    let m = k * p + usize::from(intercept);
    if first < p || t <= first || t - first < m + 6 {
        return Err(Error::Length(format!(
            "VAR({p}) with {k} variables needs more than {} observations after lags, got {}",
            m + 5,
            t.saturating_sub(first)
        )));
    }
    let (y, x) = design(data, p, intercept, first);
    let t_eff = y.nrows();

    let (coef, residuals, sigma, loglik, xtx_inv) = if m == 0 {
        let sigma = crate::numstat::ols::mle_covariance(&y);
        let loglik = crate::numstat::log_det_psd(&sigma)
            .map(|ld| crate::numstat::loglik_from_log_det(t_eff, k, ld))
            .unwrap_or(f64::INFINITY);
        (DMatrix::zeros(0, k), y.clone(), sigma, loglik, DMatrix::zeros(0, 0))
    } else {
        let proj = Projector::new(&x)?;
        let fit = multi_from_projector(&proj, &y, &x);
        (fit.coefficients, fit.residuals, fit.sigma, fit.loglik, proj.xtx_inv())
    };

    let off = usize::from(intercept);
    let constant = if intercept {
        coef.row(0).transpose()
    } else {
        DVector::zeros(k)
    };
    let lag_matrices = (0..p)
        .map(|l| DMatrix::from_fn(k, k, |i, j| coef[(off + l * k + j, i)]))
        .collect();

    Ok(VarFit {
        names: ds.names().to_vec(),
        k,
        p,
        intercept,
        lag_matrices,
        constant,
        residuals,
        sigma,
        loglik,
        t_eff,
        m,
        regressors: x,
        xtx_inv,
    })
}

/// Fits a VAR(p) by equation-wise least squares over `t = p+1..T`.
pub fn fit_var(ds: &Dataset, p: usize, intercept: bool) -> Result<VarFit> {
    fit_window(ds, p, intercept, p)
}
