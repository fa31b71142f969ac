use nalgebra::{DMatrix, DVector};

use super::{log_det_psd, loglik_from_log_det};
use crate::error::{Error, Result};

/// Relative pivot below which the cross-product matrix counts as singular.
const RANK_TOL: f64 = 1e-10;

/// Single-equation least-squares fit.
#[derive(Debug, Clone)]
pub struct OlsFit {
    pub coefficients: DVector<f64>,
    pub residuals: DVector<f64>,
    /// `SSR / (n - m)`.
    pub sigma2: f64,
    pub std_errors: DVector<f64>,
    pub t_ratios: DVector<f64>,
    pub n: usize,
    pub m: usize,
    /// `(X'X)^-1`.
    xtx_inv: DMatrix<f64>,
}

impl OlsFit {
    pub fn ssr(&self) -> f64 {
        self.residuals.norm_squared()
    }

    pub fn df(&self) -> usize {
        self.n - self.m
    }

    /// `sigma2 * (X'X)^-1`.
    pub fn coef_covariance(&self) -> DMatrix<f64> {
        &self.xtx_inv * self.sigma2
    }

    pub fn xtx_inv(&self) -> &DMatrix<f64> {
        &self.xtx_inv
    }
}

/// Multi-equation fit with a common regressor matrix.
#[derive(Debug, Clone)]
pub struct MultiOlsFit {
    /// `m x k`, one column per equation.
    pub coefficients: DMatrix<f64>,
    /// `T x k`.
    pub residuals: DMatrix<f64>,
    /// `E'E / T`.
    pub sigma: DMatrix<f64>,
    /// Positive infinity when `sigma` is singular (an exact fit).
    pub loglik: f64,
}

/// Column-equilibrated QR of the regressor matrix, shared by every equation
/// that uses it.
pub(crate) struct Projector {
    q: DMatrix<f64>,
    r: DMatrix<f64>,
    scale: DVector<f64>,
}

impl Projector {
    pub(crate) fn new(x: &DMatrix<f64>) -> Result<Self> {
        let (t, m) = x.shape();
        if m == 0 {
            return Err(Error::Shape("regressor matrix has no columns".into()));
        }
        if t <= m {
            return Err(Error::Length(format!("{t} observations for {m} regressors")));
        }
        let scale = DVector::from_iterator(m, x.column_iter().map(|c| c.norm()));
        if scale.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::RankDeficient { pivot: 0.0 });
        }
        let mut xs = x.clone();
        for (j, mut col) in xs.column_iter_mut().enumerate() {
            col /= scale[j];
        }
        let qr = xs.qr();
        let r = qr.r();
        // pivots of the equilibrated cross-product X'X are r_ii^2
        let max_pivot = r.diagonal().iter().fold(0.0f64, |a, v| a.max(v * v));
        for i in 0..m {
            let pivot = r[(i, i)].powi(2) / max_pivot;
            if pivot.is_nan() || pivot <= RANK_TOL {
                return Err(Error::RankDeficient { pivot });
            }
        }
        Ok(Projector { q: qr.q(), r, scale })
    }

    pub(crate) fn coefficients(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        let qty = self.q.transpose() * y;
        let mut b = self
            .r
            .solve_upper_triangular(&qty)
            .expect("pivots checked at construction");
        for (i, mut row) in b.row_iter_mut().enumerate() {
            row /= self.scale[i];
        }
        b
    }

    pub(crate) fn xtx_inv(&self) -> DMatrix<f64> {
        let m = self.r.nrows();
        let r_inv = self
            .r
            .solve_upper_triangular(&DMatrix::identity(m, m))
            .expect("pivots checked at construction");
        let mut inv = &r_inv * r_inv.transpose();
        for i in 0..m {
            for j in 0..m {
                inv[(i, j)] /= self.scale[i] * self.scale[j];
            }
        }
        inv
    }
}

/// Ordinary least squares of `y` on the columns of `x`.
pub fn ols(y: &DVector<f64>, x: &DMatrix<f64>) -> Result<OlsFit> {
    if y.len() != x.nrows() {
        return Err(Error::Shape(format!("y has {} rows, X has {}", y.len(), x.nrows())));
    }
    let proj = Projector::new(x)?;
    let (n, m) = x.shape();
    let ymat = DMatrix::from_column_slice(n, 1, y.as_slice());
    let coefficients: DVector<f64> = proj.coefficients(&ymat).column(0).into_owned();
    let residuals = y - x * &coefficients;
    let sigma2 = residuals.norm_squared() / (n - m) as f64;
    let xtx_inv = proj.xtx_inv();
    let std_errors = DVector::from_iterator(m, (0..m).map(|i| (sigma2 * xtx_inv[(i, i)]).sqrt()));
    let t_ratios = coefficients.component_div(&std_errors);
    Ok(OlsFit {
        coefficients,
        residuals,
        sigma2,
        std_errors,
        t_ratios,
        n,
        m,
        xtx_inv,
    })
}

/// Equation-by-equation least squares of every column of `y` on `x`.
pub fn multivar_ols(y: &DMatrix<f64>, x: &DMatrix<f64>) -> Result<MultiOlsFit> {
    if y.nrows() != x.nrows() {
        return Err(Error::Shape(format!("Y has {} rows, X has {}", y.nrows(), x.nrows())));
    }
    if y.ncols() == 0 {
        return Err(Error::Shape("Y has no columns".into()));
    }
    let proj = Projector::new(x)?;
    Ok(multi_from_projector(&proj, y, x))
}

pub(crate) fn multi_from_projector(proj: &Projector, y: &DMatrix<f64>, x: &DMatrix<f64>) -> MultiOlsFit {
    let coefficients = proj.coefficients(y);
    let residuals = y - x * &coefficients;
    let (t, k) = y.shape();
    let sigma = mle_covariance(&residuals);
    let loglik = match log_det_psd(&sigma) {
        Ok(ld) => loglik_from_log_det(t, k, ld),
        Err(_) => f64::INFINITY,
    };
    MultiOlsFit {
        coefficients,
        residuals,
        sigma,
        loglik,
    }
}

/// `E'E / T`, exactly symmetric.
pub(crate) fn mle_covariance(e: &DMatrix<f64>) -> DMatrix<f64> {
    let s = e.transpose() * e / e.nrows() as f64;
    (&s + s.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numstat::gaussian_loglik;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn exact_fit() {
        let fit = ols(&DVector::from_vec(vec![1.0, 2.0, 3.0]), &DMatrix::from_column_slice(3, 1, &[1.0, 2.0, 3.0])).unwrap();
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-14);
        assert!(fit.residuals.amax() < 1e-14);
    }

    #[test]
    fn mean_fit() {
        let fit = ols(&DVector::from_vec(vec![1.0, 2.0, 2.0]), &DMatrix::from_element(3, 1, 1.0)).unwrap();
        assert!((fit.coefficients[0] - 5.0 / 3.0).abs() < 1e-14);
        assert_eq!(fit.df(), 2);
    }

    #[test]
    fn hand_normal_equations() {
        let rows = [[1.0, 0.0], [1.0, 1.0], [1.0, 2.0], [1.0, 3.0]];
        let yv = [0.0, 1.0, 1.0, 2.0];
        // normal equations accumulated by hand, solved by Cramer's rule
        let mut xtx = [[0.0f64; 2]; 2];
        let mut xty = [0.0f64; 2];
        for (r, y) in rows.iter().zip(yv) {
            for i in 0..2 {
                xty[i] += r[i] * y;
                for j in 0..2 {
                    xtx[i][j] += r[i] * r[j];
                }
            }
        }
        assert_eq!(xtx, [[4.0, 6.0], [6.0, 14.0]]);
        assert_eq!(xty, [4.0, 9.0]);
        let det = xtx[0][0] * xtx[1][1] - xtx[0][1] * xtx[1][0];
        let oracle = [
            (xtx[1][1] * xty[0] - xtx[0][1] * xty[1]) / det,
            (xtx[0][0] * xty[1] - xtx[1][0] * xty[0]) / det,
        ];
        assert!((oracle[0] - 0.1).abs() < 1e-12 && (oracle[1] - 0.6).abs() < 1e-12);

        let x = DMatrix::from_fn(4, 2, |i, j| rows[i][j]);
        let fit = ols(&DVector::from_row_slice(&yv), &x).unwrap();
        assert!((fit.coefficients[0] - oracle[0]).abs() < 1e-10);
        assert!((fit.coefficients[1] - oracle[1]).abs() < 1e-10);
    }

    #[test]
    fn shape_and_rank_errors() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0]);
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(ols(&y, &x), Err(Error::RankDeficient { .. })));
        assert!(matches!(ols(&DVector::zeros(3), &x), Err(Error::Shape(_))));
        assert!(matches!(ols(&y, &DMatrix::from_element(4, 4, 1.0)), Err(Error::Length(_))));
    }

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
        DMatrix::from_fn(r, c, |_, _| StandardNormal.sample(rng))
    }

    #[test]
    fn multivar_noiseless_and_per_column() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = random_matrix(&mut rng, 20, 3);
        let b0 = DMatrix::from_row_slice(3, 2, &[0.5, -1.0, 2.0, 0.25, -0.75, 1.5]);
        let exact = multivar_ols(&(&x * &b0), &x).unwrap();
        assert!((&exact.coefficients - &b0).amax() < 1e-10);
        assert!(exact.sigma.amax() < 1e-20);

        let y = random_matrix(&mut rng, 20, 2);
        let fit = multivar_ols(&y, &x).unwrap();
        for j in 0..2 {
            let single = ols(&y.column(j).into_owned(), &x).unwrap();
            for i in 0..3 {
                assert!((fit.coefficients[(i, j)] - single.coefficients[i]).abs() < 1e-12);
            }
        }
        let l = gaussian_loglik(20, 2, &fit.sigma).unwrap();
        assert!((l - fit.loglik).abs() < 1e-8);

        let y1 = y.columns(0, 1).into_owned();
        let one = multivar_ols(&y1, &x).unwrap();
        let single = ols(&y.column(0).into_owned(), &x).unwrap();
        assert_eq!(one.coefficients.column(0), single.coefficients.column(0));
    }

    proptest! {
        #[test]
        fn residuals_are_orthogonal_to_regressors(seed in 0u64..500, n in 8usize..60, m in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_matrix(&mut rng, n, m).map(|v| v * 3.0 + 1.0);
            let y = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
            let fit = ols(&y, &x).unwrap();
            let xe = x.transpose() * &fit.residuals;
            let scale = x.norm() * y.norm();
            prop_assert!(xe.amax() <= 1e-8 * scale);
            for i in 0..m {
                prop_assert!((fit.t_ratios[i] - fit.coefficients[i] / fit.std_errors[i]).abs() < 1e-12 * (1.0 + fit.t_ratios[i].abs()));
            }
        }
    }
}
