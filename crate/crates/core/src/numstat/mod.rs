//! Numerical kernels shared by every test: least squares, Gaussian
//! likelihood, determinants, eigen solvers and the chi-square distribution.

mod dist;
mod linalg;
pub(crate) mod ols;

pub use dist::{chi_square_cdf, chi_square_survival, gamma_survival, ln_gamma, regularized_gamma_p, regularized_gamma_q};
pub(crate) use dist::{std_normal_cdf, std_normal_quantile};
pub use linalg::{eigenvalues, gen_eig_sym, log_det_psd, spd_inverse, GenEigen};
pub use ols::{multivar_ols, ols, MultiOlsFit, OlsFit};

use nalgebra::DMatrix;

use crate::error::Result;

/// `ln(2*pi)`.
pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Gaussian log-likelihood of a `k`-variate sample of size `t` with MLE
/// residual covariance `sigma`:
/// `-(t*k/2)(1 + ln 2pi) - (t/2) ln|sigma|`.
pub fn gaussian_loglik(t: usize, k: usize, sigma: &DMatrix<f64>) -> Result<f64> {
    let ld = log_det_psd(sigma)?;
    Ok(loglik_from_log_det(t, k, ld))
}

pub(crate) fn loglik_from_log_det(t: usize, k: usize, log_det: f64) -> f64 {
    let (t, k) = (t as f64, k as f64);
    -(t * k / 2.0) * (1.0 + LN_2PI) - (t / 2.0) * log_det
}

/// Inverts [`gaussian_loglik`]: recovers `ln|sigma|` from a log-likelihood.
pub fn log_det_from_loglik(loglik: f64, t: usize, k: usize) -> f64 {
    -2.0 * loglik / t as f64 - k as f64 * (1.0 + LN_2PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn loglik_closed_form() {
        let l = gaussian_loglik(1, 1, &DMatrix::from_element(1, 1, 1.0)).unwrap();
        assert!((l + 1.418_938_533_204_672_7).abs() < 1e-12);
    }

    #[test]
    fn loglik_lag_table_anchors() {
        // ln|Sigma| values recovered from the printed LogL column of a
        // reference lag-selection table (T=149, k=3).
        assert!((loglik_from_log_det(149, 3, 29.8696) + 2859.55).abs() < 0.01);
        assert!((loglik_from_log_det(149, 3, 36.6372) + 3363.74).abs() < 0.01);
    }

    #[test]
    fn loglik_rejects_indefinite() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(gaussian_loglik(10, 2, &s).is_err());
    }

    proptest! {
        #[test]
        fn loglik_round_trip(t in 5usize..500, a in 0.1f64..10.0, b in 0.1f64..10.0, c in -0.9f64..0.9) {
            let off = c * (a * b).sqrt();
            let s = DMatrix::from_row_slice(2, 2, &[a, off, off, b]);
            let l = gaussian_loglik(t, 2, &s).unwrap();
            let ld = log_det_psd(&s).unwrap();
            prop_assert!((log_det_from_loglik(l, t, 2) - ld).abs() < 1e-10);
        }
    }
}
