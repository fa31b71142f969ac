use nalgebra::DMatrix;
use serde::Serialize;

use super::VarFit;
use crate::error::{Error, Result};
use crate::numstat::ols::{mle_covariance, Projector};
use crate::numstat::{chi_square_survival, spd_inverse};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LmResult {
    pub lag: usize,
    pub statistic: f64,
    /// Always `k^2`.
    pub df: u32,
    pub p_value: f64,
}

/// LM test for residual autocorrelation at lag `h`.
///
/// Residuals are regressed on the VAR's own regressors plus their `h`-th lag
/// (zero before the sample); `LM = T (k - tr(S_u^-1 S_e))` with `S_u` the
/// VAR residual covariance and `S_e` the auxiliary one.
pub fn residual_lm(fit: &VarFit, h: usize) -> Result<LmResult> {
    if h == 0 {
        return Err(Error::Domain("LM test lag must be at least 1".into()));
    }
    let (t, k, m) = (fit.t_eff, fit.k, fit.m);
    if t <= m + k + 1 || h >= t {
        return Err(Error::Length(format!(
            "LM test at lag {h} needs more than {} residuals, got {t}",
            (m + k + 1).max(h)
        )));
    }
    let u = &fit.residuals;
    let mut aux = DMatrix::zeros(t, m + k);
    aux.columns_mut(0, m).copy_from(&fit.regressors);
    for r in h..t {
        for j in 0..k {
            aux[(r, m + j)] = u[(r - h, j)];
        }
    }
    let proj = Projector::new(&aux)?;
    let b = proj.coefficients(u);
    let e = u - &aux * b;
    let sigma_e = mle_covariance(&e);
    let sigma_u_inv = spd_inverse(&fit.sigma)?;
    let statistic = t as f64 * (k as f64 - (sigma_u_inv * sigma_e).trace());
    let df = (k * k) as u32;
    let p_value = chi_square_survival(statistic.max(0.0), df)?;
    Ok(LmResult {
        lag: h,
        statistic,
        df,
        p_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Dataset, Period};
    use crate::varmodel::fit_var;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn ds(data: DMatrix<f64>) -> Dataset {
        let names = (0..data.ncols()).map(|j| format!("y{j}")).collect();
        Dataset::new(names, Period::new(2000, 1).unwrap(), data).unwrap()
    }

    #[test]
    fn white_noise_residuals_rarely_reject() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let data = DMatrix::from_fn(300, 3, |_, _| StandardNormal.sample(&mut rng));
        let fit = fit_var(&ds(data), 1, true).unwrap();
        let mut rejections = 0;
        for h in 1..=12 {
            let r = residual_lm(&fit, h).unwrap();
            assert_eq!(r.df, 9);
            assert!(r.statistic >= -1e-9);
            if r.p_value < 0.05 {
                rejections += 1;
            }
        }
        assert!(rejections <= 4, "{rejections} of 12 rejected");
    }

    #[test]
    fn autocorrelated_residuals_reject() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let mut data = DMatrix::zeros(300, 2);
        for t in 1..300 {
            for j in 0..2 {
                let e: f64 = StandardNormal.sample(&mut rng);
                data[(t, j)] = 0.6 * data[(t - 1, j)] + e;
            }
        }
        // a VAR(0) leaves the AR(1) dynamics in the residuals
        let fit = fit_var(&ds(data), 0, true).unwrap();
        let r = residual_lm(&fit, 1).unwrap();
        assert_eq!(r.df, 4);
        assert!(r.p_value < 0.01, "p = {}", r.p_value);
    }

    #[test]
    fn reference_statistic_maps_to_reference_probability() {
        let p = chi_square_survival(9.5480, 3 * 3).unwrap();
        assert!((p - 0.3883).abs() < 5e-4);
    }

    #[test]
    fn lag_zero_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let data = DMatrix::from_fn(50, 2, |_, _| StandardNormal.sample(&mut rng));
        let fit = fit_var(&ds(data), 1, true).unwrap();
        assert!(residual_lm(&fit, 0).is_err());
    }
}
