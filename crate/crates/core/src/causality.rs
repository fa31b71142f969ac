//! Toda-Yamamoto causality: a levels VAR augmented by `d_max` extra lags and
//! a Wald test on the first `p` lags of the candidate cause.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::numstat::{chi_square_survival, spd_inverse};
use crate::series::Dataset;
use crate::varmodel::{fit_var, VarFit};

/// Which lags of the cause are restricted to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RestrictionMode {
    /// Lags `1..=p`; the augmentation lags stay free.
    #[default]
    FirstP,
    /// Lags `1..=p + d_max`.
    AllLags,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TyResult {
    pub target: String,
    pub cause: String,
    pub p: usize,
    pub d_max: usize,
    pub mode: RestrictionMode,
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
}

const EXACT_FIT_TOL: f64 = 1e-10;
const ZERO_COEF_TOL: f64 = 1e-8;

/// `W = b_R' V_RR^-1 b_R` for zero restrictions on the listed coefficients of
/// one equation, using that equation's unbiased coefficient covariance.
pub fn wald_linear_restriction(fit: &VarFit, equation: usize, restricted: &[usize]) -> Result<(f64, u32)> {
    if equation >= fit.k {
        return Err(Error::Index(format!("equation {equation} of a {}-variable VAR", fit.k)));
    }
    if restricted.is_empty() {
        return Err(Error::Index("empty restriction set".into()));
    }
    if let Some(&bad) = restricted.iter().find(|&&i| i >= fit.m) {
        return Err(Error::Index(format!("coefficient {bad} of {} per equation", fit.m)));
    }
    let mut sorted = restricted.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != restricted.len() {
        return Err(Error::Index("repeated coefficient index".into()));
    }

    let b = fit.equation_coefficients(equation);
    let n = restricted.len();
    let b_r = DVector::from_iterator(n, restricted.iter().map(|&i| b[i]));

    // exact fit: the covariance is zero up to rounding
    let fitted = (fit.regressors() * &b).norm();
    if fit.residuals.column(equation).norm() <= EXACT_FIT_TOL * fitted {
        return if b_r.amax() <= ZERO_COEF_TOL * b.amax() {
            Ok((0.0, n as u32))
        } else {
            Err(Error::SingularCovariance)
        };
    }

    let v = fit.equation_covariance(equation);
    let v_rr = DMatrix::from_fn(n, n, |i, j| v[(restricted[i], restricted[j])]);
    let v_inv = spd_inverse(&v_rr).map_err(|_| Error::SingularCovariance)?;
    let w = (b_r.transpose() * v_inv * &b_r)[(0, 0)];
    Ok((w.max(0.0), n as u32))
}

/// Regressor positions tested for `cause` under `mode`.
pub fn restricted_indices(fit: &VarFit, cause: usize, p: usize, mode: RestrictionMode) -> Vec<usize> {
    let last = match mode {
        RestrictionMode::FirstP => p,
        RestrictionMode::AllLags => fit.p,
    };
    (1..=last).map(|lag| fit.regressor_index(lag, cause)).collect()
}

fn check_pair(ds: &Dataset, target: usize, cause: usize) -> Result<()> {
    let k = ds.nvars();
    if target >= k || cause >= k {
        return Err(Error::Index(format!("variable index out of range for {k} variables")));
    }
    if target == cause {
        return Err(Error::Index("target and cause must differ".into()));
    }
    Ok(())
}

fn test_pair(fit: &VarFit, target: usize, cause: usize, p: usize, d_max: usize, mode: RestrictionMode) -> Result<TyResult> {
    let idx = restricted_indices(fit, cause, p, mode);
    let (statistic, df) = wald_linear_restriction(fit, target, &idx)?;
    Ok(TyResult {
        target: fit.names[target].clone(),
        cause: fit.names[cause].clone(),
        p,
        d_max,
        mode,
        statistic,
        df,
        p_value: chi_square_survival(statistic, df)?,
    })
}

/// Does `cause` help predict `target`? Fits a VAR(p + d_max) with intercept
/// on the levels in `ds`.
pub fn toda_yamamoto(
    ds: &Dataset,
    target: usize,
    cause: usize,
    p: usize,
    d_max: usize,
    mode: RestrictionMode,
) -> Result<TyResult> {
    check_pair(ds, target, cause)?;
    if p == 0 {
        return Err(Error::Domain("Toda-Yamamoto needs p >= 1".into()));
    }
    let fit = fit_var(ds, p + d_max, true)?;
    test_pair(&fit, target, cause, p, d_max, mode)
}

/// Every ordered `(target, cause)` pair over one shared augmented fit,
/// ordered by target then cause.
pub fn toda_yamamoto_all_pairs(
    ds: &Dataset,
    p: usize,
    d_max: usize,
    mode: RestrictionMode,
    exec: Execution,
) -> Result<Vec<TyResult>> {
    if p == 0 {
        return Err(Error::Domain("Toda-Yamamoto needs p >= 1".into()));
    }
    let k = ds.nvars();
    let fit = fit_var(ds, p + d_max, true)?;
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|t| (0..k).filter(move |&c| c != t).map(move |c| (t, c)))
        .collect();
    map_indexed(pairs.len(), exec, |i| {
        let (t, c) = pairs[i];
        test_pair(&fit, t, c, p, d_max, mode)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numstat::ols;
    use crate::series::Period;
    use crate::varmodel::fit_var;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn ds(data: DMatrix<f64>) -> Dataset {
        let names = (0..data.ncols()).map(|j| format!("y{j}")).collect();
        Dataset::new(names, Period::new(2000, 1).unwrap(), data).unwrap()
    }

    /// x is a random walk; y_t = 0.5 y_{t-1} + c x_{t-1} + e_t.
    fn causal(seed: u64, t: usize, c: f64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = DMatrix::zeros(t, 2);
        for r in 1..t {
            let (ex, ey): (f64, f64) = (StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
            data[(r, 0)] = data[(r - 1, 0)] + ex;
            data[(r, 1)] = 0.5 * data[(r - 1, 1)] + c * data[(r - 1, 0)] + ey;
        }
        data
    }

    #[test]
    fn detects_strong_causality() {
        let d = ds(causal(41, 300, 0.8));
        let r = toda_yamamoto(&d, 1, 0, 1, 1, RestrictionMode::FirstP).unwrap();
        assert!(r.p_value < 0.01);
        assert_eq!(r.df, 1);
        assert_eq!((r.target.as_str(), r.cause.as_str()), ("y1", "y0"));
        let all = toda_yamamoto(&d, 1, 0, 1, 1, RestrictionMode::AllLags).unwrap();
        assert_eq!(all.df, 2);
    }

    #[test]
    fn exact_zero_restrictions_give_zero_statistic() {
        // y1 follows its own noiseless recursion; y0 never enters it
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut data = DMatrix::zeros(60, 2);
        data[(0, 1)] = 5.0;
        data[(1, 1)] = -3.0;
        for r in 2..60 {
            let e: f64 = StandardNormal.sample(&mut rng);
            data[(r, 0)] = 0.3 * data[(r - 1, 0)] + e;
            data[(r, 1)] = 0.9 * data[(r - 1, 1)] - 0.5 * data[(r - 2, 1)] + 1.0;
        }
        let fit = fit_var(&ds(data), 2, true).unwrap();
        let idx = restricted_indices(&fit, 0, 2, RestrictionMode::FirstP);
        // residuals vanish, so the covariance is singular or W is ~0
        match wald_linear_restriction(&fit, 1, &idx) {
            Ok((w, df)) => {
                assert_eq!(df, 2);
                assert!(w < 1e-8, "{w}");
            }
            Err(e) => assert_eq!(e, Error::SingularCovariance),
        }
    }

    #[test]
    fn single_restriction_is_squared_t_ratio() {
        let data = causal(43, 120, 0.3);
        let fit = fit_var(&ds(data.clone()), 2, true).unwrap();
        let y = DVector::from_iterator(118, (2..120).map(|r| data[(r, 1)]));
        let x = fit.regressors().clone();
        let single = ols(&y, &x).unwrap();
        for idx in 0..fit.m {
            let (w, df) = wald_linear_restriction(&fit, 1, &[idx]).unwrap();
            assert_eq!(df, 1);
            assert!((w - single.t_ratios[idx].powi(2)).abs() < 1e-10 * (1.0 + w));
        }
    }

    #[test]
    fn two_restrictions_match_hand_block_inverse() {
        let data = DMatrix::from_row_slice(
            10,
            2,
            &[
                1.0, 2.0, 1.5, 2.4, 0.9, 3.1, 2.2, 2.7, 2.8, 3.9, 2.1, 4.4, 3.3, 4.0, 3.9, 5.2, 3.4, 5.9, 4.6, 5.5,
            ],
        );
        let fit = fit_var(&ds(data.clone()), 1, true).unwrap();

        // oracle for equation 0: regressors [1, y0_{t-1}, y1_{t-1}]
        let rows: Vec<[f64; 3]> = (1..10).map(|t| [1.0, data[(t - 1, 0)], data[(t - 1, 1)]]).collect();
        let ys: Vec<f64> = (1..10).map(|t| data[(t, 0)]).collect();
        let mut g = [[0.0; 3]; 3];
        let mut h = [0.0; 3];
        for (r, y) in rows.iter().zip(&ys) {
            for i in 0..3 {
                h[i] += r[i] * y;
                for j in 0..3 {
                    g[i][j] += r[i] * r[j];
                }
            }
        }
        let det3 = |m: &[[f64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let d = det3(&g);
        let mut b = [0.0; 3];
        for c in 0..3 {
            let mut m = g;
            for r in 0..3 {
                m[r][c] = h[r];
            }
            b[c] = det3(&m) / d;
        }
        let ssr: f64 = rows
            .iter()
            .zip(&ys)
            .map(|(r, y)| (y - b[0] * r[0] - b[1] * r[1] - b[2] * r[2]).powi(2))
            .sum();
        let s2 = ssr / (9.0 - 3.0);
        // (X'X)^-1 entries for indices 1,2 via cofactors
        let inv = |i: usize, j: usize| {
            let minor = |a: usize, bb: usize| {
                let rs: Vec<usize> = (0..3).filter(|&x| x != a).collect();
                let cs: Vec<usize> = (0..3).filter(|&x| x != bb).collect();
                g[rs[0]][cs[0]] * g[rs[1]][cs[1]] - g[rs[0]][cs[1]] * g[rs[1]][cs[0]]
            };
            let sign = if (i + j).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * minor(j, i) / d
        };
        let v = [[s2 * inv(1, 1), s2 * inv(1, 2)], [s2 * inv(2, 1), s2 * inv(2, 2)]];
        let dv = v[0][0] * v[1][1] - v[0][1] * v[1][0];
        let vi = [[v[1][1] / dv, -v[0][1] / dv], [-v[1][0] / dv, v[0][0] / dv]];
        let (b1, b2) = (b[1], b[2]);
        let oracle = b1 * (vi[0][0] * b1 + vi[0][1] * b2) + b2 * (vi[1][0] * b1 + vi[1][1] * b2);

        let (w, df) = wald_linear_restriction(&fit, 0, &[1, 2]).unwrap();
        assert_eq!(df, 2);
        assert!((w - oracle).abs() < 1e-8 * (1.0 + oracle), "{w} vs {oracle}");
    }

    #[test]
    fn index_errors() {
        let d = ds(causal(44, 80, 0.0));
        assert!(matches!(toda_yamamoto(&d, 0, 0, 1, 1, RestrictionMode::FirstP), Err(Error::Index(_))));
        assert!(matches!(toda_yamamoto(&d, 2, 0, 1, 1, RestrictionMode::FirstP), Err(Error::Index(_))));
        let fit = fit_var(&d, 2, true).unwrap();
        assert!(matches!(wald_linear_restriction(&fit, 0, &[5]), Err(Error::Index(_))));
        assert!(matches!(wald_linear_restriction(&fit, 0, &[]), Err(Error::Index(_))));
    }

    #[test]
    fn reference_statistics_map_with_four_restrictions() {
        assert!((chi_square_survival(3.2017, 4).unwrap() - 0.5246).abs() < 5e-4);
        assert!((chi_square_survival(3.9824, 4).unwrap() - 0.4084).abs() < 5e-4);
    }

    #[test]
    fn all_pairs_matches_single_calls() {
        let mut data = causal(45, 150, 0.2);
        data = data.insert_column(2, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        for r in 1..150 {
            let e: f64 = StandardNormal.sample(&mut rng);
            data[(r, 2)] = data[(r - 1, 2)] + e;
        }
        let d = ds(data);
        let all = toda_yamamoto_all_pairs(&d, 2, 1, RestrictionMode::FirstP, Execution::Parallel).unwrap();
        assert_eq!(all.len(), 6);
        let one = toda_yamamoto(&d, 2, 1, 2, 1, RestrictionMode::FirstP).unwrap();
        assert_eq!(all[5], one);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn wald_properties(seed in 0u64..1000, scale in 0.01f64..100.0, p in 1usize..3, d_max in 0usize..3, all in any::<bool>()) {
            let mode = if all { RestrictionMode::AllLags } else { RestrictionMode::FirstP };
            let data = causal(seed, 100, 0.1);
            let r = toda_yamamoto(&ds(data.clone()), 1, 0, p, d_max, mode).unwrap();
            prop_assert!(r.statistic >= 0.0);
            let expected_df = if all { p + d_max } else { p };
            prop_assert_eq!(r.df as usize, expected_df);
            prop_assert_eq!(r.p_value, chi_square_survival(r.statistic, r.df).unwrap());

            let fit = fit_var(&ds(data.clone()), p + d_max, true).unwrap();
            let idx = restricted_indices(&fit, 0, p, mode);
            let aug: Vec<usize> = (p + 1..=p + d_max).map(|l| fit.regressor_index(l, 0)).collect();
            if !all {
                prop_assert!(idx.iter().all(|i| !aug.contains(i)));
            }

            let mut scaled = data;
            scaled.column_mut(0).scale_mut(scale);
            let s = toda_yamamoto(&ds(scaled), 1, 0, p, d_max, mode).unwrap();
            prop_assert!((s.statistic - r.statistic).abs() < 1e-8 * (1.0 + r.statistic));
        }
    }
}
