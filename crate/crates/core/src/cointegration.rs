//! Johansen trace test for the cointegration rank.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numstat::ols::Projector;
use crate::numstat::{gamma_survival, gen_eig_sym, spd_inverse};
use crate::series::Dataset;

/// Deterministic terms of the error-correction model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JohansenCase {
    NoDeterministic,
    /// Constant inside the cointegrating relation only.
    #[default]
    RestrictedConstant,
    /// Unrestricted constant (linear trends in the levels).
    UnrestrictedConstant,
}

/// Largest `k - r` with embedded critical values and moments.
pub const MAX_TABULATED: usize = 12;

// 5% asymptotic trace critical values, k - r = 1..=12.
const CV5_NONE: [f64; 12] = [4.1299, 12.3209, 24.2760, 40.1749, 60.0614, 83.9371, 111.7805, 143.6691, 179.5199, 219.4051, 263.2603, 311.1288];
const CV5_RESTRICTED: [f64; 12] = [9.1645, 20.2618, 35.1927, 54.0790, 76.9728, 103.8473, 134.6780, 169.5991, 208.4374, 251.2650, 298.1591, 348.9857];
const CV5_UNRESTRICTED: [f64; 12] = [3.8415, 15.4947, 29.7971, 47.8561, 69.8189, 95.7537, 125.6154, 159.5297, 197.3709, 239.2354, 285.1425, 334.9837];

// Mean and variance of the asymptotic trace distribution, k - r = 1..=12.
const MOMENTS_NONE: [(f64, f64); 12] = [
    (1.1291, 2.1480),
    (6.1502, 11.1360),
    (15.0297, 25.4745),
    (28.2265, 47.5038),
    (45.0230, 73.8761),
    (66.0027, 103.9677),
    (90.9240, 143.7975),
    (120.0560, 191.7558),
    (153.0051, 242.6270),
    (189.9490, 286.2348),
    (231.1568, 360.7597),
    (275.9223, 425.5107),
];
const MOMENTS_RESTRICTED: [(f64, f64); 12] = [
    (4.0629, 7.0574),
    (12.1472, 19.8470),
    (24.0577, 39.2705),
    (40.1450, 63.9004),
    (59.9824, 94.7279),
    (84.0910, 130.3228),
    (112.1316, 176.1283),
    (144.0885, 223.8324),
    (179.5702, 274.0572),
    (219.9327, 324.7220),
    (263.8130, 399.3167),
    (312.1945, 478.5820),
];
const MOMENTS_UNRESTRICTED: [(f64, f64); 12] = [
    (1.0438, 2.1502),
    (8.3052, 14.3770),
    (19.5623, 32.2755),
    (34.7519, 54.6089),
    (53.7352, 83.9144),
    (76.8710, 116.8635),
    (103.8080, 160.6824),
    (134.6913, 202.4497),
    (170.0871, 263.5541),
    (209.0607, 324.4291),
    (251.7046, 376.9965),
    (298.4546, 455.0516),
];

fn check_range(k_minus_r: usize) -> Result<usize> {
    if (1..=MAX_TABULATED).contains(&k_minus_r) {
        Ok(k_minus_r - 1)
    } else {
        Err(Error::Range(format!("k - r = {k_minus_r} outside 1..={MAX_TABULATED}")))
    }
}

/// Embedded 5% critical value of the trace statistic.
pub fn trace_critical_value(k_minus_r: usize, case: JohansenCase) -> Result<f64> {
    let i = check_range(k_minus_r)?;
    Ok(match case {
        JohansenCase::NoDeterministic => CV5_NONE[i],
        JohansenCase::RestrictedConstant => CV5_RESTRICTED[i],
        JohansenCase::UnrestrictedConstant => CV5_UNRESTRICTED[i],
    })
}

/// Approximate asymptotic p-value: the trace statistic's limiting
/// distribution is matched by a gamma law with the same mean and variance.
pub fn trace_pvalue(trace: f64, k_minus_r: usize, case: JohansenCase) -> Result<f64> {
    let i = check_range(k_minus_r)?;
    let (mean, var) = match case {
        JohansenCase::NoDeterministic => MOMENTS_NONE[i],
        JohansenCase::RestrictedConstant => MOMENTS_RESTRICTED[i],
        JohansenCase::UnrestrictedConstant => MOMENTS_UNRESTRICTED[i],
    };
    if trace.is_nan() || trace <= 0.0 {
        return Ok(1.0);
    }
    Ok(gamma_survival(trace, mean * mean / var, var / mean))
}

/// One hypothesis `rank <= r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JohansenRow {
    pub r: usize,
    pub eigenvalue: f64,
    pub trace: f64,
    pub critical_value_5: f64,
    pub p_value: f64,
    /// Informational; no critical values are embedded for it.
    pub max_eigen: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JohansenResult {
    pub case: JohansenCase,
    pub vecm_lag: usize,
    pub t_eff: usize,
    /// Descending, each in `[0, 1)`.
    pub eigenvalues: Vec<f64>,
    pub rows: Vec<JohansenRow>,
    /// Smallest `r` whose trace statistic is below its 5% critical value.
    pub selected_rank: usize,
    /// Column `i` (as a row here) pairs with `eigenvalues[i]`; for the
    /// restricted constant the last entry loads on the constant.
    pub eigenvectors: Vec<Vec<f64>>,
}

/// Johansen reduced-rank procedure with `vecm_lag` lagged differences.
pub fn johansen_trace(ds: &Dataset, vecm_lag: usize, case: JohansenCase) -> Result<JohansenResult> {
    let y = ds.data();
    let (t, k) = y.shape();
    check_range(k)?;
    let first = vecm_lag + 1;
    let t_eff = t.saturating_sub(first);
    let restricted = usize::from(case == JohansenCase::RestrictedConstant);
    let short_cols = k * vecm_lag + usize::from(case == JohansenCase::UnrestrictedConstant);
    if t_eff < short_cols + k + restricted + 6 {
        return Err(Error::Length(format!(
            "Johansen test with {k} variables and {vecm_lag} lagged differences needs more observations than {t}"
        )));
    }

    let dy = |row: usize, j: usize| y[(row, j)] - y[(row - 1, j)];
    let z0 = DMatrix::from_fn(t_eff, k, |r, j| dy(first + r, j));
    let z1 = DMatrix::from_fn(t_eff, k + restricted, |r, j| if j < k { y[(first + r - 1, j)] } else { 1.0 });

    let (r0, r1) = if short_cols == 0 {
        (z0, z1)
    } else {
        let z2 = DMatrix::from_fn(t_eff, short_cols, |r, c| {
            if c < k * vecm_lag {
                let lag = c / k + 1;
                dy(first + r - lag, c % k)
            } else {
                1.0
            }
        });
        let proj = Projector::new(&z2)?;
        let r0 = &z0 - &z2 * proj.coefficients(&z0);
        let r1 = &z1 - &z2 * proj.coefficients(&z1);
        (r0, r1)
    };

    let tf = t_eff as f64;
    let s00 = sym(&(r0.transpose() * &r0 / tf));
    let s01 = r0.transpose() * &r1 / tf;
    let s11 = sym(&(r1.transpose() * &r1 / tf));
    let a = sym(&(s01.transpose() * spd_inverse(&s00)? * &s01));
    let eig = gen_eig_sym(&a, &s11)?;

    let eigenvalues: Vec<f64> = eig.values[..k].iter().map(|l| l.clamp(0.0, 1.0 - 1e-15)).collect();
    let logs: Vec<f64> = eigenvalues.iter().map(|l| (1.0 - l).ln()).collect();

    let mut rows = Vec::with_capacity(k);
    for r in 0..k {
        let trace = -tf * logs[r..].iter().sum::<f64>();
        rows.push(JohansenRow {
            r,
            eigenvalue: eigenvalues[r],
            trace,
            critical_value_5: trace_critical_value(k - r, case)?,
            p_value: trace_pvalue(trace, k - r, case)?,
            max_eigen: -tf * logs[r],
        });
    }
    let selected_rank = rows
        .iter()
        .find(|row| row.trace < row.critical_value_5)
        .map_or(k, |row| row.r);
    let eigenvectors = (0..k).map(|i| eig.vectors.column(i).iter().copied().collect()).collect();

    Ok(JohansenResult {
        case,
        vecm_lag,
        t_eff,
        eigenvalues,
        rows,
        selected_rank,
        eigenvectors,
    })
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Period;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    const CASES: [JohansenCase; 3] = [
        JohansenCase::NoDeterministic,
        JohansenCase::RestrictedConstant,
        JohansenCase::UnrestrictedConstant,
    ];

    fn ds(data: DMatrix<f64>) -> Dataset {
        let names = (0..data.ncols()).map(|j| format!("y{j}")).collect();
        Dataset::new(names, Period::new(2000, 1).unwrap(), data).unwrap()
    }

    fn walks(seed: u64, t: usize, k: usize) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = DMatrix::zeros(t, k);
        for r in 1..t {
            for j in 0..k {
                let e: f64 = StandardNormal.sample(&mut rng);
                data[(r, j)] = data[(r - 1, j)] + e;
            }
        }
        data
    }

    #[test]
    fn restricted_constant_critical_values() {
        let rc = JohansenCase::RestrictedConstant;
        assert_eq!(trace_critical_value(3, rc).unwrap(), 35.1927);
        assert_eq!(trace_critical_value(2, rc).unwrap(), 20.2618);
        assert_eq!(trace_critical_value(1, rc).unwrap(), 9.1645);
        assert!(matches!(trace_critical_value(0, rc), Err(Error::Range(_))));
        assert!(matches!(trace_critical_value(13, rc), Err(Error::Range(_))));
    }

    #[test]
    fn restricted_constant_pvalues() {
        let rc = JohansenCase::RestrictedConstant;
        assert!((trace_pvalue(20.1646, 3, rc).unwrap() - 0.7164).abs() < 0.02);
        assert!((trace_pvalue(9.0433, 2, rc).unwrap() - 0.7322).abs() < 0.02);
        assert!((trace_pvalue(2.1796, 1, rc).unwrap() - 0.7417).abs() < 0.02);
    }

    #[test]
    fn pvalue_at_critical_value_is_five_percent() {
        for case in CASES {
            for m in 1..=MAX_TABULATED {
                let cv = trace_critical_value(m, case).unwrap();
                let p = trace_pvalue(cv, m, case).unwrap();
                assert!((p - 0.05).abs() < 0.01, "{case:?} m={m}: {p}");
            }
        }
    }

    #[test]
    fn tables_increase_with_dimension() {
        for case in CASES {
            let cvs: Vec<f64> = (1..=12).map(|m| trace_critical_value(m, case).unwrap()).collect();
            assert!(cvs.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn independent_walks_have_rank_zero() {
        let res = johansen_trace(&ds(walks(101, 500, 3)), 1, JohansenCase::RestrictedConstant).unwrap();
        assert_eq!(res.selected_rank, 0);
        assert_eq!(res.rows.len(), 3);
        assert_eq!(res.t_eff, 498);
    }

    #[test]
    fn common_trend_has_rank_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(102);
        let base = walks(103, 500, 1);
        let data = DMatrix::from_fn(500, 2, |r, j| {
            let noise: f64 = StandardNormal.sample(&mut rng);
            if j == 0 {
                base[(r, 0)]
            } else {
                base[(r, 0)] + noise
            }
        });
        for case in CASES {
            let res = johansen_trace(&ds(data.clone()), 1, case).unwrap();
            assert_eq!(res.selected_rank, 1, "{case:?}");
        }
    }

    #[test]
    fn too_many_variables_is_range_error() {
        let res = johansen_trace(&ds(walks(1, 400, 13)), 0, JohansenCase::RestrictedConstant);
        assert!(matches!(res, Err(Error::Range(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn statistics_are_ordered_and_scale_free(seed in 0u64..1000, lag in 0usize..3, s0 in 0.01f64..100.0, s1 in 0.01f64..100.0, case_ix in 0usize..3) {
            let case = CASES[case_ix];
            let data = walks(seed, 150, 3);
            let res = johansen_trace(&ds(data.clone()), lag, case).unwrap();
            prop_assert!(res.eigenvalues.iter().all(|l| (0.0..1.0).contains(l)));
            prop_assert!(res.eigenvalues.windows(2).all(|w| w[0] >= w[1] - 1e-12));
            prop_assert!(res.rows.windows(2).all(|w| w[0].trace > w[1].trace));
            prop_assert!(res.rows[2].trace >= 0.0);

            let mut scaled = data;
            scaled.column_mut(0).scale_mut(s0);
            scaled.column_mut(1).scale_mut(s1);
            let other = johansen_trace(&ds(scaled), lag, case).unwrap();
            for (a, b) in res.rows.iter().zip(&other.rows) {
                prop_assert!((a.eigenvalue - b.eigenvalue).abs() < 1e-8);
                prop_assert!((a.trace - b.trace).abs() < 1e-8 * (1.0 + a.trace));
            }
            prop_assert_eq!(res.selected_rank, other.selected_rank);
        }
    }
}
