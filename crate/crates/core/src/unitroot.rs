//! Augmented Dickey-Fuller unit-root test.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numstat::{ols, std_normal_cdf, std_normal_quantile};
use crate::series::{difference, TimeSeries};

/// Deterministic terms in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeterministicSpec {
    None,
    #[default]
    Constant,
    ConstantAndTrend,
}

impl DeterministicSpec {
    fn terms(self) -> usize {
        match self {
            DeterministicSpec::None => 0,
            DeterministicSpec::Constant => 1,
            DeterministicSpec::ConstantAndTrend => 2,
        }
    }
}

/// How many lagged differences enter the regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagPolicy {
    Fixed(usize),
    /// Minimize the Schwarz criterion over `0..=max_lags`; `None` uses
    /// [`default_max_lags`].
    Schwarz { max_lags: Option<usize> },
}

impl Default for LagPolicy {
    fn default() -> Self {
        LagPolicy::Schwarz { max_lags: None }
    }
}

/// `floor(12 * (T/100)^(1/4))`.
pub fn default_max_lags(nobs: usize) -> usize {
    (12.0 * (nobs as f64 / 100.0).powf(0.25)).floor() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    pub one: f64,
    pub five: f64,
    pub ten: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfResult {
    pub spec: DeterministicSpec,
    pub lags: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub critical_values: CriticalValues,
    /// Observations in the final test regression.
    pub nobs: usize,
}

/// Probability grid of the embedded Dickey-Fuller quantile tables.
pub const DF_PROBS: [f64; 11] = [0.01, 0.025, 0.05, 0.10, 0.25, 0.50, 0.75, 0.90, 0.95, 0.975, 0.99];

/// Asymptotic quantiles of the Dickey-Fuller t distribution at [`DF_PROBS`].
/// Tails (1-10% and 90-99%) are the classical published values; the inner
/// three were tabulated by simulating 100k driftless random walks of
/// length 1000.
pub fn df_quantiles(spec: DeterministicSpec) -> &'static [f64; 11] {
    const NONE: [f64; 11] = [-2.58, -2.23, -1.95, -1.62, -1.10, -0.51, 0.21, 0.89, 1.28, 1.62, 2.00];
    const CONSTANT: [f64; 11] = [-3.43, -3.12, -2.86, -2.57, -2.09, -1.57, -1.02, -0.44, -0.07, 0.23, 0.60];
    const TREND: [f64; 11] = [-3.96, -3.66, -3.41, -3.12, -2.67, -2.18, -1.70, -1.25, -0.94, -0.66, -0.33];
    match spec {
        DeterministicSpec::None => &NONE,
        DeterministicSpec::Constant => &CONSTANT,
        DeterministicSpec::ConstantAndTrend => &TREND,
    }
}

const P_FLOOR: f64 = 1e-4;
const P_CEIL: f64 = 0.9999;

/// Approximate left-tail p-value of a Dickey-Fuller t statistic.
///
/// Interpolates linearly between grid points on the normal-quantile scale of
/// the probabilities (piecewise monotone), extends the end segments beyond
/// the grid, and clamps to `[0.0001, 0.9999]`.
pub fn df_pvalue(t: f64, spec: DeterministicSpec) -> f64 {
    let q = df_quantiles(spec);
    let z = |i: usize| std_normal_quantile(DF_PROBS[i]);
    let seg = match q.iter().position(|&v| t < v) {
        Some(0) => 0,
        Some(i) => i - 1,
        None => q.len() - 2,
    };
    let (z0, z1) = (z(seg), z(seg + 1));
    let zt = z0 + (t - q[seg]) * (z1 - z0) / (q[seg + 1] - q[seg]);
    if t.is_nan() {
        return P_CEIL;
    }
    std_normal_cdf(zt).clamp(P_FLOOR, P_CEIL)
}

fn critical_values(spec: DeterministicSpec) -> CriticalValues {
    let q = df_quantiles(spec);
    CriticalValues {
        one: q[0],
        five: q[2],
        ten: q[3],
    }
}

/// Test regression for a given lag count over observations `first..n` of
/// the differenced series.
struct AdfDesign {
    y: DVector<f64>,
    x: DMatrix<f64>,
}

fn design(levels: &[f64], spec: DeterministicSpec, lags: usize, first: usize) -> AdfDesign {
    // dy[i] = levels[i+1] - levels[i]; row for dy[i] uses levels[i] and dy[i-1..i-lags]
    let dy: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).collect();
    let rows = dy.len() - first;
    let cols = 1 + lags + spec.terms();
    let x = DMatrix::from_fn(rows, cols, |r, c| {
        let i = first + r;
        match c {
            0 => levels[i],
            c if c <= lags => dy[i - c],
            c if c == lags + 1 => 1.0,
            _ => (r + 1) as f64,
        }
    });
    AdfDesign {
        y: DVector::from_fn(rows, |r, _| dy[first + r]),
        x,
    }
}

fn feasible(n_diff: usize, lags: usize, first: usize, spec: DeterministicSpec) -> bool {
    let regressors = 1 + lags + spec.terms();
    n_diff >= first && n_diff - first >= regressors + 5
}

/// Regresses the first difference on the lagged level, lagged differences
/// and deterministic terms; the statistic is the t-ratio on the lagged level.
pub fn adf_test(ts: &TimeSeries, spec: DeterministicSpec, policy: LagPolicy) -> Result<AdfResult> {
    let levels = ts.values();
    if levels.len() < 3 {
        return Err(Error::Length(format!("`{}` is too short for an ADF test", ts.name())));
    }
    let n_diff = levels.len() - 1;
    if levels.windows(2).all(|w| w[1] == w[0]) {
        return Err(Error::DegenerateSeries(ts.name().to_string()));
    }

    let lags = match policy {
        LagPolicy::Fixed(q) => {
            if !feasible(n_diff, q, q, spec) {
                return Err(Error::Length(format!(
                    "`{}` has {} observations, too few for {q} lagged differences",
                    ts.name(),
                    levels.len()
                )));
            }
            q
        }
        LagPolicy::Schwarz { max_lags } => {
            let mut max_q = max_lags.unwrap_or_else(|| default_max_lags(levels.len()));
            while max_q > 0 && !feasible(n_diff, max_q, max_q, spec) {
                max_q -= 1;
            }
            if !feasible(n_diff, max_q, max_q, spec) {
                return Err(Error::Length(format!("`{}` is too short for an ADF test", ts.name())));
            }
            select_lags(levels, spec, max_q)?
        }
    };

    let d = design(levels, spec, lags, lags);
    let fit = ols(&d.y, &d.x)?;
    if fit.ssr() <= 1e-24 * d.y.norm_squared() {
        return Err(Error::DegenerateSeries(ts.name().to_string()));
    }
    let statistic = fit.t_ratios[0];
    Ok(AdfResult {
        spec,
        lags,
        statistic,
        p_value: df_pvalue(statistic, spec),
        critical_values: critical_values(spec),
        nobs: d.y.len(),
    })
}

/// Schwarz-minimizing lag count over a common estimation window.
fn select_lags(levels: &[f64], spec: DeterministicSpec, max_q: usize) -> Result<usize> {
    let mut best = (f64::INFINITY, 0usize);
    for q in 0..=max_q {
        let d = design(levels, spec, q, max_q);
        let fit = ols(&d.y, &d.x)?;
        let n = d.y.len() as f64;
        let sc = (fit.ssr() / n).ln() + d.x.ncols() as f64 * n.ln() / n;
        // strict comparison keeps the smaller lag on ties
        if sc < best.0 {
            best = (sc, q);
        }
    }
    Ok(best.1)
}

/// Outcome of [`integration_order`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrationOrder {
    pub order: usize,
    /// `false` when no difference up to `max_d` rejected; `order` is then
    /// `max_d` as a fallback.
    pub rejected: bool,
}

/// Smallest `d <= max_d` whose `d`-th difference rejects a unit root at
/// level `alpha` (constant spec, Schwarz lag choice).
pub fn integration_order(ts: &TimeSeries, max_d: usize, alpha: f64) -> Result<IntegrationOrder> {
    let mut current = ts.clone();
    for d in 0..=max_d {
        if d > 0 {
            current = difference(&current, 1)?;
        }
        let res = adf_test(&current, DeterministicSpec::Constant, LagPolicy::default())?;
        if res.p_value < alpha {
            return Ok(IntegrationOrder { order: d, rejected: true });
        }
    }
    Ok(IntegrationOrder {
        order: max_d,
        rejected: false,
    })
}
