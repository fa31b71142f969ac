use serde::Serialize;

use super::fit::fit_window;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::numstat::{chi_square_survival, log_det_from_loglik};
use crate::series::Dataset;

/// Lag-order selection criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Lr,
    Fpe,
    Aic,
    Sc,
    Hq,
}

/// Which criteria a row minimizes (or, for LR, is selected by).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CriterionFlags {
    pub lr: bool,
    pub fpe: bool,
    pub aic: bool,
    pub sc: bool,
    pub hq: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagSelectionRow {
    pub p: usize,
    pub loglik: f64,
    /// Absent for `p = 0`.
    pub lr: Option<f64>,
    pub fpe: f64,
    pub aic: f64,
    pub sc: f64,
    pub hq: f64,
    pub flags: CriterionFlags,
}

/// Criteria for one lag order, assuming an intercept in every equation.
///
/// With `n = k(1 + p k)` parameters and `m = k p + 1` regressors per
/// equation: `AIC = (-2l + 2n)/T`, `SC = (-2l + n ln T)/T`,
/// `HQ = (-2l + 2n ln ln T)/T`, `LR = (T - m)(ln|S_{p-1}| - ln|S_p|)` and
/// `FPE = ((T + m)/(T - m))^k |S_p|`. Log-determinants are recovered from
/// the log-likelihoods.
pub fn criteria_row(loglik: f64, prev_loglik: Option<f64>, t: usize, k: usize, p: usize) -> Result<LagSelectionRow> {
    criteria_row_with(loglik, prev_loglik, t, k, p, true)
}

pub fn criteria_row_with(
    loglik: f64,
    prev_loglik: Option<f64>,
    t: usize,
    k: usize,
    p: usize,
    intercept: bool,
) -> Result<LagSelectionRow> {
    let m = k * p + usize::from(intercept);
    if t <= m {
        return Err(Error::Domain(format!("T = {t} does not exceed {m} regressors per equation")));
    }
    let tf = t as f64;
    let n = (k * m) as f64;
    let ld = log_det_from_loglik(loglik, t, k);
    let lr = match (p, prev_loglik) {
        (0, _) | (_, None) => None,
        (_, Some(prev)) => Some((tf - m as f64) * (log_det_from_loglik(prev, t, k) - ld)),
    };
    let fpe = ((tf + m as f64) / (tf - m as f64)).powi(k as i32) * ld.exp();
    Ok(LagSelectionRow {
        p,
        loglik,
        lr,
        fpe,
        aic: (-2.0 * loglik + 2.0 * n) / tf,
        sc: (-2.0 * loglik + n * tf.ln()) / tf,
        hq: (-2.0 * loglik + 2.0 * n * tf.ln().ln()) / tf,
        flags: CriterionFlags::default(),
    })
}

/// Lag-order selection over `p = 0..=max_p` on a common sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagSelectionTable {
    pub rows: Vec<LagSelectionRow>,
    /// Common estimation sample size.
    pub t: usize,
    pub k: usize,
    pub intercept: bool,
    /// Significance level of the sequential LR tests.
    pub lr_level: f64,
}

impl LagSelectionTable {
    /// Builds the table from log-likelihoods indexed by lag order.
    pub fn from_logliks(logliks: &[f64], t: usize, k: usize, intercept: bool) -> Result<Self> {
        if logliks.is_empty() {
            return Err(Error::Length("no candidate lag orders".into()));
        }
        let mut rows = Vec::with_capacity(logliks.len());
        for (p, &l) in logliks.iter().enumerate() {
            let prev = p.checked_sub(1).map(|i| logliks[i]);
            rows.push(criteria_row_with(l, prev, t, k, p, intercept)?);
        }
        let mut table = LagSelectionTable {
            rows,
            t,
            k,
            intercept,
            lr_level: 0.05,
        };
        table.flag();
        Ok(table)
    }

    fn flag(&mut self) {
        let argmin = |f: &dyn Fn(&LagSelectionRow) -> f64| {
            // first minimum wins, so ties go to the smaller p
            let mut best = 0;
            for (i, r) in self.rows.iter().enumerate() {
                if f(r) < f(&self.rows[best]) {
                    best = i;
                }
            }
            best
        };
        let fpe = argmin(&|r| r.fpe);
        let aic = argmin(&|r| r.aic);
        let sc = argmin(&|r| r.sc);
        let hq = argmin(&|r| r.hq);
        let lr = self.lr_choice();
        for (i, r) in self.rows.iter_mut().enumerate() {
            r.flags = CriterionFlags {
                lr: i == lr,
                fpe: i == fpe,
                aic: i == aic,
                sc: i == sc,
                hq: i == hq,
            };
        }
    }

    /// Largest `p` whose sequential LR statistic is significant against
    /// chi-square with `k^2` degrees of freedom; 0 when none is.
    fn lr_choice(&self) -> usize {
        let df = (self.k * self.k) as u32;
        self.rows
            .iter()
            .rev()
            .find(|r| {
                r.lr.is_some_and(|lr| chi_square_survival(lr.max(0.0), df).is_ok_and(|pv| pv < self.lr_level))
            })
            .map_or(0, |r| r.p)
    }

    /// Lag order chosen by `criterion`.
    pub fn selected(&self, criterion: Criterion) -> usize {
        self.rows
            .iter()
            .find(|r| match criterion {
                Criterion::Lr => r.flags.lr,
                Criterion::Fpe => r.flags.fpe,
                Criterion::Aic => r.flags.aic,
                Criterion::Sc => r.flags.sc,
                Criterion::Hq => r.flags.hq,
            })
            .map_or(0, |r| r.p)
    }
}

/// Fits every `p = 0..=max_p` on the common window `t = max_p+1..T` and
/// tabulates the criteria.
pub fn select_lag(ds: &Dataset, max_p: usize, intercept: bool) -> Result<LagSelectionTable> {
    select_lag_with(ds, max_p, intercept, Execution::default())
}

pub fn select_lag_with(ds: &Dataset, max_p: usize, intercept: bool, exec: Execution) -> Result<LagSelectionTable> {
    let fits = map_indexed(max_p + 1, exec, |p| fit_window(ds, p, intercept, max_p).map(|f| f.loglik));
    let logliks = fits.into_iter().collect::<Result<Vec<_>>>()?;
    LagSelectionTable::from_logliks(&logliks, ds.nobs() - max_p, ds.nvars(), intercept)
}
