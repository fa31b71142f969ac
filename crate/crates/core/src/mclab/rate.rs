//! Empirical rejection frequencies.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::dgp::{replication_seed, simulate, DgpSpec};
use crate::causality::{toda_yamamoto, RestrictionMode};
use crate::cointegration::{johansen_trace, JohansenCase};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::series::TimeSeries;
use crate::unitroot::{adf_test, DeterministicSpec, LagPolicy};

/// Which series an ADF replication tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdfTarget {
    Column(usize),
    /// `sum_j w_j y_j`.
    Combination(Vec<f64>),
}

/// A test plus the event counted as a rejection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test", rename_all = "snake_case")]
pub enum TestConfig {
    /// ADF p-value below alpha.
    Adf {
        target: AdfTarget,
        spec: DeterministicSpec,
        policy: LagPolicy,
    },
    /// Rank chosen at level alpha (first `r` whose trace p-value is at
    /// least alpha) is positive.
    JohansenRankPositive { vecm_lag: usize, case: JohansenCase },
    /// Rank chosen at level alpha equals `rank`.
    JohansenRankEquals {
        vecm_lag: usize,
        case: JohansenCase,
        rank: usize,
    },
    /// Toda-Yamamoto p-value below alpha.
    TodaYamamoto {
        target: usize,
        cause: usize,
        p: usize,
        d_max: usize,
        mode: RestrictionMode,
    },
}

impl TestConfig {
    pub fn label(&self) -> String {
        match self {
            TestConfig::Adf { target, spec, .. } => {
                let on = match target {
                    AdfTarget::Column(j) => format!("col{j}"),
                    AdfTarget::Combination(_) => "combination".to_string(),
                };
                format!("adf({spec:?};{on})").to_lowercase()
            }
            TestConfig::JohansenRankPositive { vecm_lag, .. } => format!("johansen_rank_gt0(lag={vecm_lag})"),
            TestConfig::JohansenRankEquals { vecm_lag, rank, .. } => {
                format!("johansen_rank_eq{rank}(lag={vecm_lag})")
            }
            TestConfig::TodaYamamoto { target, cause, p, d_max, .. } => {
                format!("toda_yamamoto({cause}->{target};p={p};dmax={d_max})")
            }
        }
    }

    fn rejects(&self, dgp: &DgpSpec, alpha: f64) -> Result<bool> {
        let ds = simulate(dgp)?;
        match self {
            TestConfig::Adf { target, spec, policy } => {
                let values: Vec<f64> = match target {
                    AdfTarget::Column(j) => {
                        if *j >= ds.nvars() {
                            return Err(Error::Index(format!("column {j} of {}", ds.nvars())));
                        }
                        ds.data().column(*j).iter().copied().collect()
                    }
                    AdfTarget::Combination(w) => {
                        if w.len() != ds.nvars() {
                            return Err(Error::Length(format!(
                                "{} weights for {} variables",
                                w.len(),
                                ds.nvars()
                            )));
                        }
                        (0..ds.nobs())
                            .map(|r| w.iter().enumerate().map(|(j, wj)| wj * ds.data()[(r, j)]).sum())
                            .collect()
                    }
                };
                let ts = TimeSeries::new("mc", ds.start(), values)?;
                Ok(adf_test(&ts, *spec, *policy)?.p_value < alpha)
            }
            TestConfig::JohansenRankPositive { vecm_lag, case } => {
                Ok(rank_at(&ds, *vecm_lag, *case, alpha)? > 0)
            }
            TestConfig::JohansenRankEquals { vecm_lag, case, rank } => {
                Ok(rank_at(&ds, *vecm_lag, *case, alpha)? == *rank)
            }
            TestConfig::TodaYamamoto { target, cause, p, d_max, mode } => {
                Ok(toda_yamamoto(&ds, *target, *cause, *p, *d_max, *mode)?.p_value < alpha)
            }
        }
    }
}

fn rank_at(ds: &crate::series::Dataset, vecm_lag: usize, case: JohansenCase, alpha: f64) -> Result<usize> {
    let res = johansen_trace(ds, vecm_lag, case)?;
    Ok(res
        .rows
        .iter()
        .find(|row| row.p_value >= alpha)
        .map_or(res.rows.len(), |row| row.r))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizePowerReport {
    pub test: String,
    pub dgp: String,
    pub t: usize,
    pub reps: usize,
    pub alpha: f64,
    pub rejections: usize,
    /// Replications that ended in an error; they count as non-rejections.
    pub failures: usize,
    /// `rejections / reps`.
    pub rate: f64,
    /// `sqrt(rate (1 - rate) / reps)`.
    pub mc_se: f64,
}

pub fn rejection_rate(test: &TestConfig, dgp: &DgpSpec, reps: usize, alpha: f64) -> Result<SizePowerReport> {
    rejection_rate_with(test, dgp, reps, alpha, Execution::default())
}

/// Runs `reps` replications; replication `i` simulates with seed
/// [`replication_seed`]`(dgp.seed, i)`. The result does not depend on `exec`.
pub fn rejection_rate_with(
    test: &TestConfig,
    dgp: &DgpSpec,
    reps: usize,
    alpha: f64,
    exec: Execution,
) -> Result<SizePowerReport> {
    if reps < 100 {
        return Err(Error::Domain(format!("{reps} replications; at least 100 are required")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} is outside (0, 1)")));
    }
    let outcomes = map_indexed(reps, exec, |i| {
        test.rejects(&dgp.with_seed(replication_seed(dgp.seed, i as u64)), alpha)
    });
    let rejections = outcomes.iter().filter(|o| matches!(o, Ok(true))).count();
    let failures = outcomes.iter().filter(|o| o.is_err()).count();
    let rate = rejections as f64 / reps as f64;
    Ok(SizePowerReport {
        test: test.label(),
        dgp: dgp.label(),
        t: dgp.t,
        reps,
        alpha,
        rejections,
        failures,
        rate,
        mc_se: (rate * (1.0 - rate) / reps as f64).sqrt(),
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Columns `test,dgp,T,reps,alpha,rejections,rate,mc_se`.
pub fn write_csv<W: Write>(reports: &[SizePowerReport], mut out: W) -> std::io::Result<()> {
    writeln!(out, "test,dgp,T,reps,alpha,rejections,rate,mc_se")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.6},{:.6}",
            csv_field(&r.test),
            csv_field(&r.dgp),
            r.t,
            r.reps,
            r.alpha,
            r.rejections,
            r.rate,
            r.mc_se
        )?;
    }
    Ok(())
}
