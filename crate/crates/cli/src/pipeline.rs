//! Transforms, ADF, lag selection, VAR diagnostics, Johansen and
//! Toda-Yamamoto, in that order.

use serde::Serialize;
use tsecon::causality::{toda_yamamoto_all_pairs, RestrictionMode, TyResult};
use tsecon::cointegration::{johansen_trace, JohansenResult};
use tsecon::series::{align, difference, log_transform, seasonal_adjust};
use tsecon::unitroot::{adf_test, AdfResult};
use tsecon::varmodel::{fit_var, residual_lm, select_lag_with, stability, Criterion, LagSelectionTable, LmResult, StabilityReport};
use tsecon::{Execution, Period, TimeSeries};

use crate::config::{Basis, Choice, PipelineConfig, Transform};
use crate::csvio::load_csv;
use crate::error::{Result, StageExt};
use crate::report::{render_text, RunMeta};
use crate::svg::render_unit_circle_svg;

pub const RESULTS_SCHEMA_VERSION: u32 = 1;
pub const LM_MAX_LAG: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarityRow {
    pub variable: String,
    pub level: AdfResult,
    pub first_difference: AdfResult,
    /// 0 if the level rejects, 1 if only the difference does, else 2.
    pub integration_order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub start: Period,
    pub end: Period,
    pub nobs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarSummary {
    pub basis: Basis,
    /// AIC choice from the lag table.
    pub aic_p: usize,
    /// Order actually fitted (at least 1).
    pub p: usize,
    pub t_eff: usize,
    pub loglik: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TyBlock {
    pub p: usize,
    pub d_max: usize,
    pub mode: RestrictionMode,
    pub results: Vec<TyResult>,
}

/// Everything `results.json` holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineResults {
    pub schema_version: u32,
    pub variables: Vec<String>,
    pub sample: Sample,
    pub significance: f64,
    pub stationarity: Vec<StationarityRow>,
    pub lag_selection: LagSelectionTable,
    pub var: VarSummary,
    pub stability: StabilityReport,
    pub lm: Vec<LmResult>,
    pub johansen: JohansenResult,
    pub toda_yamamoto: TyBlock,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub results: PipelineResults,
    pub report_text: String,
    pub svg: String,
    pub meta: RunMeta,
}

fn apply_transforms(ts: TimeSeries, steps: &[Transform]) -> tsecon::Result<TimeSeries> {
    let name = ts.name().to_string();
    let mut out = ts;
    for step in steps {
        out = match step {
            Transform::Log => log_transform(&out)?,
            Transform::SeasonalAdjust => seasonal_adjust(&out)?,
            Transform::None => out,
        };
    }
    Ok(out.with_name(name))
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<ReportBundle> {
    cfg.validate()?;
    let raw = load_csv(&cfg.input_path(), &cfg.variables)?;
    let series: Vec<TimeSeries> = raw
        .into_iter()
        .map(|ts| {
            let steps = cfg.transforms.get(ts.name()).map(Vec::as_slice).unwrap_or(&[]);
            apply_transforms(ts, steps)
        })
        .collect::<tsecon::Result<_>>()
        .stage("transform")?;
    let levels = align(&series).stage("transform")?;
    let alpha = cfg.significance;

    let policy = cfg.lag_policy();
    let stationarity: Vec<StationarityRow> = series
        .iter()
        .map(|ts| {
            let level = adf_test(ts, cfg.adf.spec, policy)?;
            let first_difference = adf_test(&difference(ts, 1)?, cfg.adf.spec, policy)?;
            let integration_order = if level.p_value < alpha {
                0
            } else if first_difference.p_value < alpha {
                1
            } else {
                2
            };
            Ok(StationarityRow {
                variable: ts.name().to_string(),
                level,
                first_difference,
                integration_order,
            })
        })
        .collect::<tsecon::Result<_>>()
        .stage("adf")?;

    let basis = match cfg.var.basis {
        Basis::Levels => levels.clone(),
        Basis::FirstDifferences => levels.difference().stage("var_select")?,
    };
    let lag_selection = select_lag_with(&basis, cfg.var.max_p, true, Execution::default()).stage("var_select")?;
    let aic_p = lag_selection.selected(Criterion::Aic);
    let p = aic_p.max(1);
    let fit = fit_var(&basis, p, true).stage("var_fit")?;
    let roots = stability(&fit).stage("stability")?;
    let lm = (1..=LM_MAX_LAG)
        .map(|h| residual_lm(&fit, h))
        .collect::<tsecon::Result<Vec<_>>>()
        .stage("lm")?;

    // order of the equivalent levels VAR
    let p_levels = match cfg.var.basis {
        Basis::Levels => p,
        Basis::FirstDifferences => p + 1,
    };
    let vecm_lag = match cfg.johansen.vecm_lag {
        Choice::Fixed(n) => n,
        Choice::Auto(_) => p_levels - 1,
    };
    let johansen = johansen_trace(&levels, vecm_lag, cfg.johansen.case).stage("johansen")?;

    let d_max = match cfg.ty.d_max {
        Choice::Fixed(n) => n,
        Choice::Auto(_) => stationarity.iter().map(|r| r.integration_order).max().unwrap_or(0),
    };
    let ty = if levels.nvars() >= 2 {
        toda_yamamoto_all_pairs(&levels, p_levels, d_max, cfg.ty.mode, Execution::default()).stage("toda_yamamoto")?
    } else {
        Vec::new()
    };

    let results = PipelineResults {
        schema_version: RESULTS_SCHEMA_VERSION,
        variables: cfg.variables.clone(),
        sample: Sample {
            start: levels.start(),
            end: levels.end(),
            nobs: levels.nobs(),
        },
        significance: alpha,
        stationarity,
        lag_selection,
        var: VarSummary {
            basis: cfg.var.basis,
            aic_p,
            p,
            t_eff: fit.t_eff,
            loglik: fit.loglik,
        },
        stability: roots,
        lm,
        johansen,
        toda_yamamoto: TyBlock {
            p: p_levels,
            d_max,
            mode: cfg.ty.mode,
            results: ty,
        },
    };
    Ok(ReportBundle {
        report_text: render_text(&results),
        svg: render_unit_circle_svg(&results.stability),
        meta: RunMeta::new(cfg),
        results,
    })
}
