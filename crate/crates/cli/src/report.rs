//! Text tables, JSON documents and the output file set.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use tsecon::cointegration::JohansenCase;

use crate::config::PipelineConfig;
use crate::error::{CliError, Result};
use crate::pipeline::{PipelineResults, ReportBundle, RESULTS_SCHEMA_VERSION};

/// Output file names, in write order.
pub const OUTPUT_FILES: [&str; 4] = ["report.txt", "results.json", "roots.svg", "run_meta.json"];

pub const NON_REPRODUCIBILITY: &str = "Reference values for the stationarity, VAR root, residual LM, \
Johansen and Toda-Yamamoto tables of the original study were computed on an unpublished dataset and \
are not reproducible with this tool. Only the lag-selection identities, chi-square mappings and \
Johansen critical values can be checked; the bundled demo data are synthetic.";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMeta {
    pub tool: String,
    pub version: String,
    pub results_schema_version: u32,
    pub config_schema_version: u32,
    pub seed: u64,
    pub config: PipelineConfig,
    pub files: Vec<String>,
    pub non_reproducibility: String,
}

impl RunMeta {
    pub fn new(cfg: &PipelineConfig) -> Self {
        RunMeta {
            tool: "tsecon".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            results_schema_version: RESULTS_SCHEMA_VERSION,
            config_schema_version: cfg.schema_version,
            seed: cfg.seed,
            config: cfg.clone(),
            files: OUTPUT_FILES.iter().map(|s| s.to_string()).collect(),
            non_reproducibility: NON_REPRODUCIBILITY.into(),
        }
    }
}

/// Four decimals; non-finite values print as `NA`.
pub fn fmt4(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.4}")
    } else {
        "NA".into()
    }
}

/// Scientific with three significant digits, e.g. `1.23e-07`.
pub fn fmt_sci3(x: f64) -> String {
    if !x.is_finite() {
        return "NA".into();
    }
    let s = format!("{x:.2e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let e: i32 = exp.parse().unwrap_or(0);
            let sign = if e < 0 { '-' } else { '+' };
            format!("{mantissa}e{sign}{:02}", e.abs())
        }
        None => s,
    }
}

fn star(flag: bool) -> &'static str {
    if flag {
        "*"
    } else {
        ""
    }
}

pub fn render_text(r: &PipelineResults) -> String {
    let mut s = String::new();
    let w = 12;
    let _ = writeln!(
        s,
        "Sample {} to {} ({} observations), variables: {}\n",
        r.sample.start,
        r.sample.end,
        r.sample.nobs,
        r.variables.join(", ")
    );

    let _ = writeln!(s, "Table 1. ADF unit root tests (p-values in parentheses)");
    let _ = writeln!(s, "{:<w$} {:>22} {:>22}", "Variable", "T Statistics", "First difference");
    for row in &r.stationarity {
        let cell = |a: &tsecon::unitroot::AdfResult| format!("{} ({})", fmt4(a.statistic), fmt4(a.p_value));
        let _ = writeln!(
            s,
            "{:<w$} {:>22} {:>22}",
            row.variable,
            cell(&row.level),
            cell(&row.first_difference)
        );
    }
    s.push('\n');

    let t = &r.lag_selection;
    let _ = writeln!(s, "Table 2. VAR lag order selection (T = {}, * marks the selected order)", t.t);
    let _ = writeln!(
        s,
        "{:>4} {:>14} {:>12} {:>12} {:>10} {:>10} {:>10}",
        "Lag", "LogL", "LR", "FPE", "AIC", "SC", "HQ"
    );
    for row in &t.rows {
        let lr = row.lr.map_or_else(|| "NA".to_string(), |v| format!("{}{}", fmt4(v), star(row.flags.lr)));
        let _ = writeln!(
            s,
            "{:>4} {:>14} {:>12} {:>12} {:>10} {:>10} {:>10}",
            row.p,
            fmt4(row.loglik),
            lr,
            format!("{}{}", fmt_sci3(row.fpe), star(row.flags.fpe)),
            format!("{}{}", fmt4(row.aic), star(row.flags.aic)),
            format!("{}{}", fmt4(row.sc), star(row.flags.sc)),
            format!("{}{}", fmt4(row.hq), star(row.flags.hq)),
        );
    }
    let _ = writeln!(s, "VAR fitted with p = {} (AIC choice {})\n", r.var.p, r.var.aic_p);

    let _ = writeln!(s, "Table 3. Inverse roots of the AR characteristic polynomial");
    let _ = writeln!(s, "{:>28} {:>10}", "Root", "Modulus");
    for root in &r.stability.roots {
        let z = if root.im == 0.0 {
            fmt4(root.re)
        } else {
            let sign = if root.im < 0.0 { '-' } else { '+' };
            format!("{} {} {}i", fmt4(root.re), sign, fmt4(root.im.abs()))
        };
        let _ = writeln!(s, "{:>28} {:>10}", z, fmt4(root.modulus));
    }
    let _ = writeln!(
        s,
        "{}\n",
        if r.stability.stable {
            "No root lies outside the unit circle; the VAR satisfies the stability condition."
        } else {
            "At least one root lies on or outside the unit circle; the VAR is not stable."
        }
    );

    let _ = writeln!(s, "Table 4. Residual serial correlation LM tests");
    let _ = writeln!(s, "{:>4} {:>12} {:>10} {:>4}", "Lags", "LM-Stat", "Prob", "df");
    for lm in &r.lm {
        let _ = writeln!(
            s,
            "{:>4} {:>12} {:>10} {:>4}",
            lm.lag,
            fmt4(lm.statistic),
            fmt4(lm.p_value),
            lm.df
        );
    }
    s.push('\n');

    let j = &r.johansen;
    let case = match j.case {
        JohansenCase::NoDeterministic => "no deterministic terms",
        JohansenCase::RestrictedConstant => "constant restricted to the cointegrating space, no trend",
        JohansenCase::UnrestrictedConstant => "unrestricted constant",
    };
    let _ = writeln!(s, "Table 5. Johansen cointegration trace test ({case}; {} lagged differences)", j.vecm_lag);
    let _ = writeln!(
        s,
        "{:<14} {:>10} {:>12} {:>16} {:>8}",
        "No. of CE(s)", "Eigenvalue", "Trace Stat", "0.05 Crit. Value", "Prob"
    );
    for row in &j.rows {
        let label = if row.r == 0 {
            "None".to_string()
        } else {
            format!("At most {}", row.r)
        };
        let marked = format!("{label}{}", star(row.trace > row.critical_value_5));
        let _ = writeln!(
            s,
            "{:<14} {:>10} {:>12} {:>16} {:>8}",
            marked,
            fmt4(row.eigenvalue),
            fmt4(row.trace),
            fmt4(row.critical_value_5),
            fmt4(row.p_value)
        );
    }
    let _ = writeln!(
        s,
        "r denotes the number of cointegrating vectors; * rejects at 5%. Selected rank: {}\n",
        j.selected_rank
    );

    let ty = &r.toda_yamamoto;
    let _ = writeln!(
        s,
        "Table 6. Toda-Yamamoto causality (VAR({}) + d_max = {})",
        ty.p, ty.d_max
    );
    let _ = writeln!(s, "{:<w$} {:<w$} {:>10} {:>4} {:>8}", "Dependent", "Excluded", "Chi-sq", "df", "Prob");
    for res in &ty.results {
        let _ = writeln!(
            s,
            "{:<w$} {:<w$} {:>10} {:>4} {:>8}",
            res.target,
            res.cause,
            fmt4(res.statistic),
            res.df,
            fmt4(res.p_value)
        );
    }
    s
}

pub fn results_json(r: &PipelineResults) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("results serialize");
    s.push('\n');
    s
}

pub fn meta_json(m: &RunMeta) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("metadata serializes");
    s.push('\n');
    s
}

/// Writes exactly [`OUTPUT_FILES`] into `dir`, creating it if needed.
pub fn emit_report(bundle: &ReportBundle, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let contents = [
        bundle.report_text.clone(),
        results_json(&bundle.results),
        bundle.svg.clone(),
        meta_json(&bundle.meta),
    ];
    for (name, body) in OUTPUT_FILES.iter().zip(contents) {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}
