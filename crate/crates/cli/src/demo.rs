//! Bundled synthetic demonstration data: three independent random walks in
//! logs with deterministic monthly seasonality, 157 months from 2003-01.

use std::f64::consts::PI;

use tsecon::mclab::{simulate, DgpKind, DgpSpec};
use tsecon::{Dataset, Period};

use crate::config::{AdfConfig, Basis, Choice, JohansenConfig, Keyword, PipelineConfig, Transform, TyConfig, VarConfig};
use crate::error::{CliError, Result};

pub const DEMO_SEED: u64 = 20030101;
pub const DEMO_NOBS: usize = 157;
pub const DEMO_NAMES: [&str; 3] = ["DK", "IHR", "ITH"];

const LOG_LEVEL: [f64; 3] = [4.6, 3.9, 5.2];
const STEP: f64 = 0.03;
const AMPLITUDE: [f64; 3] = [0.08, 0.05, 0.11];
const PHASE: [f64; 3] = [0.0, 1.3, 2.9];

pub fn demo_dataset(seed: u64) -> Result<Dataset> {
    let spec = DgpSpec::new(DgpKind::RandomWalk { k: 3 }, DEMO_NOBS, seed).map_err(|e| CliError::Config(e.to_string()))?;
    let walks = simulate(&spec).map_err(|e| CliError::Config(e.to_string()))?;
    let start = Period::new(2003, 1).expect("valid month");
    let columns: Vec<Vec<f64>> = (0..3)
        .map(|j| {
            (0..DEMO_NOBS)
                .map(|t| {
                    let month = start.offset(t as i64).month() as f64;
                    let season = AMPLITUDE[j] * (2.0 * PI * month / 12.0 + PHASE[j]).sin();
                    let x = (LOG_LEVEL[j] + STEP * walks.data()[(t, j)] + season).exp();
                    (x * 1000.0).round() / 1000.0
                })
                .collect()
        })
        .collect();
    Dataset::from_columns(DEMO_NAMES.iter().map(|s| s.to_string()).collect(), start, &columns)
        .map_err(|e| CliError::Config(e.to_string()))
}

pub fn demo_config(seed: u64) -> PipelineConfig {
    let names: Vec<String> = DEMO_NAMES.iter().map(|s| s.to_string()).collect();
    PipelineConfig {
        schema_version: crate::config::SCHEMA_VERSION,
        input: "demo.csv".into(),
        transforms: names
            .iter()
            .map(|n| (n.clone(), vec![Transform::Log, Transform::SeasonalAdjust]))
            .collect(),
        variables: names,
        adf: AdfConfig {
            spec: Default::default(),
            lags: Choice::Auto(Keyword::Schwarz),
            max_lags: None,
        },
        var: VarConfig {
            max_p: 8,
            basis: Basis::Levels,
        },
        johansen: JohansenConfig {
            case: Default::default(),
            vecm_lag: Choice::Auto(Keyword::Derive),
        },
        ty: TyConfig {
            d_max: Choice::Auto(Keyword::Derive),
            mode: Default::default(),
        },
        significance: 0.05,
        output_dir: "demo-out".into(),
        seed,
        base_dir: Default::default(),
    }
}
