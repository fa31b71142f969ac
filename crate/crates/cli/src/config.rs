//! Pipeline configuration, read from TOML.
//!
//! Schema version 1:
//!
//! ```toml
//! schema_version = 1
//! input = "demo.csv"            # relative to the config file
//! variables = ["DK", "IHR", "ITH"]
//! output_dir = "out"            # relative to the config file
//! significance = 0.05
//! seed = 20030101               # demo-data generation only
//!
//! [transforms]                  # applied in order; default none
//! DK = ["log", "seasonal_adjust"]
//!
//! [adf]
//! spec = "constant"             # none | constant | constant_and_trend
//! lags = "schwarz"              # "schwarz" or a fixed count
//! max_lags = 12                 # optional cap for schwarz
//!
//! [var]
//! max_p = 8
//! basis = "levels"              # levels | first_differences
//!
//! [johansen]
//! case = "restricted_constant"  # no_deterministic | restricted_constant | unrestricted_constant
//! vecm_lag = "derive"           # "derive" (selected p - 1) or a count
//!
//! [ty]
//! d_max = "derive"              # "derive" (largest integration order) or a count
//! mode = "first_p"              # first_p | all_lags
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tsecon::causality::RestrictionMode;
use tsecon::cointegration::JohansenCase;
use tsecon::unitroot::{DeterministicSpec, LagPolicy};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Log,
    SeasonalAdjust,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Levels,
    FirstDifferences,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Keyword {
    Derive,
    Schwarz,
}

/// A count, or a keyword asking the pipeline to choose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Choice {
    Fixed(usize),
    Auto(Keyword),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdfConfig {
    #[serde(default)]
    pub spec: DeterministicSpec,
    #[serde(default = "schwarz")]
    pub lags: Choice,
    #[serde(default)]
    pub max_lags: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarConfig {
    pub max_p: usize,
    #[serde(default = "levels")]
    pub basis: Basis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JohansenConfig {
    #[serde(default)]
    pub case: JohansenCase,
    #[serde(default = "derive")]
    pub vecm_lag: Choice,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TyConfig {
    #[serde(default = "derive")]
    pub d_max: Choice,
    #[serde(default)]
    pub mode: RestrictionMode,
}

fn schwarz() -> Choice {
    Choice::Auto(Keyword::Schwarz)
}
fn derive() -> Choice {
    Choice::Auto(Keyword::Derive)
}
fn levels() -> Basis {
    Basis::Levels
}
fn default_significance() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub schema_version: u32,
    pub input: PathBuf,
    pub variables: Vec<String>,
    #[serde(default)]
    pub transforms: BTreeMap<String, Vec<Transform>>,
    pub adf: AdfConfig,
    pub var: VarConfig,
    pub johansen: JohansenConfig,
    pub ty: TyConfig,
    #[serde(default = "default_significance")]
    pub significance: f64,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// Directory relative paths resolve against; not part of the file.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if self.variables.is_empty() {
            return bad("no variables listed".into());
        }
        for (i, v) in self.variables.iter().enumerate() {
            if v == "date" || self.variables[..i].contains(v) {
                return bad(format!("variable `{v}` is reserved or repeated"));
            }
        }
        if let Some(name) = self.transforms.keys().find(|n| !self.variables.contains(n)) {
            return bad(format!("transform given for unlisted variable `{name}`"));
        }
        if !(self.significance > 0.0 && self.significance < 1.0) {
            return bad(format!("significance {} is outside (0, 1)", self.significance));
        }
        if self.var.max_p == 0 {
            return bad("lag selection needs max_p >= 1".into());
        }
        if self.adf.lags == Choice::Auto(Keyword::Derive) {
            return bad("adf.lags takes \"schwarz\" or a count".into());
        }
        for (key, c) in [("johansen.vecm_lag", self.johansen.vecm_lag), ("ty.d_max", self.ty.d_max)] {
            if c == Choice::Auto(Keyword::Schwarz) {
                return bad(format!("{key} takes \"derive\" or a count"));
            }
        }
        Ok(())
    }

    pub fn lag_policy(&self) -> LagPolicy {
        match self.adf.lags {
            Choice::Fixed(n) => LagPolicy::Fixed(n),
            Choice::Auto(_) => LagPolicy::Schwarz {
                max_lags: self.adf.max_lags,
            },
        }
    }

    pub fn input_path(&self) -> PathBuf {
        self.base_dir.join(&self.input)
    }

    pub fn output_path(&self) -> PathBuf {
        self.base_dir.join(&self.output_dir)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
schema_version = 1
input = "demo.csv"
variables = ["DK", "IHR", "ITH"]
output_dir = "out"

[transforms]
DK = ["log", "seasonal_adjust"]

[adf]
spec = "constant"

[var]
max_p = 8

[johansen]
case = "restricted_constant"
vecm_lag = "derive"

[ty]
d_max = 1
mode = "first_p"
"#;

    #[test]
    fn parses_sample() {
        let cfg = PipelineConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(cfg.variables.len(), 3);
        assert_eq!(cfg.adf.lags, Choice::Auto(Keyword::Schwarz));
        assert_eq!(cfg.ty.d_max, Choice::Fixed(1));
        assert_eq!(cfg.var.basis, Basis::Levels);
        assert_eq!(cfg.significance, 0.05);
        assert_eq!(cfg.transforms["DK"], vec![Transform::Log, Transform::SeasonalAdjust]);
    }

    #[test]
    fn round_trips() {
        let cfg = PipelineConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(PipelineConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_values() {
        for (from, to) in [
            ("max_p = 8", "max_p = 0"),
            ("schema_version = 1", "schema_version = 2"),
            ("output_dir = \"out\"", "output_dir = \"out\"\nsignificance = 1.5"),
            ("DK = [", "XX = ["),
            ("d_max = 1", "d_max = \"schwarz\""),
            ("spec = \"constant\"", "spec = \"constant\"\nlags = \"derive\""),
            ("mode = \"first_p\"", "mode = \"sideways\""),
        ] {
            let text = SAMPLE.replace(from, to);
            assert!(matches!(PipelineConfig::from_toml(&text), Err(CliError::Config(_))), "{to}");
        }
    }
}
