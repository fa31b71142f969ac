//! Time-series econometrics toolkit.
//!
//! The pipeline this crate supports runs seasonal adjustment, ADF unit-root
//! tests, VAR lag selection and diagnostics, the Johansen trace test and the
//! Toda-Yamamoto causality test. [`mclab`] measures the size and power of
//! each test on simulated data.

pub mod causality;
pub mod cointegration;
pub mod error;
pub mod exec;
pub mod mclab;
pub mod numstat;
pub mod series;
pub mod unitroot;
pub mod varmodel;

pub use error::{Error, Result};
pub use exec::Execution;
pub use series::{Dataset, Period, TimeSeries};
