//! Monte Carlo laboratory: data-generating processes with known truth and
//! size/power measurement for every test in the crate.

mod dgp;
mod rate;

pub use dgp::{replication_seed, simulate, DgpKind, DgpSpec};
pub use rate::{rejection_rate, rejection_rate_with, write_csv, AdfTarget, SizePowerReport, TestConfig};
