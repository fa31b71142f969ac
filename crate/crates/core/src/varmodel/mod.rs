//! Vector autoregressions: estimation, lag-order selection, companion-form
//! stability and the residual serial-correlation LM test.

mod fit;
mod lm;
mod select;
mod stability;

pub use fit::{fit_var, VarFit};
pub use lm::{residual_lm, LmResult};
pub use select::{
    criteria_row, criteria_row_with, select_lag, select_lag_with, Criterion, CriterionFlags, LagSelectionRow,
    LagSelectionTable,
};
pub use stability::{companion_matrix, stability, Root, StabilityReport};
