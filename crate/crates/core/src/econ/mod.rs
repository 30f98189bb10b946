//! Correlation tables, OLS with Newey–West inference, median splits and the
//! regression battery relating persistence norms, volatility and uncertainty.

mod battery;
mod corr;
mod frame;
mod ols;
mod split;

pub use battery::{model_battery, BatteryConfig, BatteryKind, BatteryRow, ModelSpec, Sample};
pub use corr::{average_ranks, correlation_table, pearson, spearman, CorrelationMatrix};
pub use frame::{cross_window_frame, norm_var_name, window_frame, Frame, SIGMA_BAR};
pub use ols::{auto_lag, ols_newey_west, NwLag, OlsOptions, RegressionResult, CONSTANT};
pub use split::{median_split, MedianSplit};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EconError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {need} observations, got {got}")]
    TooFewObservations { need: usize, got: usize },
    #[error("`{0}` has zero variance")]
    ZeroVariance(String),
    #[error("regressors are collinear (at `{0}`)")]
    RankDeficient(String),
    #[error("duplicate regressor `{0}`")]
    DuplicateRegressor(String),
    #[error("non-finite value in `{0}`")]
    NonFinite(String),
    #[error("norm series and uncertainty data share no month for `{0}`")]
    MisalignedMonths(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}
