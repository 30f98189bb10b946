use std::fmt;

use serde::Serialize;

use super::frame::{norm_var_name, window_frame, Frame, SIGMA_BAR};
use super::ols::{ols_newey_west, OlsOptions, RegressionResult};
use super::split::median_split;
use super::EconError;
use crate::ingest::UncertaintySeries;
use crate::norms::{NormKind, NormSeries};
use crate::scalar::Scalar;

/// One of the six base regressions, with the norm it uses.
///
/// | base | dependent   | regressors              |
/// |------|-------------|-------------------------|
/// | 1    | norm        | uncertainty             |
/// | 2    | norm        | sigma_bar               |
/// | 3    | norm        | uncertainty, sigma_bar  |
/// | 4    | uncertainty | norm                    |
/// | 5    | uncertainty | sigma_bar               |
/// | 6    | uncertainty | norm, sigma_bar         |
///
/// L1 variants are labelled `1`..`6`, L2 variants `12`..`62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ModelSpec {
    pub base: u8,
    pub norm: NormKind,
}

impl ModelSpec {
    pub fn new(base: u8, norm: NormKind) -> Self {
        assert!((1..=6).contains(&base), "base model 1..=6");
        Self { base, norm }
    }

    /// Dependent variable and regressors, given the variable names in play.
    pub fn variables(&self, norm: &str, uncertainty: &str) -> (String, Vec<String>) {
        let s = SIGMA_BAR.to_string();
        let (dep, regs): (&str, Vec<String>) = match self.base {
            1 => (norm, vec![uncertainty.into()]),
            2 => (norm, vec![s]),
            3 => (norm, vec![uncertainty.into(), s]),
            4 => (uncertainty, vec![norm.into()]),
            5 => (uncertainty, vec![s]),
            _ => (uncertainty, vec![norm.into(), s]),
        };
        (dep.to_string(), regs)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.norm {
            NormKind::L1 => write!(f, "{}", self.base),
            NormKind::L2 => write!(f, "{}2", self.base),
        }
    }
}

/// Which months enter a regression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Sample {
    Full,
    /// Months where the named uncertainty index is in the upper half.
    High(String),
    Low(String),
}

impl fmt::Display for Sample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sample::Full => f.write_str("full"),
            Sample::High(v) => write!(f, "high:{v}"),
            Sample::Low(v) => write!(f, "low:{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatteryKind {
    /// Models 1–6 on the full sample.
    Base,
    /// Models 4–6 on the high and low halves of each uncertainty index.
    Split,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryConfig {
    pub uncertainty_columns: Vec<String>,
    pub norm_dim: usize,
    pub norms: Vec<NormKind>,
    pub ols: OlsOptions,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            uncertainty_columns: vec!["FIN1".into(), "MAC1".into()],
            norm_dim: 1,
            norms: vec![NormKind::L1, NormKind::L2],
            ols: OlsOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatteryRow<T> {
    pub model: ModelSpec,
    pub dependent: String,
    pub uncertainty: String,
    pub window: usize,
    pub sample: Sample,
    pub result: RegressionResult<T>,
}

fn run<T: Scalar>(
    frame: &Frame<T>,
    dep: &str,
    regs: &[String],
    opts: OlsOptions,
) -> Result<RegressionResult<T>, EconError> {
    let y = frame.get(dep)?;
    let xs: Vec<(&str, &[T])> =
        regs.iter().map(|r| Ok((r.as_str(), frame.get(r)?))).collect::<Result<_, EconError>>()?;
    ols_newey_west(y, &xs, opts)
}

/// Runs the regression battery over every window length and uncertainty column.
///
/// Rows are ordered by norm, uncertainty column, sample, model and window.
/// Subsample regressions resolve the automatic lag on the subsample size.
pub fn model_battery<T: Scalar>(
    norms: &[NormSeries<T>],
    unc: &UncertaintySeries<T>,
    kind: BatteryKind,
    config: &BatteryConfig,
) -> Result<Vec<BatteryRow<T>>, EconError> {
    let frames: Vec<Vec<Frame<T>>> = config
        .uncertainty_columns
        .iter()
        .map(|col| {
            norms
                .iter()
                .map(|s| window_frame(s, unc, std::slice::from_ref(col), config.norm_dim))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let bases: &[u8] = match kind {
        BatteryKind::Base => &[1, 2, 3, 4, 5, 6],
        BatteryKind::Split => &[4, 5, 6],
    };
    let mut rows = Vec::new();
    for &norm in &config.norms {
        let norm_name = norm_var_name(config.norm_dim, norm);
        for (col, col_frames) in config.uncertainty_columns.iter().zip(&frames) {
            let samples = match kind {
                BatteryKind::Base => vec![Sample::Full],
                BatteryKind::Split => vec![Sample::High(col.clone()), Sample::Low(col.clone())],
            };
            for sample in samples {
                let sub: Vec<Frame<T>> = col_frames
                    .iter()
                    .map(|f| match &sample {
                        Sample::Full => Ok(f.clone()),
                        Sample::High(v) => Ok(f.subset(&median_split(f.get(v)?).high)),
                        Sample::Low(v) => Ok(f.subset(&median_split(f.get(v)?).low)),
                    })
                    .collect::<Result<_, EconError>>()?;
                for &base in bases {
                    let model = ModelSpec::new(base, norm);
                    let (dep, regs) = model.variables(&norm_name, col);
                    for (series, frame) in norms.iter().zip(&sub) {
                        let result = run(frame, &dep, &regs, config.ols)?;
                        rows.push(BatteryRow {
                            model,
                            dependent: dep.clone(),
                            uncertainty: col.clone(),
                            window: series.window_length_months,
                            sample: sample.clone(),
                            result,
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}
