//! Pipeline configuration: a flat `key = value` file plus command-line
//! overrides. Precedence is command line, then file, then defaults.
//!
//! ```text
//! # comments start with '#'
//! price.SPX = data/spx.csv
//! price.NDX = data/ndx.csv
//! uncertainty = data/uncertainty.csv
//! windows = 1,3,6,12
//! nw_lag = auto
//! ```
//!
//! Relative paths in a file resolve against the file's directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use persnorm::cloud::{Padding, SampleRange, VolMean};
use persnorm::econ::{NwLag, OlsOptions};
use persnorm::ingest::PriceSchema;
use persnorm::Month;

use crate::emit::Format;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {err}")]
    Read { path: PathBuf, err: std::io::Error },
    #[error("{origin}: line {line}: expected `key = value`")]
    Syntax { origin: String, line: usize },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {reason}")]
    BadValue { key: String, reason: String },
    #[error("{0}")]
    Invalid(String),
}

/// Whether the split battery runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitMode {
    #[default]
    Median,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// `(label, path)` per index, in the order given.
    pub prices: Vec<(String, PathBuf)>,
    pub uncertainty: Option<PathBuf>,
    /// Columns shown in the correlation tables; absent ones are skipped.
    pub uncertainty_columns: Vec<String>,
    /// Columns the regression batteries run on.
    pub regress_columns: Vec<String>,
    pub schema: PriceSchema,
    pub windows: Vec<usize>,
    pub norm_dim: usize,
    pub vol_mean: VolMean,
    pub nw_lag: NwLag,
    pub small_sample: bool,
    pub padding: Padding,
    pub split: SplitMode,
    pub format: Format,
    pub out: PathBuf,
    pub sample: SampleRange,
    pub parallel: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            prices: Vec::new(),
            uncertainty: None,
            uncertainty_columns: vec!["FIN1".into(), "MAC1".into(), "REA1".into()],
            regress_columns: vec!["FIN1".into(), "MAC1".into()],
            schema: PriceSchema::default(),
            windows: vec![1, 3, 6, 12],
            norm_dim: 1,
            vol_mean: VolMean::Geometric,
            nw_lag: NwLag::Auto,
            small_sample: false,
            padding: Padding::Lookback,
            split: SplitMode::Median,
            format: Format::Csv,
            out: PathBuf::from("out"),
            sample: SampleRange::default(),
            parallel: true,
        }
    }
}

fn bad(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::BadValue { key: key.to_string(), reason: reason.into() }
}

fn lift<V>(key: &str, r: Result<V, String>) -> Result<V, ConfigError> {
    r.map_err(|e| bad(key, e))
}

fn list(value: &str) -> Vec<String> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(bad(key, format!("`{value}` is not a boolean"))),
    }
}

fn parse_month(key: &str, value: &str) -> Result<Option<Month>, ConfigError> {
    if value.is_empty() {
        return Ok(None);
    }
    Month::from_str(value).map(Some).map_err(|e| bad(key, e.to_string()))
}

pub fn parse_windows(value: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for w in list(value) {
        let n: usize = w.parse().map_err(|_| format!("`{w}` is not an integer"))?;
        if !(1..=24).contains(&n) {
            return Err(format!("window length {n} outside 1..=24"));
        }
        if !out.contains(&n) {
            out.push(n);
        }
    }
    if out.is_empty() {
        return Err("no window lengths".into());
    }
    Ok(out)
}

pub fn parse_nw_lag(value: &str) -> Result<NwLag, String> {
    match value {
        "auto" => Ok(NwLag::Auto),
        n => n.parse().map(NwLag::Fixed).map_err(|_| format!("`{n}` is neither `auto` nor a lag")),
    }
}

pub fn parse_vol_mean(value: &str) -> Result<VolMean, String> {
    match value {
        "geometric" => Ok(VolMean::Geometric),
        "arithmetic" => Ok(VolMean::Arithmetic),
        v => Err(format!("`{v}` (geometric|arithmetic)")),
    }
}

pub fn parse_padding(value: &str) -> Result<Padding, String> {
    match value {
        "lookback" => Ok(Padding::Lookback),
        "burnin" => Ok(Padding::Burnin),
        v => Err(format!("`{v}` (lookback|burnin)")),
    }
}

pub fn parse_split(value: &str) -> Result<SplitMode, String> {
    match value {
        "median" => Ok(SplitMode::Median),
        "none" => Ok(SplitMode::None),
        v => Err(format!("`{v}` (median|none)")),
    }
}

/// `LABEL=PATH`.
pub fn parse_price_arg(value: &str) -> Result<(String, PathBuf), String> {
    match value.split_once('=') {
        Some((label, path)) if !label.trim().is_empty() && !path.trim().is_empty() => {
            Ok((label.trim().to_string(), PathBuf::from(path.trim())))
        }
        _ => Err(format!("`{value}` is not LABEL=PATH")),
    }
}

impl PipelineConfig {
    /// Sets one key. Relative paths are joined onto `base`.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<(), ConfigError> {
        let value = value.trim();
        let path = |v: &str| base.join(v);
        if let Some(label) = key.strip_prefix("price.") {
            if label.is_empty() {
                return Err(bad(key, "empty index label"));
            }
            let p = path(value);
            match self.prices.iter_mut().find(|(l, _)| l == label) {
                Some(entry) => entry.1 = p,
                None => self.prices.push((label.to_string(), p)),
            }
            return Ok(());
        }
        match key {
            "uncertainty" => self.uncertainty = Some(path(value)),
            "uncertainty_columns" => self.uncertainty_columns = list(value),
            "regress_columns" => self.regress_columns = list(value),
            "date_column" => self.schema.date_column = value.to_string(),
            "price_column" => self.schema.price_column = value.to_string(),
            "windows" => self.windows = lift(key, parse_windows(value))?,
            "norm_dim" => {
                self.norm_dim = match value {
                    "0" => 0,
                    "1" => 1,
                    _ => return Err(bad(key, "norm dimension is 0 or 1")),
                }
            }
            "vol_mean" => self.vol_mean = lift(key, parse_vol_mean(value))?,
            "nw_lag" => self.nw_lag = lift(key, parse_nw_lag(value))?,
            "small_sample" => self.small_sample = parse_bool(key, value)?,
            "padding" => self.padding = lift(key, parse_padding(value))?,
            "split" => self.split = lift(key, parse_split(value))?,
            "format" => self.format = lift(key, Format::from_str(value))?,
            "out" => self.out = path(value),
            "sample_start" => self.sample.start = parse_month(key, value)?,
            "sample_end" => self.sample.end = parse_month(key, value)?,
            "parallel" => self.parallel = parse_bool(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text`.
    pub fn apply_text(&mut self, text: &str, origin: &str, base: &Path) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError::Syntax { origin: origin.to_string(), line: i + 1 });
            };
            self.set(k.trim(), v, base)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = fs::read_to_string(path).map_err(|err| ConfigError::Read { path: path.to_path_buf(), err })?;
        let base = path.parent().unwrap_or(Path::new("."));
        self.apply_text(&text, &path.display().to_string(), base)
    }

    pub fn ols(&self) -> OlsOptions {
        OlsOptions { nw_lag: self.nw_lag, small_sample: self.small_sample }
    }

    /// Checks the invariants every command relies on.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.prices.len() < 2 {
            return Err(ConfigError::Invalid(format!("need at least 2 price files, got {}", self.prices.len())));
        }
        if self.windows.is_empty() || self.windows.iter().any(|w| !(1..=24).contains(w)) {
            return Err(ConfigError::Invalid("window lengths must lie in 1..=24".into()));
        }
        if let (Some(s), Some(e)) = (self.sample.start, self.sample.end) {
            if s > e {
                return Err(ConfigError::Invalid(format!("sample_start {s} is after sample_end {e}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_keys_and_relative_paths() {
        let mut c = PipelineConfig::default();
        let text = "# demo\nprice.SPX = spx.csv\nprice.NDX=/abs/ndx.csv  # trailing\n\nwindows = 3, 1\nnw_lag = 4\npadding = burnin\nsample_start = 1993-01\n";
        c.apply_text(text, "demo.cfg", Path::new("/cfg")).unwrap();
        assert_eq!(
            c.prices,
            vec![
                ("SPX".to_string(), PathBuf::from("/cfg/spx.csv")),
                ("NDX".to_string(), PathBuf::from("/abs/ndx.csv"))
            ]
        );
        assert_eq!(c.windows, vec![3, 1]);
        assert_eq!(c.nw_lag, NwLag::Fixed(4));
        assert_eq!(c.padding, Padding::Burnin);
        assert_eq!(c.sample.start, Month::new(1993, 1));
        c.validate().unwrap();
    }

    #[test]
    fn later_settings_override_earlier() {
        let mut c = PipelineConfig::default();
        c.apply_text("vol_mean = arithmetic\nprice.A = a.csv", "f", Path::new("")).unwrap();
        c.set("vol_mean", "geometric", Path::new("")).unwrap();
        c.set("price.A", "b.csv", Path::new("")).unwrap();
        assert_eq!(c.vol_mean, VolMean::Geometric);
        assert_eq!(c.prices, vec![("A".to_string(), PathBuf::from("b.csv"))]);
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = PipelineConfig::default();
        let b = Path::new("");
        assert!(matches!(c.set("windows", "0,3", b), Err(ConfigError::BadValue { .. })));
        assert!(matches!(c.set("windows", "25", b), Err(ConfigError::BadValue { .. })));
        assert!(matches!(c.set("colour", "red", b), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(c.apply_text("windows 3", "f", b), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(c.set("nw_lag", "-1", b), Err(ConfigError::BadValue { .. })));
        c.set("price.A", "a.csv", b).unwrap();
        assert!(matches!(c.validate(), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn price_argument() {
        assert_eq!(parse_price_arg("SPX=a/b.csv").unwrap(), ("SPX".to_string(), PathBuf::from("a/b.csv")));
        assert!(parse_price_arg("nolabel").is_err());
        assert!(parse_price_arg("=x").is_err());
    }
}
