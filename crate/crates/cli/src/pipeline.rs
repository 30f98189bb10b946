//! End-to-end orchestration: prices to norm series, correlation tables,
//! regression batteries and plot data, all written through one [`OutputDir`].

use std::fmt;
use std::path::{Path, PathBuf};

use persnorm::cloud::CloudError;
use persnorm::econ::{
    correlation_table, cross_window_frame, model_battery, norm_var_name, window_frame, BatteryConfig, BatteryKind,
    BatteryRow, CorrelationMatrix, EconError, Frame, SIGMA_BAR,
};
use persnorm::ingest::{align_panel, load_price_csv, load_uncertainty_csv, DropReport, IngestError};
use persnorm::norms::{build_norm_series, standardize, NormConfig, NormKind};
use persnorm::{NormSeries64, ReturnMatrix64, UncertaintySeries64};

use crate::checks::{reproduction_checks, CheckOutcome, VINTAGE_CAVEAT};
use crate::config::{PipelineConfig, SplitMode};
use crate::emit::{Cell, ManifestEntry, OutputDir, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Norm series only.
    Compute,
    /// Norm series, correlation tables and plot data.
    Correlate,
    /// Norm series and regression batteries.
    Regress,
    /// Everything, plus reproduction checks.
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Ingest,
    Cloud,
    Correlate,
    Regress,
    Emit,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Cloud => "cloud",
            Stage::Correlate => "correlate",
            Stage::Regress => "regress",
            Stage::Emit => "emit",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Numerical,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Input => 1,
            ErrorKind::Numerical => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{stage} stage failed on {input}: {message}")]
pub struct PipelineError {
    pub stage: Stage,
    /// The file, window or variable being processed.
    pub input: String,
    pub kind: ErrorKind,
    pub message: String,
}

impl PipelineError {
    fn new(stage: Stage, input: impl Into<String>, kind: ErrorKind, message: impl fmt::Display) -> Self {
        Self { stage, input: input.into(), kind, message: message.to_string() }
    }

    fn econ(stage: Stage, input: impl Into<String>, e: EconError) -> Self {
        let kind = match e {
            EconError::UnknownVariable(_) | EconError::MisalignedMonths(_) | EconError::LengthMismatch(..) => {
                ErrorKind::Input
            }
            _ => ErrorKind::Numerical,
        };
        Self::new(stage, input, kind, e)
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(Stage::Emit, path.display().to_string(), ErrorKind::Input, e)
    }
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub out_dir: PathBuf,
    /// Every emitted file except `manifest.json` itself, sorted by name.
    pub files: Vec<ManifestEntry>,
    /// Lines for the terminal (reproduction checks), empty unless `report`.
    pub report: Vec<String>,
}

/// In-memory results of the numeric stages.
#[derive(Debug, Clone)]
pub struct Computed {
    pub panel: ReturnMatrix64,
    pub drops: DropReport,
    pub uncertainty: Option<UncertaintySeries64>,
    pub norms: Vec<NormSeries64>,
}

pub fn load_inputs(
    config: &PipelineConfig,
    need_uncertainty: bool,
) -> Result<(ReturnMatrix64, DropReport, Option<UncertaintySeries64>), PipelineError> {
    config.validate().map_err(|e| PipelineError::new(Stage::Config, "configuration", ErrorKind::Input, e))?;
    let ingest = |path: &Path, e: IngestError| {
        PipelineError::new(Stage::Ingest, path.display().to_string(), ErrorKind::Input, e)
    };
    let mut series = Vec::with_capacity(config.prices.len());
    for (label, path) in &config.prices {
        series.push(load_price_csv::<f64>(path, Some(label), &config.schema).map_err(|e| ingest(path, e))?);
    }
    let labels = config.prices.iter().map(|p| p.0.as_str()).collect::<Vec<_>>().join(",");
    let (panel, drops) =
        align_panel(&series).map_err(|e| PipelineError::new(Stage::Ingest, labels, ErrorKind::Input, e))?;
    let uncertainty = if need_uncertainty {
        let Some(path) = &config.uncertainty else {
            return Err(PipelineError::new(
                Stage::Ingest,
                "uncertainty",
                ErrorKind::Input,
                "no uncertainty file configured",
            ));
        };
        Some(load_uncertainty_csv::<f64>(path).map_err(|e| ingest(path, e))?)
    } else {
        None
    };
    Ok((panel, drops, uncertainty))
}

/// One norm series per configured window length.
pub fn compute_norms(config: &PipelineConfig, panel: &ReturnMatrix64) -> Result<Vec<NormSeries64>, PipelineError> {
    let norm_config = NormConfig {
        padding: config.padding,
        vol_mean: config.vol_mean,
        include_dim0: config.norm_dim == 0,
        parallel: config.parallel,
    };
    config
        .windows
        .iter()
        .map(|&w| {
            // Every cloud failure traces back to how little data a window holds.
            build_norm_series(panel, w, config.sample, &norm_config).map_err(|e: CloudError| {
                PipelineError::new(Stage::Cloud, format!("{w}-month windows"), ErrorKind::Input, e)
            })
        })
        .collect()
}

pub fn run_pipeline(config: &PipelineConfig, command: Command) -> Result<Manifest, PipelineError> {
    let (panel, drops, uncertainty) = load_inputs(config, command != Command::Compute)?;
    let norms = compute_norms(config, &panel)?;
    let computed = Computed { panel, drops, uncertainty, norms };
    emit_all(config, command, &computed)
}

fn norms_table(series: &NormSeries64) -> Table {
    let with0 = series.records.iter().any(|r| r.dim0.is_some());
    let mut cols: Vec<String> = ["month", "window", "L11", "L12", SIGMA_BAR].iter().map(|s| s.to_string()).collect();
    if with0 {
        cols.extend(["L01".to_string(), "L02".to_string()]);
    }
    let mut t = Table::new(cols);
    for r in &series.records {
        let mut row = vec![
            Cell::Text(r.month.to_string()),
            series.window_length_months.into(),
            r.l1_dim1.into(),
            r.l2_dim1.into(),
            r.sigma_bar.into(),
        ];
        if with0 {
            let (a, b) = r.dim0.unwrap_or((f64::NAN, f64::NAN));
            row.extend([Cell::Num(a), Cell::Num(b)]);
        }
        t.push(row);
    }
    t
}

fn drop_table(config: &PipelineConfig, panel: &ReturnMatrix64, drops: &DropReport) -> Table {
    let mut t = Table::new(vec!["index".into(), "dropped_days".into(), "aligned_return_days".into()]);
    for (label, _) in &config.prices {
        let n = drops.dropped.iter().find(|d| &d.0 == label).map_or(0, |d| d.1);
        t.push(vec![label.as_str().into(), n.into(), panel.n_days().into()]);
    }
    t
}

/// `month` followed by each frame variable standardized; constant series are left blank.
fn plot_table(frame: &Frame<f64>) -> Table {
    let mut cols = vec!["month".to_string()];
    cols.extend(frame.vars.iter().map(|v| v.0.clone()));
    let z: Vec<Option<Vec<f64>>> = frame.vars.iter().map(|v| standardize(&v.1).ok()).collect();
    let mut t = Table::new(cols);
    for (i, m) in frame.months.iter().enumerate() {
        let mut row = vec![Cell::Text(m.to_string())];
        row.extend(z.iter().map(|c| c.as_ref().map_or(Cell::Empty, |c| Cell::Num(c[i]))));
        t.push(row);
    }
    t
}

/// Union of coefficient names across rows, in first-appearance order.
fn battery_table(rows: &[&BatteryRow<f64>], norm_dim: usize) -> Table {
    let mut names: Vec<String> = Vec::new();
    for r in rows {
        for n in &r.result.names {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
    }
    let mut cols: Vec<String> =
        ["model", "norm", "dependent", "uncertainty", "window", "sample"].iter().map(|s| s.to_string()).collect();
    for n in &names {
        cols.push(format!("coef_{n}"));
        cols.push(format!("t_{n}"));
    }
    cols.extend(["adj_r2", "n", "nw_lag"].iter().map(|s| s.to_string()));
    let mut t = Table::new(cols);
    for r in rows {
        let mut row = vec![
            Cell::Text(r.model.to_string()),
            Cell::Text(norm_var_name(norm_dim, r.model.norm)),
            Cell::Text(r.dependent.clone()),
            Cell::Text(r.uncertainty.clone()),
            r.window.into(),
            Cell::Text(r.sample.to_string()),
        ];
        for n in &names {
            match r.result.index_of(n) {
                Some(i) => row.extend([Cell::Num(r.result.coefficients[i]), Cell::Num(r.result.t_stats[i])]),
                None => row.extend([Cell::Empty, Cell::Empty]),
            }
        }
        row.extend([Cell::Num(r.result.adj_r2), r.result.n.into(), r.result.nw_lag.into()]);
        t.push(row);
    }
    t
}

fn norm_label(kind: NormKind) -> &'static str {
    match kind {
        NormKind::L1 => "L1",
        NormKind::L2 => "L2",
    }
}

fn write(out: &mut OutputDir, stem: &str, table: &Table) -> Result<(), PipelineError> {
    out.write_table(stem, table).map(|_| ()).map_err(|e| PipelineError::io(&out.root().join(stem), e))
}

/// Writes every output `command` calls for. Files are written in a fixed order
/// from data computed beforehand, so identical inputs give identical bytes.
pub fn emit_all(config: &PipelineConfig, command: Command, c: &Computed) -> Result<Manifest, PipelineError> {
    let mut out = OutputDir::create(&config.out, config.format).map_err(|e| PipelineError::io(&config.out, e))?;
    write(&mut out, "drop_report", &drop_table(config, &c.panel, &c.drops))?;
    for s in &c.norms {
        write(&mut out, &format!("norms_{}m", s.window_length_months), &norms_table(s))?;
    }

    let mut corrs: Vec<(usize, CorrelationMatrix<f64>)> = Vec::new();
    let mut battery: Vec<BatteryRow<f64>> = Vec::new();
    if let Some(unc) = &c.uncertainty {
        if matches!(command, Command::Correlate | Command::Report) {
            let present: Vec<String> =
                config.uncertainty_columns.iter().filter(|n| unc.column(n).is_some()).cloned().collect();
            for s in &c.norms {
                let w = s.window_length_months;
                let input = format!("{w}-month norms");
                let frame = window_frame(s, unc, &present, config.norm_dim)
                    .map_err(|e| PipelineError::econ(Stage::Correlate, &input, e))?;
                let m = correlation_table(&frame.vars).map_err(|e| PipelineError::econ(Stage::Correlate, &input, e))?;
                write(&mut out, &format!("corr_{w}m"), &Table::from_correlation(&m))?;
                write(&mut out, &format!("plot_{w}m"), &plot_table(&frame))?;
                corrs.push((w, m));
            }
            let measures = [
                SIGMA_BAR.to_string(),
                norm_var_name(config.norm_dim, NormKind::L1),
                norm_var_name(config.norm_dim, NormKind::L2),
            ];
            for measure in measures {
                let frame = cross_window_frame(&c.norms, &measure)
                    .map_err(|e| PipelineError::econ(Stage::Correlate, &measure, e))?;
                let m =
                    correlation_table(&frame.vars).map_err(|e| PipelineError::econ(Stage::Correlate, &measure, e))?;
                write(&mut out, &format!("corr_cross_{measure}"), &Table::from_correlation(&m))?;
            }
        }
        if matches!(command, Command::Regress | Command::Report) {
            let cfg = BatteryConfig {
                uncertainty_columns: config.regress_columns.clone(),
                norm_dim: config.norm_dim,
                norms: vec![NormKind::L1, NormKind::L2],
                ols: config.ols(),
            };
            let input = config.regress_columns.join(",");
            battery = model_battery(&c.norms, unc, BatteryKind::Base, &cfg)
                .map_err(|e| PipelineError::econ(Stage::Regress, &input, e))?;
            let split = match config.split {
                SplitMode::Median => model_battery(&c.norms, unc, BatteryKind::Split, &cfg)
                    .map_err(|e| PipelineError::econ(Stage::Regress, &input, e))?,
                SplitMode::None => Vec::new(),
            };
            for kind in [NormKind::L1, NormKind::L2] {
                let label = norm_label(kind);
                let pick = |rows: &[BatteryRow<f64>], bases: std::ops::RangeInclusive<u8>| -> Vec<BatteryRow<f64>> {
                    rows.iter().filter(|r| r.model.norm == kind && bases.contains(&r.model.base)).cloned().collect()
                };
                let det = pick(&battery, 1..=3);
                let unc_rows = pick(&battery, 4..=6);
                write(
                    &mut out,
                    &format!("regress_determinants_{label}"),
                    &battery_table(&det.iter().collect::<Vec<_>>(), config.norm_dim),
                )?;
                write(
                    &mut out,
                    &format!("regress_uncertainty_{label}"),
                    &battery_table(&unc_rows.iter().collect::<Vec<_>>(), config.norm_dim),
                )?;
                if config.split == SplitMode::Median {
                    let s = pick(&split, 4..=6);
                    write(
                        &mut out,
                        &format!("regress_split_{label}"),
                        &battery_table(&s.iter().collect::<Vec<_>>(), config.norm_dim),
                    )?;
                }
            }
        }
    }

    let mut report = Vec::new();
    if command == Command::Report {
        let outcome: CheckOutcome = reproduction_checks(&corrs, &battery);
        let mut t = Table::new(vec!["check".into(), "observed".into(), "target".into(), "pass".into()]);
        for line in outcome.strict.iter().chain(&outcome.signs) {
            t.push(vec![
                line.name.as_str().into(),
                line.observed.into(),
                line.target.as_str().into(),
                (if line.pass { "yes" } else { "no" }).into(),
            ]);
        }
        write(&mut out, "reproduction_checks", &t)?;
        report.push(VINTAGE_CAVEAT.to_string());
        report.extend(outcome.lines());
    }

    let out_dir = out.root().to_path_buf();
    let files = out.finish().map_err(|e| PipelineError::io(&out_dir, e))?;
    Ok(Manifest { out_dir, files, report })
}
