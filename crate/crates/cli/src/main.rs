use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use persnorm_cli::config::{parse_price_arg, ConfigError, PipelineConfig};
use persnorm_cli::{run_pipeline, Command};

#[derive(Parser)]
#[command(
    name = "persnorm",
    version,
    about = "Persistence norms of index return clouds, with correlation and regression tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Norm series for each window length.
    Compute(Opts),
    /// Norm series, correlation tables and standardized plot data.
    Correlate(Opts),
    /// Norm series and regression batteries.
    Regress(Opts),
    /// Everything, followed by reproduction checks.
    Report(Opts),
}

#[derive(Args)]
struct Opts {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Price file as LABEL=PATH; repeat per index. Replaces any from the config file.
    #[arg(long = "price", value_name = "LABEL=PATH")]
    prices: Vec<String>,
    /// Monthly uncertainty CSV with a `month` column.
    #[arg(long)]
    uncertainty: Option<PathBuf>,
    /// Uncertainty columns for the correlation tables.
    #[arg(long, value_name = "A,B,..")]
    uncertainty_columns: Option<String>,
    /// Uncertainty columns for the regression batteries.
    #[arg(long, value_name = "A,B,..")]
    regress_columns: Option<String>,
    #[arg(long)]
    date_column: Option<String>,
    #[arg(long)]
    price_column: Option<String>,
    /// Window lengths in months.
    #[arg(long, value_name = "1,3,6,12")]
    windows: Option<String>,
    #[arg(long, value_name = "0|1")]
    norm_dim: Option<String>,
    #[arg(long, value_name = "geometric|arithmetic")]
    vol_mean: Option<String>,
    #[arg(long, value_name = "auto|N")]
    nw_lag: Option<String>,
    /// Scale the HAC covariance by n/(n-p).
    #[arg(long)]
    small_sample: bool,
    #[arg(long, value_name = "lookback|burnin")]
    padding: Option<String>,
    #[arg(long, value_name = "median|none")]
    split: Option<String>,
    #[arg(long, value_name = "csv|json")]
    format: Option<String>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// First anchor month, YYYY-MM.
    #[arg(long)]
    sample_start: Option<String>,
    /// Last anchor month, YYYY-MM.
    #[arg(long)]
    sample_end: Option<String>,
    /// Process windows on one thread.
    #[arg(long)]
    serial: bool,
}

impl Opts {
    fn resolve(&self) -> Result<PipelineConfig, ConfigError> {
        let mut c = PipelineConfig::default();
        if let Some(path) = &self.config {
            c.apply_file(path)?;
        }
        if !self.prices.is_empty() {
            c.prices.clear();
            for p in &self.prices {
                let (label, path) =
                    parse_price_arg(p).map_err(|reason| ConfigError::BadValue { key: "--price".into(), reason })?;
                c.prices.push((label, path));
            }
        }
        let here = std::path::Path::new("");
        let text = [
            ("uncertainty_columns", &self.uncertainty_columns),
            ("regress_columns", &self.regress_columns),
            ("date_column", &self.date_column),
            ("price_column", &self.price_column),
            ("windows", &self.windows),
            ("norm_dim", &self.norm_dim),
            ("vol_mean", &self.vol_mean),
            ("nw_lag", &self.nw_lag),
            ("padding", &self.padding),
            ("split", &self.split),
            ("format", &self.format),
            ("sample_start", &self.sample_start),
            ("sample_end", &self.sample_end),
        ];
        for (key, value) in text {
            if let Some(v) = value {
                c.set(key, v, here)?;
            }
        }
        if let Some(p) = &self.uncertainty {
            c.uncertainty = Some(p.clone());
        }
        if let Some(p) = &self.out {
            c.out = p.clone();
        }
        if self.small_sample {
            c.small_sample = true;
        }
        if self.serial {
            c.parallel = false;
        }
        Ok(c)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match &cli.command {
        Sub::Compute(o) => (Command::Compute, o),
        Sub::Correlate(o) => (Command::Correlate, o),
        Sub::Regress(o) => (Command::Regress, o),
        Sub::Report(o) => (Command::Report, o),
    };
    let config = match opts.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match run_pipeline(&config, command) {
        Ok(manifest) => {
            for line in &manifest.report {
                println!("{line}");
            }
            println!("wrote {} files to {}", manifest.files.len() + 1, manifest.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.kind.exit_code() as u8)
        }
    }
}
