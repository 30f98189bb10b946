//! Synthetic index panels and uncertainty files for end-to-end runs.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{Datelike, NaiveDate, Weekday};
use persnorm::Month;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const LABELS: [&str; 4] = ["SPX", "DJI", "NDX", "RUT"];

pub fn business_days(start: NaiveDate, end: NaiveDate) -> Vec<NaiveDate> {
    start
        .iter_days()
        .take_while(|d| *d <= end)
        .filter(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun))
        .collect()
}

/// Daily log returns for `k` correlated indexes whose volatility follows a
/// persistent monthly regime. Also returns that regime per month.
pub struct Panel {
    pub dates: Vec<NaiveDate>,
    pub prices: Vec<Vec<f64>>,
    pub month_vol: BTreeMap<Month, f64>,
}

pub fn synthetic_panel(seed: u64, k: usize, start: NaiveDate, end: NaiveDate) -> Panel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dates = business_days(start, end);
    let mut month_vol = BTreeMap::new();
    let mut log_vol = (0.01f64).ln();
    let mut prices = vec![vec![100.0]; k];
    for d in &dates[1..] {
        let m = Month::of(*d);
        let vol = *month_vol.entry(m).or_insert_with(|| {
            log_vol = 0.85 * log_vol + 0.15 * (0.01f64).ln() + 0.25 * rng.sample::<f64, _>(StandardNormal);
            log_vol.exp()
        });
        let common: f64 = rng.sample(StandardNormal);
        for p in prices.iter_mut() {
            let own: f64 = rng.sample(StandardNormal);
            let r = vol * (0.8 * common + 0.6 * own);
            let last = *p.last().unwrap();
            p.push(last * r.exp());
        }
    }
    Panel { dates, prices, month_vol }
}

/// Writes `date,adj_close` files. Index 1 skips `skip_in_second` dates to
/// exercise alignment.
pub fn write_prices(dir: &Path, panel: &Panel, skip_in_second: usize) -> Vec<(String, PathBuf)> {
    let mut out = Vec::new();
    for (j, series) in panel.prices.iter().enumerate() {
        let label = LABELS[j % LABELS.len()].to_string();
        let path = dir.join(format!("{}.csv", label.to_lowercase()));
        let mut s = String::from("date,adj_close\n");
        for (t, (d, p)) in panel.dates.iter().zip(series).enumerate() {
            if j == 1 && t > 0 && t <= skip_in_second * 40 && t % 40 == 0 {
                continue;
            }
            writeln!(s, "{d},{p:.6}").unwrap();
        }
        fs::write(&path, s).unwrap();
        out.push((label, path));
    }
    out
}

/// `month,FIN1,MAC1,REA1`: FIN1 tracks the volatility regime closely, MAC1
/// loosely, REA1 not at all.
pub fn write_uncertainty(path: &Path, panel: &Panel, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut s = String::from("month,FIN1,MAC1,REA1\n");
    for (m, v) in &panel.month_vol {
        let z = (v / 0.01).ln();
        let fin = 0.9 + 0.2 * z + 0.03 * rng.sample::<f64, _>(StandardNormal);
        let mac = 0.6 + 0.05 * z + 0.05 * rng.sample::<f64, _>(StandardNormal);
        let rea = 0.7 + 0.05 * rng.sample::<f64, _>(StandardNormal);
        writeln!(s, "{m},{fin:.6},{mac:.6},{rea:.6}").unwrap();
    }
    fs::write(path, s).unwrap();
}

/// Prices and uncertainty for `k` indexes over `[start, end]`, written to `dir`.
pub struct Dataset {
    pub prices: Vec<(String, PathBuf)>,
    pub uncertainty: PathBuf,
}

pub fn dataset(dir: &Path, seed: u64, k: usize, start: NaiveDate, end: NaiveDate) -> Dataset {
    let panel = synthetic_panel(seed, k, start, end);
    let prices = write_prices(dir, &panel, 2);
    let uncertainty = dir.join("uncertainty.csv");
    write_uncertainty(&uncertainty, &panel, seed);
    Dataset { prices, uncertainty }
}

pub fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}
