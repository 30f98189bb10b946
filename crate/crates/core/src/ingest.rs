//! Loading and aligning daily index prices and monthly uncertainty indexes.
//!
//! Prices come from CSV exports with a header row; the date and price column
//! names are configurable through [`PriceSchema`]. Dates are ISO-8601
//! (`YYYY-MM-DD`) only. Panels are aligned by strict intersection of trading
//! days, and returns across dropped days are taken between adjacent aligned
//! prices.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;

use crate::month::Month;
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{source_name}: cannot read input: {err}")]
    Io { source_name: String, err: std::io::Error },
    #[error("{source_name}: line {line}: {reason}")]
    MalformedRow { source_name: String, line: u64, reason: String },
    #[error("{source_name}: line {line}: non-positive or non-finite price {value}")]
    NonPositivePrice { source_name: String, line: u64, value: f64 },
    #[error("{source_name}: duplicate date {date}")]
    DuplicateDate { source_name: String, date: NaiveDate },
    #[error("{source_name}: no data rows")]
    EmptyFile { source_name: String },
    #[error("series `{index_id}` has {len} observation(s); at least 2 are needed")]
    TooShort { index_id: String, len: usize },
    #[error("the input series share no common trading day")]
    EmptyIntersection,
}

/// Column names used to read a price CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceSchema {
    pub date_column: String,
    pub price_column: String,
}

impl Default for PriceSchema {
    fn default() -> Self {
        Self { date_column: "date".into(), price_column: "adj_close".into() }
    }
}

/// Daily adjusted closes for one index, strictly increasing in date.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries<T> {
    index_id: String,
    dates: Vec<NaiveDate>,
    adj_close: Vec<T>,
}

impl<T: Scalar> PriceSeries<T> {
    /// Builds a series from `(date, price)` observations in any order.
    pub fn new(index_id: impl Into<String>, mut rows: Vec<(NaiveDate, T)>) -> Result<Self, IngestError> {
        let index_id = index_id.into();
        if rows.is_empty() {
            return Err(IngestError::EmptyFile { source_name: index_id });
        }
        rows.sort_by_key(|r| r.0);
        for w in rows.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(IngestError::DuplicateDate { source_name: index_id, date: w[0].0 });
            }
        }
        for (i, &(_, p)) in rows.iter().enumerate() {
            if !(p.is_finite() && p > T::zero()) {
                return Err(IngestError::NonPositivePrice {
                    source_name: index_id,
                    line: i as u64 + 1,
                    value: p.to_f64_lossy(),
                });
            }
        }
        let (dates, adj_close) = rows.into_iter().unzip();
        Ok(Self { index_id, dates, adj_close })
    }

    pub fn index_id(&self) -> &str {
        &self.index_id
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn adj_close(&self) -> &[T] {
        &self.adj_close
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    /// Keeps only the observations whose date is in `keep`.
    pub fn restrict_to(&self, keep: &BTreeSet<NaiveDate>) -> Self {
        let (dates, adj_close) =
            self.dates.iter().zip(&self.adj_close).filter(|(d, _)| keep.contains(d)).map(|(d, p)| (*d, *p)).unzip();
        Self { index_id: self.index_id.clone(), dates, adj_close }
    }
}

/// Reads a price CSV from disk. The index label defaults to the file stem.
pub fn load_price_csv<T: Scalar>(
    path: &Path,
    index_id: Option<&str>,
    schema: &PriceSchema,
) -> Result<PriceSeries<T>, IngestError> {
    let name = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|err| IngestError::Io { source_name: name.clone(), err })?;
    let label = index_id
        .map(str::to_string)
        .unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| name.clone()));
    read_price_csv(file, &name, &label, schema)
}

/// Parses price CSV content from any reader.
pub fn read_price_csv<T: Scalar, R: Read>(
    reader: R,
    source_name: &str,
    index_id: &str,
    schema: &PriceSchema,
) -> Result<PriceSeries<T>, IngestError> {
    let malformed =
        |line: u64, reason: String| IngestError::MalformedRow { source_name: source_name.to_string(), line, reason };
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| malformed(1, e.to_string()))?.clone();
    let find = |col: &str| {
        headers.iter().position(|h| h == col).ok_or_else(|| malformed(1, format!("missing column `{col}`")))
    };
    let date_idx = find(&schema.date_column)?;
    let price_idx = find(&schema.price_column)?;

    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            malformed(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let date_s = rec.get(date_idx).unwrap_or("");
        let price_s = rec.get(price_idx).unwrap_or("");
        let date = NaiveDate::parse_from_str(date_s, "%Y-%m-%d")
            .map_err(|_| malformed(line, format!("unparseable date `{date_s}`")))?;
        let price: f64 = price_s.parse().map_err(|_| malformed(line, format!("unparseable price `{price_s}`")))?;
        if !(price.is_finite() && price > 0.0) {
            return Err(IngestError::NonPositivePrice { source_name: source_name.to_string(), line, value: price });
        }
        if !seen.insert(date) {
            return Err(IngestError::DuplicateDate { source_name: source_name.to_string(), date });
        }
        rows.push((date, T::from_f64_lossy(price)));
    }
    if rows.is_empty() {
        return Err(IngestError::EmptyFile { source_name: source_name.to_string() });
    }
    PriceSeries::new(index_id, rows)
}

/// Daily log returns `ln p_t - ln p_{t-1}`, dated by day `t`.
pub fn log_returns<T: Scalar>(series: &PriceSeries<T>) -> Result<Vec<(NaiveDate, T)>, IngestError> {
    if series.len() < 2 {
        return Err(IngestError::TooShort { index_id: series.index_id.clone(), len: series.len() });
    }
    Ok(series.dates.windows(2).zip(series.adj_close.windows(2)).map(|(d, p)| (d[1], p[1].ln() - p[0].ln())).collect())
}

/// Aligned daily log returns: `n_days` rows by `k` index columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnMatrix<T> {
    index_ids: Vec<String>,
    dates: Vec<NaiveDate>,
    /// Row-major, `dates.len() * index_ids.len()`.
    data: Vec<T>,
}

impl<T: Scalar> ReturnMatrix<T> {
    /// Builds a matrix from row-major data. Panics if the shape does not match
    /// or dates are not strictly increasing.
    pub fn from_rows(index_ids: Vec<String>, dates: Vec<NaiveDate>, rows: Vec<Vec<T>>) -> Self {
        let k = index_ids.len();
        assert!(k >= 1, "at least one index column");
        assert_eq!(dates.len(), rows.len(), "one row per date");
        assert!(dates.windows(2).all(|w| w[0] < w[1]), "dates strictly increasing");
        let mut data = Vec::with_capacity(rows.len() * k);
        for r in rows {
            assert_eq!(r.len(), k, "row width");
            data.extend(r);
        }
        Self { index_ids, dates, data }
    }

    pub fn index_ids(&self) -> &[String] {
        &self.index_ids
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn n_days(&self) -> usize {
        self.dates.len()
    }

    pub fn k(&self) -> usize {
        self.index_ids.len()
    }

    pub fn row(&self, t: usize) -> &[T] {
        let k = self.k();
        &self.data[t * k..(t + 1) * k]
    }

    pub fn get(&self, t: usize, j: usize) -> T {
        self.data[t * self.k() + j]
    }

    /// Column `j` restricted to rows `range`.
    pub fn column(&self, j: usize, range: std::ops::Range<usize>) -> Vec<T> {
        range.map(|t| self.get(t, j)).collect()
    }

    /// Multiplies every return by `c`.
    pub fn scaled(&self, c: T) -> Self {
        Self {
            index_ids: self.index_ids.clone(),
            dates: self.dates.clone(),
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }
}

/// Number of trading days each input series lost in alignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DropReport {
    pub dropped: Vec<(String, usize)>,
}

impl DropReport {
    pub fn total(&self) -> usize {
        self.dropped.iter().map(|d| d.1).sum()
    }
}

/// Restricts every series to the common trading days.
pub fn align_prices<T: Scalar>(
    series_list: &[PriceSeries<T>],
) -> Result<(Vec<PriceSeries<T>>, DropReport), IngestError> {
    let mut iter = series_list.iter();
    let first = iter.next().ok_or(IngestError::EmptyIntersection)?;
    let mut common: BTreeSet<NaiveDate> = first.dates.iter().copied().collect();
    for s in iter {
        let other: BTreeSet<NaiveDate> = s.dates.iter().copied().collect();
        common = common.intersection(&other).copied().collect();
    }
    if common.is_empty() {
        return Err(IngestError::EmptyIntersection);
    }
    let aligned: Vec<_> = series_list.iter().map(|s| s.restrict_to(&common)).collect();
    let dropped = series_list.iter().map(|s| (s.index_id.clone(), s.len() - common.len())).collect();
    Ok((aligned, DropReport { dropped }))
}

/// Aligns the series on their common trading days and computes log returns.
pub fn align_panel<T: Scalar>(series_list: &[PriceSeries<T>]) -> Result<(ReturnMatrix<T>, DropReport), IngestError> {
    let (aligned, report) = align_prices(series_list)?;
    let columns = aligned.iter().map(log_returns).collect::<Result<Vec<_>, _>>()?;
    let dates: Vec<NaiveDate> = columns[0].iter().map(|r| r.0).collect();
    let rows = (0..dates.len()).map(|t| columns.iter().map(|c| c[t].1).collect()).collect();
    let ids = aligned.iter().map(|s| s.index_id.clone()).collect();
    Ok((ReturnMatrix::from_rows(ids, dates, rows), report))
}

/// Monthly uncertainty indexes keyed by calendar month.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintySeries<T> {
    months: Vec<Month>,
    names: Vec<String>,
    /// `columns[c][i]` is column `c` at `months[i]`; `None` for an empty cell.
    columns: Vec<Vec<Option<T>>>,
}

impl<T: Scalar> UncertaintySeries<T> {
    pub fn new(months: Vec<Month>, columns: Vec<(String, Vec<Option<T>>)>) -> Self {
        assert!(months.windows(2).all(|w| w[0] < w[1]), "months strictly increasing");
        let (names, columns): (Vec<_>, Vec<_>) = columns.into_iter().unzip();
        assert!(columns.iter().all(|c: &Vec<Option<T>>| c.len() == months.len()));
        Self { months, names, columns }
    }

    pub fn months(&self) -> &[Month] {
        &self.months
    }

    pub fn len(&self) -> usize {
        self.months.len()
    }

    pub fn is_empty(&self) -> bool {
        self.months.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, name: &str) -> Option<&[Option<T>]> {
        self.names.iter().position(|n| n == name).map(|i| self.columns[i].as_slice())
    }

    /// Value of column `name` at `month`, if both exist and the cell is filled.
    pub fn value(&self, name: &str, month: Month) -> Option<T> {
        let col = self.column(name)?;
        let i = self.months.binary_search(&month).ok()?;
        col[i]
    }
}

pub fn load_uncertainty_csv<T: Scalar>(path: &Path) -> Result<UncertaintySeries<T>, IngestError> {
    let name = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|err| IngestError::Io { source_name: name.clone(), err })?;
    read_uncertainty_csv(file, &name)
}

/// Parses a `month,<col>,...` CSV. Empty cells are kept as missing values.
pub fn read_uncertainty_csv<T: Scalar, R: Read>(
    reader: R,
    source_name: &str,
) -> Result<UncertaintySeries<T>, IngestError> {
    let malformed =
        |line: u64, reason: String| IngestError::MalformedRow { source_name: source_name.to_string(), line, reason };
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| malformed(1, e.to_string()))?.clone();
    let month_idx =
        headers.iter().position(|h| h == "month").ok_or_else(|| malformed(1, "missing column `month`".into()))?;
    let value_cols: Vec<(usize, String)> =
        headers.iter().enumerate().filter(|(i, _)| *i != month_idx).map(|(i, h)| (i, h.to_string())).collect();
    if value_cols.is_empty() {
        return Err(malformed(1, "no value columns".into()));
    }

    let mut months = Vec::new();
    let mut columns: Vec<Vec<Option<T>>> = vec![Vec::new(); value_cols.len()];
    for rec in rdr.records() {
        let rec = rec.map_err(|e| malformed(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let m_s = rec.get(month_idx).unwrap_or("");
        let month: Month = m_s.parse().map_err(|e: crate::month::ParseMonthError| malformed(line, e.to_string()))?;
        if let Some(&prev) = months.last() {
            if month <= prev {
                return Err(malformed(line, format!("month {month} does not follow {prev}")));
            }
        }
        months.push(month);
        for (c, (i, col_name)) in value_cols.iter().enumerate() {
            let cell = rec.get(*i).unwrap_or("");
            let v = if cell.is_empty() {
                None
            } else {
                let v: f64 =
                    cell.parse().map_err(|_| malformed(line, format!("column `{col_name}`: unparseable `{cell}`")))?;
                if !v.is_finite() {
                    return Err(malformed(line, format!("column `{col_name}`: non-finite value")));
                }
                Some(T::from_f64_lossy(v))
            };
            columns[c].push(v);
        }
    }
    if months.is_empty() {
        return Err(IngestError::EmptyFile { source_name: source_name.to_string() });
    }
    let named = value_cols.into_iter().map(|(_, n)| n).zip(columns).collect();
    Ok(UncertaintySeries::new(months, named))
}

/// Distinct calendar months covered by `dates`, in order, with the row range of each.
pub(crate) fn month_runs(dates: &[NaiveDate]) -> BTreeMap<Month, std::ops::Range<usize>> {
    let mut out: BTreeMap<Month, std::ops::Range<usize>> = BTreeMap::new();
    for (t, d) in dates.iter().enumerate() {
        out.entry(Month::of(*d)).and_modify(|r| r.end = t + 1).or_insert(t..t + 1);
    }
    out
}
