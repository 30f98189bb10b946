//! Calendar-month windows over the return panel, and the point cloud,
//! Euclidean distance matrix and volatility of each window.

use std::ops::Range;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::ingest::{month_runs, ReturnMatrix};
use crate::month::Month;
use crate::scalar::{sample_std, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CloudError {
    #[error("no full {length_months}-month window fits the panel")]
    NoFullWindow { length_months: usize },
    #[error("window length must be at least one month")]
    ZeroLength,
    #[error("empty slice")]
    EmptySlice,
    #[error("slice has {0} day(s); at least 2 are needed")]
    TooShort(usize),
}

/// How windows near the start of the panel are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Padding {
    /// Every month of the sample is an anchor; its window reaches back into
    /// whatever earlier data the panel holds and is truncated at the panel start.
    #[default]
    Lookback,
    /// Only anchors whose whole window lies inside the panel are kept.
    Burnin,
}

/// Restricts anchor months to an inclusive range. `None` bounds are open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SampleRange {
    pub start: Option<Month>,
    pub end: Option<Month>,
}

impl SampleRange {
    pub fn contains(&self, m: Month) -> bool {
        self.start.is_none_or(|s| m >= s) && self.end.is_none_or(|e| m <= e)
    }
}

/// A window of `length_months` calendar months ending at `anchor_month`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WindowSpec {
    pub length_months: usize,
    pub anchor_month: Month,
}

impl WindowSpec {
    pub fn first_month(&self) -> Month {
        self.anchor_month.offset(1 - self.length_months as i64)
    }

    pub fn contains(&self, m: Month) -> bool {
        m >= self.first_month() && m <= self.anchor_month
    }
}

/// One window and the panel rows it covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSlice {
    pub window: WindowSpec,
    pub rows: Range<usize>,
}

/// Enumerates anchor months and the panel rows of each window.
pub fn window_slices<T: Scalar>(
    panel: &ReturnMatrix<T>,
    length_months: usize,
    padding: Padding,
    sample: SampleRange,
) -> Result<Vec<WindowSlice>, CloudError> {
    if length_months == 0 {
        return Err(CloudError::ZeroLength);
    }
    let runs = month_runs(panel.dates());
    let (Some((&first, _)), Some((&last, _))) = (runs.first_key_value(), runs.last_key_value()) else {
        return Err(CloudError::NoFullWindow { length_months });
    };
    let earliest_anchor = match padding {
        Padding::Lookback => first,
        Padding::Burnin => first.offset(length_months as i64 - 1),
    };
    let mut out = Vec::new();
    if earliest_anchor > last {
        return Err(CloudError::NoFullWindow { length_months });
    }
    for (&anchor, anchor_rows) in runs.range(earliest_anchor..=last) {
        if !sample.contains(anchor) {
            continue;
        }
        let window = WindowSpec { length_months, anchor_month: anchor };
        let start = runs.range(window.first_month()..=anchor).next().map(|(_, r)| r.start).unwrap_or(anchor_rows.start);
        out.push(WindowSlice { window, rows: start..anchor_rows.end });
    }
    if out.is_empty() {
        return Err(CloudError::NoFullWindow { length_months });
    }
    Ok(out)
}

/// Points in `R^k`, one per trading day.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud<T> {
    dim: usize,
    /// Row-major `len * dim`.
    coords: Vec<T>,
    dates: Vec<NaiveDate>,
    window: Option<WindowSpec>,
}

impl<T: Scalar> PointCloud<T> {
    /// Builds a cloud from explicit points (all of equal dimension).
    pub fn from_points(points: &[Vec<T>]) -> Self {
        let dim = points.first().map_or(0, Vec::len);
        assert!(points.iter().all(|p| p.len() == dim), "points must share a dimension");
        Self { dim, coords: points.concat(), dates: Vec::new(), window: None }
    }

    pub fn len(&self) -> usize {
        self.coords.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[T]> {
        self.coords.chunks_exact(self.dim.max(1))
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn window(&self) -> Option<WindowSpec> {
        self.window
    }
}

/// The cloud of daily return vectors in `slice`. No per-axis scaling is applied.
pub fn point_cloud<T: Scalar>(panel: &ReturnMatrix<T>, slice: &WindowSlice) -> Result<PointCloud<T>, CloudError> {
    if slice.rows.is_empty() {
        return Err(CloudError::EmptySlice);
    }
    let coords = slice.rows.clone().flat_map(|t| panel.row(t).iter().copied()).collect();
    Ok(PointCloud {
        dim: panel.k(),
        coords,
        dates: panel.dates()[slice.rows.clone()].to_vec(),
        window: Some(slice.window),
    })
}

/// Dense symmetric matrix of pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Wraps a full `n x n` matrix. Panics unless it is symmetric with zero
    /// diagonal and non-negative finite entries.
    pub fn from_full(n: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), n * n);
        for i in 0..n {
            assert!(data[i * n + i] == T::zero(), "zero diagonal");
            for j in 0..n {
                let v = data[i * n + j];
                assert!(v.is_finite() && v >= T::zero(), "finite, non-negative entries");
                assert!(v == data[j * n + i], "symmetric");
            }
        }
        Self { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Applies a vertex relabelling: entry `(i, j)` of the result is entry
    /// `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let n = self.n;
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        Self { n, data }
    }

    pub fn scaled(&self, c: T) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&x| x * c).collect() }
    }
}

/// Euclidean distances between all pairs of points.
pub fn distance_matrix<T: Scalar>(cloud: &PointCloud<T>) -> DistanceMatrix<T> {
    let n = cloud.len();
    let mut data = vec![T::zero(); n * n];
    for i in 0..n {
        let p = cloud.point(i);
        for j in (i + 1)..n {
            let q = cloud.point(j);
            let d = p.iter().zip(q).map(|(&a, &b)| (a - b) * (a - b)).sum::<T>().sqrt();
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    DistanceMatrix { n, data }
}

/// How per-index standard deviations are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VolMean {
    #[default]
    Geometric,
    Arithmetic,
}

/// Window volatility and whether the geometric mean hit a zero factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Volatility<T> {
    pub sigma_bar: T,
    /// Some index had exactly zero dispersion under the geometric mean; the
    /// value is then 0 by convention.
    pub geometric_undefined: bool,
}

/// Mean across indices of the per-index sample standard deviations in `rows`.
pub fn window_volatility<T: Scalar>(
    panel: &ReturnMatrix<T>,
    rows: Range<usize>,
    mean_kind: VolMean,
) -> Result<Volatility<T>, CloudError> {
    let n = rows.len();
    if n < 2 {
        return Err(CloudError::TooShort(n));
    }
    let stds: Vec<T> = (0..panel.k()).map(|j| sample_std(&panel.column(j, rows.clone()))).collect();
    let k = T::from_usize_lossy(stds.len());
    Ok(match mean_kind {
        VolMean::Arithmetic => {
            Volatility { sigma_bar: stds.iter().copied().sum::<T>() / k, geometric_undefined: false }
        }
        VolMean::Geometric => {
            if stds.iter().any(|s| *s == T::zero()) {
                Volatility { sigma_bar: T::zero(), geometric_undefined: true }
            } else {
                let log_mean = stds.iter().map(|s| s.ln()).sum::<T>() / k;
                Volatility { sigma_bar: log_mean.exp(), geometric_undefined: false }
            }
        }
    })
}
