//! Persistence norms, monthly norm series and z-score standardization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cloud::{
    distance_matrix, point_cloud, window_slices, window_volatility, CloudError, Padding, SampleRange, VolMean,
    WindowSlice,
};
use crate::ingest::ReturnMatrix;
use crate::month::Month;
use crate::persistence::{enclosing_radius, rips_persistence, PersistenceDiagram};
use crate::scalar::{mean, sample_std, Scalar};

/// Which persistence norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormKind {
    /// Sum of finite lifetimes.
    L1,
    /// Square root of the sum of squared finite lifetimes.
    L2,
}

/// `L1` or `L2` norm of the finite lifetimes in dimension `dim`.
/// Classes that never die are ignored; an empty diagram has norm 0.
pub fn persistence_norm<T: Scalar>(diagram: &PersistenceDiagram<T>, dim: usize, kind: NormKind) -> T {
    let lives = diagram.finite(dim).iter().map(|&(b, d)| d - b);
    match kind {
        NormKind::L1 => lives.fold(T::zero(), |acc, l| acc + l),
        NormKind::L2 => lives.fold(T::zero(), |acc, l| acc + l * l).sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormConfig {
    pub padding: Padding,
    pub vol_mean: VolMean,
    /// Also compute dimension-0 norms.
    pub include_dim0: bool,
    /// Fan windows out over the rayon pool.
    pub parallel: bool,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self { padding: Padding::Lookback, vol_mean: VolMean::Geometric, include_dim0: false, parallel: true }
    }
}

/// Norms and volatility of one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormRecord<T> {
    pub month: Month,
    pub n_points: usize,
    pub l1_dim1: T,
    pub l2_dim1: T,
    /// `(L1, L2)` in dimension 0, when requested.
    pub dim0: Option<(T, T)>,
    pub sigma_bar: T,
    pub geometric_undefined: bool,
}

impl<T: Scalar> NormRecord<T> {
    /// The norm of kind `kind` in dimension `dim` (0 or 1), if computed.
    pub fn norm(&self, dim: usize, kind: NormKind) -> Option<T> {
        match (dim, kind) {
            (1, NormKind::L1) => Some(self.l1_dim1),
            (1, NormKind::L2) => Some(self.l2_dim1),
            (0, NormKind::L1) => self.dim0.map(|d| d.0),
            (0, NormKind::L2) => self.dim0.map(|d| d.1),
            _ => None,
        }
    }
}

/// Monthly norm series for one window length, keyed by anchor month.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSeries<T> {
    pub window_length_months: usize,
    pub records: Vec<NormRecord<T>>,
}

impl<T: Scalar> NormSeries<T> {
    pub fn months(&self) -> Vec<Month> {
        self.records.iter().map(|r| r.month).collect()
    }

    pub fn sigma_bar(&self) -> Vec<T> {
        self.records.iter().map(|r| r.sigma_bar).collect()
    }

    pub fn norm(&self, dim: usize, kind: NormKind) -> Option<Vec<T>> {
        self.records.iter().map(|r| r.norm(dim, kind)).collect()
    }

    /// `month,window,L11,L12,sigma_bar` plus `L01,L02` when dimension 0 was computed.
    pub fn to_csv(&self) -> String {
        let with0 = self.records.iter().any(|r| r.dim0.is_some());
        let mut out = String::from("month,window,L11,L12,sigma_bar");
        out.push_str(if with0 { ",L01,L02\n" } else { "\n" });
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}",
                r.month,
                self.window_length_months,
                crate::format::sig6(r.l1_dim1.to_f64_lossy()),
                crate::format::sig6(r.l2_dim1.to_f64_lossy()),
                crate::format::sig6(r.sigma_bar.to_f64_lossy()),
            ));
            if with0 {
                let (a, b) = r.dim0.unwrap_or((T::nan(), T::nan()));
                out.push_str(&format!(
                    ",{},{}",
                    crate::format::sig6(a.to_f64_lossy()),
                    crate::format::sig6(b.to_f64_lossy())
                ));
            }
            out.push('\n');
        }
        out
    }
}

/// Runs cloud, distances, persistence and norms for a single window.
pub fn window_norms<T: Scalar>(
    panel: &ReturnMatrix<T>,
    slice: &WindowSlice,
    config: &NormConfig,
) -> Result<NormRecord<T>, CloudError> {
    let cloud = point_cloud(panel, slice)?;
    let vol = window_volatility(panel, slice.rows.clone(), config.vol_mean)?;
    let d = distance_matrix(&cloud);
    let diagram = rips_persistence(&d, enclosing_radius(&d));
    Ok(NormRecord {
        month: slice.window.anchor_month,
        n_points: cloud.len(),
        l1_dim1: persistence_norm(&diagram, 1, NormKind::L1),
        l2_dim1: persistence_norm(&diagram, 1, NormKind::L2),
        dim0: config
            .include_dim0
            .then(|| (persistence_norm(&diagram, 0, NormKind::L1), persistence_norm(&diagram, 0, NormKind::L2))),
        sigma_bar: vol.sigma_bar,
        geometric_undefined: vol.geometric_undefined,
    })
}

/// One [`NormRecord`] per anchor month of the given window length.
pub fn build_norm_series<T: Scalar>(
    panel: &ReturnMatrix<T>,
    length_months: usize,
    sample: SampleRange,
    config: &NormConfig,
) -> Result<NormSeries<T>, CloudError> {
    let slices = window_slices(panel, length_months, config.padding, sample)?;
    let records = if config.parallel {
        slices.par_iter().map(|s| window_norms(panel, s, config)).collect::<Result<Vec<_>, _>>()?
    } else {
        slices.iter().map(|s| window_norms(panel, s, config)).collect::<Result<Vec<_>, _>>()?
    };
    Ok(NormSeries { window_length_months: length_months, records })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StandardizeError {
    #[error("need at least 2 values to standardize, got {0}")]
    TooShort(usize),
    #[error("series has zero variance")]
    ZeroVariance,
}

/// Subtracts the mean and divides by the sample (`n - 1`) standard deviation.
pub fn standardize<T: Scalar>(series: &[T]) -> Result<Vec<T>, StandardizeError> {
    if series.len() < 2 {
        return Err(StandardizeError::TooShort(series.len()));
    }
    let m = mean(series);
    let s = sample_std(series);
    if s == T::zero() || !s.is_finite() {
        return Err(StandardizeError::ZeroVariance);
    }
    Ok(series.iter().map(|&x| (x - m) / s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    #[test]
    fn norm_formulas() {
        let dg = PersistenceDiagram::from_dim1_pairs(vec![(0.0, 1.0), (0.0, 2.0)]);
        assert_eq!(persistence_norm(&dg, 1, NormKind::L1), 3.0);
        assert!((persistence_norm(&dg, 1, NormKind::L2) - 5f64.sqrt()).abs() < 1e-15);
        let empty = PersistenceDiagram::<f64>::from_dim1_pairs(vec![]);
        assert_eq!(persistence_norm(&empty, 1, NormKind::L1), 0.0);
        assert_eq!(persistence_norm(&empty, 1, NormKind::L2), 0.0);
        assert_eq!(persistence_norm(&empty, 0, NormKind::L2), 0.0);
    }

    #[test]
    fn standardize_examples() {
        assert_eq!(standardize(&[1.0, 2.0, 3.0]).unwrap(), vec![-1.0, 0.0, 1.0]);
        let z = standardize(&[0.0, 10.0]).unwrap();
        assert!((z[0] + 0.5f64.sqrt()).abs() < 1e-15 && (z[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(standardize(&[4.0, 4.0, 4.0]).unwrap_err(), StandardizeError::ZeroVariance);
        assert_eq!(standardize(&[4.0]).unwrap_err(), StandardizeError::TooShort(1));
    }

    #[test]
    fn constant_panel_gives_zero_everything() {
        let start = NaiveDate::from_ymd_opt(2000, 1, 3).unwrap();
        let dates: Vec<_> = (0..88).map(|i| start + chrono::Days::new(i)).collect();
        let rows = vec![vec![0.001, 0.001, 0.001, 0.001]; 88];
        let panel = ReturnMatrix::from_rows((0..4).map(|i| i.to_string()).collect(), dates, rows);
        let cfg = NormConfig { include_dim0: true, ..Default::default() };
        let s = build_norm_series(&panel, 1, SampleRange::default(), &cfg).unwrap();
        assert_eq!(s.records.len(), 3);
        for r in &s.records {
            assert_eq!((r.l1_dim1, r.l2_dim1, r.sigma_bar), (0.0, 0.0, 0.0));
            assert_eq!(r.dim0, Some((0.0, 0.0)));
            assert!(r.geometric_undefined);
        }
        assert!(s.to_csv().starts_with("month,window,L11,L12,sigma_bar,L01,L02\n2000-01,1,0,0,0,0,0\n"));
    }
}
