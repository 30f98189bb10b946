use std::collections::BTreeSet;

use super::EconError;
use crate::ingest::UncertaintySeries;
use crate::month::Month;
use crate::norms::{NormKind, NormSeries};
use crate::scalar::Scalar;

/// Variable name of the window volatility.
pub const SIGMA_BAR: &str = "sigma_bar";

/// `L{dim}{p}`: `L11` is the dimension-1 L1 norm, `L02` the dimension-0 L2 norm.
pub fn norm_var_name(dim: usize, kind: NormKind) -> String {
    let p = match kind {
        NormKind::L1 => 1,
        NormKind::L2 => 2,
    };
    format!("L{dim}{p}")
}

/// Month-aligned named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame<T> {
    pub months: Vec<Month>,
    pub vars: Vec<(String, Vec<T>)>,
}

impl<T: Scalar> Frame<T> {
    pub fn len(&self) -> usize {
        self.months.len()
    }

    pub fn is_empty(&self) -> bool {
        self.months.is_empty()
    }

    pub fn get(&self, name: &str) -> Result<&[T], EconError> {
        self.vars
            .iter()
            .find(|v| v.0 == name)
            .map(|v| v.1.as_slice())
            .ok_or_else(|| EconError::UnknownVariable(name.to_string()))
    }

    /// Rows at `idx`, in the given order.
    pub fn subset(&self, idx: &[usize]) -> Self {
        Self {
            months: idx.iter().map(|&i| self.months[i]).collect(),
            vars: self.vars.iter().map(|(n, v)| (n.clone(), idx.iter().map(|&i| v[i]).collect())).collect(),
        }
    }
}

/// Joins one window's norm series with uncertainty columns on month. Months
/// where any requested column is missing are dropped.
///
/// Columns: the uncertainty columns, [`SIGMA_BAR`], then the L1 and L2 norms
/// of dimension `norm_dim`.
pub fn window_frame<T: Scalar>(
    norms: &NormSeries<T>,
    unc: &UncertaintySeries<T>,
    columns: &[String],
    norm_dim: usize,
) -> Result<Frame<T>, EconError> {
    for c in columns {
        if unc.column(c).is_none() {
            return Err(EconError::UnknownVariable(c.clone()));
        }
    }
    let l1 = norm_var_name(norm_dim, NormKind::L1);
    let l2 = norm_var_name(norm_dim, NormKind::L2);
    let mut months = Vec::new();
    let mut unc_vals: Vec<Vec<T>> = vec![Vec::new(); columns.len()];
    let (mut sig, mut n1, mut n2) = (Vec::new(), Vec::new(), Vec::new());
    for r in &norms.records {
        let vals: Option<Vec<T>> = columns.iter().map(|c| unc.value(c, r.month)).collect();
        let Some(vals) = vals else { continue };
        let (Some(a), Some(b)) = (r.norm(norm_dim, NormKind::L1), r.norm(norm_dim, NormKind::L2)) else {
            return Err(EconError::UnknownVariable(l1));
        };
        months.push(r.month);
        for (dst, v) in unc_vals.iter_mut().zip(vals) {
            dst.push(v);
        }
        sig.push(r.sigma_bar);
        n1.push(a);
        n2.push(b);
    }
    if months.is_empty() {
        return Err(EconError::MisalignedMonths(columns.join(",")));
    }
    let mut vars: Vec<(String, Vec<T>)> = columns.iter().cloned().zip(unc_vals).collect();
    vars.push((SIGMA_BAR.to_string(), sig));
    vars.push((l1, n1));
    vars.push((l2, n2));
    Ok(Frame { months, vars })
}

/// One measure (`sigma_bar`, `L11`, ...) across window lengths, on the months
/// every window covers. Columns are named `{length}m`.
pub fn cross_window_frame<T: Scalar>(series: &[NormSeries<T>], measure: &str) -> Result<Frame<T>, EconError> {
    let mut common: Option<BTreeSet<Month>> = None;
    for s in series {
        let m: BTreeSet<Month> = s.records.iter().map(|r| r.month).collect();
        common = Some(match common {
            None => m,
            Some(c) => c.intersection(&m).copied().collect(),
        });
    }
    let common = common.unwrap_or_default();
    if common.is_empty() {
        return Err(EconError::MisalignedMonths(measure.to_string()));
    }
    let mut vars = Vec::new();
    for s in series {
        let values: Vec<T> = s
            .records
            .iter()
            .filter(|r| common.contains(&r.month))
            .map(|r| measure_value(r, measure))
            .collect::<Option<_>>()
            .ok_or_else(|| EconError::UnknownVariable(measure.to_string()))?;
        vars.push((format!("{}m", s.window_length_months), values));
    }
    Ok(Frame { months: common.into_iter().collect(), vars })
}

fn measure_value<T: Scalar>(r: &crate::norms::NormRecord<T>, measure: &str) -> Option<T> {
    match measure {
        SIGMA_BAR => Some(r.sigma_bar),
        "L11" => Some(r.l1_dim1),
        "L12" => Some(r.l2_dim1),
        "L01" => r.dim0.map(|d| d.0),
        "L02" => r.dim0.map(|d| d.1),
        _ => None,
    }
}
