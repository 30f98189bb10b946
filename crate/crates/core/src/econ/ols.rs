use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::EconError;
use crate::scalar::Scalar;

/// Name given to the intercept column.
pub const CONSTANT: &str = "const";

/// Bartlett-kernel bandwidth for the Newey–West estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum NwLag {
    /// `floor(4 (n/100)^(2/9))`.
    #[default]
    Auto,
    Fixed(usize),
}

impl NwLag {
    pub fn resolve(self, n: usize) -> usize {
        let l = match self {
            NwLag::Auto => auto_lag(n),
            NwLag::Fixed(l) => l,
        };
        l.min(n.saturating_sub(1))
    }
}

/// The usual plug-in bandwidth `floor(4 (n/100)^(2/9))`.
pub fn auto_lag(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OlsOptions {
    pub nw_lag: NwLag,
    /// Scale the HAC covariance by `n / (n - p)`.
    pub small_sample: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionResult<T> {
    /// Coefficient names, [`CONSTANT`] first.
    pub names: Vec<String>,
    pub coefficients: Vec<T>,
    pub std_errors: Vec<T>,
    /// `coefficient / std_error`; NaN when the fit is exact.
    pub t_stats: Vec<T>,
    pub nw_lag: usize,
    pub r2: T,
    pub adj_r2: T,
    pub n: usize,
    /// Residuals vanish to rounding; standard errors are reported as 0.
    pub perfect_fit: bool,
}

impl<T: Scalar> RegressionResult<T> {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coef(&self, name: &str) -> Option<T> {
        self.index_of(name).map(|i| self.coefficients[i])
    }

    pub fn t(&self, name: &str) -> Option<T> {
        self.index_of(name).map(|i| self.t_stats[i])
    }
}

/// Householder QR of a column-major `n x p` design. Returns the upper
/// triangle `R` (row-major `p x p`) and `Q^T y`.
fn householder_qr<T: Scalar>(
    mut cols: Vec<Vec<T>>,
    mut y: Vec<T>,
    names: &[String],
) -> Result<(Vec<T>, Vec<T>), EconError> {
    let p = cols.len();
    let n = y.len();
    let tol = T::epsilon().sqrt();
    let orig_norms: Vec<T> = cols.iter().map(|c| c.iter().map(|&v| v * v).sum::<T>().sqrt()).collect();
    let mut r = vec![T::zero(); p * p];
    for k in 0..p {
        let norm = cols[k][k..].iter().map(|&v| v * v).sum::<T>().sqrt();
        if norm <= tol * orig_norms[k] || norm == T::zero() {
            return Err(EconError::RankDeficient(names[k].clone()));
        }
        let alpha = if cols[k][k] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = cols[k][k..].to_vec();
        v[0] = v[0] - alpha;
        let vv: T = v.iter().map(|&x| x * x).sum();
        let reflect = |w: &mut [T]| {
            let dot: T = v.iter().zip(w.iter()).map(|(&a, &b)| a * b).sum();
            let f = (dot + dot) / vv;
            for (wi, &vi) in w.iter_mut().zip(&v) {
                *wi = *wi - f * vi;
            }
        };
        for col in cols.iter_mut().skip(k + 1) {
            reflect(&mut col[k..]);
        }
        reflect(&mut y[k..n]);
        r[k * p + k] = alpha;
        for j in (k + 1)..p {
            r[k * p + j] = cols[j][k];
        }
    }
    y.truncate(p);
    Ok((r, y))
}

/// Inverse of an upper-triangular row-major `p x p` matrix.
fn invert_upper<T: Scalar>(r: &[T], p: usize) -> Vec<T> {
    let mut inv = vec![T::zero(); p * p];
    for j in 0..p {
        inv[j * p + j] = T::one() / r[j * p + j];
        for i in (0..j).rev() {
            let s: T = ((i + 1)..=j).map(|k| r[i * p + k] * inv[k * p + j]).sum();
            inv[i * p + j] = -s / r[i * p + i];
        }
    }
    inv
}

/// Least squares of `y` on a constant plus `regressors`, with Newey–West
/// (Bartlett kernel) standard errors.
///
/// The covariance is `B S B` with `B = (X'X)^-1` and
/// `S = sum_t e_t^2 x_t x_t' + sum_{l=1..L} w_l sum_t e_t e_{t-l} (x_t x_{t-l}' + x_{t-l} x_t')`,
/// `w_l = 1 - l/(L+1)`. With `L = 0` this is White's estimator.
pub fn ols_newey_west<T: Scalar>(
    y: &[T],
    regressors: &[(&str, &[T])],
    options: OlsOptions,
) -> Result<RegressionResult<T>, EconError> {
    let n = y.len();
    let p = regressors.len() + 1;
    let mut names = vec![CONSTANT.to_string()];
    let mut seen = HashSet::new();
    for (name, x) in regressors {
        if x.len() != n {
            return Err(EconError::LengthMismatch(n, x.len()));
        }
        if *name == CONSTANT || !seen.insert(*name) {
            return Err(EconError::DuplicateRegressor(name.to_string()));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(EconError::NonFinite(name.to_string()));
        }
        names.push(name.to_string());
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(EconError::NonFinite("dependent".into()));
    }
    if n < p + 2 {
        return Err(EconError::TooFewObservations { need: p + 2, got: n });
    }

    let mut cols: Vec<Vec<T>> = vec![vec![T::one(); n]];
    cols.extend(regressors.iter().map(|(_, x)| x.to_vec()));
    let (r, qty) = householder_qr(cols, y.to_vec(), &names)?;

    let mut beta = vec![T::zero(); p];
    for i in (0..p).rev() {
        let s: T = ((i + 1)..p).map(|k| r[i * p + k] * beta[k]).sum();
        beta[i] = (qty[i] - s) / r[i * p + i];
    }

    let row = |t: usize| -> Vec<T> { std::iter::once(T::one()).chain(regressors.iter().map(|(_, x)| x[t])).collect() };
    let rows: Vec<Vec<T>> = (0..n).map(row).collect();
    let resid: Vec<T> = (0..n).map(|t| y[t] - rows[t].iter().zip(&beta).map(|(&a, &b)| a * b).sum::<T>()).collect();

    let nf = T::from_usize_lossy(n);
    let y_mean = y.iter().copied().sum::<T>() / nf;
    let sst: T = y.iter().map(|&v| (v - y_mean) * (v - y_mean)).sum();
    let ssr: T = resid.iter().map(|&e| e * e).sum();
    let y_scale = y.iter().map(|&v| v * v).sum::<T>().sqrt();
    let perfect_fit =
        ssr.sqrt() <= T::from_f64_lossy(100.0) * T::epsilon() * nf.sqrt() * y_scale.max(T::min_positive_value());

    let (r2, adj_r2) = if perfect_fit {
        (T::one(), T::one())
    } else {
        let r2 = if sst > T::zero() { T::one() - ssr / sst } else { T::zero() };
        let dof = T::from_usize_lossy(n - p);
        (r2, T::one() - (T::one() - r2) * (nf - T::one()) / dof)
    };

    let lag = options.nw_lag.resolve(n);
    let (std_errors, t_stats) = if perfect_fit {
        (vec![T::zero(); p], vec![T::nan(); p])
    } else {
        let rinv = invert_upper(&r, p);
        // bread = R^-1 R^-T
        let mut bread = vec![T::zero(); p * p];
        for i in 0..p {
            for j in 0..p {
                bread[i * p + j] = (i.max(j)..p).map(|k| rinv[i * p + k] * rinv[j * p + k]).sum();
            }
        }
        let mut meat = vec![T::zero(); p * p];
        for t in 0..n {
            let e2 = resid[t] * resid[t];
            for i in 0..p {
                for j in 0..p {
                    meat[i * p + j] = meat[i * p + j] + e2 * rows[t][i] * rows[t][j];
                }
            }
        }
        for l in 1..=lag {
            let w = T::one() - T::from_usize_lossy(l) / T::from_usize_lossy(lag + 1);
            for t in l..n {
                let ee = w * resid[t] * resid[t - l];
                for i in 0..p {
                    for j in 0..p {
                        let cross = rows[t][i] * rows[t - l][j] + rows[t - l][i] * rows[t][j];
                        meat[i * p + j] = meat[i * p + j] + ee * cross;
                    }
                }
            }
        }
        let mut tmp = vec![T::zero(); p * p];
        for i in 0..p {
            for j in 0..p {
                tmp[i * p + j] = (0..p).map(|k| bread[i * p + k] * meat[k * p + j]).sum();
            }
        }
        let scale = if options.small_sample { nf / T::from_usize_lossy(n - p) } else { T::one() };
        let se: Vec<T> = (0..p)
            .map(|i| {
                let v: T = (0..p).map(|k| tmp[i * p + k] * bread[k * p + i]).sum();
                (v * scale).max(T::zero()).sqrt()
            })
            .collect();
        let t = beta.iter().zip(&se).map(|(&b, &s)| b / s).collect();
        (se, t)
    };

    Ok(RegressionResult { names, coefficients: beta, std_errors, t_stats, nw_lag: lag, r2, adj_r2, n, perfect_fit })
}
