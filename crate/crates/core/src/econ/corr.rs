use serde::Serialize;

use super::EconError;
use crate::scalar::{cmp_scalar, Scalar};

fn check_pair<T: Scalar>(x: &[T], y: &[T]) -> Result<(), EconError> {
    if x.len() != y.len() {
        return Err(EconError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(EconError::TooFewObservations { need: 2, got: x.len() });
    }
    Ok(())
}

/// Sample Pearson correlation.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<T, EconError> {
    check_pair(x, y)?;
    let n = T::from_usize_lossy(x.len());
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy = sxy + da * db;
        sxx = sxx + da * da;
        syy = syy + db * db;
    }
    if sxx == T::zero() {
        return Err(EconError::ZeroVariance("x".into()));
    }
    if syy == T::zero() {
        return Err(EconError::ZeroVariance("y".into()));
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(r.max(-T::one()).min(T::one()))
}

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn average_ranks<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| cmp_scalar(x[a], x[b]));
    let mut ranks = vec![T::zero(); x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && x[order[j]] == x[order[i]] {
            j += 1;
        }
        // Positions i..j hold ranks i+1..=j.
        let avg = T::from_usize_lossy(i + 1 + j) / T::from_usize_lossy(2);
        for &o in &order[i..j] {
            ranks[o] = avg;
        }
        i = j;
    }
    ranks
}

/// Pearson correlation of average ranks.
pub fn spearman<T: Scalar>(x: &[T], y: &[T]) -> Result<T, EconError> {
    check_pair(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Square table with Pearson below and Spearman above the diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix<T> {
    pub names: Vec<String>,
    /// Row-major.
    pub values: Vec<T>,
}

impl<T: Scalar> CorrelationMatrix<T> {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.len() + j]
    }

    /// Pearson correlation between two named variables.
    pub fn pearson_of(&self, a: &str, b: &str) -> Option<T> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(if i >= j { self.get(i, j) } else { self.get(j, i) })
    }
}

pub fn correlation_table<T: Scalar>(vars: &[(String, Vec<T>)]) -> Result<CorrelationMatrix<T>, EconError> {
    let k = vars.len();
    let mut values = vec![T::one(); k * k];
    for i in 0..k {
        for j in 0..i {
            let (x, y) = (&vars[i].1, &vars[j].1);
            let named = |e: EconError, which: &str| match e {
                EconError::ZeroVariance(_) => EconError::ZeroVariance(which.to_string()),
                other => other,
            };
            let p = pearson(x, y).map_err(|e| named(e, if is_const(x) { &vars[i].0 } else { &vars[j].0 }))?;
            let s = spearman(x, y).map_err(|e| named(e, if is_const(x) { &vars[i].0 } else { &vars[j].0 }))?;
            values[i * k + j] = p;
            values[j * k + i] = s;
        }
    }
    Ok(CorrelationMatrix { names: vars.iter().map(|v| v.0.clone()).collect(), values })
}

fn is_const<T: Scalar>(x: &[T]) -> bool {
    x.windows(2).all(|w| w[0] == w[1])
}
