use std::cmp::Ordering;

use crate::cloud::DistanceMatrix;
use crate::scalar::{cmp_scalar, Scalar};

/// A simplex of the flag complex with its diameter as filtration value.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSimplex<T> {
    /// Strictly increasing point indices.
    pub vertices: Vec<usize>,
    pub filtration: T,
}

impl<T: Scalar> FilteredSimplex<T> {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Order by filtration value, then dimension, then vertex tuple.
    pub fn filtration_order(&self, other: &Self) -> Ordering {
        cmp_scalar(self.filtration, other.filtration)
            .then(self.vertices.len().cmp(&other.vertices.len()))
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

/// `min_i max_j d(i, j)`. Above this scale the flag complex is a cone over
/// the minimizing vertex, so every class of positive dimension has died.
pub fn enclosing_radius<T: Scalar>(d: &DistanceMatrix<T>) -> T {
    (0..d.len())
        .map(|i| d.row(i).iter().copied().fold(T::zero(), T::max))
        .min_by(|a, b| cmp_scalar(*a, *b))
        .unwrap_or_else(T::zero)
}

/// Every simplex of dimension `<= max_dim` with diameter `<= threshold`,
/// sorted by [`FilteredSimplex::filtration_order`].
///
/// # Panics
/// If `max_dim > 2`.
pub fn rips_filtration<T: Scalar>(d: &DistanceMatrix<T>, max_dim: usize, threshold: T) -> Vec<FilteredSimplex<T>> {
    assert!(max_dim <= 2, "flag filtrations are built up to dimension 2");
    let n = d.len();
    let mut out: Vec<FilteredSimplex<T>> =
        (0..n).map(|i| FilteredSimplex { vertices: vec![i], filtration: T::zero() }).collect();
    if max_dim >= 1 {
        for j in 0..n {
            for i in 0..j {
                let f = d.get(i, j);
                if f <= threshold {
                    out.push(FilteredSimplex { vertices: vec![i, j], filtration: f });
                }
            }
        }
    }
    if max_dim >= 2 {
        for a in 0..n {
            for b in (a + 1)..n {
                let ab = d.get(a, b);
                if ab > threshold {
                    continue;
                }
                for c in (b + 1)..n {
                    let f = ab.max(d.get(a, c)).max(d.get(b, c));
                    if f <= threshold {
                        out.push(FilteredSimplex { vertices: vec![a, b, c], filtration: f });
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| x.filtration_order(y));
    out
}
