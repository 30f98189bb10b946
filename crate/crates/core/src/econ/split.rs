use crate::scalar::{cmp_scalar, Scalar};

/// Indices above and below the median, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedianSplit {
    pub high: Vec<usize>,
    pub low: Vec<usize>,
}

/// Rank-based median split: the `floor(n/2)` smallest values go low, the
/// rest high. Ties are broken by position, earlier observations going low.
pub fn median_split<T: Scalar>(series: &[T]) -> MedianSplit {
    let mut order: Vec<usize> = (0..series.len()).collect();
    // Stable sort keeps date order among ties.
    order.sort_by(|&a, &b| cmp_scalar(series[a], series[b]));
    let cut = series.len() / 2;
    let mut low = order[..cut].to_vec();
    let mut high = order[cut..].to_vec();
    low.sort_unstable();
    high.sort_unstable();
    MedianSplit { high, low }
}
