use crate::cloud::DistanceMatrix;
use crate::scalar::{cmp_scalar, Scalar};

/// Edge weights of a minimum spanning tree of the complete graph weighted by
/// `d`, sorted ascending. Uses Prim's algorithm on the dense matrix, which
/// shares no code with the persistence reducers it is meant to check.
pub fn dim0_mst_oracle<T: Scalar>(d: &DistanceMatrix<T>) -> Vec<T> {
    let n = d.len();
    if n <= 1 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![T::infinity(); n];
    let mut weights = Vec::with_capacity(n - 1);
    in_tree[0] = true;
    best.copy_from_slice(d.row(0));
    for _ in 1..n {
        let (next, w) = (0..n)
            .filter(|&j| !in_tree[j])
            .map(|j| (j, best[j]))
            .min_by(|a, b| cmp_scalar(a.1, b.1))
            .expect("vertices left");
        in_tree[next] = true;
        weights.push(w);
        for j in 0..n {
            if !in_tree[j] {
                let dj = d.get(next, j);
                if dj < best[j] {
                    best[j] = dj;
                }
            }
        }
    }
    weights.sort_by(|a, b| cmp_scalar(*a, *b));
    weights
}
