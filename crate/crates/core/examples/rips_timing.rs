//! Times dimension-1 persistence on a year-long cloud of synthetic returns.

use std::time::Instant;

use persnorm::cloud::{distance_matrix, PointCloud};
use persnorm::norms::{persistence_norm, NormKind};
use persnorm::persistence::{enclosing_radius, rips_persistence};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(252);
    // Deterministic pseudo-random returns (LCG) so the example has no extra deps.
    let mut state = 0x2545F4914F6CDD1Du64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 0.04
    };
    let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..4).map(|_| next()).collect()).collect();
    let d = distance_matrix(&PointCloud::from_points(&pts));
    let t = Instant::now();
    let dg = rips_persistence(&d, enclosing_radius(&d));
    println!(
        "n={n} pairs(dim1)={} L11={:.6} elapsed={:?}",
        dg.finite(1).len(),
        persistence_norm(&dg, 1, NormKind::L1),
        t.elapsed()
    );
}
