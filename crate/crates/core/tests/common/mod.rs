//! Test-only oracles. Nothing here calls into the reducers, OLS code or
//! simplex enumeration it is used to check.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use persnorm::cloud::{distance_matrix, DistanceMatrix, PointCloud};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_cloud(rng: &mut impl Rng, n: usize, k: usize) -> PointCloud<f64> {
    let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..k).map(|_| rng.sample(StandardNormal)).collect()).collect();
    PointCloud::from_points(&pts)
}

/// Points on a small integer grid, so many distances tie exactly.
pub fn grid_cloud(rng: &mut impl Rng, n: usize, k: usize) -> PointCloud<f64> {
    let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..k).map(|_| rng.random_range(0..3) as f64).collect()).collect();
    PointCloud::from_points(&pts)
}

pub fn normal_distances(rng: &mut impl Rng, n: usize, k: usize) -> DistanceMatrix<f64> {
    distance_matrix(&normal_cloud(rng, n, k))
}

/// Finite pairs and infinite births per dimension, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct Pairs {
    pub finite: [Vec<(f64, f64)>; 2],
    pub infinite: [Vec<f64>; 2],
}

impl Pairs {
    pub fn sorted(mut self) -> Self {
        for z in 0..2 {
            self.finite[z].sort_by(|a, b| a.partial_cmp(b).unwrap());
            self.infinite[z].sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        self
    }

    pub fn of(dg: &persnorm::persistence::PersistenceDiagram<f64>) -> Self {
        Pairs {
            finite: [dg.finite(0).to_vec(), dg.finite(1).to_vec()],
            infinite: [dg.infinite(0).to_vec(), dg.infinite(1).to_vec()],
        }
        .sorted()
    }
}

/// Every simplex up to dimension 2 with diameter `<= threshold`, as
/// `(vertices, diameter)`, ordered by diameter then dimension with ties
/// shuffled by `rng`.
pub fn shuffled_flag_simplices(d: &DistanceMatrix<f64>, threshold: f64, rng: &mut impl Rng) -> Vec<(Vec<usize>, f64)> {
    let n = d.len();
    let mut s: Vec<(Vec<usize>, f64)> = Vec::new();
    for a in 0..n {
        s.push((vec![a], 0.0));
        for b in (a + 1)..n {
            if d.get(a, b) <= threshold {
                s.push((vec![a, b], d.get(a, b)));
            }
            for c in (b + 1)..n {
                let f = [d.get(a, b), d.get(a, c), d.get(b, c)].into_iter().fold(0.0, f64::max);
                if f <= threshold {
                    s.push((vec![a, b, c], f));
                }
            }
        }
    }
    s.shuffle(rng);
    s.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap().then(x.0.len().cmp(&y.0.len())));
    s
}

/// Textbook O(m^3) reduction of the dense Z/2 boundary matrix, no clearing,
/// no shortcuts.
pub fn naive_persistence(simplices: &[(Vec<usize>, f64)]) -> Pairs {
    let m = simplices.len();
    let index_of = |v: &[usize]| simplices.iter().position(|s| s.0 == v).expect("face present");
    let mut cols: Vec<Vec<bool>> = vec![vec![false; m]; m];
    for (j, (v, _)) in simplices.iter().enumerate() {
        if v.len() > 1 {
            for skip in 0..v.len() {
                let face: Vec<usize> = v.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &x)| x).collect();
                cols[j][index_of(&face)] = true;
            }
        }
    }
    let low = |c: &Vec<bool>| c.iter().rposition(|&b| b);
    for j in 0..m {
        while let Some(l) = low(&cols[j]) {
            let Some(i) = (0..j).find(|&i| low(&cols[i]) == Some(l)) else { break };
            let pivot = cols[i].clone();
            for (a, b) in cols[j].iter_mut().zip(pivot) {
                *a ^= b;
            }
        }
    }
    let mut out = Pairs { finite: [vec![], vec![]], infinite: [vec![], vec![]] };
    let mut paired = vec![false; m];
    for j in 0..m {
        if let Some(l) = low(&cols[j]) {
            paired[l] = true;
            paired[j] = true;
            let z = simplices[l].0.len() - 1;
            let (b, de) = (simplices[l].1, simplices[j].1);
            if de > b && z < 2 {
                out.finite[z].push((b, de));
            }
        }
    }
    for j in 0..m {
        let z = simplices[j].0.len() - 1;
        if !paired[j] && z < 2 {
            out.infinite[z].push(simplices[j].1);
        }
    }
    out.sorted()
}

/// OLS by explicit normal equations and Newey–West covariance by the
/// `B X' Omega X B` sandwich with a dense `n x n` weight matrix.
pub struct SandwichOracle {
    pub beta: Vec<f64>,
    pub se: Vec<f64>,
    pub r2: f64,
}

pub fn sandwich_oracle(y: &[f64], xs: &[&[f64]], lag: usize) -> SandwichOracle {
    let n = y.len();
    let p = xs.len() + 1;
    let x = DMatrix::from_fn(n, p, |t, j| if j == 0 { 1.0 } else { xs[j - 1][t] });
    let yv = DVector::from_column_slice(y);
    let xtx_inv = (x.transpose() * &x).try_inverse().expect("invertible");
    let beta = &xtx_inv * x.transpose() * &yv;
    let e = &yv - &x * &beta;
    let omega = DMatrix::from_fn(n, n, |t, s| {
        let l = t.abs_diff(s);
        if l > lag {
            0.0
        } else {
            (1.0 - l as f64 / (lag as f64 + 1.0)) * e[t] * e[s]
        }
    });
    let v = &xtx_inv * x.transpose() * omega * &x * &xtx_inv;
    let ybar = yv.mean();
    let sst: f64 = y.iter().map(|v| (v - ybar).powi(2)).sum();
    SandwichOracle {
        beta: beta.iter().copied().collect(),
        se: (0..p).map(|i| v[(i, i)].sqrt()).collect(),
        r2: 1.0 - e.norm_squared() / sst,
    }
}

/// `y = 1 + 2 x1 - 0.5 x2 + e`, `e_t = rho e_{t-1} + u_t`.
pub fn ar1_dataset(rng: &mut impl Rng, n: usize, rho: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let x1: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let x2: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal) + 0.3).collect();
    let mut e = 0.0;
    let y = (0..n)
        .map(|t| {
            e = rho * e + rng.sample::<f64, _>(StandardNormal);
            1.0 + 2.0 * x1[t] - 0.5 * x2[t] + e
        })
        .collect();
    (y, x1, x2)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
