mod common;

use common::*;
use persnorm::cloud::{distance_matrix, DistanceMatrix, PointCloud};
use persnorm::persistence::{
    compute_persistence, dim0_mst_oracle, enclosing_radius, rips_filtration, rips_persistence, FilteredSimplex,
};
use rand::seq::SliceRandom;
use rand::Rng;

fn explicit(d: &DistanceMatrix<f64>, threshold: f64) -> Pairs {
    Pairs::of(&compute_persistence(&rips_filtration(d, 2, threshold), d.len()).unwrap())
}

fn implicit(d: &DistanceMatrix<f64>, threshold: f64) -> Pairs {
    Pairs::of(&rips_persistence(d, threshold))
}

#[test]
fn naive_oracle_fixtures() {
    let sq =
        distance_matrix(&PointCloud::from_points(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]));
    let r2 = 2f64.sqrt();
    let simplices = shuffled_flag_simplices(&sq, r2, &mut rng(0));
    assert_eq!(simplices.len(), 14);
    let p = naive_persistence(&simplices);
    assert_eq!(p.finite[0], vec![(0.0, 1.0); 3]);
    assert_eq!(p.finite[1], vec![(1.0, r2)]);
    assert_eq!(p.infinite, [vec![0.0], vec![]]);

    let tri = DistanceMatrix::from_full(3, vec![0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0]);
    let p = naive_persistence(&shuffled_flag_simplices(&tri, 1.0, &mut rng(1)));
    assert!(p.finite[1].is_empty() && p.infinite[1].is_empty());
}

#[test]
fn reducers_match_naive_oracle_with_shuffled_ties() {
    let mut r = rng(7);
    for trial in 0..100 {
        let n = r.random_range(2..=10);
        let cloud = if trial % 2 == 0 { normal_cloud(&mut r, n, 4) } else { grid_cloud(&mut r, n, 2) };
        let d = distance_matrix(&cloud);
        let thr = enclosing_radius(&d);
        let simplices = shuffled_flag_simplices(&d, thr, &mut r);
        let want = naive_persistence(&simplices);
        assert_eq!(implicit(&d, thr), want, "implicit, trial {trial}");
        assert_eq!(explicit(&d, thr), want, "explicit, trial {trial}");
        let shuffled: Vec<FilteredSimplex<f64>> =
            simplices.iter().map(|(v, f)| FilteredSimplex { vertices: v.clone(), filtration: *f }).collect();
        assert_eq!(Pairs::of(&compute_persistence(&shuffled, n).unwrap()), want, "shuffled explicit, trial {trial}");
    }
}

#[test]
fn reducers_match_naive_oracle_below_enclosing_radius() {
    let mut r = rng(8);
    for trial in 0..40 {
        let n = r.random_range(3..=10);
        let d = normal_distances(&mut r, n, 3);
        let thr = enclosing_radius(&d) * r.random_range(0.3..1.0);
        let want = naive_persistence(&shuffled_flag_simplices(&d, thr, &mut r));
        assert_eq!(implicit(&d, thr), want, "trial {trial}");
        assert_eq!(explicit(&d, thr), want, "trial {trial}");
    }
}

#[test]
fn dim0_deaths_equal_mst_weights() {
    let mut r = rng(11);
    for _ in 0..200 {
        let n = r.random_range(2..=40);
        let d = normal_distances(&mut r, n, 4);
        let mst = dim0_mst_oracle(&d);
        let dg = rips_persistence(&d, enclosing_radius(&d));
        let deaths: Vec<f64> = dg.finite(0).iter().map(|p| p.1).collect();
        assert_eq!(deaths, mst);
        assert_eq!(dg.infinite(0), &[0.0]);
    }
}

#[test]
fn implicit_matches_explicit_on_larger_clouds() {
    let mut r = rng(12);
    for _ in 0..20 {
        let n = r.random_range(11..=40);
        let d = normal_distances(&mut r, n, 4);
        let thr = enclosing_radius(&d);
        assert_eq!(implicit(&d, thr), explicit(&d, thr));
    }
}

#[test]
fn no_essential_loops_at_enclosing_radius() {
    let mut r = rng(13);
    for _ in 0..100 {
        let n = r.random_range(3..=60);
        let d = normal_distances(&mut r, n, 4);
        let dg = rips_persistence(&d, enclosing_radius(&d));
        assert!(dg.infinite(1).is_empty());
        assert_eq!(dg.infinite(0).len(), 1);
    }
}

#[test]
fn raising_threshold_keeps_early_pairs() {
    let mut r = rng(14);
    for _ in 0..50 {
        let n = r.random_range(4..=25);
        let d = normal_distances(&mut r, n, 4);
        let enc = enclosing_radius(&d);
        let lo = enc * r.random_range(0.2..0.9);
        let low = rips_persistence(&d, lo);
        let high = rips_persistence(&d, enc);
        for z in 0..2 {
            for pair in low.finite(z) {
                assert!(high.finite(z).contains(pair), "dim {z}: lost {pair:?}");
            }
        }
    }
}

#[test]
fn relabelling_points_leaves_diagram_unchanged() {
    let mut r = rng(15);
    for _ in 0..100 {
        let n = r.random_range(2..=30);
        let d = normal_distances(&mut r, n, 4);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let thr = enclosing_radius(&d);
        assert_eq!(rips_persistence(&d, thr), rips_persistence(&d.permuted(&perm), thr));
    }
}

#[test]
fn scaling_distances_scales_pairs() {
    let mut r = rng(16);
    for _ in 0..50 {
        let n = r.random_range(2..=25);
        let d = normal_distances(&mut r, n, 4);
        // Powers of two scale exactly in binary floating point.
        let c = 4.0;
        let a = rips_persistence(&d, enclosing_radius(&d));
        let b = rips_persistence(&d.scaled(c), enclosing_radius(&d) * c);
        for z in 0..2 {
            let scaled: Vec<(f64, f64)> = a.finite(z).iter().map(|&(x, y)| (x * c, y * c)).collect();
            assert_eq!(b.finite(z), scaled.as_slice());
        }
    }
}

#[test]
fn f32_instantiation_agrees_with_f64() {
    let mut r = rng(17);
    for _ in 0..20 {
        let cloud = normal_cloud(&mut r, 20, 4);
        let pts32: Vec<Vec<f32>> = cloud.points().map(|p| p.iter().map(|&x| x as f32).collect()).collect();
        let d64 = distance_matrix(&cloud);
        let d32 = distance_matrix(&PointCloud::from_points(&pts32));
        let a = rips_persistence(&d64, enclosing_radius(&d64));
        let b = rips_persistence(&d32, enclosing_radius(&d32));
        let sum64: f64 = a.finite(0).iter().map(|p| p.1).sum();
        let sum32: f32 = b.finite(0).iter().map(|p| p.1).sum();
        assert!(rel_close(sum64, sum32 as f64, 1e-5));
    }
}
