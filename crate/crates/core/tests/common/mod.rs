#![allow(dead_code)]

use lmp_core::{DatasetBundle, DenseMatrix, InteractionMatrix, Side, SimilarityMatrix};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand::rngs::StdRng;

pub fn ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i:03}")).collect()
}

pub fn interactions(rows: &[Vec<u8>]) -> InteractionMatrix {
    let m = rows.len();
    let n = rows[0].len();
    let a = DenseMatrix::from_fn(m, n, |i, j| rows[i][j] as f64).unwrap();
    InteractionMatrix::new(a, ids("d", m), ids("t", n)).unwrap()
}

/// Random 0/1 matrix with the given density; every row and column gets at least one edge.
pub fn random_interactions(m: usize, n: usize, density: f64, seed: u64) -> InteractionMatrix {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut rows = vec![vec![0u8; n]; m];
    for row in rows.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.random_bool(density) as u8;
        }
    }
    for row in rows.iter_mut() {
        row[rng.random_range(0..n)] = 1;
    }
    for j in 0..n {
        rows[rng.random_range(0..m)][j] = 1;
    }
    interactions(&rows)
}

/// Gaussian-kernel style similarity on random points in the unit square.
pub fn random_similarity(n: usize, side: Side, seed: u64) -> SimilarityMatrix {
    let mut rng = StdRng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect();
    let s = DenseMatrix::from_fn(n, n, |i, j| {
        let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
        (-(dx * dx + dy * dy) * 4.0).exp()
    })
    .unwrap();
    let prefix = if side == Side::Drug { "d" } else { "t" };
    SimilarityMatrix::new(s, ids(prefix, n), side).unwrap()
}

pub fn random_bundle(m: usize, n: usize, density: f64, seed: u64) -> DatasetBundle {
    DatasetBundle::new(
        "synthetic",
        random_interactions(m, n, density, seed),
        Some(random_similarity(m, Side::Drug, seed + 1)),
        Some(random_similarity(n, Side::Target, seed + 2)),
    )
    .unwrap()
}

pub fn to_na(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j))
}

pub fn max_diff(a: &DenseMatrix, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let mut d = 0.0f64;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            d = d.max((a.get(i, j) - b[(i, j)]).abs());
        }
    }
    d
}
