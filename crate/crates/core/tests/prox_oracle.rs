mod common;

use common::{max_diff, to_na};
use lmp_core::{l21_prox, svt, DenseMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn matrix_strategy() -> impl Strategy<Value = DenseMatrix> {
    (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-5.0f64..5.0, r * c)
            .prop_map(move |v| DenseMatrix::from_row_major(r, c, &v).unwrap())
    })
}

fn svt_oracle(m: &DenseMatrix, tau: f64) -> DMatrix<f64> {
    let svd = to_na(m).svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let shrunk = svd.singular_values.map(|s| (s - tau).max(0.0));
    u * DMatrix::from_diagonal(&shrunk) * vt
}

proptest! {
    #[test]
    fn svt_matches_independent_svd(m in matrix_strategy(), tau in 0.0f64..6.0) {
        let out = svt(&m, tau).unwrap();
        let scale = m.frobenius_norm().max(1.0);
        prop_assert!(max_diff(&out, &svt_oracle(&m, tau)) <= 1e-10 * scale);
    }

    #[test]
    fn svt_spectrum_is_shrunk(m in matrix_strategy(), tau in 0.0f64..6.0) {
        let before = to_na(&m).singular_values();
        let after = to_na(&svt(&m, tau).unwrap()).singular_values();
        let mut expected: Vec<f64> = before.iter().map(|s| (s - tau).max(0.0)).collect();
        let mut got: Vec<f64> = after.iter().copied().collect();
        expected.sort_by(|a, b| b.total_cmp(a));
        got.sort_by(|a, b| b.total_cmp(a));
        for (e, g) in expected.iter().zip(&got) {
            prop_assert!((e - g).abs() <= 1e-10 * before.max().max(1.0));
        }
    }

    #[test]
    fn l21_matches_columnwise_formula(m in matrix_strategy(), tau in 0.0f64..8.0) {
        let out = l21_prox(&m, tau).unwrap();
        for j in 0..m.cols() {
            let norm = (0..m.rows()).map(|i| m.get(i, j).powi(2)).sum::<f64>().sqrt();
            let factor = if norm > tau { (norm - tau) / norm } else { 0.0 };
            for i in 0..m.rows() {
                prop_assert!((out.get(i, j) - factor * m.get(i, j)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn l21_column_norms_drop_by_tau(m in matrix_strategy(), tau in 0.0f64..8.0) {
        let out = l21_prox(&m, tau).unwrap();
        for j in 0..m.cols() {
            let n0 = (0..m.rows()).map(|i| m.get(i, j).powi(2)).sum::<f64>().sqrt();
            let n1 = (0..m.rows()).map(|i| out.get(i, j).powi(2)).sum::<f64>().sqrt();
            prop_assert!((n1 - (n0 - tau).max(0.0)).abs() <= 1e-12 * n0.max(1.0));
        }
    }
}

#[test]
fn negative_or_nan_threshold_is_rejected() {
    let m = DenseMatrix::identity(3).unwrap();
    assert!(svt(&m, -1.0).is_err());
    assert!(svt(&m, f64::NAN).is_err());
    assert!(l21_prox(&m, -0.1).is_err());
}
