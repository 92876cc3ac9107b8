//! Truncated SVD against a one-sided Jacobi decomposition written here.

use meaningfock::lsa::{truncated_svd, SvdMethod, SvdOptions};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Singular values by one-sided (Hestenes) Jacobi, descending.
fn jacobi_singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut w = if a.nrows() >= a.ncols() {
        a.clone()
    } else {
        a.transpose()
    };
    let n = w.ncols();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = w.column(p).norm_squared();
                let beta: f64 = w.column(q).norm_squared();
                let gamma: f64 = w.column(p).dot(&w.column(q));
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..w.nrows() {
                    let (wp, wq) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = c * wp - s * wq;
                    w[(i, q)] = s * wp + c * wq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

fn random_matrix(rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let m = rng.gen_range(1..=12);
    let n = rng.gen_range(1..=12);
    DMatrix::from_fn(m, n, |_, _| rng.gen_range(-1.0..1.0))
}

#[test]
fn jacobi_oracle_sanity() {
    let a = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, -4.0]);
    assert_eq!(jacobi_singular_values(&a), vec![4.0, 3.0]);
    let b = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
    let sv = jacobi_singular_values(&b);
    assert!((sv[0] - 2.0).abs() < 1e-14 && sv[1].abs() < 1e-14);
}

#[test]
fn singular_values_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let a = random_matrix(&mut rng);
        let max = a.nrows().min(a.ncols());
        let k = rng.gen_range(1..=max);
        let oracle = jacobi_singular_values(&a);
        for method in [SvdMethod::Dense, SvdMethod::DEFAULT_RANDOMIZED] {
            let svd = truncated_svd(&a, k, &SvdOptions { method, seed: 3 }).unwrap();
            for (got, want) in svd.singular_values.iter().zip(&oracle) {
                assert!((got - want).abs() < 1e-8, "{method:?} {got} vs {want}");
            }
        }
    }
}

#[test]
fn reconstruction_error_nonincreasing_in_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let a = random_matrix(&mut rng);
        let max = a.nrows().min(a.ncols());
        let mut prev = f64::INFINITY;
        for k in 1..=max {
            let svd = truncated_svd(&a, k, &SvdOptions::default()).unwrap();
            let err = (svd.reconstruct() - &a).norm();
            assert!(err <= prev + 1e-12, "k={k}: {err} > {prev}");
            prev = err;
        }
        assert!(prev < 1e-10);
    }
}

#[test]
fn factors_are_orthonormal() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let a = random_matrix(&mut rng);
        let k = a.nrows().min(a.ncols());
        let svd = truncated_svd(&a, k, &SvdOptions::default()).unwrap();
        let utu = svd.u.tr_mul(&svd.u);
        let vvt = &svd.v_t * svd.v_t.transpose();
        assert!((utu - DMatrix::identity(k, k)).norm() < 1e-10);
        assert!((vvt - DMatrix::identity(k, k)).norm() < 1e-10);
    }
}

#[test]
fn randomized_agrees_with_dense_on_larger_low_rank_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let l = DMatrix::from_fn(400, 8, |_, _| rng.gen_range(-1.0..1.0));
    let r = DMatrix::from_fn(8, 350, |_, _| rng.gen_range(-1.0..1.0));
    let a = l * r;
    let dense = truncated_svd(&a, 8, &SvdOptions { method: SvdMethod::Dense, seed: 0 }).unwrap();
    let rand = truncated_svd(&a, 8, &SvdOptions::default()).unwrap();
    for (x, y) in dense.singular_values.iter().zip(rand.singular_values.iter()) {
        assert!((x - y).abs() < 1e-8 * x.max(1.0));
    }
    assert!((rand.reconstruct() - &a).norm() < 1e-8 * a.norm());
}
