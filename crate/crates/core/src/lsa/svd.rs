//! Truncated singular value decomposition.
//!
//! Small matrices go through a full dense decomposition. Larger ones use
//! seeded randomized subspace iteration: sample the range with a Gaussian
//! test matrix, sharpen it with a few power iterations (re-orthonormalising
//! after every product), then decompose the small projected matrix.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::LsaError;

/// Above this smaller dimension `Auto` switches to the randomized method.
pub const DENSE_LIMIT: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SvdMethod {
    Auto,
    Dense,
    Randomized { oversample: usize, power_iters: usize },
}

impl SvdMethod {
    pub const DEFAULT_RANDOMIZED: SvdMethod = SvdMethod::Randomized {
        oversample: 10,
        power_iters: 4,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SvdOptions {
    pub method: SvdMethod,
    pub seed: u64,
}

impl Default for SvdOptions {
    fn default() -> Self {
        Self {
            method: SvdMethod::Auto,
            seed: 0x5eed,
        }
    }
}

/// `A ≈ U · diag(σ) · Vᵀ` with `k` components, σ nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSvd {
    pub u: DMatrix<f64>,
    pub singular_values: DVector<f64>,
    pub v_t: DMatrix<f64>,
}

impl TruncatedSvd {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut us = self.u.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * &self.v_t
    }
}

pub fn truncated_svd(
    a: &DMatrix<f64>,
    k: usize,
    opts: &SvdOptions,
) -> Result<TruncatedSvd, LsaError> {
    let (m, n) = a.shape();
    let max = m.min(n);
    if k == 0 || k > max {
        return Err(LsaError::RankOutOfRange { k, max });
    }
    if a.iter().all(|x| *x == 0.0) {
        return Err(LsaError::ZeroMatrix);
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(LsaError::NonFinite);
    }
    let method = match opts.method {
        SvdMethod::Auto if max <= DENSE_LIMIT => SvdMethod::Dense,
        SvdMethod::Auto => SvdMethod::DEFAULT_RANDOMIZED,
        other => other,
    };
    let mut svd = match method {
        SvdMethod::Dense | SvdMethod::Auto => dense(a, k),
        SvdMethod::Randomized {
            oversample,
            power_iters,
        } => randomized(a, k, oversample, power_iters, opts.seed),
    };
    fix_signs(&mut svd);
    Ok(svd)
}

/// Full decomposition, sorted, cut to `k`.
fn dense(a: &DMatrix<f64>, k: usize) -> TruncatedSvd {
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]).then(i.cmp(&j)));
    order.truncate(k);
    TruncatedSvd {
        u: u.select_columns(&order),
        singular_values: DVector::from_iterator(k, order.iter().map(|&i| svd.singular_values[i])),
        v_t: v_t.select_rows(&order),
    }
}

fn orthonormal_basis(y: DMatrix<f64>) -> DMatrix<f64> {
    y.qr().q()
}

fn randomized(
    a: &DMatrix<f64>,
    k: usize,
    oversample: usize,
    power_iters: usize,
    seed: u64,
) -> TruncatedSvd {
    let (m, n) = a.shape();
    let width = (k + oversample).min(m.min(n));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = DMatrix::from_fn(n, width, |_, _| StandardNormal.sample(&mut rng));

    let mut q = orthonormal_basis(a * omega);
    for _ in 0..power_iters {
        let z = orthonormal_basis(a.tr_mul(&q));
        q = orthonormal_basis(a * z);
    }
    let b = q.tr_mul(a);
    let small = dense(&b, k);
    TruncatedSvd {
        u: q * small.u,
        singular_values: small.singular_values,
        v_t: small.v_t,
    }
}

/// Makes the largest-magnitude entry of every left singular vector positive
/// (first such entry on ties), flipping the matching right vector.
fn fix_signs(svd: &mut TruncatedSvd) {
    for j in 0..svd.rank() {
        let col = svd.u.column(j);
        let mut best = 0;
        for i in 1..col.len() {
            if col[i].abs() > col[best].abs() {
                best = i;
            }
        }
        if col[best] < 0.0 {
            svd.u.column_mut(j).neg_mut();
            svd.v_t.row_mut(j).neg_mut();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity() {
        let svd = truncated_svd(&DMatrix::identity(3, 3), 3, &SvdOptions::default()).unwrap();
        for s in svd.singular_values.iter() {
            assert_abs_diff_eq!(*s, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn rank_one_exact() {
        let u = DVector::from_vec(vec![1.0, -2.0, 0.5, 3.0]);
        let v = DVector::from_vec(vec![0.3, 0.1, -0.7]);
        let a = &u * v.transpose();
        for method in [SvdMethod::Dense, SvdMethod::DEFAULT_RANDOMIZED] {
            let svd = truncated_svd(&a, 1, &SvdOptions { method, seed: 1 }).unwrap();
            assert!((svd.reconstruct() - &a).norm() <= 1e-10);
        }
    }

    #[test]
    fn rank_bounds() {
        let a = DMatrix::from_element(3, 2, 1.0);
        assert!(matches!(
            truncated_svd(&a, 0, &SvdOptions::default()),
            Err(LsaError::RankOutOfRange { k: 0, max: 2 })
        ));
        assert!(matches!(
            truncated_svd(&a, 3, &SvdOptions::default()),
            Err(LsaError::RankOutOfRange { k: 3, max: 2 })
        ));
        assert!(matches!(
            truncated_svd(&DMatrix::zeros(2, 2), 1, &SvdOptions::default()),
            Err(LsaError::ZeroMatrix)
        ));
    }

    #[test]
    fn signs_are_canonical() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let svd = truncated_svd(&a, 3, &SvdOptions::default()).unwrap();
        for j in 0..3 {
            let col = svd.u.column(j);
            let max = col.iter().cloned().fold(f64::MIN, f64::max);
            let min = col.iter().cloned().fold(f64::MAX, f64::min);
            assert!(max >= -min);
        }
    }

    #[test]
    fn seeded_randomized_is_reproducible() {
        let a = DMatrix::from_fn(40, 30, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0);
        let opts = SvdOptions {
            method: SvdMethod::Randomized {
                oversample: 2,
                power_iters: 1,
            },
            seed: 42,
        };
        assert_eq!(truncated_svd(&a, 5, &opts).unwrap(), truncated_svd(&a, 5, &opts).unwrap());
    }
}
