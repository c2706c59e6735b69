//! Seeded Gaussian sampling of matrices.
//!
//! All randomness goes through ChaCha8 seeded from a `u64`
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`) and the ziggurat normal sampler
//! of `rand_distr`; both are platform independent, so outputs are
//! reproducible bit for bit. Free entries are drawn in row-major order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    let x: f64 = rng.sample(StandardNormal);
    T::lit(x)
}

/// i.i.d. standard normal entries.
pub fn gaussian_matrix<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> DenseMatrix<T> {
    DenseMatrix::from_fn(rows, cols, |_, _| normal(rng)).expect("normal samples are finite")
}

/// Skew-symmetric matrix with i.i.d. standard normal strict upper triangle.
pub fn gaussian_skew<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseMatrix<T> {
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let x: T = normal(rng);
            m.set(i, j, x);
            m.set(j, i, -x);
        }
    }
    m
}

/// Uniform sample on the unit Frobenius sphere of `rows x cols` matrices.
pub fn unit_sphere_matrix<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> DenseMatrix<T> {
    loop {
        let g: DenseMatrix<T> = gaussian_matrix(rng, rows, cols);
        let nrm = g.frobenius_norm();
        if nrm > T::zero() {
            return g.scale(T::one() / nrm);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draws() {
        let a: DenseMatrix<f64> = gaussian_matrix(&mut rng_from_seed(9), 3, 4);
        let b: DenseMatrix<f64> = gaussian_matrix(&mut rng_from_seed(9), 3, 4);
        assert_eq!(a, b);
        let c: DenseMatrix<f64> = gaussian_matrix(&mut rng_from_seed(10), 3, 4);
        assert_ne!(a, c);
    }

    #[test]
    fn skew_samples_are_exactly_skew() {
        let s: DenseMatrix<f64> = gaussian_skew(&mut rng_from_seed(1), 6);
        assert_eq!(s.skew_residual(), 0.0);
    }

    #[test]
    fn sphere_samples_have_unit_norm() {
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let s: DenseMatrix<f64> = unit_sphere_matrix(&mut rng, 4, 3);
            assert!((s.frobenius_norm() - 1.0).abs() < 1e-14);
        }
    }
}
