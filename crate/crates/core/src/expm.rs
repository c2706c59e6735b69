//! Matrix exponential by scaling and squaring with a truncated Taylor series.

use crate::error::{CurvError, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

const MAX_TERMS: usize = 40;

fn one_norm<T: Scalar>(a: &DenseMatrix<T>) -> T {
    (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a[(i, j)].abs()).sum::<T>())
        .fold(T::zero(), T::max)
}

/// `exp(a)` for square `a`.
///
/// `a` is scaled by `2^-s` until its 1-norm is at most 1/2, the Taylor
/// series is summed until the next term drops below machine epsilon
/// relative to the partial sum, and the result is squared `s` times.
pub fn expm<T: Scalar>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if !a.is_square() {
        return Err(CurvError::Dimension(format!(
            "expm needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let norm = one_norm(a);
    let half = T::lit(0.5);
    let mut squarings = 0u32;
    let mut scale = T::one();
    while norm * scale > half {
        scale = scale * half;
        squarings += 1;
    }
    let x = a.scale(scale);

    let mut sum = DenseMatrix::identity(n);
    let mut term = DenseMatrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = (&term * &x).scale(T::one() / T::lit(k as f64));
        sum = &sum + &term;
        if one_norm(&term) <= T::epsilon() * one_norm(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = DenseMatrix<f64>;

    #[test]
    fn zero_gives_identity() {
        assert_eq!(expm(&M::zeros(3, 3)).unwrap(), M::identity(3));
    }

    #[test]
    fn planar_rotation_closed_form() {
        for theta in [0.3, 1.0, -2.5, 7.0, 14.0] {
            let a = M::from_rows(&[[0.0, theta], [-theta, 0.0]]).unwrap();
            let e = expm(&a).unwrap();
            let (s, c) = f64::sin_cos(theta);
            let expect = M::from_rows(&[[c, s], [-s, c]]).unwrap();
            assert!((&e - &expect).frobenius_norm() < 1e-12 * expect.frobenius_norm());
        }
    }

    #[test]
    fn diagonal_matches_scalar_exp() {
        let d = M::from_diag(3, 3, &[1.0, -2.0, 3.5]).unwrap();
        let e = expm(&d).unwrap();
        for (i, x) in [1.0f64, -2.0, 3.5].iter().enumerate() {
            assert!((e[(i, i)] - x.exp()).abs() < 1e-13 * x.exp());
        }
    }

    #[test]
    fn nilpotent_is_exact_polynomial() {
        let n = M::from_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]).unwrap();
        let e = expm(&n).unwrap();
        let expect = M::from_rows(&[[1.0, 1.0, 0.5], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]]).unwrap();
        assert!((&e - &expect).max_abs() < 1e-15);
    }

    #[test]
    fn rejects_non_square() {
        assert!(matches!(
            expm(&M::zeros(2, 3)),
            Err(CurvError::Dimension(_))
        ));
    }
}
