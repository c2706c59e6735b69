//! Full singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! Jacobi is slower than Golub-Kahan bidiagonalization but computes small
//! singular values to high relative accuracy and yields orthogonal factors at
//! working precision, which is what the extremizer comparisons need.

use crate::error::Result;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// `a = u * diag(sigma) * v^T` with `u` (`m x m`) and `v` (`p x p`) orthogonal.
#[derive(Debug, Clone)]
pub struct SvdResult<T> {
    pub u: DenseMatrix<T>,
    /// `min(m, p)` singular values, non-increasing.
    pub sigma: Vec<T>,
    pub v: DenseMatrix<T>,
}

impl<T: Scalar> SvdResult<T> {
    /// The `m x p` matrix carrying `sigma` on its diagonal.
    pub fn sigma_matrix(&self) -> DenseMatrix<T> {
        DenseMatrix::from_diag(self.u.rows(), self.v.rows(), &self.sigma)
            .expect("singular values are finite")
    }

    pub fn reconstruct(&self) -> DenseMatrix<T> {
        &(&self.u * &self.sigma_matrix()) * &self.v.t()
    }

    /// `i`-th singular value, zero past the end of the list.
    pub fn sigma_or_zero(&self, i: usize) -> T {
        self.sigma.get(i).copied().unwrap_or_else(T::zero)
    }
}

/// Full SVD with descending singular values.
///
/// Sign convention: the first entry of every left singular vector whose
/// magnitude exceeds `sqrt(eps)` is non-negative; the matching right singular
/// vector is flipped along with it. Equal singular values keep the column
/// order the Jacobi sweep produced, which is deterministic.
pub fn svd<T: Scalar>(a: &DenseMatrix<T>) -> Result<SvdResult<T>> {
    let (m, p) = a.shape();
    let mut out = if m >= p {
        jacobi_tall(a)
    } else {
        let t = jacobi_tall(&a.t());
        SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        }
    };
    fix_signs(&mut out);
    Ok(out)
}

fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).map(|(&a, &b)| a * b).sum()
}

fn jacobi_tall<T: Scalar>(a: &DenseMatrix<T>) -> SvdResult<T> {
    let (m, p) = a.shape();
    debug_assert!(m >= p);
    let mut w: Vec<Vec<T>> = (0..p).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<T>> = (0..p)
        .map(|j| {
            (0..p)
                .map(|i| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect();
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..p {
            for j in (i + 1)..p {
                let alpha = dot(&w[i], &w[i]);
                let beta = dot(&w[j], &w[j]);
                let gamma = dot(&w[i], &w[j]);
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let two = T::lit(2.0);
                let zeta = (beta - alpha) / (two * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<T> = w.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..p).collect();
    // stable sort keeps the original column index as tie-breaker
    order.sort_by(|&x, &y| {
        norms[y]
            .partial_cmp(&norms[x])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let sigma: Vec<T> = order.iter().map(|&k| norms[k]).collect();
    let cutoff = sigma.first().copied().unwrap_or_else(T::zero) * eps * T::lit(m.max(1) as f64);

    let mut basis: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut pending = Vec::new();
    for (slot, &k) in order.iter().enumerate() {
        if sigma[slot] > cutoff && sigma[slot] > T::zero() {
            basis.push(w[k].iter().map(|&x| x / sigma[slot]).collect());
        } else {
            pending.push(slot);
            basis.push(Vec::new());
        }
    }
    // rank-deficient slots and the trailing m - p columns come from the completion
    let mut filled: Vec<Vec<T>> = basis.iter().filter(|b| !b.is_empty()).cloned().collect();
    let extra = complete_basis(&mut filled, m);
    let mut extra = extra.into_iter();
    for slot in pending {
        basis[slot] = extra
            .next()
            .expect("completion supplies every missing column");
    }
    basis.extend(extra);

    let u = DenseMatrix::from_fn(m, m, |i, j| basis[j][i]).expect("finite");
    let v = DenseMatrix::from_fn(p, p, |i, j| v[order[j]][i]).expect("finite");
    SvdResult { u, sigma, v }
}

fn rotate<T: Scalar>(cols: &mut [Vec<T>], i: usize, j: usize, c: T, s: T) {
    let (lo, hi) = cols.split_at_mut(j);
    let (x, y) = (&mut lo[i], &mut hi[0]);
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (ai, bj) = (*a, *b);
        *a = c * ai - s * bj;
        *b = s * ai + c * bj;
    }
}

/// Extends the orthonormal set `basis` to `dim` vectors using canonical unit
/// vectors; each new vector is the unit vector with the largest residual,
/// orthogonalized twice. Returns only the new vectors (also appended to `basis`).
fn complete_basis<T: Scalar>(basis: &mut Vec<Vec<T>>, dim: usize) -> Vec<Vec<T>> {
    let mut added = Vec::new();
    while basis.len() < dim {
        let mut best: Option<(T, Vec<T>)> = None;
        for k in 0..dim {
            let mut e = vec![T::zero(); dim];
            e[k] = T::one();
            for _ in 0..2 {
                for b in basis.iter() {
                    let c = dot(b, &e);
                    for (ei, &bi) in e.iter_mut().zip(b) {
                        *ei = *ei - c * bi;
                    }
                }
            }
            let r = dot(&e, &e).sqrt();
            if best.as_ref().is_none_or(|(br, _)| r > *br) {
                best = Some((r, e));
            }
        }
        let (r, mut e) = best.expect("dim > 0");
        for x in e.iter_mut() {
            *x = *x / r;
        }
        basis.push(e.clone());
        added.push(e);
    }
    added
}

fn first_significant_is_negative<T: Scalar>(col: &[T]) -> bool {
    let thresh = T::epsilon().sqrt();
    col.iter()
        .find(|x| x.abs() > thresh)
        .is_some_and(|&x| x < T::zero())
}

fn fix_signs<T: Scalar>(s: &mut SvdResult<T>) {
    let (m, p) = (s.u.rows(), s.v.rows());
    let r = m.min(p);
    let mut u_cols: Vec<Vec<T>> = (0..m).map(|j| s.u.column(j)).collect();
    let mut v_cols: Vec<Vec<T>> = (0..p).map(|j| s.v.column(j)).collect();
    let flip = |c: &mut Vec<T>| c.iter_mut().for_each(|x| *x = -*x);
    for j in 0..m {
        if first_significant_is_negative(&u_cols[j]) {
            flip(&mut u_cols[j]);
            if j < r {
                flip(&mut v_cols[j]);
            }
        }
    }
    for col in v_cols.iter_mut().skip(r) {
        if first_significant_is_negative(col) {
            flip(col);
        }
    }
    s.u = DenseMatrix::from_fn(m, m, |i, j| u_cols[j][i]).expect("finite");
    s.v = DenseMatrix::from_fn(p, p, |i, j| v_cols[j][i]).expect("finite");
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = DenseMatrix<f64>;

    fn orth_residual(q: &M) -> f64 {
        (&(&q.t() * q) - &M::identity(q.cols())).frobenius_norm()
    }

    #[test]
    fn diagonal_input_is_reordered() {
        let s = svd(&M::from_diag(2, 2, &[1.0, 2.0]).unwrap()).unwrap();
        assert_eq!(s.sigma, vec![2.0, 1.0]);
        assert!((&s.reconstruct() - &M::from_diag(2, 2, &[1.0, 2.0]).unwrap()).max_abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_gives_identity_factors() {
        for (m, p) in [(3, 2), (2, 3), (4, 4)] {
            let s = svd(&M::zeros(m, p)).unwrap();
            assert!(s.sigma.iter().all(|&x| x == 0.0));
            assert_eq!(s.u, M::identity(m));
            assert_eq!(s.v, M::identity(p));
        }
    }

    #[test]
    fn grassmann_maximizer_block_has_double_singular_value() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b2 = M::from_diag(5, 3, &[h, h]).unwrap();
        let s = svd(&b2).unwrap();
        assert!((s.sigma[0] - h).abs() < 1e-15);
        assert!((s.sigma[1] - h).abs() < 1e-15);
        assert_eq!(s.sigma[2], 0.0);
    }

    #[test]
    fn wide_and_tall_factors_are_orthogonal() {
        let a = M::from_rows(&[
            [1.0, 2.0, 0.5, -1.0],
            [0.0, -3.0, 2.0, 1.0],
            [4.0, 1.0, 1.0, 0.0],
        ])
        .unwrap();
        for x in [a.clone(), a.t()] {
            let s = svd(&x).unwrap();
            assert!(orth_residual(&s.u) < 1e-12);
            assert!(orth_residual(&s.v) < 1e-12);
            assert!((&s.reconstruct() - &x).frobenius_norm() < 1e-12);
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn sign_convention_is_applied() {
        let a = M::from_rows(&[[-2.0, 0.0], [0.0, -1.0], [0.0, 0.0]]).unwrap();
        let s = svd(&a).unwrap();
        for j in 0..3 {
            let c = s.u.column(j);
            let first = c.iter().find(|x| x.abs() > 1e-8).unwrap();
            assert!(*first > 0.0);
        }
        assert!((&s.reconstruct() - &a).max_abs() < 1e-15);
    }
}
