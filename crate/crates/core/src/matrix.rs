//! Dense real matrices and the structural utilities the curvature code uses:
//! Frobenius products, commutators, skew checks and the `Skew(3) <-> R^3`
//! identification.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{CurvError, Result};
use crate::scalar::Scalar;

/// Row-major dense real matrix.
///
/// Zero-sized dimensions are allowed: the `B` block of a tangent to
/// `St(n, n)` is an empty `0 x n` matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// Rectangular `rows x cols` matrix with `diag` on its main diagonal.
    pub fn from_diag(rows: usize, cols: usize, diag: &[T]) -> Result<Self> {
        if diag.len() > rows.min(cols) {
            return Err(CurvError::dim(format!(
                "{} diagonal entries do not fit a {rows}x{cols} matrix",
                diag.len()
            )));
        }
        let mut m = Self::zeros(rows, cols);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * cols + i] = d;
        }
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(CurvError::dim(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let m = Self { rows, cols, data };
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(CurvError::dim(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_row_major(rows, cols, data)
    }

    fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|x| !x.is_finite()) {
            Some(k) => Err(CurvError::NonFinite {
                row: k / self.cols.max(1),
                col: k % self.cols.max(1),
            }),
            None => Ok(()),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// Shorthand for [`transpose`](Self::transpose).
    #[inline]
    pub fn t(&self) -> Self {
        self.transpose()
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// `a * self + b * other`, shapes must agree.
    pub fn lin_comb(&self, a: T, other: &Self, b: T) -> Result<Self> {
        self.same_shape(other, "linear combination")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&x, &y)| a * x + b * y)
                .collect(),
        })
    }

    fn same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(CurvError::dim(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Checked matrix product.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(CurvError::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![T::zero(); m * n];
        for i in 0..m {
            let out_row = &mut out[i * n..(i + 1) * n];
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == T::zero() {
                    continue;
                }
                let rhs_row = &rhs.data[l * n..(l + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(Self {
            rows: m,
            cols: n,
            data: out,
        })
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .sum()
    }

    pub fn frobenius_norm_sq(&self) -> T {
        self.data.iter().map(|&x| x * x).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> T {
        crate::svd::svd(self)
            .map(|s| s.sigma.first().copied().unwrap_or_else(T::zero))
            .unwrap_or_else(|_| T::nan())
    }

    /// `max |x_ij + x_ji|`; zero exactly for skew-symmetric input.
    pub fn skew_residual(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let n = self.rows;
        let mut r = T::zero();
        for i in 0..n {
            for j in i..n {
                r = r.max((self[(i, j)] + self[(j, i)]).abs());
            }
        }
        r
    }

    /// Skewness test with the scaled tolerance `tol * max(1, ||x||_F)`.
    pub fn is_skew(&self) -> bool {
        self.is_square() && self.skew_residual() <= skew_tolerance(self)
    }

    /// Zero-padded embedding into a larger `rows x cols` matrix (upper-left corner).
    pub fn padded(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows < self.rows || cols < self.cols {
            return Err(CurvError::dim(format!(
                "cannot pad {}x{} into {rows}x{cols}",
                self.rows, self.cols
            )));
        }
        let mut out = Self::zeros(rows, cols);
        out.set_block(0, 0, self);
        Ok(out)
    }

    /// Copies the `rows x cols` block whose upper-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(
            r0 + rows <= self.rows && c0 + cols <= self.cols,
            "block out of range"
        );
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            let src = &self.data[(r0 + i) * self.cols + c0..(r0 + i) * self.cols + c0 + cols];
            out.data[i * cols..(i + 1) * cols].copy_from_slice(src);
        }
        out
    }

    pub(crate) fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        assert!(
            r0 + b.rows <= self.rows && c0 + b.cols <= self.cols,
            "block out of range"
        );
        for i in 0..b.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + b.cols].copy_from_slice(&b.data[i * b.cols..(i + 1) * b.cols]);
        }
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &Self) -> Result<Self> {
        if self.cols != below.cols {
            return Err(CurvError::dim(format!(
                "vstack: {} vs {} columns",
                self.cols, below.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(Self {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    /// Maps entries into another scalar type.
    pub fn cast<U: Scalar>(&self) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| U::lit(x.as_f64())).collect(),
        }
    }
}

/// Absolute skewness tolerance: structural tolerance scaled by `max(1, ||x||_F)`.
pub fn skew_tolerance<T: Scalar>(x: &DenseMatrix<T>) -> T {
    T::structural_tol() * x.frobenius_norm().max(T::one())
}

/// `tr(a^T b)`.
pub fn frobenius_inner<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<T> {
    a.same_shape(b, "frobenius_inner")?;
    Ok(a.data.iter().zip(&b.data).map(|(&x, &y)| x * y).sum())
}

/// `ab - ba` for square matrices of equal size.
pub fn commutator<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if !a.is_square() || !b.is_square() || a.rows != b.rows {
        return Err(CurvError::dim(format!(
            "commutator needs equal square operands, got {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    ab.lin_comb(T::one(), &ba, -T::one())
}

/// Independent entries `(a, b1, b2)` of
/// `[[0, -a, -b1], [a, 0, -b2], [b1, b2, 0]]`.
pub fn vec3<T: Scalar>(x: &DenseMatrix<T>) -> Result<[T; 3]> {
    if x.shape() != (3, 3) {
        return Err(CurvError::Structure(format!(
            "vec3 needs a 3x3 matrix, got {}x{}",
            x.rows, x.cols
        )));
    }
    if !x.is_skew() {
        return Err(CurvError::Structure(
            "vec3 input is not skew-symmetric".into(),
        ));
    }
    Ok([x[(1, 0)], x[(2, 0)], x[(2, 1)]])
}

/// Inverse of [`vec3`].
pub fn skew3<T: Scalar>(v: [T; 3]) -> DenseMatrix<T> {
    let [a, b1, b2] = v;
    let z = T::zero();
    DenseMatrix {
        rows: 3,
        cols: 3,
        data: vec![z, -a, -b1, a, z, -b2, b1, b2, z],
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of range"
        );
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;

    /// Panics on incompatible shapes; use [`DenseMatrix::try_mul`] for a checked product.
    fn mul(self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl<T: Scalar> Add for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;

    fn add(self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        self.lin_comb(T::one(), rhs, T::one())
            .expect("matrix sum shape mismatch")
    }
}

impl<T: Scalar> Sub for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;

    fn sub(self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        self.lin_comb(T::one(), rhs, -T::one())
            .expect("matrix difference shape mismatch")
    }
}

impl<T: Scalar> Neg for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;

    fn neg(self) -> DenseMatrix<T> {
        self.scale(-T::one())
    }
}

impl<T: fmt::Debug> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)).take(self.rows) {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> fmt::Display for DenseMatrix<T> {
    /// Whitespace separated rows, one per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = DenseMatrix<f64>;

    fn j2() -> M {
        M::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap()
    }

    #[test]
    fn frobenius_inner_examples() {
        assert_eq!(
            frobenius_inner(&M::identity(2), &M::identity(2)).unwrap(),
            2.0
        );
        assert_eq!(frobenius_inner(&j2(), &j2()).unwrap(), 2.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b1 = M::from_rows(&[[0.0, s], [-s, 0.0]]).unwrap();
        let b2 = M::from_rows(&[[s, 0.0], [0.0, s]]).unwrap();
        assert_eq!(frobenius_inner(&b1, &b2).unwrap(), 0.0);
    }

    #[test]
    fn frobenius_inner_rejects_shape_mismatch() {
        let err = frobenius_inner(&M::zeros(2, 3), &M::zeros(3, 2)).unwrap_err();
        assert!(matches!(err, CurvError::Dimension(_)));
    }

    #[test]
    fn commutator_examples() {
        let d1 = M::from_diag(3, 3, &[1.0, 2.0, 3.0]).unwrap();
        let d2 = M::from_diag(3, 3, &[-4.0, 0.5, 7.0]).unwrap();
        assert_eq!(commutator(&d1, &d2).unwrap().max_abs(), 0.0);

        let a = M::from_rows(&[[0.0, 3.0], [-3.0, 0.0]]).unwrap();
        assert_eq!(commutator(&a, &j2()).unwrap().max_abs(), 0.0);

        assert!(matches!(
            commutator(&M::zeros(2, 3), &M::zeros(2, 3)),
            Err(CurvError::Dimension(_))
        ));
        assert!(matches!(
            commutator(&M::zeros(2, 2), &M::zeros(3, 3)),
            Err(CurvError::Dimension(_))
        ));
    }

    #[test]
    fn constructors_reject_non_finite() {
        let err = M::from_rows(&[[0.0, f64::NAN]]).unwrap_err();
        assert_eq!(err, CurvError::NonFinite { row: 0, col: 1 });
        assert!(M::from_row_major(2, 2, vec![1.0; 3]).is_err());
        assert!(M::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn skew3_basis_layout() {
        let e1 = skew3([1.0, 0.0, 0.0]);
        assert_eq!(
            e1,
            M::from_rows(&[[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]).unwrap()
        );
        let c = commutator(&skew3([1.0, 0.0, 0.0]), &skew3([0.0, 1.0, 0.0])).unwrap();
        assert_eq!(vec3(&c).unwrap(), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn vec3_rejects_bad_input() {
        assert!(matches!(
            vec3(&M::identity(3)),
            Err(CurvError::Structure(_))
        ));
        assert!(matches!(vec3(&j2()), Err(CurvError::Structure(_))));
    }

    #[test]
    fn transpose_and_blocks() {
        let a = M::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap();
        assert_eq!(a.t().shape(), (3, 2));
        assert_eq!(a.t()[(2, 1)], 6.0);
        assert_eq!(
            a.block(0, 1, 2, 2),
            M::from_rows(&[[2.0, 3.0], [5.0, 6.0]]).unwrap()
        );
        let p = a.padded(3, 4).unwrap();
        assert_eq!(p.frobenius_norm_sq(), a.frobenius_norm_sq());
        assert_eq!(p[(1, 2)], 6.0);
        let stacked = a.vstack(&M::zeros(0, 3)).unwrap();
        assert_eq!(stacked, a);
    }

    #[test]
    fn works_in_single_precision() {
        let a = DenseMatrix::<f32>::from_rows(&[[0.0f32, 1.0], [-1.0, 0.0]]).unwrap();
        assert!(a.is_skew());
        assert_eq!(frobenius_inner(&a, &a).unwrap(), 2.0f32);
    }
}
