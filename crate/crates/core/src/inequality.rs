//! Matrix-norm inequalities, trace-term extremization, commutator bounds
//! and the scalar bound functions used to derive the global curvature bounds.
//!
//! Every inequality is returned as an [`InequalityReport`] carrying both
//! sides and the slack, so fuzz harnesses can check `slack >= -tol`.

use crate::error::{CurvError, Result};
use crate::matrix::{commutator, skew_tolerance, DenseMatrix};
use crate::scalar::Scalar;
use crate::svd::svd;

/// Upper bound on the Euclidean sectional curvature of `St(n, n - 1)`.
/// The sharp value is conjectured to be `1/2`.
pub const ST_N_NM1_EUCLIDEAN_UPPER: f64 = 2.0 / 3.0;

/// Conjectured sharp upper bound for `St(n, n - 1)` under the Euclidean metric.
pub const ST_N_NM1_EUCLIDEAN_CONJECTURE: f64 = 0.5;

const TIGHT_TOL: f64 = 1e-10;

/// `lhs <= rhs` evaluated at a concrete input.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport<T> {
    pub name: &'static str,
    pub lhs: T,
    pub rhs: T,
    /// `rhs - lhs`.
    pub slack: T,
    /// `|slack| <= 1e-10 * max(1, rhs)`.
    pub tight: bool,
    pub witness: Option<Vec<DenseMatrix<T>>>,
}

impl<T: Scalar> InequalityReport<T> {
    pub fn new(name: &'static str, lhs: T, rhs: T) -> Self {
        let slack = rhs - lhs;
        let tight = slack.abs() <= T::lit(TIGHT_TOL) * rhs.max(T::one());
        Self {
            name,
            lhs,
            rhs,
            slack,
            tight,
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: Vec<DenseMatrix<T>>) -> Self {
        self.witness = Some(witness);
        self
    }

    /// `slack >= -tol`.
    pub fn holds(&self, tol: T) -> bool {
        self.slack >= -tol
    }
}

fn is_skew<T: Scalar>(a: &DenseMatrix<T>) -> bool {
    a.is_square() && a.skew_residual() <= skew_tolerance(a)
}

/// `||AB||_F <= min(||A||_2 ||B||_F, ||A||_F ||B||_2)`, tightened to
/// `||A||_F ||B||_F / sqrt(2)` when either factor is skew-symmetric.
pub fn submult_bound<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
) -> Result<InequalityReport<T>> {
    let lhs = a.try_mul(b)?.frobenius_norm();
    let (fa, fb) = (a.frobenius_norm(), b.frobenius_norm());
    let mixed = (a.spectral_norm() * fb).min(fa * b.spectral_norm());
    let report = if is_skew(a) || is_skew(b) {
        let skew = fa * fb * T::FRAC_1_SQRT_2();
        InequalityReport::new("submult_skew", lhs, mixed.min(skew))
    } else {
        InequalityReport::new("submult", lhs, mixed)
    };
    Ok(report.with_witness(vec![a.clone(), b.clone()]))
}

/// Which of the two quadratic trace terms is maximized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceVariant {
    /// `tr(B1^T B2 B2^T B1) = ||B2^T B1||_F^2`.
    Left,
    /// `tr(B1 B2^T B2 B1^T) = ||B2 B1^T||_F^2`.
    Right,
}

fn require_tall<T: Scalar>(b: &DenseMatrix<T>, what: &str) -> Result<()> {
    if b.rows() < b.cols() {
        return Err(CurvError::dim(format!(
            "{what} needs an m x p matrix with m >= p, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

fn require_same_shape<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(CurvError::dim(format!(
            "operands differ in shape: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

/// Value of the chosen trace term at `b1`.
pub fn trace_term<T: Scalar>(
    b1: &DenseMatrix<T>,
    b2: &DenseMatrix<T>,
    variant: TraceVariant,
) -> Result<T> {
    require_same_shape(b1, b2)?;
    Ok(match variant {
        TraceVariant::Left => (&b2.t() * b1).frobenius_norm_sq(),
        TraceVariant::Right => (b2 * &b1.t()).frobenius_norm_sq(),
    })
}

/// `tr(B1^T B2 B1^T B2)`.
pub fn trace_quad<T: Scalar>(b1: &DenseMatrix<T>, b2: &DenseMatrix<T>) -> Result<T> {
    require_same_shape(b1, b2)?;
    let m = &b1.t() * b2;
    Ok((&m * &m).trace())
}

/// Maximum of the chosen trace term over unit-Frobenius `B1`.
///
/// Returns `(sigma_1^2, U E11 V^T)` where `b2 = U Sigma V^T`; the same
/// rank-one matrix maximizes both variants.
pub fn trace_term_max<T: Scalar>(
    b2: &DenseMatrix<T>,
    _variant: TraceVariant,
) -> Result<(T, DenseMatrix<T>)> {
    require_tall(b2, "trace_term_max")?;
    let s = svd(b2)?;
    let sigma1 = s.sigma_or_zero(0);
    let argmax = outer(&s.u.column(0), &s.v.column(0), T::one());
    Ok((sigma1 * sigma1, argmax))
}

fn outer<T: Scalar>(u: &[T], v: &[T], scale: T) -> DenseMatrix<T> {
    DenseMatrix::from_fn(u.len(), v.len(), |i, j| scale * u[i] * v[j]).expect("finite")
}

/// Global extrema of `tr(B1^T B2 B1^T B2)` over unit-Frobenius `B1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceQuadExtrema<T> {
    /// `sigma_1^2`.
    pub max: T,
    /// `-sigma_1 sigma_2`, or `0` for a single column with `m >= 2`.
    pub min: T,
    pub argmax: DenseMatrix<T>,
    pub argmin: DenseMatrix<T>,
}

/// Extrema of `tr(B1^T B2 B1^T B2)`: with `b2 = U Sigma V^T`, the maximum
/// `sigma_1^2` is attained at `U E11 V^T` and the minimum `-sigma_1 sigma_2`
/// at `U (E12 - E21) V^T / sqrt(2)`.
///
/// For `p = 1` the term is `(b1 . b2)^2`, minimized (value `0`) by any unit
/// `b1` orthogonal to `b2`; this needs `m >= 2`, otherwise the sphere is two
/// points and both extrema equal `sigma_1^2`.
pub fn trace_quad_extrema<T: Scalar>(b2: &DenseMatrix<T>) -> Result<TraceQuadExtrema<T>> {
    require_tall(b2, "trace_quad_extrema")?;
    let (m, p) = b2.shape();
    let s = svd(b2)?;
    let (s1, s2) = (s.sigma_or_zero(0), s.sigma_or_zero(1));
    let u = |j: usize| s.u.column(j);
    let v = |j: usize| s.v.column(j);
    let argmax = outer(&u(0), &v(0), T::one());
    let (min, argmin) = if p >= 2 {
        let h = T::FRAC_1_SQRT_2();
        let c = &outer(&u(0), &v(1), h) - &outer(&u(1), &v(0), h);
        (-(s1 * s2), c)
    } else if m >= 2 {
        (T::zero(), outer(&u(1), &v(0), T::one()))
    } else {
        (s1 * s1, argmax.clone())
    };
    Ok(TraceQuadExtrema {
        max: s1 * s1,
        min,
        argmax,
        argmin,
    })
}

/// Both Wu-Chen inequalities in their classic and refined forms.
#[derive(Debug, Clone, PartialEq)]
pub struct WuChenReport<T> {
    /// `1/2 ||B1^T B2 - B2^T B1||^2 <= ||B1||^2 ||B2||^2`.
    pub classic_btb: InequalityReport<T>,
    /// `1/2 ||B1 B2^T - B2 B1^T||^2 <= ||B1||^2 ||B2||^2`.
    pub classic_bbt: InequalityReport<T>,
    pub refined_btb: InequalityReport<T>,
    pub refined_bbt: InequalityReport<T>,
}

impl<T: Scalar> WuChenReport<T> {
    pub fn all(&self) -> [&InequalityReport<T>; 4] {
        [
            &self.classic_btb,
            &self.classic_bbt,
            &self.refined_btb,
            &self.refined_bbt,
        ]
    }
}

/// Classic and refined Wu-Chen bounds. The refined right-hand side is
/// `min(||B1||^2 (sigma_1^2 + sigma_2^2), ||B2||^2 (rho_1^2 + rho_2^2))`
/// with `sigma` the singular values of `b2` and `rho` those of `b1`.
pub fn wu_chen_refined<T: Scalar>(
    b1: &DenseMatrix<T>,
    b2: &DenseMatrix<T>,
) -> Result<WuChenReport<T>> {
    require_same_shape(b1, b2)?;
    let half = T::lit(0.5);
    let m_in = &b1.t() * b2;
    let m_out = b1 * &b2.t();
    let lhs_btb = half * (&m_in - &m_in.t()).frobenius_norm_sq();
    let lhs_bbt = half * (&m_out - &m_out.t()).frobenius_norm_sq();

    let (n1, n2) = (b1.frobenius_norm_sq(), b2.frobenius_norm_sq());
    let top2 = |b: &DenseMatrix<T>| -> Result<T> {
        let s = svd(b)?;
        let (x, y) = (s.sigma_or_zero(0), s.sigma_or_zero(1));
        Ok(x * x + y * y)
    };
    let refined = (n1 * top2(b2)?).min(n2 * top2(b1)?);
    let classic = n1 * n2;
    let w = vec![b1.clone(), b2.clone()];
    Ok(WuChenReport {
        classic_btb: InequalityReport::new("wu_chen_btb", lhs_btb, classic).with_witness(w.clone()),
        classic_bbt: InequalityReport::new("wu_chen_bbt", lhs_bbt, classic).with_witness(w.clone()),
        refined_btb: InequalityReport::new("wu_chen_refined_btb", lhs_btb, refined)
            .with_witness(w.clone()),
        refined_bbt: InequalityReport::new("wu_chen_refined_bbt", lhs_bbt, refined).with_witness(w),
    })
}

/// `c_p` in `||[A1, A2]||^2 <= c_p ||A1||^2 ||A2||^2` for `A1, A2 in Skew(p)`.
pub fn skew_commutator_constant<T: Scalar>(p: usize) -> T {
    match p {
        0..=2 => T::zero(),
        3 => T::lit(0.5),
        _ => T::one(),
    }
}

/// `||[A1, A2]||_F^2 <= c_p ||A1||_F^2 ||A2||_F^2`.
pub fn skew_commutator_bound<T: Scalar>(
    a1: &DenseMatrix<T>,
    a2: &DenseMatrix<T>,
) -> Result<InequalityReport<T>> {
    for a in [a1, a2] {
        if !a.is_square() {
            return Err(CurvError::Structure(format!(
                "commutator bound needs skew-symmetric input, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if !is_skew(a) {
            return Err(CurvError::Structure(
                "commutator bound needs skew-symmetric input".into(),
            ));
        }
    }
    let lhs = commutator(a1, a2)?.frobenius_norm_sq();
    let rhs =
        skew_commutator_constant::<T>(a1.rows()) * a1.frobenius_norm_sq() * a2.frobenius_norm_sq();
    Ok(InequalityReport::new("skew_commutator", lhs, rhs)
        .with_witness(vec![a1.clone(), a2.clone()]))
}

/// Accepts `x in [lo, hi]`, allowing `hi` to be exceeded by rounding noise
/// (relative `structural_tol`) from the norm computation that produced `x`.
fn check_domain<T: Scalar>(name: &str, x: T, hi: T) -> Result<()> {
    let slack = T::structural_tol() * hi;
    if !(x >= T::zero() && x <= hi + slack) {
        return Err(CurvError::Domain(format!(
            "{name} = {x} lies outside [0, {hi}]"
        )));
    }
    Ok(())
}

fn sqrt_clamped<T: Scalar>(x: T) -> T {
    x.max(T::zero()).sqrt()
}

/// Upper bound on the canonical Stiefel curvature in terms of the block
/// norms `alpha_i = ||A_i||_F` of an orthonormal pair:
///
/// `5/4 + 5/16 a1^2 a2^2 - 1/2 (a1^2 + a2^2)
///   + (1 + sqrt 2)/4 a1 a2 sqrt(1 - a1^2/2) sqrt(1 - a2^2/2)`
///
/// on `[0, sqrt 2]^2`.
pub fn canonical_bound_fn<T: Scalar>(alpha1: T, alpha2: T) -> Result<T> {
    let hi = T::SQRT_2();
    check_domain("alpha1", alpha1, hi)?;
    check_domain("alpha2", alpha2, hi)?;
    let (s1, s2) = (alpha1 * alpha1, alpha2 * alpha2);
    let half = T::lit(0.5);
    let cross = (T::one() + T::SQRT_2()) / T::lit(4.0)
        * alpha1
        * alpha2
        * sqrt_clamped(T::one() - half * s1)
        * sqrt_clamped(T::one() - half * s2);
    Ok(T::lit(1.25) + T::lit(5.0 / 16.0) * s1 * s2 - half * (s1 + s2) + cross)
}

/// Closed form of [`canonical_bound_fn`] on the diagonal `alpha1 = alpha2`:
/// `5/4 + (3 - 2 sqrt 2)/16 a^4 - (3 - sqrt 2)/4 a^2`.
pub fn canonical_bound_fn_diagonal<T: Scalar>(alpha: T) -> Result<T> {
    check_domain("alpha", alpha, T::SQRT_2())?;
    let a2 = alpha * alpha;
    let r2 = T::SQRT_2();
    Ok(
        T::lit(1.25) + (T::lit(3.0) - T::lit(2.0) * r2) / T::lit(16.0) * a2 * a2
            - (T::lit(3.0) - r2) / T::lit(4.0) * a2,
    )
}

/// Maximizes [`canonical_bound_fn`] on a `grid_n x grid_n` uniform grid over
/// `[0, sqrt 2]^2` (endpoints included). Ties keep the first point in
/// row-major order.
pub fn verify_bound_fn_max<T: Scalar>(grid_n: usize) -> Result<((T, T), T)> {
    if grid_n < 100 {
        return Err(CurvError::usage(format!(
            "grid_n = {grid_n}; at least 100 required"
        )));
    }
    let step = T::SQRT_2() / T::lit((grid_n - 1) as f64);
    let at = |i: usize| {
        if i == grid_n - 1 {
            T::SQRT_2()
        } else {
            step * T::lit(i as f64)
        }
    };
    let mut best = ((T::zero(), T::zero()), T::neg_infinity());
    for i in 0..grid_n {
        for j in 0..grid_n {
            let (a, b) = (at(i), at(j));
            let f = canonical_bound_fn(a, b)?;
            if f > best.1 {
                best = ((a, b), f);
            }
        }
    }
    Ok(best)
}

/// Lower and upper bounds on the Euclidean Stiefel curvature in terms of
/// the block norms `beta_i = ||B_i||_F` of an orthonormal pair, `beta_i in [0, 1]`.
///
/// lower: `-1/2 b1 b2 (sqrt 2 g + b1 b2)`, upper:
/// `1/2 (1 - b2^2) b1^2 + 1/2 (1 - b1^2) b2^2 + g b1 b2 + b1^2 b2^2
///  + 1/2 (1 - b1^2)(1 - b2^2)`, where `g = sqrt(1 - b1^2) sqrt(1 - b2^2)`.
pub fn euclidean_bound_fns<T: Scalar>(beta1: T, beta2: T) -> Result<(T, T)> {
    check_domain("beta1", beta1, T::one())?;
    check_domain("beta2", beta2, T::one())?;
    let half = T::lit(0.5);
    let (s1, s2) = (beta1 * beta1, beta2 * beta2);
    let (c1, c2) = (
        (T::one() - s1).max(T::zero()),
        (T::one() - s2).max(T::zero()),
    );
    let g = c1.sqrt() * c2.sqrt();
    let bb = beta1 * beta2;
    let lower = -half * (bb * (T::SQRT_2() * g + bb));
    let upper = half * c2 * s1 + half * c1 * s2 + g * bb + s1 * s2 + half * c1 * c2;
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = DenseMatrix<f64>;
    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn j2() -> M {
        M::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap()
    }

    #[test]
    fn submult_identity_is_tight() {
        let b = M::from_rows(&[[1.0, 2.0], [3.0, -1.0]]).unwrap();
        let r = submult_bound(&M::identity(2), &b).unwrap();
        assert!((r.lhs - b.frobenius_norm()).abs() < 1e-14);
        assert!(r.tight);
    }

    #[test]
    fn submult_skew_equality_case() {
        let r = submult_bound(&j2(), &M::identity(2)).unwrap();
        assert_eq!(r.name, "submult_skew");
        assert!((r.lhs - 2f64.sqrt()).abs() < 1e-15);
        assert!((r.rhs - 2f64.sqrt()).abs() < 1e-15);
        assert!(r.tight);
    }

    #[test]
    fn trace_term_max_diagonal() {
        let (opt, arg) = trace_term_max(
            &M::from_diag(2, 2, &[2.0, 1.0]).unwrap(),
            TraceVariant::Left,
        )
        .unwrap();
        assert!((opt - 4.0).abs() < 1e-14);
        assert!((&arg - &M::from_diag(2, 2, &[1.0]).unwrap()).max_abs() < 1e-15);
        let (zero, _) = trace_term_max(&M::zeros(3, 2), TraceVariant::Right).unwrap();
        assert_eq!(zero, 0.0);
        assert!(matches!(
            trace_term_max(&M::zeros(2, 3), TraceVariant::Left),
            Err(CurvError::Dimension(_))
        ));
    }

    #[test]
    fn trace_quad_examples() {
        let r1 = M::from_rows(&[[0.6, 0.0], [0.8, 0.0], [0.0, 0.0]]).unwrap();
        let e = trace_quad_extrema(&r1).unwrap();
        assert!((e.max - 1.0).abs() < 1e-14);
        assert!(e.min.abs() < 1e-14);

        let b2 = M::from_diag(2, 2, &[H, H]).unwrap();
        let e = trace_quad_extrema(&b2).unwrap();
        assert!((e.min + 0.5).abs() < 1e-15);
        assert!((trace_quad(&e.argmin, &b2).unwrap() + 0.5).abs() < 1e-15);
        assert!((trace_quad(&e.argmax, &b2).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn trace_quad_single_column() {
        let col = M::from_rows(&[[3.0], [4.0]]).unwrap();
        let e = trace_quad_extrema(&col).unwrap();
        assert!((e.max - 25.0).abs() < 1e-12);
        assert_eq!(e.min, 0.0);
        assert!(trace_quad(&e.argmin, &col).unwrap().abs() < 1e-12);
        let scalar = trace_quad_extrema(&M::from_rows(&[[2.0]]).unwrap()).unwrap();
        assert_eq!(scalar.min, scalar.max);
    }

    #[test]
    fn wu_chen_maximizer_is_sharp() {
        let b1 = M::from_rows(&[[0.0, H], [-H, 0.0]]).unwrap();
        let b2 = M::from_diag(2, 2, &[H, H]).unwrap();
        let r = wu_chen_refined(&b1, &b2).unwrap();
        assert!(r.classic_btb.tight && r.classic_bbt.tight);
        assert!(r.classic_btb.slack.abs() < 1e-12);
    }

    #[test]
    fn wu_chen_refined_for_orthonormal_columns() {
        let b1 = M::from_rows(&[
            [1.0, 2.0, 0.0],
            [0.0, -1.0, 1.0],
            [3.0, 0.0, 0.0],
            [0.5, 0.5, 0.5],
        ])
        .unwrap();
        let b2 = M::from_diag(4, 3, &[1.0, 1.0, 1.0]).unwrap();
        let r = wu_chen_refined(&b1, &b2).unwrap();
        let n1 = b1.frobenius_norm_sq();
        assert!((r.refined_btb.rhs - 2.0 * n1).abs() < 1e-12);
        assert!((r.classic_btb.rhs - 3.0 * n1).abs() < 1e-12);
    }

    #[test]
    fn skew_commutator_cases() {
        let r = skew_commutator_bound(&j2(), &j2().scale(3.0)).unwrap();
        assert_eq!(r.lhs, 0.0);
        let x = crate::matrix::skew3([1.0, 0.0, 0.0]);
        let y = crate::matrix::skew3([0.0, 1.0, 0.0]);
        assert!(skew_commutator_bound(&x, &y).unwrap().tight);
        assert!(matches!(
            skew_commutator_bound(&M::identity(3), &y),
            Err(CurvError::Structure(_))
        ));
    }

    #[test]
    fn canonical_bound_fn_values() {
        assert_eq!(canonical_bound_fn(0.0, 0.0).unwrap(), 1.25);
        let r2 = 2f64.sqrt();
        assert!((canonical_bound_fn(r2, r2).unwrap() - 0.5).abs() < 1e-15);
        assert!((canonical_bound_fn(0.7f64, 0.0).unwrap() - (1.25 - 0.245)).abs() < 1e-15);
        assert!(matches!(
            canonical_bound_fn(1.5, 0.0),
            Err(CurvError::Domain(_))
        ));
        assert!(matches!(
            canonical_bound_fn(-0.1, 0.0),
            Err(CurvError::Domain(_))
        ));
        for i in 0..=20 {
            let a = r2 * i as f64 / 20.0;
            let d = canonical_bound_fn_diagonal(a).unwrap();
            assert!((canonical_bound_fn(a, a).unwrap() - d).abs() < 1e-14);
        }
    }

    #[test]
    fn bound_fn_grid_max_at_origin() {
        let ((a, b), f) = verify_bound_fn_max::<f64>(100).unwrap();
        assert_eq!((a, b, f), (0.0, 0.0, 1.25));
        assert!(verify_bound_fn_max::<f64>(50).is_err());
    }

    #[test]
    fn euclidean_bound_fn_values() {
        assert_eq!(euclidean_bound_fns(1.0, 1.0).unwrap(), (-0.5, 1.0));
        assert_eq!(euclidean_bound_fns(0.0, 0.0).unwrap(), (0.0, 0.5));
        assert!(matches!(
            euclidean_bound_fns(1.1, 0.0),
            Err(CurvError::Domain(_))
        ));
    }
}
