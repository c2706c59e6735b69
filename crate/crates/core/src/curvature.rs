//! Closed-form sectional curvatures for orthonormal tangent pairs.
//!
//! Each formula returns its individual summands so callers can attribute the
//! curvature to the `A` and `B` blocks. The formulas are only valid for
//! orthonormal inputs, so the `k_*` functions reject anything else; use
//! [`sectional_curvature`] to orthonormalize first.

use std::collections::BTreeMap;

use crate::error::{CurvError, Result};
use crate::matrix::{commutator, DenseMatrix};
use crate::scalar::Scalar;
use crate::tangent::{
    gram_residual, orthonormalize_pair, GrassmannTangent, Manifold, MetricKind, OrthonormalPair,
    SkewTangent, StiefelTangent, Tangent,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport<T> {
    /// Sectional curvature of the plane.
    pub value: T,
    /// Named summands; they add up to `value`.
    pub terms: BTreeMap<&'static str, T>,
    /// Equivalent trace expression, where one is available (Grassmann).
    pub trace_form: Option<T>,
    pub metric: MetricKind,
    pub dims: (usize, usize),
}

impl<T: Scalar> CurvatureReport<T> {
    fn from_terms(metric: MetricKind, dims: (usize, usize), terms: &[(&'static str, T)]) -> Self {
        let value = terms.iter().fold(T::zero(), |acc, &(_, t)| acc + t);
        Self {
            value,
            terms: terms.iter().copied().collect(),
            trace_form: None,
            metric,
            dims,
        }
    }

    pub fn term(&self, name: &str) -> Option<T> {
        self.terms.get(name).copied()
    }
}

fn require_orthonormal<T: Scalar>(
    metric: MetricKind,
    x: &Tangent<T>,
    y: &Tangent<T>,
) -> Result<()> {
    if x.dims() != y.dims() {
        return Err(CurvError::dim(format!(
            "tangent dimensions differ: {:?} vs {:?}",
            x.dims(),
            y.dims()
        )));
    }
    let r = gram_residual(metric, x, y)?;
    if r > T::derived_tol() {
        return Err(CurvError::Normalization(format!(
            "pair is not orthonormal in the {metric} metric (Gram residual {r})"
        )));
    }
    Ok(())
}

fn sq<T: Scalar>(m: &DenseMatrix<T>) -> T {
    m.frobenius_norm_sq()
}

/// `ab^T - ba^T`, computed as `m - m^T` with `m = ab^T`.
fn anti_outer<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> DenseMatrix<T> {
    let m = a * &b.t();
    &m - &m.t()
}

/// `a^T b - b^T a`.
fn anti_inner<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> DenseMatrix<T> {
    let m = &a.t() * b;
    &m - &m.t()
}

/// `SO(n)` with the bi-invariant metric `1/2 tr(X^T Y)`: `K = 1/8 ||[X, Y]||_F^2`.
///
/// An orthonormal pair has `||X||_F = ||Y||_F = sqrt(2)`; rescaled to
/// Frobenius-unit vectors this is `1/2 ||[X', Y']||_F^2`.
pub fn k_so<T: Scalar>(x: &SkewTangent<T>, y: &SkewTangent<T>) -> Result<CurvatureReport<T>> {
    let n = x.n();
    Manifold::So.check_dims(n, n)?;
    let (tx, ty) = (Tangent::Skew(x.clone()), Tangent::Skew(y.clone()));
    require_orthonormal(MetricKind::SoCanonical, &tx, &ty)?;
    let c = commutator(x.matrix(), y.matrix())?;
    Ok(CurvatureReport::from_terms(
        MetricKind::SoCanonical,
        (n, n),
        &[("eighth_bracket", T::lit(0.125) * sq(&c))],
    ))
}

/// Grassmann curvature
/// `K = 1/2 ||B1^T B2 - B2^T B1||^2 + 1/2 ||B1 B2^T - B2 B1^T||^2`.
///
/// `trace_form` carries
/// `tr(B1^T B2 B2^T B1) + tr(B1 B2^T B2 B1^T) - 2 tr(B1^T B2 B1^T B2)`.
pub fn k_grassmann<T: Scalar>(
    x: &GrassmannTangent<T>,
    y: &GrassmannTangent<T>,
) -> Result<CurvatureReport<T>> {
    let (tx, ty) = (Tangent::Grassmann(x.clone()), Tangent::Grassmann(y.clone()));
    require_orthonormal(MetricKind::Grassmann, &tx, &ty)?;
    let (b1, b2) = (x.b(), y.b());
    let half = T::lit(0.5);
    let mut report = CurvatureReport::from_terms(
        MetricKind::Grassmann,
        (x.n(), x.p()),
        &[
            ("half_BtB", half * sq(&anti_inner(b1, b2))),
            ("half_BBt", half * sq(&anti_outer(b1, b2))),
        ],
    );
    let b1t_b2 = &b1.t() * b2;
    let b1_b2t = b1 * &b2.t();
    let trace_form = sq(&b1t_b2) + sq(&b1_b2t) - T::lit(2.0) * (&b1t_b2 * &b1t_b2).trace();
    report.trace_form = Some(trace_form);
    Ok(report)
}

/// Stiefel curvature under the canonical metric:
/// `K = 1/2 ||B2 B1^T - B1 B2^T||^2 + 1/4 ||B1 A2 - B2 A1||^2
///    + 1/8 ||[A1, A2] - (B1^T B2 - B2^T B1)||^2`.
pub fn k_stiefel_canonical<T: Scalar>(
    x: &StiefelTangent<T>,
    y: &StiefelTangent<T>,
) -> Result<CurvatureReport<T>> {
    let (tx, ty) = (Tangent::Stiefel(x.clone()), Tangent::Stiefel(y.clone()));
    require_orthonormal(MetricKind::StiefelCanonical, &tx, &ty)?;
    let (a1, b1, a2, b2) = (x.a(), x.b(), y.a(), y.b());
    let bracket = &commutator(a1, a2)? - &anti_inner(b1, b2);
    let ba = &(b1 * a2) - &(b2 * a1);
    Ok(CurvatureReport::from_terms(
        MetricKind::StiefelCanonical,
        (x.n(), x.p()),
        &[
            ("half_BBt", T::lit(0.5) * sq(&anti_outer(b2, b1))),
            ("quarter_BA", T::lit(0.25) * sq(&ba)),
            ("eighth_bracket", T::lit(0.125) * sq(&bracket)),
        ],
    ))
}

/// Stiefel curvature under the Euclidean metric:
/// `K = ||B1 A2 - B2 A1||^2 + 1/2 ||B1 B2^T - B2 B1^T||^2
///    - 1/2 ||B1^T B2 - B2^T B1||^2 + 1/4 ||[A1, A2] - (B2^T B1 - B1^T B2)||^2`.
pub fn k_stiefel_euclidean<T: Scalar>(
    x: &StiefelTangent<T>,
    y: &StiefelTangent<T>,
) -> Result<CurvatureReport<T>> {
    let (tx, ty) = (Tangent::Stiefel(x.clone()), Tangent::Stiefel(y.clone()));
    require_orthonormal(MetricKind::StiefelEuclidean, &tx, &ty)?;
    let (a1, b1, a2, b2) = (x.a(), x.b(), y.a(), y.b());
    let btb = anti_inner(b1, b2);
    // B2^T B1 - B1^T B2 = -(B1^T B2 - B2^T B1)
    let bracket = &commutator(a1, a2)? + &btb;
    let ba = &(b1 * a2) - &(b2 * a1);
    Ok(CurvatureReport::from_terms(
        MetricKind::StiefelEuclidean,
        (x.n(), x.p()),
        &[
            ("BA", sq(&ba)),
            ("half_BBt", T::lit(0.5) * sq(&anti_outer(b1, b2))),
            ("neg_half_BtB", -T::lit(0.5) * sq(&btb)),
            ("quarter_bracket", T::lit(0.25) * sq(&bracket)),
        ],
    ))
}

/// Curvature of a certified orthonormal pair, dispatched on its metric.
pub fn pair_curvature<T: Scalar>(pair: &OrthonormalPair<T>) -> Result<CurvatureReport<T>> {
    match (pair.metric(), pair.first(), pair.second()) {
        (MetricKind::SoCanonical, Tangent::Skew(x), Tangent::Skew(y)) => k_so(x, y),
        (MetricKind::StiefelCanonical, Tangent::Stiefel(x), Tangent::Stiefel(y)) => {
            k_stiefel_canonical(x, y)
        }
        (MetricKind::StiefelEuclidean, Tangent::Stiefel(x), Tangent::Stiefel(y)) => {
            k_stiefel_euclidean(x, y)
        }
        (MetricKind::Grassmann, Tangent::Grassmann(x), Tangent::Grassmann(y)) => k_grassmann(x, y),
        (m, x, y) => Err(CurvError::usage(format!(
            "metric {m} does not act on ({}, {}) tangents",
            x.kind_name(),
            y.kind_name()
        ))),
    }
}

/// Sectional curvature of the plane spanned by `x` and `y`, which need not
/// be orthonormal. The result depends only on the plane.
pub fn sectional_curvature<T: Scalar>(
    manifold: Manifold,
    metric: MetricKind,
    x: &Tangent<T>,
    y: &Tangent<T>,
) -> Result<CurvatureReport<T>> {
    if metric.manifold() != manifold {
        return Err(CurvError::usage(format!(
            "metric {metric} does not belong to manifold {manifold}"
        )));
    }
    let (n, p) = x.dims();
    manifold.check_dims(n, p)?;
    let pair = orthonormalize_pair(metric, x, y)?;
    pair_curvature(&pair)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = DenseMatrix<f64>;
    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn gr(rows: &[[f64; 2]]) -> GrassmannTangent<f64> {
        GrassmannTangent::new(M::from_rows(rows).unwrap())
    }

    #[test]
    fn grassmann_diagonal_pair_is_flat() {
        let k = k_grassmann(
            &gr(&[[1.0, 0.0], [0.0, 0.0]]),
            &gr(&[[0.0, 0.0], [0.0, 1.0]]),
        )
        .unwrap();
        assert_eq!(k.value, 0.0);
    }

    #[test]
    fn grassmann_maximizer_reaches_two() {
        let k = k_grassmann(&gr(&[[0.0, H], [-H, 0.0]]), &gr(&[[H, 0.0], [0.0, H]])).unwrap();
        assert!((k.value - 2.0).abs() < 1e-15);
        assert!((k.trace_form.unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn stiefel_canonical_maximizer_and_terms() {
        let x = StiefelTangent::from_b(M::from_rows(&[[0.0, H], [-H, 0.0]]).unwrap());
        let y = StiefelTangent::from_b(M::from_rows(&[[H, 0.0], [0.0, H]]).unwrap());
        let k = k_stiefel_canonical(&x, &y).unwrap();
        assert!((k.value - 1.25).abs() < 1e-15);
        assert!((k.term("half_BBt").unwrap() - 1.0).abs() < 1e-15);
        assert!((k.term("eighth_bracket").unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(k.term("quarter_BA"), Some(0.0));
    }

    #[test]
    fn euclidean_extremal_pairs() {
        let e = |i: usize, j: usize| {
            let mut m = M::zeros(2, 2);
            m.set(i, j, 1.0);
            StiefelTangent::from_b(m)
        };
        let max = k_stiefel_euclidean(&e(1, 0), &e(0, 0)).unwrap();
        assert!((max.value - 1.0).abs() < 1e-15);
        let min = k_stiefel_euclidean(&e(0, 1), &e(0, 0)).unwrap();
        assert!((min.value + 0.5).abs() < 1e-15);
    }

    #[test]
    fn so3_pairs_have_quarter_curvature() {
        let x = SkewTangent::new(crate::matrix::skew3([1.0, 0.0, 0.0])).unwrap();
        let y = SkewTangent::new(crate::matrix::skew3([0.0, 0.6, 0.8])).unwrap();
        let k: CurvatureReport<f64> = k_so(&x, &y).unwrap();
        assert!((k.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn non_orthonormal_input_is_rejected() {
        let x = gr(&[[2.0, 0.0]]);
        let y = gr(&[[0.0, 1.0]]);
        assert!(matches!(
            k_grassmann(&x, &y),
            Err(CurvError::Normalization(_))
        ));
    }

    #[test]
    fn so2_is_rejected() {
        let x = SkewTangent::new(M::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap()).unwrap();
        assert!(matches!(k_so(&x, &x), Err(CurvError::Usage(_))));
    }

    #[test]
    fn dispatch_rejects_a_block_on_grassmann() {
        let a = M::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let x: Tangent<f64> = StiefelTangent::new(a, M::zeros(2, 2)).unwrap().into();
        let y: Tangent<f64> = StiefelTangent::from_b(M::identity(2)).into();
        assert!(matches!(
            sectional_curvature(Manifold::Grassmann, MetricKind::Grassmann, &x, &y),
            Err(CurvError::Usage(_))
        ));
    }

    #[test]
    fn dispatch_is_basis_invariant() {
        let x: Tangent<f64> = gr(&[[1.0, 0.3], [0.2, -0.4]]).into();
        let y: Tangent<f64> = gr(&[[0.1, 1.0], [0.5, 0.7]]).into();
        let mixed = y.lin_comb(2.0, &x, 3.0).unwrap();
        let k1 = sectional_curvature(Manifold::Grassmann, MetricKind::Grassmann, &x, &y).unwrap();
        let k2 =
            sectional_curvature(Manifold::Grassmann, MetricKind::Grassmann, &x, &mixed).unwrap();
        assert!((k1.value - k2.value).abs() < 1e-12);
    }
}
