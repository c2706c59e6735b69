//! Tangent sections attaining the curvature bounds, injectivity-radius lower
//! bounds, and a closed geodesic on `St(4, 2)`.
//!
//! Extremal blocks are placed in the upper-left corner and zero padded to
//! the requested `(n, p)`. Orthogonal transformations of a maximizer give
//! further maximizers; that orbit is not enumerated here.

use std::fmt;
use std::str::FromStr;

use crate::curvature::pair_curvature;
use crate::error::{CurvError, Result};
use crate::expm::expm;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;
use crate::tangent::{
    GrassmannTangent, MetricKind, OrthonormalPair, SkewTangent, StiefelTangent, Tangent,
};

/// Tolerance for [`verify_attainment`].
pub const ATTAINMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremizerKind {
    /// Grassmann maximum, `K = 2`.
    GrassmannMax,
    /// Canonical Stiefel maximum, `K = 5/4`.
    StiefelCanonicalMax,
    /// Canonical Stiefel maximum among rank-one `B` blocks, `K = 1`.
    StiefelRank1Max,
    /// Euclidean Stiefel maximum, `K = 1`.
    StiefelEuclidMax,
    /// Euclidean Stiefel minimum, `K = -1/2`.
    StiefelEuclidMin,
    /// Maximal commutator in `so(4)`, `K = 1/2`.
    So4CommutatorMax,
    /// Euclidean maximum on `St(3, 2)`, `K = 1/2`.
    St32EuclidMax,
}

impl ExtremizerKind {
    pub const ALL: [ExtremizerKind; 7] = [
        ExtremizerKind::GrassmannMax,
        ExtremizerKind::StiefelCanonicalMax,
        ExtremizerKind::StiefelRank1Max,
        ExtremizerKind::StiefelEuclidMax,
        ExtremizerKind::StiefelEuclidMin,
        ExtremizerKind::So4CommutatorMax,
        ExtremizerKind::St32EuclidMax,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ExtremizerKind::GrassmannMax => "grassmann_max",
            ExtremizerKind::StiefelCanonicalMax => "stiefel_canonical_max",
            ExtremizerKind::StiefelRank1Max => "stiefel_rank1_max",
            ExtremizerKind::StiefelEuclidMax => "stiefel_euclid_max",
            ExtremizerKind::StiefelEuclidMin => "stiefel_euclid_min",
            ExtremizerKind::So4CommutatorMax => "so4_commutator_max",
            ExtremizerKind::St32EuclidMax => "st32_euclid_max",
        }
    }

    pub fn metric(self) -> MetricKind {
        match self {
            ExtremizerKind::GrassmannMax => MetricKind::Grassmann,
            ExtremizerKind::StiefelCanonicalMax | ExtremizerKind::StiefelRank1Max => {
                MetricKind::StiefelCanonical
            }
            ExtremizerKind::StiefelEuclidMax
            | ExtremizerKind::StiefelEuclidMin
            | ExtremizerKind::St32EuclidMax => MetricKind::StiefelEuclidean,
            ExtremizerKind::So4CommutatorMax => MetricKind::SoCanonical,
        }
    }

    /// Curvature of the section.
    pub fn expected(self) -> f64 {
        match self {
            ExtremizerKind::GrassmannMax => 2.0,
            ExtremizerKind::StiefelCanonicalMax => 1.25,
            ExtremizerKind::StiefelRank1Max | ExtremizerKind::StiefelEuclidMax => 1.0,
            ExtremizerKind::StiefelEuclidMin => -0.5,
            ExtremizerKind::So4CommutatorMax | ExtremizerKind::St32EuclidMax => 0.5,
        }
    }

    /// Smallest `(n, p)` that embeds the section (`p = n` for `SO(n)`).
    pub fn min_dims(self) -> (usize, usize) {
        match self {
            ExtremizerKind::GrassmannMax | ExtremizerKind::StiefelCanonicalMax => (4, 2),
            ExtremizerKind::StiefelRank1Max | ExtremizerKind::StiefelEuclidMax => (3, 1),
            ExtremizerKind::StiefelEuclidMin | ExtremizerKind::St32EuclidMax => (3, 2),
            ExtremizerKind::So4CommutatorMax => (4, 4),
        }
    }

    fn check_dims(self, n: usize, p: usize) -> Result<()> {
        let need = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(CurvError::usage(format!(
                    "{}: n = {n}, p = {p}; {msg}",
                    self.tag()
                )))
            }
        };
        match self {
            ExtremizerKind::So4CommutatorMax => {
                need(n >= 4, "needs n >= 4 (so(3) has constant curvature 1/4)")
            }
            _ if p == 0 || p > n => need(false, "needs 1 <= p <= n"),
            ExtremizerKind::GrassmannMax | ExtremizerKind::StiefelCanonicalMax => need(
                p >= 2 && n - p >= 2,
                "the maximizing section needs p >= 2 and n - p >= 2",
            ),
            ExtremizerKind::StiefelRank1Max | ExtremizerKind::StiefelEuclidMax => {
                need(n - p >= 2, "the rank-one section needs n - p >= 2")
            }
            ExtremizerKind::StiefelEuclidMin | ExtremizerKind::St32EuclidMax => need(
                p >= 2 && n - p >= 1,
                "the section needs p >= 2 and n - p >= 1",
            ),
        }
    }
}

impl fmt::Display for ExtremizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ExtremizerKind {
    type Err = CurvError;

    fn from_str(s: &str) -> Result<Self> {
        ExtremizerKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| CurvError::usage(format!("unknown extremizer kind '{s}'")))
    }
}

fn padded<T: Scalar, const C: usize>(
    rows: &[[f64; C]],
    r: usize,
    c: usize,
    scale: f64,
) -> DenseMatrix<T> {
    let small = DenseMatrix::<f64>::from_rows(rows)
        .expect("literal block")
        .scale(scale);
    small
        .cast::<T>()
        .padded(r, c)
        .expect("target is large enough")
}

/// The extremal section of `kind`, padded to `(n, p)` and certified
/// orthonormal in the matching metric. `p` is ignored for `SO(n)`.
pub fn build_extremizer<T: Scalar>(
    kind: ExtremizerKind,
    n: usize,
    p: usize,
) -> Result<OrthonormalPair<T>> {
    kind.check_dims(n, p)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let m = n.saturating_sub(p);
    let (x, y): (Tangent<T>, Tangent<T>) = match kind {
        ExtremizerKind::GrassmannMax | ExtremizerKind::StiefelCanonicalMax => {
            let b1 = padded(&[[0.0, 1.0], [-1.0, 0.0]], m, p, h);
            let b2 = padded(&[[1.0, 0.0], [0.0, 1.0]], m, p, h);
            if kind == ExtremizerKind::GrassmannMax {
                (
                    GrassmannTangent::new(b1).into(),
                    GrassmannTangent::new(b2).into(),
                )
            } else {
                (
                    StiefelTangent::from_b(b1).into(),
                    StiefelTangent::from_b(b2).into(),
                )
            }
        }
        ExtremizerKind::StiefelRank1Max | ExtremizerKind::StiefelEuclidMax => (
            StiefelTangent::from_b(padded(&[[0.0], [1.0]], m, p, 1.0)).into(),
            StiefelTangent::from_b(padded(&[[1.0], [0.0]], m, p, 1.0)).into(),
        ),
        ExtremizerKind::StiefelEuclidMin => (
            StiefelTangent::from_b(padded(&[[0.0, 1.0]], m, p, 1.0)).into(),
            StiefelTangent::from_b(padded(&[[1.0, 0.0]], m, p, 1.0)).into(),
        ),
        ExtremizerKind::So4CommutatorMax => {
            let a1 = padded(
                &[
                    [0.0, 1.0, 0.0, 0.0],
                    [-1.0, 0.0, 0.0, 0.0],
                    [0.0, 0.0, 0.0, 1.0],
                    [0.0, 0.0, -1.0, 0.0],
                ],
                n,
                n,
                h,
            );
            let a2 = padded(
                &[
                    [0.0, 0.0, 0.0, 1.0],
                    [0.0, 0.0, 1.0, 0.0],
                    [0.0, -1.0, 0.0, 0.0],
                    [-1.0, 0.0, 0.0, 0.0],
                ],
                n,
                n,
                h,
            );
            (SkewTangent::new(a1)?.into(), SkewTangent::new(a2)?.into())
        }
        ExtremizerKind::St32EuclidMax => {
            let b1 = padded(&[[-1.0, 0.0]], m, p, 1.0);
            let a2 = padded(&[[0.0, -1.0], [1.0, 0.0]], p, p, h);
            (
                StiefelTangent::from_b(b1).into(),
                StiefelTangent::new(a2, DenseMatrix::zeros(m, p))?.into(),
            )
        }
    };
    OrthonormalPair::certify(kind.metric(), x, y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attainment<T> {
    pub kind: ExtremizerKind,
    pub expected: T,
    pub computed: T,
    /// `|expected - computed| <= 1e-12`.
    pub pass: bool,
}

/// Evaluates the curvature of the extremal section and compares it with the
/// bound it attains.
pub fn verify_attainment<T: Scalar>(
    kind: ExtremizerKind,
    n: usize,
    p: usize,
) -> Result<Attainment<T>> {
    let pair = build_extremizer::<T>(kind, n, p)?;
    let computed = pair_curvature(&pair)?.value;
    let expected = T::lit(kind.expected());
    let tol = T::lit(ATTAINMENT_TOL).max(T::epsilon() * T::lit(16.0));
    Ok(Attainment {
        kind,
        expected,
        computed,
        pass: (expected - computed).abs() <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InjectivityBound<T> {
    pub value: T,
    /// `pi / sqrt(K_max)`.
    pub curvature_branch: T,
    /// Half the closed-geodesic length, when one was supplied.
    pub geodesic_branch: Option<T>,
}

impl<T: Scalar> InjectivityBound<T> {
    pub fn geodesic_branch_evaluated(&self) -> bool {
        self.geodesic_branch.is_some()
    }
}

/// Klingenberg lower bound `min(pi / sqrt(C), l / 2)` on the injectivity
/// radius of `St(n, p)`, with `C` the curvature maximum of the metric
/// (`5/4` canonical, `1` Euclidean) and `l` the length of a shortest closed
/// geodesic. Without `l` only the curvature branch is returned.
pub fn injectivity_lower_bound<T: Scalar>(
    metric: MetricKind,
    shortest_closed_geodesic_length: Option<T>,
) -> Result<InjectivityBound<T>> {
    let c = match metric {
        MetricKind::StiefelCanonical => T::lit(1.25),
        MetricKind::StiefelEuclidean => T::one(),
        other => {
            return Err(CurvError::usage(format!(
                "injectivity bound is provided for the stiefel metrics, not {other}"
            )))
        }
    };
    let curvature_branch = T::PI() / c.sqrt();
    let geodesic_branch = match shortest_closed_geodesic_length {
        Some(l) if l <= T::zero() || !l.is_finite() => {
            return Err(CurvError::Domain(format!(
                "closed geodesic length must be positive and finite, got {l}"
            )))
        }
        Some(l) => Some(l * T::lit(0.5)),
        None => None,
    };
    Ok(InjectivityBound {
        value: geodesic_branch.map_or(curvature_branch, |g| g.min(curvature_branch)),
        curvature_branch,
        geodesic_branch,
    })
}

/// `c(t) = expm(t [[2A, -B^T], [B, 0]]) [expm(-t A); 0]` on `St(4, 2)` with
/// `A = 0`, `B = diag(2 pi, 0)`; closed with period 1 and length `2 pi`.
pub fn closed_geodesic_st42<T: Scalar>(t: T) -> DenseMatrix<T> {
    let a = DenseMatrix::<T>::zeros(2, 2);
    let b = DenseMatrix::from_diag(2, 2, &[T::TAU(), T::zero()]).expect("finite");
    let gen = StiefelTangent::new(a.scale(T::lit(2.0)), b)
        .expect("A = 0 is skew")
        .embed_skew();
    let left = expm(&gen.scale(t)).expect("square");
    let right = expm(&a.scale(-t))
        .expect("square")
        .padded(4, 2)
        .expect("2x2 fits in 4x2");
    &left * &right
}

/// Euclidean arc length of [`closed_geodesic_st42`] over `[0, 1]`: central
/// differences for the speed on `samples` uniform intervals, composite
/// trapezoid rule for the integral.
pub fn geodesic_length<T: Scalar>(samples: usize) -> Result<T> {
    if samples < 100 {
        return Err(CurvError::usage(format!(
            "samples = {samples}; at least 100 required"
        )));
    }
    let n = T::lit(samples as f64);
    let h = T::one() / n;
    let point = |i: isize| closed_geodesic_st42(T::lit(i as f64) / n);
    let speed = |i: isize| (&point(i + 1) - &point(i - 1)).frobenius_norm() / (h + h);
    let mut sum = T::zero();
    for i in 0..=samples as isize {
        let w = if i == 0 || i == samples as isize {
            T::lit(0.5)
        } else {
            T::one()
        };
        sum = sum + w * speed(i);
    }
    Ok(sum * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = DenseMatrix<f64>;

    #[test]
    fn every_kind_attains_its_value_at_minimal_dims() {
        for kind in ExtremizerKind::ALL {
            let (n, p) = kind.min_dims();
            let a = verify_attainment::<f64>(kind, n, p).unwrap();
            assert!(a.pass, "{kind}: {} vs {}", a.computed, a.expected);
        }
    }

    #[test]
    fn padding_keeps_attainment() {
        for kind in ExtremizerKind::ALL {
            let a = verify_attainment::<f64>(kind, 20, 10).unwrap();
            assert!(a.pass, "{kind}");
        }
    }

    #[test]
    fn canonical_maximizer_blocks() {
        let pair = build_extremizer::<f64>(ExtremizerKind::StiefelCanonicalMax, 4, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match (pair.first(), pair.second()) {
            (Tangent::Stiefel(x), Tangent::Stiefel(y)) => {
                assert_eq!(x.b(), &M::from_rows(&[[0.0, h], [-h, 0.0]]).unwrap());
                assert_eq!(y.b(), &M::from_rows(&[[h, 0.0], [0.0, h]]).unwrap());
                assert_eq!(x.a().max_abs(), 0.0);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn euclid_min_blocks() {
        let pair = build_extremizer::<f64>(ExtremizerKind::StiefelEuclidMin, 4, 2).unwrap();
        match (pair.first(), pair.second()) {
            (Tangent::Stiefel(x), Tangent::Stiefel(y)) => {
                assert_eq!(x.b(), &M::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap());
                assert_eq!(y.b(), &M::from_rows(&[[1.0, 0.0], [0.0, 0.0]]).unwrap());
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn too_small_dims_are_usage_errors() {
        for (kind, n, p) in [
            (ExtremizerKind::GrassmannMax, 3, 2),
            (ExtremizerKind::StiefelCanonicalMax, 4, 1),
            (ExtremizerKind::StiefelRank1Max, 3, 2),
            (ExtremizerKind::StiefelEuclidMin, 2, 2),
            (ExtremizerKind::So4CommutatorMax, 3, 3),
            (ExtremizerKind::St32EuclidMax, 3, 1),
        ] {
            assert!(matches!(
                build_extremizer::<f64>(kind, n, p),
                Err(CurvError::Usage(_))
            ));
        }
    }

    #[test]
    fn injectivity_examples() {
        let tau = std::f64::consts::TAU;
        let pi = std::f64::consts::PI;
        let c = injectivity_lower_bound(MetricKind::StiefelCanonical, Some(tau)).unwrap();
        assert!((c.value - (0.8f64).sqrt() * pi).abs() < 1e-12);
        let e = injectivity_lower_bound(MetricKind::StiefelEuclidean, Some(tau)).unwrap();
        assert!((e.value - pi).abs() < 1e-15);
        let e = injectivity_lower_bound(MetricKind::StiefelEuclidean, Some(pi)).unwrap();
        assert!((e.value - pi / 2.0).abs() < 1e-15);
        let none = injectivity_lower_bound::<f64>(MetricKind::StiefelEuclidean, None).unwrap();
        assert!(!none.geodesic_branch_evaluated());
        assert!(matches!(
            injectivity_lower_bound(MetricKind::StiefelEuclidean, Some(0.0)),
            Err(CurvError::Domain(_))
        ));
        assert!(injectivity_lower_bound::<f64>(MetricKind::Grassmann, None).is_err());
    }

    #[test]
    fn geodesic_endpoints_and_midpoint() {
        let start = M::identity(4).block(0, 0, 4, 2);
        assert_eq!(closed_geodesic_st42(0.0), start);
        assert!((&closed_geodesic_st42(1.0) - &start).frobenius_norm() < 1e-10);
        let mid: M = closed_geodesic_st42(0.5);
        let col = mid.column(0);
        assert!((col[0] + 1.0).abs() < 1e-12 && col[1..].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn geodesic_length_converges() {
        let tau = std::f64::consts::TAU;
        let e100 = (geodesic_length::<f64>(100).unwrap() - tau).abs();
        let e200 = (geodesic_length::<f64>(200).unwrap() - tau).abs();
        assert!(e100 < 1e-2);
        assert!(e200 * 2.0 <= e100);
        assert!(geodesic_length::<f64>(99).is_err());
    }
}
