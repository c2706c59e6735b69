//! Tangent vectors at the identity coset of `SO(n)`, `St(n, p)` and
//! `Gr(n, p)`, their metrics, horizontal projections and orthonormal pairs.
//!
//! Every tangent is stored by its free blocks. With respect to the block
//! split of an `n x n` skew matrix
//!
//! ```text
//!     [ A  -B^T ]      A in Skew(p), B in R^{(n-p) x p}, C in Skew(n-p)
//!     [ B   C   ]
//! ```
//!
//! a Stiefel tangent keeps `(A, B)` and a Grassmann tangent keeps `B`.
//! The canonical metrics are `1/2 tr(X^T Y)` on the skew embedding; the
//! Euclidean Stiefel metric is `tr(X^T Y)` on the stacked `n x p` matrix
//! `(A; B)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{CurvError, Result};
use crate::matrix::{frobenius_inner, skew_tolerance, DenseMatrix};
use crate::random::{gaussian_matrix, gaussian_skew, rng_from_seed};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Manifold {
    So,
    Stiefel,
    Grassmann,
}

impl Manifold {
    pub fn name(self) -> &'static str {
        match self {
            Manifold::So => "so",
            Manifold::Stiefel => "stiefel",
            Manifold::Grassmann => "grassmann",
        }
    }

    /// Real dimension of the manifold (`n` alone is used for `SO(n)`).
    pub fn dimension(self, n: usize, p: usize) -> usize {
        match self {
            Manifold::So => n * n.saturating_sub(1) / 2,
            Manifold::Stiefel => p * p.saturating_sub(1) / 2 + n.saturating_sub(p) * p,
            Manifold::Grassmann => n.saturating_sub(p) * p,
        }
    }

    /// Rejects dimensions that do not describe a manifold with a tangent 2-plane.
    pub fn check_dims(self, n: usize, p: usize) -> Result<()> {
        if self != Manifold::So && (p == 0 || p > n) {
            return Err(CurvError::usage(format!(
                "{}({n},{p}) requires 1 <= p <= n",
                self.name()
            )));
        }
        let d = self.dimension(n, p);
        if d < 2 {
            return Err(CurvError::usage(format!(
                "{}({n},{p}) has dimension {d}; sectional curvature needs a 2-plane",
                self.name()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Manifold {
    type Err = CurvError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "so" => Ok(Manifold::So),
            "stiefel" => Ok(Manifold::Stiefel),
            "grassmann" => Ok(Manifold::Grassmann),
            _ => Err(CurvError::usage(format!("unknown manifold '{s}'"))),
        }
    }
}

/// Riemannian metric selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    SoCanonical,
    StiefelCanonical,
    StiefelEuclidean,
    Grassmann,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::SoCanonical,
        MetricKind::StiefelCanonical,
        MetricKind::StiefelEuclidean,
        MetricKind::Grassmann,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::SoCanonical => "so_canonical",
            MetricKind::StiefelCanonical => "stiefel_canonical",
            MetricKind::StiefelEuclidean => "stiefel_euclidean",
            MetricKind::Grassmann => "grassmann",
        }
    }

    pub fn manifold(self) -> Manifold {
        match self {
            MetricKind::SoCanonical => Manifold::So,
            MetricKind::StiefelCanonical | MetricKind::StiefelEuclidean => Manifold::Stiefel,
            MetricKind::Grassmann => Manifold::Grassmann,
        }
    }

    /// Metric for a manifold given the `canonical`/`euclidean` family name.
    pub fn for_manifold(manifold: Manifold, euclidean: bool) -> Result<Self> {
        match (manifold, euclidean) {
            (Manifold::So, false) => Ok(MetricKind::SoCanonical),
            (Manifold::Stiefel, false) => Ok(MetricKind::StiefelCanonical),
            (Manifold::Stiefel, true) => Ok(MetricKind::StiefelEuclidean),
            (Manifold::Grassmann, false) => Ok(MetricKind::Grassmann),
            (m, true) => Err(CurvError::usage(format!(
                "the euclidean metric is only defined here for stiefel, not {m}"
            ))),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = CurvError;

    fn from_str(s: &str) -> Result<Self> {
        MetricKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CurvError::usage(format!("unknown metric '{s}'")))
    }
}

/// Element of `so(n) = Skew(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewTangent<T> {
    x: DenseMatrix<T>,
}

impl<T: Scalar> SkewTangent<T> {
    pub fn new(x: DenseMatrix<T>) -> Result<Self> {
        if !x.is_square() {
            return Err(CurvError::dim(format!(
                "skew tangent must be square, got {}x{}",
                x.rows(),
                x.cols()
            )));
        }
        if x.skew_residual() > skew_tolerance(&x) {
            return Err(CurvError::Structure(format!(
                "matrix is not skew-symmetric (residual {})",
                x.skew_residual()
            )));
        }
        Ok(Self { x })
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.x
    }
}

/// Horizontal Stiefel tangent `(A, B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StiefelTangent<T> {
    a: DenseMatrix<T>,
    b: DenseMatrix<T>,
}

impl<T: Scalar> StiefelTangent<T> {
    /// `a` is `p x p` skew, `b` is `(n - p) x p`.
    pub fn new(a: DenseMatrix<T>, b: DenseMatrix<T>) -> Result<Self> {
        if !a.is_square() || b.cols() != a.cols() {
            return Err(CurvError::dim(format!(
                "stiefel blocks need A p x p and B (n-p) x p, got {}x{} and {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        if a.skew_residual() > skew_tolerance(&a) {
            return Err(CurvError::Structure("A block is not skew-symmetric".into()));
        }
        Ok(Self { a, b })
    }

    /// Tangent with vanishing `A` block.
    pub fn from_b(b: DenseMatrix<T>) -> Self {
        let p = b.cols();
        Self {
            a: DenseMatrix::zeros(p, p),
            b,
        }
    }

    pub fn n(&self) -> usize {
        self.b.rows() + self.a.rows()
    }

    pub fn p(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &DenseMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &DenseMatrix<T> {
        &self.b
    }

    /// `[[A, -B^T], [B, 0]]`.
    pub fn embed_skew(&self) -> DenseMatrix<T> {
        let (n, p) = (self.n(), self.p());
        let mut x = DenseMatrix::zeros(n, n);
        x.set_block(0, 0, &self.a);
        x.set_block(p, 0, &self.b);
        x.set_block(0, p, &self.b.t().scale(-T::one()));
        x
    }

    /// `(A; B)` as an `n x p` matrix.
    pub fn embed_stacked(&self) -> DenseMatrix<T> {
        self.a
            .vstack(&self.b)
            .expect("blocks share the column count")
    }
}

/// Horizontal Grassmann tangent `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannTangent<T> {
    b: DenseMatrix<T>,
}

impl<T: Scalar> GrassmannTangent<T> {
    /// `b` is `(n - p) x p`.
    pub fn new(b: DenseMatrix<T>) -> Self {
        Self { b }
    }

    pub fn n(&self) -> usize {
        self.b.rows() + self.b.cols()
    }

    pub fn p(&self) -> usize {
        self.b.cols()
    }

    pub fn b(&self) -> &DenseMatrix<T> {
        &self.b
    }

    /// `[[0, -B^T], [B, 0]]`.
    pub fn embed_skew(&self) -> DenseMatrix<T> {
        StiefelTangent::from_b(self.b.clone()).embed_skew()
    }
}

/// Any of the three tangent representations.
#[derive(Debug, Clone, PartialEq)]
pub enum Tangent<T> {
    Skew(SkewTangent<T>),
    Stiefel(StiefelTangent<T>),
    Grassmann(GrassmannTangent<T>),
}

impl<T: Scalar> From<SkewTangent<T>> for Tangent<T> {
    fn from(x: SkewTangent<T>) -> Self {
        Tangent::Skew(x)
    }
}

impl<T: Scalar> From<StiefelTangent<T>> for Tangent<T> {
    fn from(x: StiefelTangent<T>) -> Self {
        Tangent::Stiefel(x)
    }
}

impl<T: Scalar> From<GrassmannTangent<T>> for Tangent<T> {
    fn from(x: GrassmannTangent<T>) -> Self {
        Tangent::Grassmann(x)
    }
}

impl<T: Scalar> Tangent<T> {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Tangent::Skew(_) => "skew",
            Tangent::Stiefel(_) => "stiefel",
            Tangent::Grassmann(_) => "grassmann",
        }
    }

    /// `(n, p)`; skew tangents report `(n, n)`.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Tangent::Skew(s) => (s.n(), s.n()),
            Tangent::Stiefel(s) => (s.n(), s.p()),
            Tangent::Grassmann(g) => (g.n(), g.p()),
        }
    }

    /// Skew-symmetric `n x n` representative.
    pub fn embed_skew(&self) -> DenseMatrix<T> {
        match self {
            Tangent::Skew(s) => s.x.clone(),
            Tangent::Stiefel(s) => s.embed_skew(),
            Tangent::Grassmann(g) => g.embed_skew(),
        }
    }

    pub fn scaled(&self, s: T) -> Self {
        match self {
            Tangent::Skew(x) => Tangent::Skew(SkewTangent { x: x.x.scale(s) }),
            Tangent::Stiefel(x) => Tangent::Stiefel(StiefelTangent {
                a: x.a.scale(s),
                b: x.b.scale(s),
            }),
            Tangent::Grassmann(x) => Tangent::Grassmann(GrassmannTangent { b: x.b.scale(s) }),
        }
    }

    /// `a * self + b * other`.
    pub fn lin_comb(&self, a: T, other: &Self, b: T) -> Result<Self> {
        Ok(match (self, other) {
            (Tangent::Skew(x), Tangent::Skew(y)) => Tangent::Skew(SkewTangent {
                x: x.x.lin_comb(a, &y.x, b)?,
            }),
            (Tangent::Stiefel(x), Tangent::Stiefel(y)) => Tangent::Stiefel(StiefelTangent {
                a: x.a.lin_comb(a, &y.a, b)?,
                b: x.b.lin_comb(a, &y.b, b)?,
            }),
            (Tangent::Grassmann(x), Tangent::Grassmann(y)) => {
                Tangent::Grassmann(GrassmannTangent {
                    b: x.b.lin_comb(a, &y.b, b)?,
                })
            }
            _ => {
                return Err(CurvError::usage(format!(
                    "cannot combine {} and {} tangents",
                    self.kind_name(),
                    other.kind_name()
                )))
            }
        })
    }

    /// Converts into the representation `metric` acts on. Grassmann and
    /// Stiefel tangents interconvert when the `A` block vanishes.
    pub fn coerce_for(&self, metric: MetricKind) -> Result<Self> {
        match (metric.manifold(), self) {
            (Manifold::So, Tangent::Skew(_))
            | (Manifold::Stiefel, Tangent::Stiefel(_))
            | (Manifold::Grassmann, Tangent::Grassmann(_)) => Ok(self.clone()),
            (Manifold::Stiefel, Tangent::Grassmann(g)) => {
                Ok(Tangent::Stiefel(StiefelTangent::from_b(g.b.clone())))
            }
            (Manifold::Grassmann, Tangent::Stiefel(s)) => {
                if s.a.max_abs() > T::zero() {
                    Err(CurvError::usage(
                        "grassmann tangents have no A block; got a nonzero A",
                    ))
                } else {
                    Ok(Tangent::Grassmann(GrassmannTangent::new(s.b.clone())))
                }
            }
            _ => Err(CurvError::usage(format!(
                "{} tangent is incompatible with the {} metric",
                self.kind_name(),
                metric
            ))),
        }
    }
}

/// Inner product of two tangents in the given metric.
pub fn metric_inner<T: Scalar>(metric: MetricKind, x: &Tangent<T>, y: &Tangent<T>) -> Result<T> {
    let half = T::lit(0.5);
    match (metric, x, y) {
        (MetricKind::SoCanonical, Tangent::Skew(x), Tangent::Skew(y)) => {
            Ok(half * frobenius_inner(&x.x, &y.x)?)
        }
        (MetricKind::StiefelCanonical, Tangent::Stiefel(x), Tangent::Stiefel(y)) => {
            Ok(half * frobenius_inner(&x.a, &y.a)? + frobenius_inner(&x.b, &y.b)?)
        }
        (MetricKind::StiefelEuclidean, Tangent::Stiefel(x), Tangent::Stiefel(y)) => {
            Ok(frobenius_inner(&x.a, &y.a)? + frobenius_inner(&x.b, &y.b)?)
        }
        (MetricKind::Grassmann, Tangent::Grassmann(x), Tangent::Grassmann(y)) => {
            frobenius_inner(&x.b, &y.b)
        }
        _ => Err(CurvError::usage(format!(
            "metric {metric} does not act on ({}, {}) tangents",
            x.kind_name(),
            y.kind_name()
        ))),
    }
}

pub fn metric_norm<T: Scalar>(metric: MetricKind, x: &Tangent<T>) -> Result<T> {
    Ok(metric_inner(metric, x, x)?.max(T::zero()).sqrt())
}

/// Projects `x in Skew(n)` onto the horizontal space of `St(n, p)` (drops
/// `C`) or `Gr(n, p)` (drops `A` and `C`).
pub fn project_horizontal<T: Scalar>(
    manifold: Manifold,
    x: &SkewTangent<T>,
    p: usize,
) -> Result<Tangent<T>> {
    let n = x.n();
    if p == 0 || p > n {
        return Err(CurvError::usage(format!("p = {p} out of range 1..={n}")));
    }
    let b = x.x.block(p, 0, n - p, p);
    match manifold {
        Manifold::Stiefel => Ok(Tangent::Stiefel(StiefelTangent {
            a: x.x.block(0, 0, p, p),
            b,
        })),
        Manifold::Grassmann => Ok(Tangent::Grassmann(GrassmannTangent { b })),
        Manifold::So => Err(CurvError::usage(
            "SO(n) has no horizontal space; project onto stiefel or grassmann",
        )),
    }
}

/// `x - embed(project_horizontal(x))`, the vertical component.
pub fn vertical_part<T: Scalar>(
    manifold: Manifold,
    x: &SkewTangent<T>,
    p: usize,
) -> Result<SkewTangent<T>> {
    let h = project_horizontal(manifold, x, p)?.embed_skew();
    Ok(SkewTangent { x: &x.x - &h })
}

/// Two tangents that are orthonormal in `metric`, with their Gram residual.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalPair<T> {
    first: Tangent<T>,
    second: Tangent<T>,
    metric: MetricKind,
    gram_residual: T,
}

/// `max(|<x,x> - 1|, |<y,y> - 1|, |<x,y>|)`.
pub fn gram_residual<T: Scalar>(metric: MetricKind, x: &Tangent<T>, y: &Tangent<T>) -> Result<T> {
    let xx = metric_inner(metric, x, x)?;
    let yy = metric_inner(metric, y, y)?;
    let xy = metric_inner(metric, x, y)?;
    Ok((xx - T::one())
        .abs()
        .max((yy - T::one()).abs())
        .max(xy.abs()))
}

impl<T: Scalar> OrthonormalPair<T> {
    /// Wraps a pair that is already orthonormal; fails with a normalization
    /// error if the Gram residual exceeds the derived tolerance.
    pub fn certify(metric: MetricKind, first: Tangent<T>, second: Tangent<T>) -> Result<Self> {
        let first = first.coerce_for(metric)?;
        let second = second.coerce_for(metric)?;
        if first.dims() != second.dims() {
            return Err(CurvError::dim(format!(
                "tangent dimensions differ: {:?} vs {:?}",
                first.dims(),
                second.dims()
            )));
        }
        let gram_residual = gram_residual(metric, &first, &second)?;
        if gram_residual > T::derived_tol() {
            return Err(CurvError::Normalization(format!(
                "pair is not orthonormal in the {metric} metric (Gram residual {gram_residual})"
            )));
        }
        Ok(Self {
            first,
            second,
            metric,
            gram_residual,
        })
    }

    pub fn first(&self) -> &Tangent<T> {
        &self.first
    }

    pub fn second(&self) -> &Tangent<T> {
        &self.second
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn gram_residual(&self) -> T {
        self.gram_residual
    }

    pub fn dims(&self) -> (usize, usize) {
        self.first.dims()
    }

    pub fn into_parts(self) -> (Tangent<T>, Tangent<T>) {
        (self.first, self.second)
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Fails with [`CurvError::DegenerateSection`] when the component of `y`
/// orthogonal to `x` is at most `derived_tol * ||y||`.
pub fn orthonormalize_pair<T: Scalar>(
    metric: MetricKind,
    x: &Tangent<T>,
    y: &Tangent<T>,
) -> Result<OrthonormalPair<T>> {
    let x = x.coerce_for(metric)?;
    let y = y.coerce_for(metric)?;
    if x.dims() != y.dims() {
        return Err(CurvError::dim(format!(
            "tangent dimensions differ: {:?} vs {:?}",
            x.dims(),
            y.dims()
        )));
    }
    let nx = metric_norm(metric, &x)?;
    if nx == T::zero() {
        return Err(CurvError::DegenerateSection("first vector is zero".into()));
    }
    let ny = metric_norm(metric, &y)?;
    let xh = x.scaled(T::one() / nx);
    let mut r = y.clone();
    for _ in 0..2 {
        let c = metric_inner(metric, &xh, &r)?;
        r = r.lin_comb(T::one(), &xh, -c)?;
    }
    let nr = metric_norm(metric, &r)?;
    if nr <= T::derived_tol() * ny || nr == T::zero() {
        return Err(CurvError::DegenerateSection(format!(
            "vectors are parallel (orthogonal residual {nr}, |y| = {ny})"
        )));
    }
    let yh = r.scaled(T::one() / nr);
    OrthonormalPair::certify(metric, xh, yh)
}

/// Gaussian tangent with i.i.d. standard normal free entries (strict upper
/// triangle of skew blocks, every entry of `B`).
pub fn random_tangent<T: Scalar, R: rand::Rng + ?Sized>(
    manifold: Manifold,
    n: usize,
    p: usize,
    rng: &mut R,
) -> Tangent<T> {
    match manifold {
        Manifold::So => Tangent::Skew(SkewTangent {
            x: gaussian_skew(rng, n),
        }),
        Manifold::Stiefel => {
            let a = gaussian_skew(rng, p);
            let b = gaussian_matrix(rng, n - p, p);
            Tangent::Stiefel(StiefelTangent { a, b })
        }
        Manifold::Grassmann => Tangent::Grassmann(GrassmannTangent {
            b: gaussian_matrix(rng, n - p, p),
        }),
    }
}

/// Seeded random orthonormal tangent pair on `manifold` (for `SO(n)` the
/// argument `p` is ignored).
pub fn random_tangent_pair<T: Scalar>(
    manifold: Manifold,
    metric: MetricKind,
    n: usize,
    p: usize,
    seed: u64,
) -> Result<OrthonormalPair<T>> {
    if metric.manifold() != manifold {
        return Err(CurvError::usage(format!(
            "metric {metric} does not belong to manifold {manifold}"
        )));
    }
    manifold.check_dims(n, p)?;
    let mut rng = rng_from_seed(seed);
    let x = random_tangent(manifold, n, p, &mut rng);
    let y = random_tangent(manifold, n, p, &mut rng);
    orthonormalize_pair(metric, &x, &y)
}
