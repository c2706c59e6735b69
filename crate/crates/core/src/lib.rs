//! Sectional curvature of the special orthogonal group, the Stiefel manifold
//! (canonical and Euclidean metrics) and the Grassmann manifold, together
//! with the matrix inequalities behind the global curvature bounds and the
//! tangent sections that attain them.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.
//!
//! ```
//! use matcurv::{build_extremizer, pair_curvature, ExtremizerKind};
//!
//! let pair = build_extremizer::<f64>(ExtremizerKind::StiefelCanonicalMax, 4, 2).unwrap();
//! let k = pair_curvature(&pair).unwrap();
//! assert!((k.value - 1.25).abs() < 1e-12);
//! ```

pub mod curvature;
pub mod error;
pub mod expm;
pub mod extremal;
pub mod inequality;
pub mod matrix;
pub mod random;
pub mod scalar;
pub mod svd;
pub mod tangent;

pub use curvature::{
    k_grassmann, k_so, k_stiefel_canonical, k_stiefel_euclidean, pair_curvature,
    sectional_curvature, CurvatureReport,
};
pub use error::{CurvError, Result};
pub use expm::expm;
pub use extremal::{
    build_extremizer, closed_geodesic_st42, geodesic_length, injectivity_lower_bound,
    verify_attainment, Attainment, ExtremizerKind, InjectivityBound,
};
pub use inequality::{
    canonical_bound_fn, canonical_bound_fn_diagonal, euclidean_bound_fns, skew_commutator_bound,
    skew_commutator_constant, submult_bound, trace_quad_extrema, trace_term_max,
    verify_bound_fn_max, wu_chen_refined, InequalityReport, TraceQuadExtrema, TraceVariant,
    WuChenReport, ST_N_NM1_EUCLIDEAN_UPPER,
};
pub use matrix::{commutator, frobenius_inner, skew3, vec3, DenseMatrix};
pub use random::{rng_from_seed, SeededRng};
pub use scalar::Scalar;
pub use svd::{svd, SvdResult};
pub use tangent::{
    metric_inner, metric_norm, orthonormalize_pair, project_horizontal, random_tangent,
    random_tangent_pair, GrassmannTangent, Manifold, MetricKind, OrthonormalPair, SkewTangent,
    StiefelTangent, Tangent,
};

/// Double-precision dense matrix.
pub type Matrix = DenseMatrix<f64>;
pub type Tangent64 = Tangent<f64>;
pub type Pair = OrthonormalPair<f64>;
pub type Report = CurvatureReport<f64>;
pub type Inequality = InequalityReport<f64>;
