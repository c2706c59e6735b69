//! Numerical experiments: parametric fill sweeps, random sections of growing
//! dimension, the A-block/B-block trade-off and the `St(n, n - 1)` probe.

use matcurv::random::gaussian_skew;
use matcurv::{
    orthonormalize_pair, pair_curvature, project_horizontal, random_tangent_pair, rng_from_seed,
    CurvError, DenseMatrix, Manifold, Matrix, MetricKind, Result, SkewTangent, StiefelTangent,
    Tangent,
};
use rayon::prelude::*;

use crate::record::{Cell, ExperimentId, ExperimentRecord};

/// Largest `p` accepted by [`run_exp2`] unless large runs are allowed.
pub const EXP2_DEFAULT_MAX_P: usize = 200;
/// Hard ceiling for `p` in [`run_exp2`].
pub const EXP2_LARGE_MAX_P: usize = 1000;

fn curvature(metric: MetricKind, x: &Tangent<f64>, y: &Tangent<f64>) -> Result<f64> {
    let pair = orthonormalize_pair(metric, x, y)?;
    Ok(pair_curvature(&pair)?.value)
}

/// All four curvatures of the section spanned by `[[0, -B1^T], [B1, 0]]`
/// and `[[0, -B2^T], [B2, 0]]`, each normalized in its own metric.
fn four_curvatures(b1: &Matrix, b2: &Matrix) -> Result<[f64; 4]> {
    let sx = StiefelTangent::from_b(b1.clone());
    let sy = StiefelTangent::from_b(b2.clone());
    let so_x: Tangent<f64> = SkewTangent::new(sx.embed_skew())?.into();
    let so_y: Tangent<f64> = SkewTangent::new(sy.embed_skew())?.into();
    let (st_x, st_y): (Tangent<f64>, Tangent<f64>) = (sx.into(), sy.into());
    Ok([
        curvature(MetricKind::SoCanonical, &so_x, &so_y)?,
        curvature(MetricKind::StiefelCanonical, &st_x, &st_y)?,
        curvature(MetricKind::StiefelEuclidean, &st_x, &st_y)?,
        curvature(MetricKind::Grassmann, &st_x, &st_y)?,
    ])
}

fn curve_cells(k: [f64; 4]) -> Vec<(&'static str, Cell)> {
    vec![
        ("k_so", Cell::Real(k[0])),
        ("k_st_canonical", Cell::Real(k[1])),
        ("k_st_euclidean", Cell::Real(k[2])),
        ("k_grassmann", Cell::Real(k[3])),
    ]
}

/// Fill blocks for the first experiment. `u[0] = u_1 = 1`, `u[k - 1] = u_k`.
///
/// `B1` is block diagonal with `2 x 2` blocks `[[0, u_{2k-1}], [-u_{2k}, 0]]`;
/// for odd `p` the last parameter has no partner in `B1` and only enters
/// `B2 = diag(u_1, ..., u_p)`.
pub fn exp1_blocks(u: &[f64], transpose_b1: bool) -> (Matrix, Matrix) {
    let p = u.len();
    let mut b1 = vec![0.0; p * p];
    for k in 0..p / 2 {
        let (i, j) = (2 * k, 2 * k + 1);
        b1[i * p + j] = u[i];
        b1[j * p + i] = -u[j];
    }
    let b1 = Matrix::from_row_major(p, p, b1).expect("finite");
    let b2 = Matrix::from_diag(p, p, u).expect("finite");
    (if transpose_b1 { b1.t() } else { b1 }, b2)
}

/// Sequential fill sweep on `SO(n)`, `St(n, p)` and `Gr(n, p)` with `n = 2p`.
///
/// Step 0 has `u_2 = ... = u_p = 0`; each of `u_2, ..., u_p` is then ramped
/// to 1 in `steps_per_parameter` equal increments while the earlier ones
/// stay at 1, giving `1 + (p - 1) * steps_per_parameter` records.
pub fn run_exp1(
    n: usize,
    p: usize,
    steps_per_parameter: usize,
    transpose_b1: bool,
) -> Result<Vec<ExperimentRecord>> {
    if p < 2 || n != 2 * p {
        return Err(CurvError::Usage(format!(
            "exp1 needs p >= 2 and n = 2p, got n = {n}, p = {p}"
        )));
    }
    if steps_per_parameter == 0 {
        return Err(CurvError::Usage(
            "steps_per_parameter must be positive".into(),
        ));
    }
    let s = steps_per_parameter;
    let total = 1 + (p - 1) * s;
    (0..total)
        .into_par_iter()
        .map(|step| {
            let mut u = vec![0.0; p];
            u[0] = 1.0;
            let (index, value) = if step == 0 {
                (2, 0.0)
            } else {
                let k = (step - 1) / s;
                let value = ((step - 1) % s + 1) as f64 / s as f64;
                for x in u.iter_mut().take(k + 1).skip(1) {
                    *x = 1.0;
                }
                u[k + 1] = value;
                (k + 2, value)
            };
            let (b1, b2) = exp1_blocks(&u, transpose_b1);
            let k = four_curvatures(&b1, &b2)?;
            Ok(ExperimentRecord {
                experiment: ExperimentId::Exp1,
                coords: vec![
                    ("step", Cell::Int(step as u64)),
                    ("u_index", Cell::Int(index as u64)),
                    ("u_value", Cell::Real(value)),
                ],
                values: curve_cells(k),
                seed: None,
                trials: None,
            })
        })
        .collect()
}

/// Curvatures of one random trial of the second experiment.
///
/// A single pair `X, Y in Skew(2p)` feeds all four sections: the pair itself
/// on `SO(2p)`, its `(A, B)` part on `St(2p, p)` under both metrics and its
/// `B` part on `Gr(2p, p)`.
pub fn exp2_trial(p: usize, seed: u64) -> Result<[f64; 4]> {
    let mut rng = rng_from_seed(seed);
    let x = SkewTangent::new(gaussian_skew::<f64, _>(&mut rng, 2 * p))?;
    let y = SkewTangent::new(gaussian_skew::<f64, _>(&mut rng, 2 * p))?;
    let st_x = project_horizontal(Manifold::Stiefel, &x, p)?;
    let st_y = project_horizontal(Manifold::Stiefel, &y, p)?;
    let gr_x = project_horizontal(Manifold::Grassmann, &x, p)?;
    let gr_y = project_horizontal(Manifold::Grassmann, &y, p)?;
    let (so_x, so_y) = (Tangent::Skew(x), Tangent::Skew(y));
    Ok([
        curvature(MetricKind::SoCanonical, &so_x, &so_y)?,
        curvature(MetricKind::StiefelCanonical, &st_x, &st_y)?,
        curvature(MetricKind::StiefelEuclidean, &st_x, &st_y)?,
        curvature(MetricKind::Grassmann, &gr_x, &gr_y)?,
    ])
}

/// Averaged curvature of random sections for each `p`; trial `t` uses seed
/// `seed + t`. `max_p` caps the admissible block size.
pub fn run_exp2(
    p_values: &[usize],
    trials: usize,
    seed: u64,
    max_p: usize,
) -> Result<Vec<ExperimentRecord>> {
    if p_values.is_empty() || trials == 0 {
        return Err(CurvError::Usage(
            "exp2 needs at least one p and one trial".into(),
        ));
    }
    if max_p > EXP2_LARGE_MAX_P {
        return Err(CurvError::Usage(format!(
            "p is capped at {EXP2_LARGE_MAX_P}"
        )));
    }
    for &p in p_values {
        if p < 2 {
            return Err(CurvError::Usage(format!("exp2 needs p >= 2, got {p}")));
        }
        if p > max_p {
            return Err(CurvError::Usage(format!(
                "p = {p} exceeds the limit {max_p} (use --allow-large for p up to {EXP2_LARGE_MAX_P})"
            )));
        }
    }
    p_values
        .iter()
        .map(|&p| {
            let per_trial: Vec<[f64; 4]> = (0..trials as u64)
                .into_par_iter()
                .map(|t| exp2_trial(p, seed.wrapping_add(t)))
                .collect::<Result<_>>()?;
            let mut mean = [0.0; 4];
            for k in &per_trial {
                for (m, v) in mean.iter_mut().zip(k) {
                    *m += v;
                }
            }
            for m in &mut mean {
                *m /= trials as f64;
            }
            Ok(ExperimentRecord {
                experiment: ExperimentId::Exp2,
                coords: vec![("p", Cell::Int(p as u64))],
                values: curve_cells(mean),
                seed: Some(seed),
                trials: Some(trials),
            })
        })
        .collect()
}

fn exp3_b_blocks(u: f64, v: f64) -> (Matrix, Matrix) {
    let b1 = Matrix::from_rows(&[
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, u],
        [0.0, 0.0, -v, 0.0],
    ])
    .expect("finite");
    let b2 = Matrix::from_diag(4, 4, &[1.0, 1.0, u, v]).expect("finite");
    (b1, b2)
}

fn exp3_a_blocks() -> (Matrix, Matrix) {
    let a1 = Matrix::from_rows(&[
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ])
    .expect("finite");
    let a2 = Matrix::from_rows(&[
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ])
    .expect("finite");
    (a1, a2)
}

fn stiefel_pair_curvatures(a1: &Matrix, b1: &Matrix, a2: &Matrix, b2: &Matrix) -> Result<[f64; 2]> {
    let x: Tangent<f64> = StiefelTangent::new(a1.clone(), b1.clone())?.into();
    let y: Tangent<f64> = StiefelTangent::new(a2.clone(), b2.clone())?.into();
    Ok([
        curvature(MetricKind::StiefelCanonical, &x, &y)?,
        curvature(MetricKind::StiefelEuclidean, &x, &y)?,
    ])
}

fn grid(i: usize, n: usize) -> f64 {
    if n == 1 {
        0.0
    } else {
        i as f64 / (n - 1) as f64
    }
}

/// Curvature on `St(8, 4)` over `(u, v) in [0, 1]^2` for the sections with
/// zero `A` blocks and `B` blocks filled by `u` and `v`.
pub fn run_exp3_surface(grid_n: usize) -> Result<Vec<ExperimentRecord>> {
    if grid_n < 2 {
        return Err(CurvError::Usage("exp3-surface needs grid_n >= 2".into()));
    }
    let zero = DenseMatrix::zeros(4, 4);
    (0..grid_n * grid_n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / grid_n, idx % grid_n);
            let (u, v) = (grid(i, grid_n), grid(j, grid_n));
            let (b1, b2) = exp3_b_blocks(u, v);
            let [kc, ke] = stiefel_pair_curvatures(&zero, &b1, &zero, &b2)?;
            Ok(ExperimentRecord {
                experiment: ExperimentId::Exp3Surface,
                coords: vec![("u", Cell::Real(u)), ("v", Cell::Real(v))],
                values: vec![
                    ("k_st_canonical", Cell::Real(kc)),
                    ("k_st_euclidean", Cell::Real(ke)),
                ],
                seed: None,
                trials: None,
            })
        })
        .collect()
}

/// Curvature on `St(8, 4)` along `u -> (u A1, (1 - u) B1, u A2, (1 - u) B2)`,
/// `u = i / steps`, shifting weight from the `B` blocks to the `A` blocks.
pub fn run_exp3_mix(steps: usize) -> Result<Vec<ExperimentRecord>> {
    if steps == 0 {
        return Err(CurvError::Usage("exp3-mix needs steps >= 1".into()));
    }
    let (a1, a2) = exp3_a_blocks();
    let (b1, b2) = exp3_b_blocks(0.0, 0.0);
    (0..=steps)
        .map(|i| {
            let u = i as f64 / steps as f64;
            let w = 1.0 - u;
            let [kc, ke] =
                stiefel_pair_curvatures(&a1.scale(u), &b1.scale(w), &a2.scale(u), &b2.scale(w))?;
            Ok(ExperimentRecord {
                experiment: ExperimentId::Exp3Mix,
                coords: vec![("step", Cell::Int(i as u64)), ("u", Cell::Real(u))],
                values: vec![
                    ("k_st_canonical", Cell::Real(kc)),
                    ("k_st_euclidean", Cell::Real(ke)),
                ],
                seed: None,
                trials: None,
            })
        })
        .collect()
}

/// Empirical curvature extremes on `St(n, n - 1)` under the Euclidean metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureProbe {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_seen: f64,
    pub min_seen: f64,
}

impl ConjectureProbe {
    pub fn within_lower_bound(&self) -> bool {
        self.min_seen >= -0.5 - 1e-12
    }

    pub fn within_proven_upper_bound(&self) -> bool {
        self.max_seen <= matcurv::ST_N_NM1_EUCLIDEAN_UPPER + 1e-12
    }

    /// Empirical support only; sampling cannot settle the conjecture.
    pub fn consistent_with_conjecture(&self) -> bool {
        self.max_seen <= matcurv::inequality::ST_N_NM1_EUCLIDEAN_CONJECTURE + 1e-12
    }

    pub fn to_record(&self) -> ExperimentRecord {
        ExperimentRecord {
            experiment: ExperimentId::Conjecture,
            coords: vec![
                ("n", Cell::Int(self.n as u64)),
                ("p", Cell::Int(self.n as u64 - 1)),
            ],
            values: vec![
                ("max_seen", Cell::Real(self.max_seen)),
                ("min_seen", Cell::Real(self.min_seen)),
                ("min_ok", Cell::Flag(self.within_lower_bound())),
                (
                    "max_below_two_thirds",
                    Cell::Flag(self.within_proven_upper_bound()),
                ),
                (
                    "max_below_half_empirical",
                    Cell::Flag(self.consistent_with_conjecture()),
                ),
            ],
            seed: Some(self.seed),
            trials: Some(self.trials),
        }
    }
}

/// Samples `trials` random orthonormal pairs (seed `seed + t`) on
/// `St(n, n - 1)` with the Euclidean metric.
pub fn probe_conjecture(n: usize, trials: usize, seed: u64) -> Result<ConjectureProbe> {
    if n < 4 {
        return Err(CurvError::Usage(format!(
            "the St(n, n-1) probe needs n >= 4 (St(3, 2) is bounded by 1/2 exactly), got {n}"
        )));
    }
    if trials == 0 {
        return Err(CurvError::Usage("probe needs at least one trial".into()));
    }
    let values: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let pair = random_tangent_pair::<f64>(
                Manifold::Stiefel,
                MetricKind::StiefelEuclidean,
                n,
                n - 1,
                seed.wrapping_add(t),
            )?;
            Ok(pair_curvature(&pair)?.value)
        })
        .collect::<Result<_>>()?;
    let max_seen = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_seen = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ConjectureProbe {
        n,
        trials,
        seed,
        max_seen,
        min_seen,
    })
}
