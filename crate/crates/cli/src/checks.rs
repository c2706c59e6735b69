//! Verification harnesses behind the `inequality`, `bounds` and `geodesic`
//! subcommands.

use std::str::FromStr;

use matcurv::random::{gaussian_skew, unit_sphere_matrix};
use matcurv::{
    canonical_bound_fn, canonical_bound_fn_diagonal, closed_geodesic_st42, euclidean_bound_fns,
    geodesic_length, rng_from_seed, skew_commutator_bound, submult_bound, verify_bound_fn_max,
    wu_chen_refined, CurvError, InequalityReport, Matrix, Result,
};
use rayon::prelude::*;
use serde::Serialize;

/// Absolute slack tolerance for fuzzed inequalities on unit-norm inputs.
pub const SLACK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityFamily {
    WuChen,
    Refined,
    SkewCommutator,
    Submult,
}

impl FromStr for InequalityFamily {
    type Err = CurvError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wu-chen" => Ok(InequalityFamily::WuChen),
            "refined" => Ok(InequalityFamily::Refined),
            "skew-commutator" => Ok(InequalityFamily::SkewCommutator),
            "submult" => Ok(InequalityFamily::Submult),
            other => Err(CurvError::Usage(format!(
                "unknown inequality family '{other}'"
            ))),
        }
    }
}

/// Aggregate of a fuzz run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub family: InequalityFamily,
    pub trials: usize,
    pub seed: u64,
    pub checks: usize,
    pub min_slack: f64,
    pub violations: usize,
    /// Refined right-hand sides exceeding the classic one (refined family only).
    pub refined_above_classic: usize,
    /// First violated inequality, if any.
    pub first_violation: Option<String>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.refined_above_classic == 0
    }
}

/// Dimensions cycle deterministically with the trial index.
fn dims(t: u64) -> (usize, usize, usize) {
    (
        1 + (t % 7) as usize,
        1 + (t / 7 % 6) as usize,
        1 + (t / 42 % 5) as usize,
    )
}

fn unit_skew(rng: &mut matcurv::SeededRng, p: usize) -> Matrix {
    let a: Matrix = gaussian_skew(rng, p);
    let n = a.frobenius_norm();
    if n > 0.0 {
        a.scale(1.0 / n)
    } else {
        a
    }
}

struct Trial {
    reports: Vec<InequalityReport<f64>>,
    refined_above_classic: bool,
}

fn trial(family: InequalityFamily, t: u64, seed: u64) -> Result<Trial> {
    let mut rng = rng_from_seed(seed.wrapping_add(t));
    let (m, p, k) = dims(t);
    let mut refined_above_classic = false;
    let reports = match family {
        InequalityFamily::WuChen | InequalityFamily::Refined => {
            let b1: Matrix = unit_sphere_matrix(&mut rng, m, p);
            let b2: Matrix = unit_sphere_matrix(&mut rng, m, p);
            let w = wu_chen_refined(&b1, &b2)?;
            if family == InequalityFamily::WuChen {
                vec![w.classic_btb, w.classic_bbt]
            } else {
                refined_above_classic = w.refined_btb.rhs > w.classic_btb.rhs + SLACK_TOL;
                vec![w.refined_btb, w.refined_bbt]
            }
        }
        InequalityFamily::SkewCommutator => {
            let p = [2, 3, 4, 7][(t % 4) as usize];
            let a1 = unit_skew(&mut rng, p);
            let a2 = unit_skew(&mut rng, p);
            vec![skew_commutator_bound(&a1, &a2)?]
        }
        InequalityFamily::Submult => {
            let a: Matrix = if t.is_multiple_of(2) {
                unit_sphere_matrix(&mut rng, m, p)
            } else {
                unit_skew(&mut rng, p)
            };
            let b: Matrix = unit_sphere_matrix(&mut rng, p, k);
            let c: Matrix = unit_skew(&mut rng, p);
            vec![submult_bound(&a, &b)?, submult_bound(&a, &c)?]
        }
    };
    Ok(Trial {
        reports,
        refined_above_classic,
    })
}

/// Evaluates `trials` random instances of `family` with unit Frobenius-norm
/// inputs; trial `t` draws from seed `seed + t`.
pub fn fuzz_inequality(family: InequalityFamily, trials: usize, seed: u64) -> Result<FuzzSummary> {
    if trials == 0 {
        return Err(CurvError::Usage("fuzz needs at least one trial".into()));
    }
    let results: Vec<Trial> = (0..trials as u64)
        .into_par_iter()
        .map(|t| trial(family, t, seed))
        .collect::<Result<_>>()?;
    let mut s = FuzzSummary {
        family,
        trials,
        seed,
        checks: 0,
        min_slack: f64::INFINITY,
        violations: 0,
        refined_above_classic: 0,
        first_violation: None,
    };
    for (t, r) in results.iter().enumerate() {
        s.refined_above_classic += usize::from(r.refined_above_classic);
        for rep in &r.reports {
            s.checks += 1;
            s.min_slack = s.min_slack.min(rep.slack);
            if !rep.holds(SLACK_TOL) {
                s.violations += 1;
                s.first_violation.get_or_insert_with(|| {
                    format!("trial {t}: {} lhs {} rhs {}", rep.name, rep.lhs, rep.rhs)
                });
            }
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalBoundCheck {
    pub grid: usize,
    pub argmax: (f64, f64),
    pub max: f64,
    pub corner_value: f64,
    pub diagonal_samples: usize,
    pub diagonal_monotone: bool,
    pub diagonal_matches_closed_form: bool,
    pub pass: bool,
}

/// Grid maximum of the canonical bound function, its value at
/// `(sqrt 2, sqrt 2)` and monotonicity of the diagonal restriction.
pub fn canonical_bound_check(grid: usize, diagonal_samples: usize) -> Result<CanonicalBoundCheck> {
    if diagonal_samples < 2 {
        return Err(CurvError::Usage(
            "need at least two diagonal samples".into(),
        ));
    }
    let (argmax, max) = verify_bound_fn_max::<f64>(grid)?;
    let r2 = std::f64::consts::SQRT_2;
    let corner_value = canonical_bound_fn(r2, r2)?;
    let mut monotone = true;
    let mut matches = true;
    let mut prev = f64::INFINITY;
    for i in 0..diagonal_samples {
        let a = r2 * i as f64 / (diagonal_samples - 1) as f64;
        let d = canonical_bound_fn_diagonal(a)?;
        monotone &= d < prev;
        matches &= (d - canonical_bound_fn(a, a)?).abs() <= 1e-12;
        prev = d;
    }
    let pass = argmax == (0.0, 0.0)
        && (max - 1.25).abs() <= 1e-12
        && (corner_value - 0.5).abs() <= 1e-12
        && monotone
        && matches;
    Ok(CanonicalBoundCheck {
        grid,
        argmax,
        max,
        corner_value,
        diagonal_samples,
        diagonal_monotone: monotone,
        diagonal_matches_closed_form: matches,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EuclideanBoundsCheck {
    pub grid: usize,
    pub min_lower: f64,
    pub max_upper: f64,
    pub pass: bool,
}

/// Extremes of the Euclidean lower/upper bound functions on a uniform grid
/// of `[0, 1]^2`; they must stay within `[-1/2, 1]`.
pub fn euclidean_bounds_check(grid: usize) -> Result<EuclideanBoundsCheck> {
    if grid < 2 {
        return Err(CurvError::Usage("grid must be at least 2".into()));
    }
    let at = |i: usize| i as f64 / (grid - 1) as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..grid {
        for j in 0..grid {
            let (l, u) = euclidean_bound_fns(at(i), at(j))?;
            lo = lo.min(l);
            hi = hi.max(u);
        }
    }
    Ok(EuclideanBoundsCheck {
        grid,
        min_lower: lo,
        max_upper: hi,
        pass: lo >= -0.5 - 1e-12 && hi <= 1.0 + 1e-12,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicCheck {
    pub samples: usize,
    pub length: f64,
    pub length_error: f64,
    pub closure: f64,
    pub max_orthonormality_residual: f64,
    pub pass: bool,
}

/// Length, closure and orthonormality of the closed geodesic on `St(4, 2)`.
/// Orthonormality is checked on 1000 uniform parameter values.
pub fn geodesic_check(samples: usize) -> Result<GeodesicCheck> {
    let length = geodesic_length::<f64>(samples)?;
    let closure = (&closed_geodesic_st42(1.0) - &closed_geodesic_st42(0.0)).frobenius_norm();
    let id = Matrix::identity(2);
    let residual = (0..1000)
        .map(|i| {
            let c = closed_geodesic_st42(i as f64 / 999.0);
            (&(&c.t() * &c) - &id).max_abs()
        })
        .fold(0.0, f64::max);
    let length_error = (length - std::f64::consts::TAU).abs();
    Ok(GeodesicCheck {
        samples,
        length,
        length_error,
        closure,
        max_orthonormality_residual: residual,
        pass: closure <= 1e-10 && residual <= 1e-10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fuzz_runs_pass() {
        for f in ["wu-chen", "refined", "skew-commutator", "submult"] {
            let s = fuzz_inequality(f.parse().unwrap(), 200, 3).unwrap();
            assert!(s.passed(), "{s:?}");
            assert!(s.checks >= 200);
        }
    }

    #[test]
    fn fuzz_is_reproducible() {
        let a = fuzz_inequality(InequalityFamily::Submult, 50, 9).unwrap();
        let b = fuzz_inequality(InequalityFamily::Submult, 50, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bound_function_grids() {
        assert!(canonical_bound_check(100, 50).unwrap().pass);
        assert!(euclidean_bounds_check(50).unwrap().pass);
        assert!(matches!(
            canonical_bound_check(10, 50),
            Err(CurvError::Usage(_))
        ));
    }

    #[test]
    fn geodesic_closes() {
        let g = geodesic_check(1000).unwrap();
        assert!(g.pass && g.length_error < 1e-4);
    }
}
