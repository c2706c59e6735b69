//! Trace-term optima against brute-force sphere search, inequality fuzzing and
//! the scalar bound functions against sampled curvatures.

use matcurv::inequality::{trace_quad, trace_term};
use matcurv::random::{gaussian_matrix, gaussian_skew, unit_sphere_matrix};
use matcurv::{
    canonical_bound_fn, canonical_bound_fn_diagonal, euclidean_bound_fns, pair_curvature,
    random_tangent_pair, rng_from_seed, skew_commutator_bound, submult_bound, trace_quad_extrema,
    trace_term_max, wu_chen_refined, DenseMatrix, Manifold, MetricKind, Tangent, TraceVariant,
};
use proptest::prelude::*;

type M = DenseMatrix<f64>;

#[test]
fn trace_optima_survive_sphere_search() {
    let mut rng = rng_from_seed(2024);
    for (m, p) in [(4, 3), (3, 2), (5, 1), (2, 2)] {
        let b2: M = gaussian_matrix(&mut rng, m, p);
        let (opt, arg) = trace_term_max(&b2, TraceVariant::Left).unwrap();
        let ext = trace_quad_extrema(&b2).unwrap();
        for variant in [TraceVariant::Left, TraceVariant::Right] {
            assert!((trace_term(&arg, &b2, variant).unwrap() - opt).abs() < 1e-12);
        }
        assert!((trace_quad(&ext.argmax, &b2).unwrap() - ext.max).abs() < 1e-12);
        assert!((trace_quad(&ext.argmin, &b2).unwrap() - ext.min).abs() < 1e-12);
        for _ in 0..10_000 {
            let b1: M = unit_sphere_matrix(&mut rng, m, p);
            for variant in [TraceVariant::Left, TraceVariant::Right] {
                assert!(trace_term(&b1, &b2, variant).unwrap() <= opt + 1e-10);
            }
            let q = trace_quad(&b1, &b2).unwrap();
            assert!(q <= ext.max + 1e-10 && q >= ext.min - 1e-10);
        }
    }
}

#[test]
fn argmatrices_have_unit_norm() {
    let mut rng = rng_from_seed(1);
    for _ in 0..50 {
        let b2: M = gaussian_matrix(&mut rng, 5, 3);
        let ext = trace_quad_extrema(&b2).unwrap();
        assert!((ext.argmax.frobenius_norm() - 1.0).abs() < 1e-12);
        assert!((ext.argmin.frobenius_norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn canonical_bound_dominates_sampled_curvature() {
    for seed in 0..3000 {
        let pair =
            random_tangent_pair::<f64>(Manifold::Stiefel, MetricKind::StiefelCanonical, 8, 4, seed)
                .unwrap();
        let alpha = |t: &Tangent<f64>| match t {
            Tangent::Stiefel(s) => s.a().frobenius_norm(),
            _ => unreachable!(),
        };
        let bound = canonical_bound_fn(alpha(pair.first()), alpha(pair.second())).unwrap();
        let k = pair_curvature(&pair).unwrap().value;
        assert!(k <= bound + 1e-10, "seed {seed}: {k} > {bound}");
    }
}

#[test]
fn euclidean_bounds_sandwich_sampled_curvature() {
    for seed in 0..3000 {
        let pair =
            random_tangent_pair::<f64>(Manifold::Stiefel, MetricKind::StiefelEuclidean, 8, 4, seed)
                .unwrap();
        let beta = |t: &Tangent<f64>| match t {
            Tangent::Stiefel(s) => s.b().frobenius_norm(),
            _ => unreachable!(),
        };
        let (lo, hi) = euclidean_bound_fns(beta(pair.first()), beta(pair.second())).unwrap();
        let k = pair_curvature(&pair).unwrap().value;
        assert!(
            k >= lo - 1e-10 && k <= hi + 1e-10,
            "seed {seed}: {lo} <= {k} <= {hi}"
        );
    }
}

#[test]
fn diagonal_bound_is_strictly_decreasing() {
    let r2 = 2f64.sqrt();
    let vals: Vec<f64> = (0..=1000)
        .map(|i| canonical_bound_fn_diagonal(r2 * i as f64 / 1000.0).unwrap())
        .collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn euclidean_bound_grid_extremes() {
    let n = 400;
    let (mut lo_min, mut hi_max) = ((f64::INFINITY, (0, 0)), (f64::NEG_INFINITY, (0, 0)));
    for i in 0..n {
        for j in 0..n {
            let (b1, b2) = (i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64);
            let (lo, hi) = euclidean_bound_fns(b1, b2).unwrap();
            if lo < lo_min.0 {
                lo_min = (lo, (i, j));
            }
            if hi > hi_max.0 {
                hi_max = (hi, (i, j));
            }
        }
    }
    assert_eq!(lo_min, (-0.5, (n - 1, n - 1)));
    assert!((hi_max.0 - 1.0).abs() < 1e-15);
    assert_eq!(hi_max.1, (n - 1, n - 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn wu_chen_never_violated(seed in any::<u64>(), m in 1usize..7, p in 1usize..7) {
        let mut rng = rng_from_seed(seed);
        let b1: M = gaussian_matrix(&mut rng, m, p);
        let b2: M = gaussian_matrix(&mut rng, m, p);
        let r = wu_chen_refined(&b1, &b2).unwrap();
        for rep in r.all() {
            prop_assert!(rep.slack >= -1e-12 * rep.rhs.max(1.0), "{}: {}", rep.name, rep.slack);
        }
        prop_assert!(r.refined_btb.rhs <= r.classic_btb.rhs * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn submult_never_violated(seed in any::<u64>(), n in 1usize..7, k in 1usize..7, skew in any::<bool>()) {
        let mut rng = rng_from_seed(seed);
        let a: M = if skew { gaussian_skew(&mut rng, n) } else { gaussian_matrix(&mut rng, n, n) };
        let b: M = gaussian_matrix(&mut rng, n, k);
        let r = submult_bound(&a, &b).unwrap();
        prop_assert!(r.slack >= -1e-12 * r.rhs.max(1.0));
    }

    #[test]
    fn skew_commutator_never_violated(seed in any::<u64>(), p in prop::sample::select(vec![2usize, 3, 4, 5, 7])) {
        let mut rng = rng_from_seed(seed);
        let a1: M = gaussian_skew(&mut rng, p);
        let a2: M = gaussian_skew(&mut rng, p);
        let r = skew_commutator_bound(&a1, &a2).unwrap();
        prop_assert!(r.slack >= -1e-12 * r.rhs.max(1.0));
    }
}
