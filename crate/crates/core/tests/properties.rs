//! Property tests for the invariants of the constants, densities, STFT and
//! experiment harness.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tfsamp_core::bounds::{
    compact_frame_bounds, k_constant, planar_sampling_bound, sunzhou_check, thm_main_bound, CalibrationConstants,
};
use tfsamp_core::geometry::{density_gamma, DensityMode, DensityQuery, Region};
use tfsamp_core::harness::{
    empirical_frame_bounds, run_sampling_experiment, ExperimentConfig, FrameExperiment, PointRule, SignalFamily,
};
use tfsamp_core::specfun::{HermiteIndex, WindowDesc, WindowSpec};
use tfsamp_core::tfcore::{lp_norm, stft_eval, PhasePoint, STFTGrid, Signal};

fn unit() -> CalibrationConstants {
    CalibrationConstants::default()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn small_config() -> ProptestConfig {
    ProptestConfig { cases: 12, ..ProptestConfig::default() }
}

proptest! {
    #[test]
    fn main_bound_log_matches_direct(n in 0usize..=5, r in 0.3f64..2.0, gamma in 0.05f64..1.0, c in 1.0f64..3.0) {
        let cal = CalibrationConstants { c_numerical: c, ..unit() };
        let b = thm_main_bound(n, r, gamma, 2.0, &cal).unwrap();
        let v = b.nu;
        let n2lnn = if n <= 1 { 0.0 } else { (n * n) as f64 * (n as f64).ln() };
        let sigma = c * (r * r + (1.0 / v).ln() + n2lnn + 1.0);
        let eta = r * r / v * c.powf(r * r + 1.0);
        let direct = eta * (gamma / c).powf(-sigma);
        prop_assume!(direct.is_finite());
        prop_assert!(rel(b.sigma, sigma) < 1e-12);
        prop_assert!(rel(b.eta().value.unwrap(), eta) < 1e-12);
        prop_assert!(rel(b.bound().value.unwrap(), direct) < 1e-12);
    }

    #[test]
    fn planar_bound_specialization(s in 0.5f64..2.0, frac in 0.01f64..0.99, gamma in 0.01f64..1.0) {
        let g = WindowSpec::hat(s).unwrap();
        let fr = compact_frame_bounds(&g, 1.0).unwrap();
        let r = frac * fr.r_g;
        let c = planar_sampling_bound(&g, r, gamma).unwrap();
        let w = g.norms();
        let closed = 3.0 / gamma * (1.0 - 4.0 * w.deriv_l2 * r / (PI * w.l2)).powi(-2);
        prop_assert!(rel(c, closed) < 1e-12);
    }

    #[test]
    fn k_increases_in_radius(n in 0usize..=5, r in 0.2f64..3.0, dr in 0.01f64..1.0, gl in 0.05f64..1.0) {
        let a = k_constant(r, n, gl, 1.0, &unit()).unwrap();
        let b = k_constant(r + dr, n, gl, 1.0, &unit()).unwrap();
        prop_assert!(b >= a);
    }

    #[test]
    fn main_bound_nondecreasing_in_radius(n in 0usize..=2, r in 1.6f64..4.0, dr in 0.01f64..1.0, gamma in 0.05f64..1.0) {
        let a = thm_main_bound(n, r, gamma, 2.0, &unit()).unwrap().bound_log;
        let b = thm_main_bound(n, r + dr, gamma, 2.0, &unit()).unwrap().bound_log;
        prop_assert!(b >= a);
    }

    #[test]
    fn main_bound_nondecreasing_for_large_radius(n in 3usize..=5, r in 2.6f64..5.0, dr in 0.01f64..1.0, gamma in 0.05f64..1.0) {
        let a = thm_main_bound(n, r, gamma, 2.0, &unit()).unwrap().bound_log;
        let b = thm_main_bound(n, r + dr, gamma, 2.0, &unit()).unwrap().bound_log;
        prop_assert!(b >= a);
    }

    #[test]
    fn main_bound_nonincreasing_in_gamma(n in 0usize..=8, r in 0.1f64..4.0, gamma in 0.01f64..0.9, dg in 0.001f64..0.1) {
        let a = thm_main_bound(n, r, gamma, 2.0, &unit()).unwrap().bound_log;
        let b = thm_main_bound(n, r, (gamma + dg).min(1.0), 2.0, &unit()).unwrap().bound_log;
        prop_assert!(b <= a);
    }

    #[test]
    fn delta_increases_in_radius(s in 0.5f64..2.0, r in 0.01f64..2.0, dr in 0.001f64..0.5) {
        let g = WindowSpec::hat(s).unwrap();
        prop_assert!(sunzhou_check(&g, r + dr).unwrap().delta > sunzhou_check(&g, r).unwrap().delta);
    }

    #[test]
    fn frame_lower_bound_decreases_below_limit(s in 0.5f64..2.0, f1 in 0.01f64..0.98, df in 0.001f64..0.02) {
        let g = WindowSpec::hat(s).unwrap();
        let rg = compact_frame_bounds(&g, 1.0).unwrap().r_g;
        let f2 = (f1 + df).min(0.999);
        let a1 = compact_frame_bounds(&g, f1 * rg).unwrap().a;
        let a2 = compact_frame_bounds(&g, f2 * rg).unwrap().a;
        prop_assert!(a2 < a1);
    }

    #[test]
    fn admissible_radius_meets_jitter_condition(s in 0.3f64..3.0, frac in 0.0f64..1.0) {
        let g = WindowSpec::hat(s).unwrap();
        let fr = compact_frame_bounds(&g, 1.0).unwrap();
        let r = (frac * fr.r_g).max(1e-6);
        prop_assert!(compact_frame_bounds(&g, r).unwrap().admissible);
        prop_assert!(sunzhou_check(&g, r).unwrap().condition_met);
    }

    #[test]
    fn density_monotone_under_inclusion(w1 in 0.05f64..0.5, dw in 0.0f64..0.4, r in 0.2f64..1.5) {
        let period = 1.0;
        let w2 = (w1 + dw).min(period);
        for mode in [DensityMode::Square, DensityMode::Disc] {
            let q = DensityQuery::new(r, mode);
            let small = Region::intersect(vec![
                Region::Strips { width: w1, period },
                Region::HStrips { width: 0.5, period },
            ]);
            let mid = Region::Strips { width: w1, period };
            let large = Region::Strips { width: w2, period };
            let a = density_gamma(&small, &q).unwrap().gamma;
            let b = density_gamma(&mid, &q).unwrap().gamma;
            let c = density_gamma(&large, &q).unwrap().gamma;
            prop_assert!(a <= b + 1e-12 && b <= c + 1e-12, "{a} {b} {c}");
        }
    }
}

proptest! {
    #![proptest_config(small_config())]

    #[test]
    fn stft_shift_covariance(shift in -16i32..=16, n in 0usize..=3, x in -1.5f64..1.5, xi in -2.0f64..2.0) {
        let (t, h) = (4.0, 1.0 / 16.0);
        let len = (2.0 * t / h) as usize + 1;
        let bump = |u: f64| Complex64::new((-PI * u * u).exp(), 0.3 * u * (-PI * u * u).exp());
        let base: Vec<Complex64> = (0..len).map(|j| bump(-t + j as f64 * h)).collect();
        let a = shift as f64 * h;
        let shifted: Vec<Complex64> = (0..len).map(|j| bump(-t + j as f64 * h - a)).collect();
        let f = Signal::sampled(base, t, h).unwrap();
        let fa = Signal::sampled(shifted, t, h).unwrap();
        let g = WindowSpec::hermite(HermiteIndex::new(n).unwrap()).unwrap();
        let v = stft_eval(&f, &g, PhasePoint::new(x, xi)).norm();
        let va = stft_eval(&fa, &g, PhasePoint::new(x + a, xi)).norm();
        prop_assert!((v - va).abs() < 1e-8, "{v} vs {va}");
    }

    #[test]
    fn frame_bounds_are_ordered_and_grow_with_points(seed in 0u64..1000, count in 3usize..30, extra in 1usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points: Vec<PhasePoint> =
            (0..count + extra).map(|_| PhasePoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-3.0..3.0))).collect();
        let run = |pts: Vec<PhasePoint>| {
            empirical_frame_bounds(&FrameExperiment {
                window: WindowDesc::Hat { half_width: 1.0 },
                points: PointRule::Explicit { points: pts },
                dimension: 4,
                tolerance: 0.05,
            })
            .unwrap()
        };
        let full = run(points.clone());
        points.truncate(count);
        let part = run(points);
        prop_assert!(part.a_emp <= part.b_emp * (1.0 + 1e-9));
        prop_assert!(full.a_emp <= full.b_emp * (1.0 + 1e-9));
        prop_assert!(full.a_emp >= part.a_emp - 1e-9 * part.b_emp);
        prop_assert!(full.b_emp >= part.b_emp * (1.0 - 1e-9));
    }

    #[test]
    fn doubling_the_window_quadruples_frame_bounds(seed in 0u64..1000, count in 8usize..24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<PhasePoint> =
            (0..count).map(|_| PhasePoint::new(rng.gen_range(-1.5..1.5), rng.gen_range(-2.0..2.0))).collect();
        let (s, h) = (1.0, 1.0 / 32.0);
        let samples: Vec<f64> = (0..=64).map(|j| {
            let t: f64 = -s + j as f64 * h;
            (1.0 - t.abs()) * (1.0 + 0.3 * t)
        }).collect();
        let run = |scale: f64| {
            empirical_frame_bounds(&FrameExperiment {
                window: WindowDesc::SampledH1 {
                    samples: samples.iter().map(|v| scale * v).collect(),
                    half_width: s,
                    step: h,
                },
                points: PointRule::Explicit { points: points.clone() },
                dimension: 4,
                tolerance: 0.05,
            })
            .unwrap()
        };
        let one = run(1.0);
        let two = run(2.0);
        prop_assert!(rel(two.b_emp, 4.0 * one.b_emp) < 1e-9);
        prop_assert!((two.a_emp - 4.0 * one.a_emp).abs() <= 1e-9 * two.b_emp);
    }

    #[test]
    fn sampling_ratios_are_at_least_one(seed in 0u64..1000, n in 0usize..=2, width in 0.05f64..0.45) {
        let cfg = |region: String, search: Option<f64>| ExperimentConfig {
            window: WindowDesc::Hermite { n: HermiteIndex::new(n).unwrap() },
            signals: SignalFamily::Random { degree: 4, count: 2, seed },
            region,
            radius: 1.0,
            p: 2.0,
            trunc: 4.0,
            step: 1.0 / 8.0,
            calibration: CalibrationConstants::default(),
            tolerance: 0.05,
            search_half_width: search,
            raster_step: None,
            output: None,
        };
        let strips = run_sampling_experiment(&cfg(format!("(strips {width} 0.5)"), None)).unwrap();
        for r in &strips.reports {
            prop_assert!(r.details["ratio"] > 1.0);
        }
        let covering = run_sampling_experiment(&cfg("(rect -4 -4 4 4)".into(), Some(1.0))).unwrap();
        for r in &covering.reports {
            prop_assert_eq!(r.details["ratio"], 1.0);
        }
    }
}

/// Squares of side `w` at the points of the lattice `L ℤ²` have square
/// density `γ = (w/L)²` at scale `L`; the squared norm ratio tracks `1/γ`.
#[test]
fn ratio_tracks_inverse_density() {
    let period = 0.5;
    let g = WindowSpec::hermite(HermiteIndex::new(1).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let signals: Vec<Signal> = (0..3).map(|_| Signal::random_expansion(6, &mut rng).unwrap()).collect();
    let grids: Vec<STFTGrid> = signals.iter().map(|f| STFTGrid::compute(f, &g, 4.0, 1.0 / 64.0).unwrap()).collect();
    for w in [0.25, 0.125, 0.0625] {
        let region = Region::intersect(vec![
            Region::Strips { width: w, period },
            Region::HStrips { width: w, period },
        ]);
        let gamma = density_gamma(&region, &DensityQuery::new(period, DensityMode::Square)).unwrap().gamma;
        assert!(rel(gamma, (w / period).powi(2)) < 1e-6, "{gamma}");
        for grid in &grids {
            let ratio = lp_norm(grid, 2.0, None).unwrap() / lp_norm(grid, 2.0, Some(&region)).unwrap();
            let scaled = ratio * ratio * gamma;
            assert!((0.25..=4.0).contains(&scaled), "w = {w}: ratio^2 gamma = {scaled}");
        }
    }
}
