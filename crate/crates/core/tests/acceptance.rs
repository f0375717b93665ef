//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tfsamp_core::bounds::{planar_sampling_bound, thm_main_bound, CalibrationConstants, Verdict};
use tfsamp_core::geometry::{beurling_lower_density, PointSet};
use tfsamp_core::harness::{
    calibrate_constants, empirical_frame_bounds, read_record, replay, run_sampling_experiment, ExperimentConfig,
    FrameExperiment, PointRule, SignalFamily,
};
use tfsamp_core::polyfock::{
    component_bound_check, phi_bound_check, phi_extension_eval, reduced_cauchy_eval, PolyFunction,
    ReducedPolyFunction,
};
use tfsamp_core::specfun::{nu, HermiteIndex, WindowDesc, WindowSpec};
use tfsamp_core::tfcore::{
    local_repr_residual, local_repr_residual_with, lp_norm, PhasePoint, PolarResolution, STFTGrid, Signal,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn idx(n: usize) -> HermiteIndex {
    HermiteIndex::new(n).unwrap()
}

fn isometry() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 0..=2 {
        let g = WindowSpec::hermite(idx(n)).unwrap();
        let fam = SignalFamily::Random { degree: 8, count: 20, seed: 42 };
        for f in fam.materialize().unwrap() {
            let grid = STFTGrid::compute(&f, &g, 6.0, 1.0 / 32.0).unwrap();
            let e = lp_norm(&grid, 2.0, None).unwrap().powi(2);
            let expected = f.norm_l2().powi(2) * g.norms().l2.powi(2);
            worst = worst.max((e / expected - 1.0).abs());
        }
    }
    outcome(worst < 1e-4, format!("max relative defect {worst:.3e} (limit 1e-4)"))
}

fn local_reproducing_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let f = Signal::random_expansion(8, &mut rng).unwrap();
    let zs: Vec<PhasePoint> =
        (0..10).map(|_| PhasePoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
    let coarse = PolarResolution { radial: 6, angular: 12 };
    let mut worst: f64 = 0.0;
    let mut halving_failures = 0;
    for n in 0..=2 {
        for radius in [0.5, 1.0, 2.0] {
            for &z in &zs {
                worst = worst.max(local_repr_residual(&f, idx(n), radius, z).unwrap());
                let r1 = local_repr_residual_with(&f, idx(n), radius, z, coarse).unwrap();
                let r2 = local_repr_residual_with(&f, idx(n), radius, z, coarse.doubled()).unwrap();
                if !(r2 <= 0.5 * r1 || r2 < 1e-12) {
                    halving_failures += 1;
                }
            }
        }
    }
    outcome(
        worst < 1e-3 && halving_failures == 0,
        format!("max residual {worst:.3e} (limit 1e-3); {halving_failures}/90 cases fail to halve on doubling"),
    )
}

fn nu_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in [0.25, 0.5, 1.0, 2.0] {
        let e = (-PI * r * r).exp();
        worst = worst.max((nu(0, r).unwrap() - (1.0 - e)).abs());
        worst = worst.max((nu(1, r).unwrap() - (1.0 - e * (1.0 + PI * PI * r.powi(4)))).abs());
    }
    outcome(worst < 1e-10, format!("max abs error {worst:.3e} (limit 1e-10)"))
}

fn balk_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut violations = 0;
    let mut tightest = f64::NEG_INFINITY;
    for _ in 0..100 {
        let order = rng.gen_range(0..=3);
        let degree = rng.gen_range(0..=4);
        let f = PolyFunction::random(order, degree, &mut rng);
        let r = component_bound_check(&f, 1.0, SQRT_2).unwrap();
        tightest = tightest.max(r.empirical_log.unwrap() - r.theoretical_log.unwrap());
        if r.verdict != Verdict::Pass {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("{violations} violations in 100; tightest log margin {:.3}", -tightest))
}

fn phi_extension() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let f = PolyFunction::random(rng.gen_range(0..=3), rng.gen_range(0..=4), &mut rng);
        let (x, y) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let a = phi_extension_eval(&f, Complex64::new(x, 0.0), Complex64::new(y, 0.0));
        let b = f.eval(Complex64::new(x, y));
        worst = worst.max((a - b).norm() / b.norm().max(1.0));
    }
    let mut violations = 0;
    for k in 0..100 {
        let f = PolyFunction::random(rng.gen_range(0..=2), rng.gen_range(0..=3), &mut rng);
        if phi_bound_check(&f, 1.0, 9, 400, k).unwrap().verdict != Verdict::Pass {
            violations += 1;
        }
    }
    outcome(
        worst < 1e-12 && violations == 0,
        format!("restriction error {worst:.3e} (limit 1e-12); {violations} extension-bound violations in 100"),
    )
}

fn cauchy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for order in 0..=2 {
        let f = ReducedPolyFunction::random(order, 5, &mut rng);
        let radii = [1.0, 1.4, 1.8];
        for _ in 0..20 {
            let z = Complex64::from_polar(0.95 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
            let exact = f.eval(z);
            let v = reduced_cauchy_eval(&f, &radii[..=order], z).unwrap();
            worst = worst.max((v - exact).norm() / exact.norm().max(1e-300));
        }
    }
    outcome(worst < 1e-6, format!("max relative error {worst:.3e} (limit 1e-6)"))
}

fn hat_config(region: &str, count: usize) -> ExperimentConfig {
    ExperimentConfig {
        window: WindowDesc::Hat { half_width: 1.0 },
        signals: SignalFamily::Random { degree: 6, count, seed: 42 },
        region: region.into(),
        radius: 0.4,
        p: 2.0,
        trunc: 6.0,
        step: 1.0 / 16.0,
        calibration: CalibrationConstants::default(),
        tolerance: 0.05,
        search_half_width: None,
        raster_step: None,
        output: None,
    }
}

/// Half-period strips of period 1 leave 0.5-wide gaps, so squares of side
/// 0.4 fit between strips and the square density is 0. The ratios are
/// compared with the bound at γ = 1/2 as stated; the harness verdict with
/// the measured density runs on strips of period 0.4, where it is exactly
/// 1/2.
fn planar_end_to_end() -> Outcome {
    let limit = planar_sampling_bound(&WindowSpec::hat(1.0).unwrap(), 0.4, 0.5).unwrap() * 1.05;
    let stated = run_sampling_experiment(&hat_config("(strips 0.5 1)", 20)).unwrap();
    let ratios: Vec<f64> = stated.reports.iter().map(|r| r.details["ratio"]).collect();
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let stated_ok = ratios.iter().all(|&r| r * r <= limit && r >= 1.0);

    let measured = run_sampling_experiment(&hat_config("(strips 0.2 0.4)", 20)).unwrap();
    let measured_max = measured.reports.iter().map(|r| r.details["ratio"]).fold(0.0, f64::max);
    outcome(
        stated_ok && measured.all_pass(),
        format!(
            "strips(1/2,1): ratio in [{min:.4}, {max:.4}], ratio^2 <= {limit:.1}, measured square density {}; \
             strips(0.2,0.4): gamma {:.4}, max ratio {measured_max:.4}, all verdicts {}",
            stated.density.gamma,
            measured.density.gamma_conservative,
            if measured.all_pass() { "pass" } else { "not pass" }
        ),
    )
}

fn frame_bounds() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for seed in 1..=5 {
        let exp = FrameExperiment {
            window: WindowDesc::Hat { half_width: 1.0 },
            points: PointRule::JitteredLattice { spacing: 0.2, jitter: 0.05, seed, xi_half_width: 16.0 },
            dimension: 8,
            tolerance: 0.05,
        };
        let fb = empirical_frame_bounds(&exp).unwrap();
        ok &= fb.a_emp >= 1.7355 && fb.all_pass();
        lines.push(format!("A={:.4} B+tail={:.4}", fb.a_emp, fb.b_emp + fb.tail));
        if seed == 1 {
            lines.push(format!("(A_theory {:.4}, B_theory {:.4})", fb.a_theory.unwrap(), fb.b_theory.unwrap()));
        }
    }
    outcome(ok, lines.join("; "))
}

fn beurling() -> Outcome {
    let set = PointSet::lattice(0.5).unwrap();
    let d = beurling_lower_density(&set, 16.0).unwrap().density;
    outcome((d - 4.0).abs() <= 0.3, format!("density {d:.4} (target 4 +- 0.3)"))
}

fn hermite_config(n: usize, radius: f64, region: &str, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        window: WindowDesc::Hermite { n: idx(n) },
        signals: SignalFamily::Random { degree: 4, count: 2, seed },
        region: region.into(),
        radius,
        p: 2.0,
        trunc: 4.0,
        step: 1.0 / 32.0,
        calibration: CalibrationConstants::default(),
        tolerance: 0.05,
        search_half_width: None,
        raster_step: None,
        output: None,
    }
}

fn mixed_experiments(seed0: u64) -> Vec<ExperimentConfig> {
    let mut out = Vec::new();
    let mut seed = seed0;
    while out.len() < 50 {
        for n in 0..=2 {
            for radius in [0.5, 1.0] {
                let period = radius / 2.0;
                for region in
                    ["all".to_string(), format!("(strips {} {period})", period / 2.0), format!("(strips {} {period})", period / 4.0)]
                {
                    if out.len() < 50 {
                        out.push(hermite_config(n, radius, &region, seed));
                        seed += 1;
                    }
                }
            }
        }
    }
    out
}

fn calibration() -> Outcome {
    let train: Vec<_> = mixed_experiments(1000)
        .iter()
        .flat_map(|c| run_sampling_experiment(c).unwrap().reports)
        .collect();
    let c_hat = calibrate_constants(&train).unwrap().c_numerical;
    let cal = CalibrationConstants { c_numerical: 2.0 * c_hat, ..Default::default() };
    let mut held_out_failures = 0;
    for mut cfg in mixed_experiments(5000) {
        cfg.calibration = cal;
        held_out_failures += run_sampling_experiment(&cfg).unwrap().reports.iter().filter(|r| !r.passed()).count();
    }
    let mut monotone = true;
    let unit = CalibrationConstants::default();
    for n in 0..=2 {
        for radius in [0.5, 1.0, 2.0] {
            let logs: Vec<f64> =
                [0.25, 0.5, 1.0].iter().map(|&g| thm_main_bound(n, radius, g, 2.0, &unit).unwrap().bound_log).collect();
            monotone &= logs.windows(2).all(|w| w[1] <= w[0]);
        }
        for gamma in [0.25, 0.5, 1.0] {
            let logs: Vec<f64> =
                [0.5, 1.0, 2.0].iter().map(|&r| thm_main_bound(n, r, gamma, 2.0, &unit).unwrap().bound_log).collect();
            monotone &= logs.windows(2).all(|w| w[1] >= w[0]);
        }
    }
    outcome(
        held_out_failures == 0 && monotone,
        format!("C_hat {c_hat:.4}; {held_out_failures} held-out violations at C = 2 C_hat; sweep monotone: {monotone}"),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut all_same = true;
    for (k, mut cfg) in [hermite_config(1, 1.0, "(strips 0.125 0.5)", 77), hat_config("(strips 0.2 0.4)", 3)]
        .into_iter()
        .enumerate()
    {
        let path = dir.path().join(format!("exp{k}.json"));
        cfg.output = Some(path.clone());
        run_sampling_experiment(&cfg).unwrap();
        all_same &= replay(&read_record(&path).unwrap()).unwrap();
    }
    outcome(all_same, format!("replayed records identical: {all_same}"))
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("1 isometry", isometry),
        ("2 local reproducing formula", local_reproducing_formula),
        ("3 nu analytic values", nu_oracle),
        ("4 component bounds", balk_suite),
        ("5 two-variable extension", phi_extension),
        ("6 reduced Cauchy formula", cauchy),
        ("7 planar sampling end to end", planar_end_to_end),
        ("8 empirical frame bounds", frame_bounds),
        ("9 Beurling density", beurling),
        ("10 calibration and monotonicity", calibration),
        ("11 deterministic replay", determinism),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let t = Instant::now();
        let o = run();
        println!(
            "[{}] {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
