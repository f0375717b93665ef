//! Component bounds for polyanalytic polynomials on discs and their
//! two-variable holomorphic extension.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::{phi_extension_eval, sup_on_circle, sup_on_disc, PolyFunction, SupResolution};
use crate::bounds::{BoundReport, LogValue, LOG_SLACK};
use crate::error::{Error, Result};

/// Points per circle when taking sups of holomorphic functions, whose
/// maximum over a disc is attained on the boundary.
const CIRCLE_SAMPLES: usize = 4096;

/// `D_n(λ) = (2λ/(λ-1))^{n+2} (n+2)^{(n+2)²}`.
pub fn balk_dn(n: usize, lambda: f64) -> Result<LogValue> {
    if !(lambda > 1.0) {
        return Err(Error::domain(format!("D_n needs lambda > 1, got {lambda}")));
    }
    let m = (n + 2) as f64;
    let ln = if lambda.is_infinite() {
        m * 2f64.ln() + m * m * m.ln()
    } else {
        m * (2.0 * lambda / (lambda - 1.0)).ln() + m * m * m.ln()
    };
    Ok(LogValue::from_ln(ln))
}

/// `ln (2λ(n+2)/(λ-1))^{n+2}`.
fn ln_top_component_factor(n: usize, lambda: f64) -> f64 {
    let m = (n + 2) as f64;
    m * (2.0 * lambda * m / (lambda - 1.0)).ln()
}

/// Checks, for `M = sup_{D(0,λR)} |F|`,
///
/// * `sup_{D(0,R)} |F_k(z) z^k| ≤ D_n M` for every `k`, and
/// * `sup_{D(0,(1+λ)R/2)} |z^n F_n(z)| ≤ M (2λ(n+2)/(λ-1))^{n+2}`.
///
/// Left sides are certified upper bounds (sampled plus Lipschitz
/// correction) and `M` is a sampled value, so a pass is conclusive. The
/// report carries the inequality with the smallest margin.
pub fn component_bound_check(f: &PolyFunction, radius: f64, lambda: f64) -> Result<BoundReport> {
    component_bound_check_with(f, radius, lambda, SupResolution::DEFAULT)
}

pub fn component_bound_check_with(
    f: &PolyFunction,
    radius: f64,
    lambda: f64,
    res: SupResolution,
) -> Result<BoundReport> {
    if f.is_zero() {
        return Err(Error::domain("component bounds need a nonzero function"));
    }
    if !(radius > 0.0) {
        return Err(Error::domain("R must be positive"));
    }
    let dn = balk_dn(f.order(), lambda)?;
    let n = f.order();
    let big = sup_on_disc(|z| f.eval(z), lambda * radius, res, 0.0).sampled;
    let ln_m = big.ln();

    let mut worst: Option<(f64, f64, String)> = None;
    let mut consider = |emp: f64, theo: f64, label: String| {
        if worst.as_ref().is_none_or(|w| emp - theo > w.0 - w.1) {
            worst = Some((emp, theo, label));
        }
    };
    let mut lefts = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let lip = f.shifted_component_lipschitz(k, radius);
        let s = sup_on_circle(|z| f.component_eval(k, z) * z.powu(k as u32), radius, CIRCLE_SAMPLES, lip);
        lefts.push(s.upper);
        consider(s.upper.ln(), dn.ln + ln_m, format!("component k={k}"));
    }
    let r_mid = 0.5 * (1.0 + lambda) * radius;
    let lip = f.shifted_component_lipschitz(n, r_mid);
    let top = sup_on_circle(|z| f.component_eval(n, z) * z.powu(n as u32), r_mid, CIRCLE_SAMPLES, lip);
    let top_bound = ln_m + ln_top_component_factor(n, lambda);
    consider(top.upper.ln(), top_bound, "top component".into());

    let (emp, theo, label) = worst.expect("at least one inequality");
    let mut report = BoundReport::compare(
        "component_bound",
        format!("sup_D(0,R)|F_k z^k| <= D_n M and sup_D(0,(1+l)R/2)|z^n F_n| <= M(2l(n+2)/(l-1))^(n+2); tightest: {label}"),
        emp,
        theo,
        LOG_SLACK,
    )
    .input("R", radius)
    .input("lambda", lambda)
    .input("n", n as f64)
    .detail("M", big)
    .detail("ln_Dn", dn.ln)
    .detail("top_left", top.upper)
    .detail("ln_top_right", top_bound);
    for (k, v) in lefts.iter().enumerate() {
        report = report.detail(&format!("component_left_{k}"), *v);
    }
    Ok(report)
}

/// Checks `sup_{B(0,2R)} |Φ(F)| ≤ (4(n+2))^{(n+2)²} M` with
/// `M = sup_{D(0,4R)} |F|`. The ball in ℂ² is sampled by a 4-d grid with
/// `grid` points per real coordinate plus `sphere` points on its boundary
/// (seeded, reproducible).
pub fn phi_bound_check(f: &PolyFunction, radius: f64, grid: usize, sphere: usize, seed: u64) -> Result<BoundReport> {
    if f.is_zero() {
        return Err(Error::domain("extension bound needs a nonzero function"));
    }
    if !(radius > 0.0) {
        return Err(Error::domain("R must be positive"));
    }
    let n = f.order();
    let big = sup_on_disc(|z| f.eval(z), 4.0 * radius, SupResolution::DEFAULT, 0.0).sampled;
    let rb = 2.0 * radius;
    let mut sup: f64 = 0.0;
    let coord = |i: usize| if grid <= 1 { 0.0 } else { -rb + 2.0 * rb * i as f64 / (grid - 1) as f64 };
    for a in 0..grid {
        for b in 0..grid {
            for c in 0..grid {
                for d in 0..grid {
                    let v = [coord(a), coord(b), coord(c), coord(d)];
                    if v.iter().map(|t| t * t).sum::<f64>() <= rb * rb {
                        let z1 = Complex64::new(v[0], v[1]);
                        let z2 = Complex64::new(v[2], v[3]);
                        sup = sup.max(phi_extension_eval(f, z1, z2).norm());
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sphere {
        let mut v = [0.0f64; 4];
        loop {
            for t in &mut v {
                *t = rng.gen_range(-1.0..1.0);
            }
            let s = v.iter().map(|t| t * t).sum::<f64>();
            if s > 1e-6 && s <= 1.0 {
                let k = rb / s.sqrt();
                v.iter_mut().for_each(|t| *t *= k);
                break;
            }
        }
        let z1 = Complex64::new(v[0], v[1]);
        let z2 = Complex64::new(v[2], v[3]);
        sup = sup.max(phi_extension_eval(f, z1, z2).norm());
    }
    let m = (n + 2) as f64;
    let ln_const = m * m * (4.0 * m).ln();
    Ok(BoundReport::compare(
        "phi_extension_bound",
        "sup_B(0,2R)|Phi(F)| <= (4(n+2))^((n+2)^2) sup_D(0,4R)|F|",
        sup.ln(),
        ln_const + big.ln(),
        LOG_SLACK,
    )
    .input("R", radius)
    .input("n", n as f64)
    .detail("M", big)
    .detail("sup_phi", sup))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Verdict;

    #[test]
    fn dn_examples() {
        let d = balk_dn(0, 2.0).unwrap();
        assert!((d.value.unwrap() - 256.0).abs() < 1e-10);
        let big = balk_dn(0, 1e6).unwrap();
        assert!((big.value.unwrap() / 64.0 - 1.0).abs() < 1e-5);
        assert!(balk_dn(0, 1.0).is_err());
        let mut last = 0.0;
        for l in [3.0, 2.0, 1.5, 1.1, 1.01] {
            let v = balk_dn(2, l).unwrap().ln;
            assert!(v > last);
            last = v;
        }
        // overflow regime keeps the log
        let huge = balk_dn(20, 1.5).unwrap();
        assert!(huge.value.is_none() && huge.ln.is_finite());
    }

    #[test]
    fn constant_and_conjugate_examples() {
        let c = PolyFunction::from_real(&[&[0.7]]).unwrap();
        let r = component_bound_check_with(&c, 1.0, 2.0, SupResolution::new(32, 32)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let zbar = PolyFunction::from_real(&[&[0.0], &[1.0]]).unwrap();
        let r = component_bound_check_with(&zbar, 1.0, 2.0, SupResolution::new(64, 64)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let left = r.details["component_left_1"];
        assert!((left - 1.0).abs() < 1e-3, "{left}");
        assert!((r.details["M"] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_function_rejected() {
        let z = PolyFunction::from_real(&[&[0.0]]).unwrap();
        assert!(matches!(component_bound_check(&z, 1.0, 2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn phi_bound_on_small_examples() {
        let f = PolyFunction::from_real(&[&[1.0, 0.5], &[0.0, 0.0, 1.0]]).unwrap();
        let r = phi_bound_check(&f, 1.0, 7, 500, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }
}
