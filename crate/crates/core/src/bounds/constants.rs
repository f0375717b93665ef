use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::report::{real, BoundReport, LogValue};
use crate::error::{Error, Result};
use crate::geometry::{density_gamma, BivariatePoly, DensityMode, DensityQuery, Region};
use crate::specfun::{nu, WindowSpec};

/// The unnamed numerical constant `C` of the Hermite-window sampling bound
/// and the constants `(κ, c)` of the plurisubharmonic Remez inequality.
/// None of them is known explicitly, so they are runtime parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationConstants {
    #[serde(rename = "C_numerical")]
    pub c_numerical: f64,
    pub kappa: f64,
    pub c_brudnyi: f64,
}

impl Default for CalibrationConstants {
    fn default() -> Self {
        Self { c_numerical: 1.0, kappa: 1.0, c_brudnyi: 1.0 }
    }
}

impl CalibrationConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("C_numerical", self.c_numerical), ("kappa", self.kappa), ("c_brudnyi", self.c_brudnyi)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("R must be positive and finite, got {r}")));
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::domain(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    Ok(())
}

/// `(n+2)² ln 4(n+2)`
fn ln_extension_constant(n: usize) -> f64 {
    let m = (n + 2) as f64;
    m * m * (4.0 * m).ln()
}

/// `n² ln n`, read as 0 at `n ∈ {0, 1}`.
fn n2_ln_n(n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        let x = n as f64;
        x * x * x.ln()
    }
}

/// Exponent of the sup-norm Remez estimate for `V_{h_n} f` on a disc:
/// `K = c[ln(γ/m) + 8πR² + ln(1/ν_n(R)) + (n+2)² ln 4(n+2)]`, where
/// `γ = sup_{D(w,5R)} |V|` and `m = |V(w)|`.
pub fn k_constant(radius: f64, n: usize, gamma_local: f64, m: f64, cal: &CalibrationConstants) -> Result<f64> {
    check_radius(radius)?;
    if !(m > 0.0) {
        return Err(Error::domain(format!("m must be positive, got {m}")));
    }
    if !(gamma_local > 0.0) {
        return Err(Error::domain(format!("the local sup must be positive, got {gamma_local}")));
    }
    let ln_nu = nu(n, radius)?.ln();
    Ok(cal.c_brudnyi
        * ((gamma_local / m).ln() + 8.0 * PI * radius * radius - ln_nu + ln_extension_constant(n)))
}

/// `ln` of `e^{πR²/2} (κ|D(0,R)|/|Ω|)^K`, the factor in
/// `sup_{D(w,R)} |V| ≤ factor · sup_{Ω∩D(w,R)} |V|`.
pub fn sup_remez_factor_log(radius: f64, k: f64, omega_area: f64, cal: &CalibrationConstants) -> Result<f64> {
    check_radius(radius)?;
    if !(omega_area > 0.0) {
        return Err(Error::domain("the region must have positive measure"));
    }
    Ok(PI * radius * radius / 2.0 + k * (cal.kappa * PI * radius * radius / omega_area).ln())
}

/// `ln` of `e^{πR²/2} (2κ|D(0,R)|/|Ω|)^{K+1}`, the factor in the
/// `L^p(D(w,R)) ≤ factor · L^p(Ω∩D(w,R))` estimate. The exponent is
/// `K + 1` on norms, that is `p(K+1)` on `p`-th powers.
pub fn lp_remez_factor_log(radius: f64, k: f64, omega_area: f64, cal: &CalibrationConstants) -> Result<f64> {
    check_radius(radius)?;
    if !(omega_area > 0.0) {
        return Err(Error::domain("the region must have positive measure"));
    }
    Ok(PI * radius * radius / 2.0 + (k + 1.0) * (2.0 * cal.kappa * PI * radius * radius / omega_area).ln())
}

/// Constants of the Hermite-window sampling bound
/// `‖V f‖_{L^p(ℂ)} ≤ η (γ/C)^{-σ} ‖V f‖_{L^p(Ω)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainBound {
    pub sigma: f64,
    /// `σ + 1`, the uniform bound on the Remez exponent over good discs.
    pub b: f64,
    #[serde(with = "real")]
    pub eta_log: f64,
    #[serde(with = "real")]
    pub bound_log: f64,
    pub nu: f64,
}

impl MainBound {
    pub fn eta(&self) -> LogValue {
        LogValue::from_ln(self.eta_log)
    }

    pub fn bound(&self) -> LogValue {
        LogValue::from_ln(self.bound_log)
    }
}

/// `σ = C(R² + ln(1/ν_n(R)) + n² ln n + 1)`, `η = (R²/ν_n(R)) C^{R²+1}`,
/// bound `= η (γ/C)^{-σ}`. The `p` argument is accepted for symmetry with
/// the experiments; the constants do not depend on it.
pub fn thm_main_bound(n: usize, radius: f64, gamma: f64, p: f64, cal: &CalibrationConstants) -> Result<MainBound> {
    check_radius(radius)?;
    check_gamma(gamma)?;
    cal.validate()?;
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain(format!("need 1 <= p < inf, got {p}")));
    }
    let c = cal.c_numerical;
    let v = nu(n, radius)?;
    let r2 = radius * radius;
    let sigma = c * (r2 - v.ln() + n2_ln_n(n) + 1.0);
    let eta_log = r2.ln() - v.ln() + (r2 + 1.0) * c.ln();
    let bound_log = eta_log - sigma * (gamma / c).ln();
    Ok(MainBound { sigma, b: sigma + 1.0, eta_log, bound_log, nu: v })
}

/// Jittered-lattice frame condition for a window with `g, tg ∈ H¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SunZhou {
    pub delta: f64,
    pub condition_met: bool,
    pub a_lower: f64,
    pub b_upper: f64,
}

/// `Δ = (2R/π)(‖g'‖ + ‖tg‖ + (2R/π)‖tg'‖)`; when `Δ < ‖g‖` the
/// side-length-weighted system is a frame with bounds `(‖g‖ ∓ Δ)²`.
pub fn sunzhou_check(g: &WindowSpec, radius: f64) -> Result<SunZhou> {
    check_radius(radius)?;
    let w = g.norms();
    let s = 2.0 * radius / PI;
    let delta = s * (w.deriv_l2 + w.t_weighted_l2 + s * w.t_weighted_deriv_l2);
    Ok(SunZhou {
        delta,
        condition_met: delta < w.l2,
        a_lower: (w.l2 - delta).powi(2),
        b_upper: (w.l2 + delta).powi(2),
    })
}

/// Frame bounds for `{π(z_{n,m}) g}` with one point per square of side `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub struct CompactFrame {
    #[serde(rename = "R_g")]
    pub r_g: f64,
    pub admissible: bool,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

/// `R_g = min(π‖g‖/(4‖g'‖), 1/(2S))`,
/// `A = (1/(3R²))(‖g‖ - (4R/π)‖g'‖)²`, `B = (2/R²)(‖g‖ + (2R/π)‖g'‖)²`.
pub fn compact_frame_bounds(g: &WindowSpec, radius: f64) -> Result<CompactFrame> {
    check_radius(radius)?;
    let s = g
        .compact_half_width()
        .ok_or_else(|| Error::capability("frame bounds need a compactly supported window"))?;
    let w = g.norms();
    let r_g = (PI * w.l2 / (4.0 * w.deriv_l2)).min(1.0 / (2.0 * s));
    let r2 = radius * radius;
    Ok(CompactFrame {
        r_g,
        admissible: radius < r_g,
        a: (w.l2 - 4.0 * radius / PI * w.deriv_l2).powi(2) / (3.0 * r2),
        b: 2.0 * (w.l2 + 2.0 * radius / PI * w.deriv_l2).powi(2) / r2,
    })
}

/// Planar sampling constant `C = ‖g‖²/(A R²) · γ^{-1}` in
/// `∫_ℂ |V_g f|² ≤ C ∫_Ω |V_g f|²` for `(γ, R)`-dense `Ω` (square cells).
pub fn planar_sampling_bound(g: &WindowSpec, radius: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let fr = compact_frame_bounds(g, radius)?;
    if !fr.admissible {
        return Err(Error::domain(format!("R = {radius} is not below R_g = {}", fr.r_g)));
    }
    let l2 = g.norms().l2;
    Ok(l2 * l2 / (fr.a * radius * radius) / gamma)
}

/// Lower bound `C` in `∫ |p(z, z̄) V_g f(z)|² dz ≥ C ‖f‖²`.
///
/// For each `ε` the level set `{|p| ≥ ε}` has square density `γ(ε)`, and
/// `∫ |pV|² ≥ ε² ∫_Ω |V|² ≥ ε² ‖g‖² ‖f‖² / C_samp(γ(ε))`. The report's
/// theoretical value is the best such `C` on the grid; `ε` with `γ = 0` are
/// skipped. Level sets are aperiodic, so the density scan runs over
/// anchors in `[-search, search]²`.
pub fn heisenberg_bound(
    g: &WindowSpec,
    poly: &BivariatePoly,
    radius: f64,
    eps_grid: &[f64],
    search_half_width: f64,
) -> Result<BoundReport> {
    if poly.is_zero() {
        return Err(Error::domain("the polynomial must be nonzero"));
    }
    let fr = compact_frame_bounds(g, radius)?;
    if !fr.admissible {
        return Err(Error::domain(format!("R = {radius} is not below R_g = {}", fr.r_g)));
    }
    let l2sq = g.norms().l2.powi(2);
    let q = DensityQuery::new(radius, DensityMode::Square).with_search_window(search_half_width);
    let mut best: Option<(f64, f64, f64)> = None;
    for &eps in eps_grid {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::domain(format!("epsilon must be positive, got {eps}")));
        }
        let region = Region::LevelSet { poly: poly.clone(), eps };
        let gamma = density_gamma(&region, &q)?.gamma;
        if gamma <= 0.0 {
            continue;
        }
        let c = eps * eps * l2sq / planar_sampling_bound(g, radius, gamma)?;
        if best.is_none_or(|b| c > b.0) {
            best = Some((c, eps, gamma));
        }
    }
    let statement = "int |p V_g f|^2 >= C ||f||^2";
    let report = match best {
        Some((c, eps, gamma)) => BoundReport::informational("heisenberg", statement)
            .with_theoretical_log(c.ln())
            .detail("C", c)
            .detail("epsilon", eps)
            .detail("gamma", gamma),
        None => BoundReport::informational("heisenberg", format!("{statement}; no epsilon on the grid gives gamma > 0")),
    };
    Ok(report.input("R", radius).input("grid_points", eps_grid.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::HermiteIndex;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn hat() -> WindowSpec {
        WindowSpec::hat(1.0).unwrap()
    }

    #[test]
    fn k_example() {
        let cal = CalibrationConstants::default();
        let k = k_constant(1.0, 0, 50.0 * PI, 1.0, &cal).unwrap();
        let oracle = (50.0 * PI).ln() + 8.0 * PI - (1.0 - (-PI).exp()).ln() + 4.0 * 8f64.ln();
        assert!(rel(k, oracle) < 1e-12);
        assert!((k - 38.55).abs() < 5e-3, "{k}");
        let k1 = k_constant(1.0, 0, 2.0, 2.0, &cal).unwrap();
        assert!((k1 - (8.0 * PI - (1.0 - (-PI).exp()).ln() + 4.0 * 8f64.ln())).abs() < 1e-12);
        assert!(matches!(k_constant(1.0, 0, 1.0, 0.0, &cal), Err(Error::Domain(_))));
    }

    #[test]
    fn main_bound_example() {
        let cal = CalibrationConstants::default();
        let b = thm_main_bound(0, 1.0, 0.5, 2.0, &cal).unwrap();
        let nu0 = 1.0 - (-PI).exp();
        assert!(rel(b.sigma, 2.0 - nu0.ln()) < 1e-12);
        assert!((b.sigma - 2.0442).abs() < 1e-4);
        assert!((b.eta().value.unwrap() - 1.0452).abs() < 1e-4);
        assert!(rel(b.bound().value.unwrap(), 0.5f64.powf(-b.sigma) / nu0) < 1e-12);
        // unit base gives η exactly
        let at_one = thm_main_bound(0, 1.0, 1.0, 2.0, &cal).unwrap();
        assert_eq!(at_one.bound_log, at_one.eta_log);
        assert!(thm_main_bound(0, 1.0, 0.0, 2.0, &cal).is_err());
        assert!(thm_main_bound(0, 1.0, 1.5, 2.0, &cal).is_err());
    }

    #[test]
    fn main_bound_with_nontrivial_c() {
        let cal = CalibrationConstants { c_numerical: 3.0, ..Default::default() };
        let b = thm_main_bound(2, 0.5, 0.25, 1.0, &cal).unwrap();
        let v = nu(2, 0.5).unwrap();
        let sigma = 3.0 * (0.25 - v.ln() + 4.0 * 2f64.ln() + 1.0);
        let eta = 0.25 / v * 3f64.powf(1.25);
        assert!(rel(b.sigma, sigma) < 1e-12);
        assert!(rel(b.eta().value.unwrap(), eta) < 1e-12);
        assert!(rel(b.bound().value.unwrap(), eta * (0.25f64 / 3.0).powf(-sigma)) < 1e-12);
    }

    #[test]
    fn sunzhou_example() {
        let s = sunzhou_check(&hat(), 0.2).unwrap();
        let k = 0.4 / PI;
        let oracle = k * (2f64.sqrt() + (1.0f64 / 15.0).sqrt() + k * (2.0f64 / 3.0).sqrt());
        assert!(rel(s.delta, oracle) < 1e-12);
        assert!((s.delta - 0.22616).abs() < 2e-5);
        assert!(s.condition_met);
        let tiny = sunzhou_check(&hat(), 1e-9).unwrap();
        assert!((tiny.a_lower - 2.0 / 3.0).abs() < 1e-8);
        assert!(!sunzhou_check(&hat(), 1.0).unwrap().condition_met);
    }

    #[test]
    fn compact_frame_examples() {
        let f = compact_frame_bounds(&hat(), 0.4).unwrap();
        assert!(rel(f.r_g, PI / (4.0 * 3f64.sqrt())) < 1e-12);
        assert!((f.r_g - 0.45345).abs() < 1e-5);
        assert!(f.admissible);
        assert!((f.a - 0.01930).abs() < 1e-5, "{}", f.a);
        let f2 = compact_frame_bounds(&hat(), 0.2).unwrap();
        assert!((f2.a - 1.7355).abs() < 2e-4, "{}", f2.a);
        let herm = WindowSpec::hermite(HermiteIndex::new(0).unwrap()).unwrap();
        assert!(matches!(compact_frame_bounds(&herm, 0.2), Err(Error::Capability(_))));
    }

    #[test]
    fn planar_example_and_specialization() {
        let c = planar_sampling_bound(&hat(), 0.4, 0.5).unwrap();
        let closed = 6.0 * (1.0 - 4.0 * 3f64.sqrt() / PI * 0.4).powi(-2);
        assert!(rel(c, closed) < 1e-12);
        assert!((c - 431.8).abs() < 0.1, "{c}");
        assert!(matches!(planar_sampling_bound(&hat(), 0.46, 0.5), Err(Error::Domain(_))));
        assert!(planar_sampling_bound(&hat(), 0.3, 0.5).unwrap() > planar_sampling_bound(&hat(), 0.3, 0.6).unwrap());
    }

    #[test]
    fn heisenberg_constant_polynomial() {
        let one = BivariatePoly::from_real(&[1.0]).unwrap();
        let r = heisenberg_bound(&hat(), &one, 0.2, &[0.5, 1.0, 2.0], 0.0).unwrap();
        // ε = 2 empties the level set; ε = 1 keeps all of ℂ
        assert!((r.details["epsilon"] - 1.0).abs() < 1e-15);
        let expected = (2.0 / 3.0) / planar_sampling_bound(&hat(), 0.2, 1.0).unwrap();
        assert!(rel(r.details["C"], expected) < 1e-12);
        let none = heisenberg_bound(&hat(), &one, 0.2, &[2.0], 0.0).unwrap();
        assert!(none.theoretical_log.is_none());
    }

    #[test]
    fn heisenberg_modulus_squared() {
        // z z̄ is the fourth graded-lex coefficient
        let p = BivariatePoly::from_real(&[0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let r = heisenberg_bound(&hat(), &p, 0.2, &[0.01, 0.04], 0.6).unwrap();
        assert!(r.details["gamma"] > 0.0 && r.details["C"] > 0.0);
    }
}
