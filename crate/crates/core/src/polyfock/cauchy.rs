use std::f64::consts::PI;

use num_complex::Complex64;

use super::poly::ReducedPolyFunction;
use crate::error::{Error, Result};

pub const DEFAULT_CONTOUR_NODES: usize = 2048;

/// Lagrange basis `P_k(t) = Π_{j≠k} (R_j² - t)/(R_j² - R_k²)`.
fn lagrange_weight(sq: &[f64], k: usize, t: f64) -> f64 {
    sq.iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, &rj)| (rj - t) / (rj - sq[k]))
        .product()
}

/// Reconstructs `F(z)` for `|z| < R_0` from its values on the circles
/// `|t| = R_k`:
/// `F(z) = (2πi)^{-1} Σ_k P_k(|z|²) ∮_{|t|=R_k} F(t)/(t - z) dt`,
/// each contour integral by the trapezoid rule.
pub fn reduced_cauchy_eval(f: &ReducedPolyFunction, radii: &[f64], z: Complex64) -> Result<Complex64> {
    reduced_cauchy_eval_with(f, radii, z, DEFAULT_CONTOUR_NODES)
}

pub fn reduced_cauchy_eval_with(
    f: &ReducedPolyFunction,
    radii: &[f64],
    z: Complex64,
    nodes: usize,
) -> Result<Complex64> {
    if radii.len() < f.order() + 1 {
        return Err(Error::domain(format!(
            "an order-{} function needs at least {} radii",
            f.order(),
            f.order() + 1
        )));
    }
    if !(radii[0] > 0.0) || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("radii must be positive and strictly increasing"));
    }
    if !(z.norm() < radii[0]) {
        return Err(Error::domain("the point must lie inside the innermost circle"));
    }
    if nodes == 0 {
        return Err(Error::domain("need at least one contour node"));
    }
    let sq: Vec<f64> = radii.iter().map(|r| r * r).collect();
    let s = z.norm_sqr();
    let mut total = Complex64::new(0.0, 0.0);
    for (k, &rk) in radii.iter().enumerate() {
        // dt = i t dθ, so (2πi)^{-1} ∮ F(t)/(t-z) dt = (2π)^{-1} ∫ F(t) t/(t-z) dθ
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..nodes {
            let t = Complex64::from_polar(rk, 2.0 * PI * j as f64 / nodes as f64);
            acc += f.eval(t) * t / (t - z);
        }
        total += acc / nodes as f64 * lagrange_weight(&sq, k, s);
    }
    Ok(total)
}
