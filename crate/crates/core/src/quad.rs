//! Gauss–Legendre rules and an adaptive bisection integrator on top of them.
//!
//! Rules are built once per order with Newton iteration on the Legendre
//! three-term recurrence and cached for the life of the process.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::ops::{Add, Mul};
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance used by every adaptive integration in the crate.
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
/// Hard cap on the number of accepted panels in [`adaptive`].
pub const MAX_PANELS: usize = 1 << 14;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, refined by Newton.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<T, F>(&self, a: f64, b: f64, mut f: F) -> T
    where
        T: QuadValue,
        F: FnMut(f64) -> T,
    {
        let mut acc = T::zero();
        for (x, w) in self.mapped(a, b) {
            acc = acc + f(x) * w;
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Cached rule of the given order.
pub fn rule(order: usize) -> &'static GaussLegendre {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static GaussLegendre>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard
        .entry(order)
        .or_insert_with(|| Box::leak(Box::new(GaussLegendre::new(order))))
}

/// Values that can be accumulated by a quadrature rule.
pub trait QuadValue: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral<T> {
    pub value: T,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Adaptive Gauss–Legendre integration on `[a, b]`.
///
/// Each panel is compared against the sum over its two halves (16-point rule
/// on each); a panel is accepted when the discrepancy is below its
/// length-proportional share of `abs_tol`.
pub fn adaptive<T, F>(a: f64, b: f64, abs_tol: f64, mut f: F) -> Result<Integral<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration bounds must be finite"));
    }
    if a == b {
        return Ok(Integral { value: T::zero(), error_estimate: 0.0, panels: 0 });
    }
    let gl = rule(16);
    let total = (b - a).abs();
    let mut stack = vec![(a, b, gl.integrate(a, b, &mut f))];
    let mut value = T::zero();
    let mut err = 0.0;
    let mut panels = 0usize;
    while let Some((lo, hi, whole)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gl.integrate(lo, mid, &mut f);
        let right = gl.integrate(mid, hi, &mut f);
        let refined = left + right;
        let diff = (refined + whole * -1.0).magnitude();
        let share = abs_tol * (hi - lo).abs() / total;
        // Below ~1e-13 of the panel length, further bisection only chases rounding.
        if diff <= share.max(f64::EPSILON * refined.magnitude()) || (hi - lo).abs() < total * 1e-13 {
            value = value + refined;
            err += diff;
            panels += 1;
            if panels > MAX_PANELS {
                return Err(Error::capability("adaptive quadrature exceeded panel cap"));
            }
        } else {
            if stack.len() + panels >= MAX_PANELS {
                return Err(Error::capability("adaptive quadrature exceeded panel cap"));
            }
            stack.push((mid, hi, right));
            stack.push((lo, mid, left));
        }
    }
    Ok(Integral { value, error_estimate: err, panels })
}

/// Composite rule: `[a, b]` split into equal panels no longer than `max_len`,
/// each integrated with the cached rule of `order`. Returns the flattened
/// (node, weight) list.
pub fn composite_nodes(a: f64, b: f64, max_len: f64, order: usize) -> Vec<(f64, f64)> {
    if b <= a {
        return Vec::new();
    }
    let panels = ((b - a) / max_len).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let gl = rule(order);
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let hi = if p + 1 == panels { b } else { lo + h };
        out.extend(gl.mapped(lo, hi));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 33, 64] {
            let s: f64 = rule(n).weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "order {n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let gl = GaussLegendre::new(8);
        for deg in 0..16 {
            let got: f64 = gl.integrate(0.0, 1.0, |x: f64| x.powi(deg));
            let want = 1.0 / (deg as f64 + 1.0);
            assert!((got - want).abs() < 1e-14, "deg {deg}");
        }
    }

    #[test]
    fn adaptive_gaussian() {
        let r = adaptive(-8.0, 8.0, 1e-12, |x: f64| (-x * x).exp()).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn adaptive_complex_oscillatory() {
        // ∫_0^1 e^{2πi·7x} dx = 0
        let r: Integral<Complex64> =
            adaptive(0.0, 1.0, 1e-12, |x| Complex64::from_polar(1.0, 2.0 * PI * 7.0 * x)).unwrap();
        assert!(r.value.norm() < 1e-12);
    }

    #[test]
    fn adaptive_handles_kinks() {
        let r = adaptive(-1.0, 1.0, 1e-12, |x: f64| x.abs()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn composite_covers_interval() {
        let nodes = composite_nodes(-1.0, 3.0, 0.3, 16);
        let w: f64 = nodes.iter().map(|&(_, w)| w).sum();
        assert!((w - 4.0).abs() < 1e-13);
        assert!(composite_nodes(1.0, 1.0, 0.1, 16).is_empty());
    }
}
