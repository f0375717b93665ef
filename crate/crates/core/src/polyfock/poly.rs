use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn check_finite(components: &[Vec<Complex64>]) -> Result<()> {
    if components.is_empty() {
        return Err(Error::domain("need at least one component"));
    }
    if components.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::domain("non-finite coefficient"));
    }
    Ok(())
}

fn random_unit_disc<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    loop {
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if c.norm_sqr() < 1.0 {
            return c;
        }
    }
}

fn random_components<R: Rng + ?Sized>(order: usize, degree: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    let mut comps: Vec<Vec<Complex64>> = (0..=order)
        .map(|_| (0..=degree).map(|_| random_unit_disc(rng)).collect())
        .collect();
    // keep the declared order: the top component must not vanish
    if comps[order].iter().all(|c| c.norm() == 0.0) {
        comps[order][0] = Complex64::new(1.0, 0.0);
    }
    comps
}

/// Polyanalytic polynomial `F(z) = Σ_k F_k(z) z̄^k` with holomorphic
/// polynomial components; `components[k][j]` is the coefficient of `z^j`
/// in `F_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct PolyFunction {
    components: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    components: Vec<Vec<Complex64>>,
}

impl TryFrom<PolyRepr> for PolyFunction {
    type Error = Error;

    fn try_from(r: PolyRepr) -> Result<Self> {
        Self::new(r.components)
    }
}

impl From<PolyFunction> for PolyRepr {
    fn from(p: PolyFunction) -> Self {
        PolyRepr { components: p.components }
    }
}

impl PolyFunction {
    pub fn new(components: Vec<Vec<Complex64>>) -> Result<Self> {
        check_finite(&components)?;
        Ok(Self { components })
    }

    pub fn from_real(components: &[&[f64]]) -> Result<Self> {
        Self::new(
            components
                .iter()
                .map(|c| c.iter().map(|&v| Complex64::new(v, 0.0)).collect())
                .collect(),
        )
    }

    /// Components of degree `≤ degree` and order exactly `order`, with
    /// coefficients uniform in the unit disc.
    pub fn random<R: Rng + ?Sized>(order: usize, degree: usize, rng: &mut R) -> Self {
        Self { components: random_components(order, degree, rng) }
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    /// Index of the last nonzero component.
    pub fn order(&self) -> usize {
        self.components
            .iter()
            .rposition(|c| c.iter().any(|a| a.norm() != 0.0))
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(|a| a.norm() == 0.0)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { components: self.components.iter().map(|c| c.iter().map(|a| a * s).collect()).collect() }
    }

    pub fn component_eval(&self, k: usize, z: Complex64) -> Complex64 {
        self.components.get(k).map_or(Complex64::new(0.0, 0.0), |c| horner(c, z))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zc = z.conj();
        self.components
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * zc + horner(c, z))
    }

    /// Upper bound for `|∂_z F| + |∂_z̄ F|` on `D(0, r)`, hence a Lipschitz
    /// constant of `F` there.
    pub fn lipschitz_bound(&self, r: f64) -> f64 {
        let mut acc = 0.0;
        for (k, comp) in self.components.iter().enumerate() {
            for (j, a) in comp.iter().enumerate() {
                let d = j + k;
                if d > 0 {
                    acc += a.norm() * d as f64 * r.powi(d as i32 - 1);
                }
            }
        }
        acc
    }

    /// Lipschitz bound of `z ↦ z^k F_k(z)` on `D(0, r)`.
    pub(crate) fn shifted_component_lipschitz(&self, k: usize, r: f64) -> f64 {
        self.components.get(k).map_or(0.0, |comp| {
            comp.iter()
                .enumerate()
                .filter(|(j, _)| j + k > 0)
                .map(|(j, a)| a.norm() * (j + k) as f64 * r.powi((j + k) as i32 - 1))
                .sum()
        })
    }
}

/// `F(z) = Σ_k F_k(z) z̄^k`.
pub fn poly_eval(f: &PolyFunction, z: Complex64) -> Complex64 {
    f.eval(z)
}

/// `Φ(F)(z1, z2) = Σ_k F_k(z1 + i z2)(z1 - i z2)^k`, holomorphic on ℂ² and
/// equal to `F(x + iy)` at real `(x, y)`.
pub fn phi_extension_eval(f: &PolyFunction, z1: Complex64, z2: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let w = z1 + i * z2;
    let wc = z1 - i * z2;
    f.components
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * wc + horner(c, w))
}

/// Reduced polyanalytic polynomial `F(z) = Σ_k H_k(z) |z|^{2k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedPolyFunction {
    components: Vec<Vec<Complex64>>,
}

impl ReducedPolyFunction {
    pub fn new(components: Vec<Vec<Complex64>>) -> Result<Self> {
        check_finite(&components)?;
        Ok(Self { components })
    }

    pub fn random<R: Rng + ?Sized>(order: usize, degree: usize, rng: &mut R) -> Self {
        Self { components: random_components(order, degree, rng) }
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    pub fn order(&self) -> usize {
        self.components
            .iter()
            .rposition(|c| c.iter().any(|a| a.norm() != 0.0))
            .unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let s = z.norm_sqr();
        self.components
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * s + horner(c, z))
    }

    /// The same function in the form `Σ_k F_k(z) z̄^k` with `F_k = z^k H_k`.
    pub fn to_poly(&self) -> PolyFunction {
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(k, h)| {
                let mut c = vec![Complex64::new(0.0, 0.0); k];
                c.extend_from_slice(h);
                c
            })
            .collect();
        PolyFunction { components }
    }
}

/// Node counts of a polar sampling grid on a disc: rings at radii
/// `r·i/radial` for `i = 1..=radial` plus the centre, each with `angular`
/// equispaced points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupResolution {
    pub radial: usize,
    pub angular: usize,
}

impl SupResolution {
    pub const DEFAULT: SupResolution = SupResolution { radial: 512, angular: 512 };

    pub fn new(radial: usize, angular: usize) -> Self {
        Self { radial: radial.max(1), angular: angular.max(1) }
    }

    /// Every point of the disc lies within this distance of a sample.
    pub fn mesh(&self, r: f64) -> f64 {
        r / (2.0 * self.radial as f64) + r * PI / self.angular as f64
    }
}

impl Default for SupResolution {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Sampled supremum of `|f|` over a disc together with a certified upper
/// bound `sampled + lipschitz · mesh`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub sampled: f64,
    pub upper: f64,
    pub argmax: Complex64,
}

pub(crate) fn polar_points(r: f64, res: SupResolution) -> impl Iterator<Item = Complex64> {
    let n = res.radial;
    let m = res.angular;
    std::iter::once(Complex64::new(0.0, 0.0)).chain((1..=n).flat_map(move |i| {
        let rho = r * i as f64 / n as f64;
        (0..m).map(move |j| Complex64::from_polar(rho, 2.0 * PI * j as f64 / m as f64))
    }))
}

/// Sampled sup of `|f|` over `D(0, r)` at the given resolution.
pub fn sup_on_disc<F>(f: F, r: f64, res: SupResolution, lipschitz: f64) -> SupEstimate
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let n = res.radial;
    let m = res.angular;
    let best = (0..=n)
        .into_par_iter()
        .map(|i| {
            let rho = r * i as f64 / n as f64;
            let count = if i == 0 { 1 } else { m };
            let mut b = (0.0f64, Complex64::new(0.0, 0.0));
            for j in 0..count {
                let z = Complex64::from_polar(rho, 2.0 * PI * j as f64 / m as f64);
                let v = f(z).norm();
                if v > b.0 {
                    b = (v, z);
                }
            }
            b
        })
        .reduce(|| (0.0, Complex64::new(0.0, 0.0)), |a, b| if b.0 > a.0 { b } else { a });
    SupEstimate { sampled: best.0, upper: best.0 + lipschitz * res.mesh(r), argmax: best.1 }
}

/// Sampled sup of `|f|` on the circle `|z| = r` with `count` equispaced
/// points, with the arc-length Lipschitz correction.
pub fn sup_on_circle<F>(f: F, r: f64, count: usize, lipschitz: f64) -> SupEstimate
where
    F: Fn(Complex64) -> Complex64,
{
    let mut best = (0.0f64, Complex64::new(r, 0.0));
    for j in 0..count {
        let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / count as f64);
        let v = f(z).norm();
        if v > best.0 {
            best = (v, z);
        }
    }
    SupEstimate { sampled: best.0, upper: best.0 + lipschitz * PI * r / count as f64, argmax: best.1 }
}
