use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tfcore::PhasePoint;

/// Where a point set lives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointDomain {
    /// All points lie in `[-W, W]²`.
    Window { half_width: f64 },
    /// The points are one fundamental cell `[0, px) × [0, pξ)` of a set
    /// repeated periodically.
    Periodic { period_x: f64, period_xi: f64 },
}

/// Finite point set `Γ ⊂ ℂ` with its declared domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub points: Vec<PhasePoint>,
    pub domain: PointDomain,
}

impl PointSet {
    pub fn in_window(points: Vec<PhasePoint>, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::domain("window half-width must be positive"));
        }
        if points.iter().any(|p| p.x.abs() > half_width || p.xi.abs() > half_width) {
            return Err(Error::domain("point outside the declared window"));
        }
        Ok(Self { points, domain: PointDomain::Window { half_width } })
    }

    pub fn periodic(points: Vec<PhasePoint>, period_x: f64, period_xi: f64) -> Result<Self> {
        if !(period_x > 0.0 && period_xi > 0.0) {
            return Err(Error::domain("periods must be positive"));
        }
        let points = points
            .into_iter()
            .map(|p| PhasePoint::new(p.x.rem_euclid(period_x), p.xi.rem_euclid(period_xi)))
            .collect();
        Ok(Self { points, domain: PointDomain::Periodic { period_x, period_xi } })
    }

    /// `spacing·ℤ²` as a periodic set.
    pub fn lattice(spacing: f64) -> Result<Self> {
        Self::periodic(vec![PhasePoint::new(0.0, 0.0)], spacing, spacing)
    }

    /// `{(spacing·j, spacing·k) + δ_{jk}}` over the index box covering
    /// `[x0, x1] × [y0, y1]`, with `δ` uniform in `[-jitter, jitter]²`.
    pub fn jittered_lattice<R: Rng + ?Sized>(
        spacing: f64,
        jitter: f64,
        x_range: (f64, f64),
        xi_range: (f64, f64),
        rng: &mut R,
    ) -> Result<Self> {
        if !(spacing > 0.0) || !(jitter >= 0.0) {
            return Err(Error::domain("lattice needs spacing > 0 and jitter >= 0"));
        }
        let idx = |lo: f64, hi: f64| ((lo / spacing).ceil() as i64, (hi / spacing).floor() as i64);
        let (j0, j1) = idx(x_range.0, x_range.1);
        let (k0, k1) = idx(xi_range.0, xi_range.1);
        let mut points = Vec::new();
        for j in j0..=j1 {
            for k in k0..=k1 {
                let (dx, dy) = if jitter > 0.0 {
                    (rng.gen_range(-jitter..=jitter), rng.gen_range(-jitter..=jitter))
                } else {
                    (0.0, 0.0)
                };
                points.push(PhasePoint::new(j as f64 * spacing + dx, k as f64 * spacing + dy));
            }
        }
        let half = [x_range.0, x_range.1, xi_range.0, xi_range.1]
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
            + jitter;
        Self::in_window(points, half)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `#{Γ ∩ ([a0, a1) × [b0, b1))}`, counting periodic images.
    pub fn count_in(&self, a0: f64, a1: f64, b0: f64, b1: f64) -> usize {
        match self.domain {
            PointDomain::Window { .. } => self
                .points
                .iter()
                .filter(|p| p.x >= a0 && p.x < a1 && p.xi >= b0 && p.xi < b1)
                .count(),
            PointDomain::Periodic { period_x, period_xi } => {
                // #{k : p + kP ∈ [lo, hi)} = ceil((hi - p)/P) - ceil((lo - p)/P)
                let images = |p: f64, per: f64, lo: f64, hi: f64| {
                    (((hi - p) / per).ceil() - ((lo - p) / per).ceil()).max(0.0) as usize
                };
                self.points
                    .iter()
                    .map(|p| images(p.x, period_x, a0, a1) * images(p.xi, period_xi, b0, b1))
                    .sum()
            }
        }
    }
}

/// Finite-scale proxy of the lower Beurling density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeurlingEstimate {
    /// `min_z #{Γ ∩ (z + Q_R)} / R²` over the scanned anchors.
    pub density: f64,
    pub radius: f64,
    pub anchors: usize,
}

/// `min_z #{Γ ∩ (z + Q_R)} / R²` at `R = r_max`, with half-open squares and
/// anchors on a lattice of step `min(R, period)/8` (periodic sets) or `R/8`
/// across the window.
pub fn beurling_lower_density(pts: &PointSet, r_max: f64) -> Result<BeurlingEstimate> {
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(Error::domain("R_max must be positive and finite"));
    }
    let half = 0.5 * r_max;
    let (xs, ys): (Vec<f64>, Vec<f64>) = match pts.domain {
        PointDomain::Periodic { period_x, period_xi } => {
            let ax = |p: f64| {
                let n = ((8.0 * p / r_max.min(p)).ceil() as usize).max(1);
                (0..n).map(|k| k as f64 * p / n as f64).collect::<Vec<_>>()
            };
            (ax(period_x), ax(period_xi))
        }
        PointDomain::Window { half_width } => {
            if r_max > 2.0 * half_width / 4.0 {
                return Err(Error::domain(format!(
                    "R_max = {r_max} exceeds a quarter of the window side {}",
                    2.0 * half_width
                )));
            }
            let span = half_width - half;
            let n = (span / (r_max / 8.0)).ceil() as i64;
            let h = span / n as f64;
            let ax: Vec<f64> = (-n..=n).map(|k| k as f64 * h).collect();
            (ax.clone(), ax)
        }
    };
    let mut best = usize::MAX;
    for &x in &xs {
        for &y in &ys {
            best = best.min(pts.count_in(x - half, x + half, y - half, y + half));
        }
    }
    Ok(BeurlingEstimate {
        density: best as f64 / (r_max * r_max),
        radius: r_max,
        anchors: xs.len() * ys.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    pub min_gap: f64,
    pub uniformly_separated: bool,
}

/// Minimum pairwise distance (including periodic images) by a sweep over
/// points sorted by `x`.
pub fn separation_check(pts: &PointSet) -> Separation {
    let mut all: Vec<(PhasePoint, bool)> = pts.points.iter().map(|&p| (p, true)).collect();
    if let PointDomain::Periodic { period_x, period_xi } = pts.domain {
        for dx in -1..=1 {
            for dy in -1..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                all.extend(pts.points.iter().map(|p| {
                    (PhasePoint::new(p.x + dx as f64 * period_x, p.xi + dy as f64 * period_xi), false)
                }));
            }
        }
    }
    all.sort_by(|a, b| a.0.x.total_cmp(&b.0.x));
    let mut gap = f64::INFINITY;
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if all[j].0.x - all[i].0.x >= gap {
                break;
            }
            if all[i].1 || all[j].1 {
                gap = gap.min(all[i].0.dist(all[j].0));
            }
        }
    }
    Separation { min_gap: gap, uniformly_separated: gap > 0.0 }
}
