use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::region::{AxisPeriod, Region};
use crate::error::{Error, Result};
use crate::tfcore::PhasePoint;

/// Shape of the test cell in the density quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMode {
    /// `|Ω ∩ D(z, R)| / (πR²)`
    Disc,
    /// `|Ω ∩ (z + Q_R)| / R²` with `Q_R` the closed square of side `R`
    /// centred at the origin.
    Square,
}

impl std::str::FromStr for DensityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disc" => Ok(DensityMode::Disc),
            "square" => Ok(DensityMode::Square),
            _ => Err(Error::domain(format!("unknown density mode '{s}'"))),
        }
    }
}

/// A cell `D(z, r)` or `z + Q_side`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Disc { center: PhasePoint, radius: f64 },
    Square { center: PhasePoint, side: f64 },
}

impl Cell {
    pub fn new(mode: DensityMode, center: PhasePoint, r: f64) -> Self {
        match mode {
            DensityMode::Disc => Cell::Disc { center, radius: r },
            DensityMode::Square => Cell::Square { center, side: r },
        }
    }

    fn bbox_half(&self) -> f64 {
        match *self {
            Cell::Disc { radius, .. } => radius,
            Cell::Square { side, .. } => 0.5 * side,
        }
    }

    fn center(&self) -> PhasePoint {
        match *self {
            Cell::Disc { center, .. } | Cell::Square { center, .. } => center,
        }
    }

    fn contains_offset(&self, dx: f64, dy: f64) -> bool {
        match *self {
            Cell::Disc { radius, .. } => dx * dx + dy * dy <= radius * radius,
            Cell::Square { side, .. } => dx.abs() <= 0.5 * side && dy.abs() <= 0.5 * side,
        }
    }
}

/// Midpoint-rule area of `Ω ∩ cell`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    pub area: f64,
    /// Pixel area times the number of pixels straddling the boundary of
    /// `Ω` or of the cell.
    pub error: f64,
    /// `count(Ω ∩ cell) / count(cell)`; exactly 1 for `Ω = ℂ`.
    pub fraction: f64,
    /// Number of in-cell pixels cut by the boundary of `Ω`, divided by the
    /// number of in-cell pixels.
    pub fraction_error: f64,
}

pub fn region_area_in(region: &Region, cell: Cell, raster_step: f64) -> Result<AreaEstimate> {
    let half = cell.bbox_half();
    if !(half > 0.0) || !(raster_step > 0.0) {
        return Err(Error::domain("cell size and raster step must be positive"));
    }
    let n = ((2.0 * half / raster_step).ceil() as usize).max(1);
    let px = 2.0 * half / n as f64;
    let c = cell.center();
    // 0 = outside cell, 1 = in cell not in Ω, 2 = in cell and in Ω
    let mut grid = vec![0u8; n * n];
    for i in 0..n {
        let dx = -half + (i as f64 + 0.5) * px;
        for j in 0..n {
            let dy = -half + (j as f64 + 0.5) * px;
            if cell.contains_offset(dx, dy) {
                grid[i * n + j] = 1 + region.contains(c.x + dx, c.xi + dy) as u8;
            }
        }
    }
    let (mut in_cell, mut in_both, mut omega_edge, mut cell_edge) = (0usize, 0usize, 0usize, 0usize);
    for i in 0..n {
        for j in 0..n {
            let v = grid[i * n + j];
            if v == 0 {
                continue;
            }
            in_cell += 1;
            in_both += (v == 2) as usize;
            let nbrs = [
                (i > 0).then(|| grid[(i - 1) * n + j]),
                (i + 1 < n).then(|| grid[(i + 1) * n + j]),
                (j > 0).then(|| grid[i * n + j - 1]),
                (j + 1 < n).then(|| grid[i * n + j + 1]),
            ];
            if nbrs.iter().any(|w| matches!(w, Some(w) if *w != 0 && *w != v)) {
                omega_edge += 1;
            }
            if nbrs.iter().any(|w| matches!(w, None | Some(0))) {
                cell_edge += 1;
            }
        }
    }
    let pa = px * px;
    if in_cell == 0 {
        return Err(Error::domain("raster step too coarse for the cell"));
    }
    Ok(AreaEstimate {
        area: in_both as f64 * pa,
        error: (omega_edge + cell_edge) as f64 * pa,
        fraction: in_both as f64 / in_cell as f64,
        fraction_error: omega_edge as f64 / in_cell as f64,
    })
}

/// Parameters of a `(γ, R)` density scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityQuery {
    pub radius: f64,
    pub mode: DensityMode,
    pub raster_step: f64,
    /// Half-width of the anchor search square for aperiodic directions.
    pub search_half_width: Option<f64>,
}

impl DensityQuery {
    pub fn new(radius: f64, mode: DensityMode) -> Self {
        Self { radius, mode, raster_step: radius / 64.0, search_half_width: None }
    }

    pub fn with_raster_step(mut self, step: f64) -> Self {
        self.raster_step = step;
        self
    }

    pub fn with_search_window(mut self, half_width: f64) -> Self {
        self.search_half_width = Some(half_width);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::domain("density radius must be positive"));
        }
        if !(self.raster_step > 0.0) || self.raster_step > self.radius / 32.0 * (1.0 + 1e-12) {
            return Err(Error::domain("raster step must lie in (0, R/32]"));
        }
        if let Some(w) = self.search_half_width {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::domain("search window must be finite and nonnegative"));
            }
        }
        Ok(())
    }

    pub fn scan_step(&self) -> f64 {
        self.radius / 8.0
    }
}

/// Outcome of a density scan. `gamma` is the smallest cell fraction seen,
/// so it bounds the true infimum from above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityResult {
    pub gamma: f64,
    /// `gamma · (1 - fraction_error)` at the minimising anchor.
    pub gamma_conservative: f64,
    pub fraction_error: f64,
    pub argmin: PhasePoint,
    pub anchors: usize,
    pub scan_step: f64,
    pub raster_step: f64,
    pub radius: f64,
    pub mode: DensityMode,
}

fn axis_anchors(period: AxisPeriod, step: f64, window: Option<f64>, axis: &str) -> Result<Vec<f64>> {
    match period {
        AxisPeriod::Invariant => Ok(vec![0.0]),
        AxisPeriod::Period(p) => {
            let n = ((p / step).ceil() as usize).max(1);
            Ok((0..n).map(|k| k as f64 * p / n as f64).collect())
        }
        AxisPeriod::Aperiodic => {
            let w = window.ok_or_else(|| {
                Error::capability(format!(
                    "region is aperiodic in {axis}; the infimum scan needs a finite search window"
                ))
            })?;
            let n = (w / step).ceil() as i64;
            let h = if n == 0 { 0.0 } else { w / n as f64 };
            Ok((-n..=n).map(|k| k as f64 * h).collect())
        }
    }
}

/// Approximates `γ = inf_z |Ω ∩ cell(z)| / |cell|` by scanning anchors on a
/// lattice of step `R/8` over one period (periodic axes) or the search
/// window (aperiodic axes).
pub fn density_gamma(region: &Region, q: &DensityQuery) -> Result<DensityResult> {
    q.validate()?;
    let (px, py) = region.period();
    let step = q.scan_step();
    let xs = axis_anchors(px, step, q.search_half_width, "x")?;
    let ys = axis_anchors(py, step, q.search_half_width, "xi")?;
    let anchors: Vec<PhasePoint> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| PhasePoint::new(x, y)))
        .collect();
    let results: Vec<AreaEstimate> = anchors
        .par_iter()
        .map(|&z| region_area_in(region, Cell::new(q.mode, z, q.radius), q.raster_step))
        .collect::<Result<_>>()?;
    let (k, best) = results
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.fraction.total_cmp(&b.1.fraction))
        .expect("at least one anchor");
    Ok(DensityResult {
        gamma: best.fraction,
        gamma_conservative: best.fraction * (1.0 - best.fraction_error).max(0.0),
        fraction_error: best.fraction_error,
        argmin: anchors[k],
        anchors: anchors.len(),
        scan_step: step,
        raster_step: q.raster_step,
        radius: q.radius,
        mode: q.mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn origin() -> PhasePoint {
        PhasePoint::new(0.0, 0.0)
    }

    #[test]
    fn area_examples() {
        let step = 1.0 / 64.0;
        let a = region_area_in(&Region::All, Cell::Disc { center: origin(), radius: 1.0 }, step).unwrap();
        assert!((a.area - PI).abs() <= a.error, "{a:?}");
        assert_eq!(a.fraction, 1.0);
        let hp = Region::HalfPlane { a: 1.0, b: 0.0, c: 0.0 };
        let a = region_area_in(&hp, Cell::Disc { center: origin(), radius: 1.0 }, step).unwrap();
        assert!((a.area - PI / 2.0).abs() <= a.error, "{a:?}");
        let s = Region::Strips { width: 0.5, period: 1.0 };
        for &(x, y) in &[(0.0, 0.0), (0.37, -2.0), (0.81, 5.5)] {
            let c = Cell::Square { center: PhasePoint::new(x, y), side: 1.0 };
            let a = region_area_in(&s, c, step).unwrap();
            assert!((a.area - 0.5).abs() <= a.error, "{a:?}");
        }
    }

    #[test]
    fn whole_plane_is_exactly_one() {
        for mode in [DensityMode::Disc, DensityMode::Square] {
            let r = density_gamma(&Region::All, &DensityQuery::new(0.7, mode)).unwrap();
            assert_eq!(r.gamma, 1.0);
        }
    }

    #[test]
    fn half_plane_is_not_relatively_dense() {
        let hp = Region::HalfPlane { a: 1.0, b: 0.0, c: 0.0 };
        let q = DensityQuery::new(1.0, DensityMode::Disc).with_search_window(4.0);
        assert_eq!(density_gamma(&hp, &q).unwrap().gamma, 0.0);
        let q = DensityQuery::new(1.0, DensityMode::Square);
        assert!(matches!(density_gamma(&hp, &q), Err(Error::Capability(_))));
    }

    /// Square of side 1 over strips of width 1/2 and period 1 always covers
    /// exactly half; at side 0.4 a square fits inside a gap.
    #[test]
    fn strips_exact_values() {
        let s = Region::Strips { width: 0.5, period: 1.0 };
        let r = density_gamma(&s, &DensityQuery::new(1.0, DensityMode::Square)).unwrap();
        assert!((r.gamma - 0.5).abs() < 0.02, "{r:?}");
        assert!(r.gamma_conservative <= r.gamma);
        let r = density_gamma(&s, &DensityQuery::new(0.4, DensityMode::Square)).unwrap();
        assert_eq!(r.gamma, 0.0);
    }

    #[test]
    fn query_validation() {
        let q = DensityQuery::new(1.0, DensityMode::Disc).with_raster_step(0.1);
        assert!(density_gamma(&Region::All, &q).is_err());
    }

    #[test]
    fn disc_and_square_comparability_on_strips() {
        for (w, p, r) in [(0.5, 1.0, 1.0), (0.2, 0.4, 0.4), (0.3, 0.5, 0.8)] {
            let s = Region::Strips { width: w, period: p };
            let gd = density_gamma(&s, &DensityQuery::new(r, DensityMode::Disc)).unwrap();
            let gq = density_gamma(&s, &DensityQuery::new(r, DensityMode::Square)).unwrap();
            let gd2 = density_gamma(&s, &DensityQuery::new(2f64.sqrt() * r, DensityMode::Disc)).unwrap();
            let tol = gd.fraction_error + gq.fraction_error + gd2.fraction_error;
            assert!(gq.gamma + tol >= gd.gamma / 2.0);
            assert!(gd2.gamma + tol >= gq.gamma / 2.0);
        }
    }
}
