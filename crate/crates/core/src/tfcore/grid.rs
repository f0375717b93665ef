use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use super::signal::{PhasePoint, Signal};
use super::stft::StftPlan;
use crate::error::{Error, Result};
use crate::geometry::Region;
use crate::specfun::{WindowDesc, WindowSpec};

/// `V_g f` sampled at the cell centres of a uniform grid on `[-T, T]²`.
///
/// Cell `(i, j)` has centre `(-T + (i + ½)h, -T + (j + ½)h)`; values are stored
/// row-major with `x` as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct STFTGrid {
    half_width: f64,
    step: f64,
    cells: usize,
    values: Vec<Complex64>,
    window: WindowDesc,
}

impl STFTGrid {
    pub fn compute(f: &Signal, g: &WindowSpec, half_width: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(half_width > 0.0) {
            return Err(Error::domain("grid needs positive truncation and step"));
        }
        let cells = (2.0 * half_width / step).round() as usize;
        if cells == 0 || ((cells as f64) * step - 2.0 * half_width).abs() > 1e-9 * half_width {
            return Err(Error::domain("grid step must divide the truncation square"));
        }
        let plan = StftPlan::new(f, g, half_width);
        let first = -half_width + 0.5 * step;
        let rows: Vec<Vec<Complex64>> = (0..cells)
            .into_par_iter()
            .map(|i| plan.eval_row(first + i as f64 * step, first, step, cells))
            .collect();
        let values: Vec<Complex64> = rows.into_iter().flatten().collect();
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::domain("non-finite STFT value"));
        }
        Ok(Self { half_width, step, cells, values, window: g.desc() })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells
    }

    pub fn window(&self) -> &WindowDesc {
        &self.window
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn center(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.step
    }

    /// Iterates `(z, V_g f(z))` over all cells.
    pub fn iter(&self) -> impl Iterator<Item = (PhasePoint, Complex64)> + '_ {
        self.values.iter().enumerate().map(move |(k, v)| {
            let (i, j) = (k / self.cells, k % self.cells);
            (PhasePoint::new(self.center(i), self.center(j)), *v)
        })
    }

    /// Multiplies every value by `s` (used for homogeneity checks).
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= s;
        }
        out
    }

    /// Largest `|V_g f|` on the outermost ring of cells relative to the
    /// largest value overall; small values certify the truncation.
    pub fn boundary_ratio(&self) -> f64 {
        let n = self.cells;
        let max = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut edge: f64 = 0.0;
        for (k, v) in self.values.iter().enumerate() {
            let (i, j) = (k / n, k % n);
            if i == 0 || j == 0 || i + 1 == n || j + 1 == n {
                edge = edge.max(v.norm());
            }
        }
        if max == 0.0 {
            0.0
        } else {
            edge / max
        }
    }

    /// CSV with columns `x, xi, re, im`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        self.write_csv_to(&mut file)
    }

    pub fn write_csv_to(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "xi", "re", "im"])?;
        for (z, v) in self.iter() {
            w.write_record([
                format!("{}", z.x),
                format!("{}", z.xi),
                format!("{:e}", v.re),
                format!("{:e}", v.im),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `(Σ |V|^p · h²)^{1/p}` over the cells whose centre lies in `region`
/// (`None` meaning the whole truncation square). Summation is sequential in
/// storage order, so results are reproducible bit for bit.
pub fn lp_norm(grid: &STFTGrid, p: f64, region: Option<&Region>) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain(format!("lp_norm needs 1 <= p < inf, got {p}")));
    }
    let area = grid.step * grid.step;
    let mut acc = 0.0;
    for (z, v) in grid.iter() {
        if region.is_none_or(|r| r.contains(z.x, z.xi)) {
            acc += pow_abs(v, p);
        }
    }
    Ok((acc * area).powf(1.0 / p))
}

#[inline]
pub(crate) fn pow_abs(v: Complex64, p: f64) -> f64 {
    if p == 2.0 {
        v.norm_sqr()
    } else {
        v.norm().powf(p)
    }
}
