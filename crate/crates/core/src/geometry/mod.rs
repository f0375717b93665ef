//! Regions of the phase plane, `(γ, R)` density scans, and point sets.

mod density;
mod parse;
mod points;
mod region;

pub use density::{density_gamma, region_area_in, AreaEstimate, Cell, DensityMode, DensityQuery, DensityResult};
pub use parse::parse_region;
pub use points::{beurling_lower_density, separation_check, BeurlingEstimate, PointDomain, PointSet, Separation};
pub use region::{AxisPeriod, BivariatePoly, Region};
