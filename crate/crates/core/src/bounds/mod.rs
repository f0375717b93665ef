//! Explicit constants of the sampling estimates, kept in log domain where
//! they can overflow, and the report type shared by every checked
//! inequality.

mod constants;
mod report;

pub use constants::{
    compact_frame_bounds, heisenberg_bound, k_constant, lp_remez_factor_log, planar_sampling_bound,
    sunzhou_check, sup_remez_factor_log, thm_main_bound, CalibrationConstants, CompactFrame, MainBound, SunZhou,
};
pub use report::{real, BoundReport, LogValue, Verdict, LOG_SLACK};
