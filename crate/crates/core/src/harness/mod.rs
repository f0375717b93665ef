//! Experiments that measure sampling ratios and frame bounds and compare
//! them with the theoretical constants, plus calibration and report I/O.

mod calibrate;
mod config;
mod frame;
mod sampling;

pub use calibrate::calibrate_constants;
pub use config::{ExperimentConfig, SignalFamily, DEFAULT_TOLERANCE};
pub use frame::{
    empirical_frame_bounds, largest_eigenvalue, smallest_eigenvalue, FrameBounds, FrameExperiment, HermitianMatrix,
    PointRule,
};
pub use sampling::{
    read_record, read_records, replay, run_sampling_experiment, summary_rows, write_record, ExperimentRecord,
    SummaryRow, HERMITE_REPORT, PLANAR_REPORT,
};
