//! The STFT engine: signals, time-frequency shifts, `V_g f` on grids,
//! `L^p` norms over regions, and the Hermite reproducing kernel.

mod grid;
mod kernel;
mod signal;
mod stft;

pub use grid::{lp_norm, STFTGrid};
pub use kernel::{
    local_repr_residual, local_repr_residual_with, reproducing_kernel, reproducing_kernel_closed,
    PolarResolution,
};
pub use signal::{PhasePoint, Signal, SignalDesc, MAX_EXPANSION_DEGREE};
pub use stft::{stft_eval, StftPlan};
