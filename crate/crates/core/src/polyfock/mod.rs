//! Polyanalytic polynomials: evaluation, the holomorphic extension to ℂ²,
//! component bounds, the reduced Cauchy formula, Gaussian-weighted norms,
//! Remez ratios, and the polyanalytic Bargmann transform of signals.

mod balk;
mod bargmann;
mod cauchy;
mod norm;
mod poly;
mod remez;

pub use balk::{balk_dn, component_bound_check, component_bound_check_with, phi_bound_check};
pub use bargmann::{bargmann_transform, BARGMANN_MAX_MODULUS};
pub use cauchy::{reduced_cauchy_eval, reduced_cauchy_eval_with, DEFAULT_CONTOUR_NODES};
pub use norm::{weighted_lp_norm, weighted_lp_norm_with, WeightedNormSpec};
pub use poly::{
    phi_extension_eval, poly_eval, sup_on_circle, sup_on_disc, PolyFunction, ReducedPolyFunction, SupEstimate,
    SupResolution,
};
pub use remez::{remez_ratio, remez_ratio_with, RemezReport};
