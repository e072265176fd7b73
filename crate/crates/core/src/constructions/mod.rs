//! The explicit saturating functions: the bump `χ_j`, the saturator `P_j`, the
//! disjoint-spectrum family `g_r`, the holomorphic comb kernel and its logarithm, the
//! log-saturator `P_n` and the residual witness `h_j`.

mod family;
mod holo;
mod logsat;
mod saturator;

pub use family::{
    block_bounds, block_certificate, default_jmax, disjoint_family, spectrum_constant, tail_bound, Block,
    SaturatorFamily,
};
pub use holo::{boundary_values, holo_kernel, holo_kernel_closed, holo_log_derivative, HoloKernelParams};
pub use logsat::{
    analyticity_defect, eps_floor, log_lift, log_saturator, omega_for, residual_witness, teeth_for,
    AnalyticityDefect, LogSaturator, Witness, ANALYTICITY_TOL,
};
pub use saturator::{bump_chi, certify_pj, pj_amplitude, pj_lower_bound, saturator_pj, Certificate};
