//! Closed-form curvature of diagonal metrics.

mod closed;
mod convention;
mod flatness;
mod table;

pub use closed::{
    christoffel_daa, christoffel_daa_from_metric, closed_form_component, closed_form_table, gauss_k, gauss_k_oneill,
    gauss_k_with, intermediary_i, intermediary_i_with, rtc_diag, rtc_diag_with, rtc_offdiag_ad, rtc_offdiag_ad_with,
    rtc_offdiag_bd, rtc_offdiag_bd_with, sqrt_connection,
};
pub use convention::{IndexPlacement, SignConvention};
pub use flatness::{
    flatness_check, flatness_check_with, independent_quads, ComponentCheck, ComponentStatus, FlatnessMode,
    FlatnessVerdict, FLATNESS_SAMPLES, FLATNESS_TOL,
};
pub use table::{Coverage, IndexQuad, Provenance, RtcTable};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CurvatureError {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("indices {indices:?} must be pairwise distinct")]
    RepeatedIndex { indices: Vec<usize> },
}
