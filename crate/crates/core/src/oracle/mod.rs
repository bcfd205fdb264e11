//! Independent curvature references. The Christoffel route is the ground truth;
//! the textbook sectional formulas and finite differences check it in turn.

mod appendix;
mod calibrate;
mod christoffel;
mod compare;
mod finite_diff;
mod riemann;

pub use appendix::{ll_applicable, ll_rtc, ll_table, mathpages_rtc, mathpages_table};
pub use calibrate::{calibrate, calibrate_default, Calibration, CalibrationError};
pub use christoffel::{christoffels, ChristoffelTable};
pub use compare::{compare, Agreement, ComparisonReport, ComponentComparison};
pub use finite_diff::{finite_diff_riemann, FiniteDiffError, NumericRtc};
pub use riemann::{riemann_frame, riemann_lowered, to_frame};
