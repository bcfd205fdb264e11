//! Curvature of diagonal metrics from closed-form expressions in the metric
//! roots, cross-checked against Cartan's structure equations and a Christoffel oracle.

#![allow(clippy::needless_range_loop)]

pub mod cartan;
pub mod curvature;
pub mod expr;
pub mod fixtures;
pub mod metric;
pub mod oracle;
pub mod par;
pub mod random;

pub use curvature::{IndexQuad, Provenance, RtcTable, SignConvention};
pub use expr::{parse, Expr, Point, Symbol};
pub use metric::DiagonalMetric;
pub use par::Execution;
