use super::{closed_form_table, IndexQuad, SignConvention};
use crate::expr::{Expr, Point};
use crate::metric::DiagonalMetric;
use crate::par::{self, Execution};

/// Default numeric threshold below which a sampled component counts as zero.
pub const FLATNESS_TOL: f64 = 1e-9;
/// Sample count for the numeric stage.
pub const FLATNESS_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatnessMode {
    /// Try simplification to zero first, then fall back to sampling.
    Symbolic,
    /// Sample only.
    Numeric,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ComponentStatus {
    SymbolicZero,
    NumericZero { max_abs: f64 },
    Nonzero { value: f64, point: Point },
    Undetermined { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentCheck {
    pub quad: IndexQuad,
    pub expr: Expr,
    pub status: ComponentStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatnessVerdict {
    pub components: Vec<ComponentCheck>,
    pub tol: f64,
    pub seed: u64,
}

impl FlatnessVerdict {
    pub fn is_flat(&self) -> bool {
        self.components
            .iter()
            .all(|c| matches!(c.status, ComponentStatus::SymbolicZero | ComponentStatus::NumericZero { .. }))
    }

    /// The first component that is not zero, if any.
    pub fn witness(&self) -> Option<&ComponentCheck> {
        self.components.iter().find(|c| matches!(c.status, ComponentStatus::Nonzero { .. }))
    }

    pub fn undetermined(&self) -> Option<&ComponentCheck> {
        self.components.iter().find(|c| matches!(c.status, ComponentStatus::Undetermined { .. }))
    }
}

/// Every independent closed-form component: all `(AB,AB)` pairs and all
/// three-index off-diagonals.
pub fn independent_quads(n: usize) -> Vec<IndexQuad> {
    IndexQuad::all(n).into_iter().filter(|q| q.is_diagonal() || q.distinct_indices() == 3).collect()
}

fn numeric_status(e: &Expr, points: &[Point], tol: f64) -> ComponentStatus {
    let mut max_abs: f64 = 0.0;
    let mut rejected = 0;
    let mut last_err = None;
    for p in points {
        match e.eval(p) {
            Ok(v) if v.abs() > tol => return ComponentStatus::Nonzero { value: v, point: p.clone() },
            Ok(v) => max_abs = max_abs.max(v.abs()),
            Err(err) => {
                rejected += 1;
                last_err = Some(err);
            }
        }
    }
    if rejected * 2 > points.len() {
        let reason = format!("{rejected} of {} samples failed: {}", points.len(), last_err.expect("recorded"));
        return ComponentStatus::Undetermined { reason };
    }
    ComponentStatus::NumericZero { max_abs }
}

pub fn flatness_check(m: &DiagonalMetric, mode: FlatnessMode, tol: f64, seed: u64) -> FlatnessVerdict {
    flatness_check_with(m, SignConvention::RESOLVED, mode, tol, FLATNESS_SAMPLES, seed, Execution::default())
}

pub fn flatness_check_with(
    m: &DiagonalMetric,
    conv: SignConvention,
    mode: FlatnessMode,
    tol: f64,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> FlatnessVerdict {
    let table = closed_form_table(m, conv, exec);
    let points = m.sample_points(samples, seed);
    let quads = independent_quads(m.dim());
    let components = par::map(exec, &quads, |&quad| {
        let raw = table.entry(&quad);
        let expr = match mode {
            FlatnessMode::Symbolic => raw.simplify(),
            FlatnessMode::Numeric => raw,
        };
        let status = if expr.is_zero() { ComponentStatus::SymbolicZero } else { numeric_status(&expr, &points, tol) };
        ComponentCheck { quad, expr, status }
    });
    FlatnessVerdict { components, tol, seed }
}
