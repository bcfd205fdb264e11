use crate::curvature::{IndexQuad, Provenance, RtcTable, SignConvention};
use crate::expr::{residual, Expr, Point};
use crate::metric::DiagonalMetric;
use crate::par::{self, Execution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    /// Structurally equal expressions.
    Identical,
    /// Within tolerance at every accepted sample.
    Numeric,
    Mismatch,
    /// More than half the samples could not be evaluated.
    Undetermined,
}

impl Agreement {
    pub fn name(self) -> &'static str {
        match self {
            Agreement::Identical => "symbolic-equal",
            Agreement::Numeric => "numeric-agreement",
            Agreement::Mismatch => "mismatch",
            Agreement::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentComparison {
    pub quad: IndexQuad,
    pub agreement: Agreement,
    pub max_residual: f64,
    /// Sample with the largest residual, with both values there.
    pub worst: Option<(Point, f64, f64)>,
    pub rejected: usize,
    /// Largest residual after negating the right-hand side.
    flipped_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub left: Provenance,
    pub right: Provenance,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub sign_convention: Option<SignConvention>,
    pub components: Vec<ComponentComparison>,
    /// Every mismatch disappears when one side is negated.
    pub uniform_flip: bool,
}

impl ComparisonReport {
    pub fn agrees(&self) -> bool {
        self.components.iter().all(|c| matches!(c.agreement, Agreement::Identical | Agreement::Numeric))
    }

    pub fn has_undetermined(&self) -> bool {
        self.components.iter().any(|c| c.agreement == Agreement::Undetermined)
    }

    pub fn max_residual(&self) -> f64 {
        self.components.iter().map(|c| c.max_residual).fold(0.0, f64::max)
    }

    /// The component with the largest residual.
    pub fn worst(&self) -> Option<&ComponentComparison> {
        self.components.iter().filter(|c| c.worst.is_some()).max_by(|a, b| a.max_residual.total_cmp(&b.max_residual))
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &ComponentComparison> {
        self.components.iter().filter(|c| c.agreement == Agreement::Mismatch)
    }
}

fn compare_component(q: IndexQuad, a: &Expr, b: &Expr, points: &[Point], tol: f64) -> ComponentComparison {
    let mut out = ComponentComparison {
        quad: q,
        agreement: Agreement::Identical,
        max_residual: 0.0,
        worst: None,
        rejected: 0,
        flipped_residual: 0.0,
    };
    if a == b {
        out.flipped_residual = if a.is_zero() { 0.0 } else { f64::INFINITY };
        return out;
    }
    for p in points {
        let (Ok(va), Ok(vb)) = (a.eval(p), b.eval(p)) else {
            out.rejected += 1;
            continue;
        };
        let r = residual(va, vb);
        out.flipped_residual = out.flipped_residual.max(residual(va, -vb));
        if out.worst.is_none() || r > out.max_residual {
            out.max_residual = r;
            out.worst = Some((p.clone(), va, vb));
        }
    }
    out.agreement = if out.rejected * 2 > points.len() {
        Agreement::Undetermined
    } else if out.max_residual <= tol {
        Agreement::Numeric
    } else {
        Agreement::Mismatch
    };
    out
}

/// Component-wise comparison on seeded samples from the metric's domain.
///
/// Only quads covered by both tables are compared; absent entries are zero.
pub fn compare(
    a: &RtcTable,
    b: &RtcTable,
    m: &DiagonalMetric,
    tol: f64,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> ComparisonReport {
    assert_eq!(a.dim(), b.dim(), "tables of different dimension");
    let points = m.sample_points(samples, seed);
    let quads: Vec<IndexQuad> =
        a.covered_quads().into_iter().filter(|q| b.coverage().covers(q)).collect();
    let components = par::map(exec, &quads, |q| compare_component(*q, &a.entry(q), &b.entry(q), &points, tol));
    let any_mismatch = components.iter().any(|c| c.agreement == Agreement::Mismatch);
    let uniform_flip = any_mismatch
        && components.iter().all(|c| c.agreement == Agreement::Undetermined || c.flipped_residual <= tol);
    ComparisonReport {
        left: a.provenance(),
        right: b.provenance(),
        tol,
        samples,
        seed,
        sign_convention: a.sign_convention().or(b.sign_convention()),
        components,
        uniform_flip,
    }
}
