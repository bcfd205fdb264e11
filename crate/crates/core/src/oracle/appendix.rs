//! Two independent textbook formulas for the sectional components `R_{abab}`.

use super::to_frame;
use crate::curvature::{Coverage, CurvatureError, IndexQuad, Provenance, RtcTable};
use crate::expr::{Expr, Func};
use crate::metric::DiagonalMetric;

fn check(m: &DiagonalMetric, a: usize, b: usize) -> Result<(), CurvatureError> {
    if a >= m.dim() || b >= m.dim() {
        return Err(CurvatureError::IndexOutOfRange { index: a.max(b), dim: m.dim() });
    }
    if a == b {
        return Err(CurvatureError::RepeatedIndex { indices: vec![a, b] });
    }
    Ok(())
}

/// `R_{lili}` written through `F_α = ln g_α`, so that `g_αα = ε_α e^{2F_α}`:
///
/// `ε_l e^{2F_l}(F_{i,i}F_{l,i} − F_{l,i}² − F_{l,ii}) + ε_i e^{2F_i}(F_{l,l}F_{i,l} − F_{i,l}² − F_{i,ll})
///  − ε_l ε_i Σ_m ε_m e^{2F_l+2F_i−2F_m} F_{i,m}F_{l,m}`.
///
/// `F` and the exponentials are kept as literal `ln`/`exp` nodes.
pub fn ll_rtc(m: &DiagonalMetric, i: usize, l: usize) -> Result<Expr, CurvatureError> {
    check(m, i, l)?;
    let f: Vec<Expr> = (0..m.dim()).map(|a| Expr::func(Func::Ln, m.g(a).clone())).collect();
    let x = |a: usize| m.coord(a);
    let fd = |a: usize, b: usize| f[a].diff(x(b));
    let e2 = |e: Expr| Expr::func(Func::Exp, Expr::int(2) * e);
    let eps = |a: usize| Expr::int(m.eta(a).into());

    let block = |p: usize, q: usize| {
        // ε_p e^{2F_p}(F_{q,q}F_{p,q} − F_{p,q}² − F_{p,qq})
        let inner = fd(q, q) * fd(p, q) - Expr::powi(fd(p, q), 2) - fd(p, q).diff(x(q));
        eps(p) * e2(f[p].clone()) * inner
    };
    let mut terms = vec![block(l, i), block(i, l)];
    for mm in (0..m.dim()).filter(|&k| k != i && k != l) {
        let exponent = f[l].clone() + f[i].clone() - f[mm].clone();
        terms.push(-(eps(l) * eps(i) * eps(mm) * e2(exponent) * fd(i, mm) * fd(l, mm)));
    }
    Ok(Expr::add(terms))
}

/// ```text
/// R_{abab} = −(g_{aa,bb} + g_{bb,aa})/2 + ¼[(g_{aa,b}² + g_{aa,a}g_{bb,a})/g_{aa}
///            + (g_{bb,a}² + g_{bb,b}g_{aa,b})/g_{bb} − Σ_c g_{aa,c}g_{bb,c}/g_{cc}]
/// ```
/// with the sum running over every other coordinate.
pub fn mathpages_rtc(m: &DiagonalMetric, a: usize, b: usize) -> Result<Expr, CurvatureError> {
    check(m, a, b)?;
    let (gaa, gbb) = (m.g_diag(a), m.g_diag(b));
    let (xa, xb) = (m.coord(a), m.coord(b));
    let second = -(gaa.diff(xb).diff(xb) + gbb.diff(xa).diff(xa)) / Expr::int(2);
    let mut quarter = vec![
        (Expr::powi(gaa.diff(xb), 2) + gaa.diff(xa) * gbb.diff(xa)) / gaa.clone(),
        (Expr::powi(gbb.diff(xa), 2) + gbb.diff(xb) * gaa.diff(xb)) / gbb.clone(),
    ];
    for c in (0..m.dim()).filter(|&c| c != a && c != b) {
        let xc = m.coord(c);
        let p = gaa.diff(xc) * gbb.diff(xc);
        if !p.is_zero() {
            quarter.push(-(p / m.g_diag(c)));
        }
    }
    Ok(second + Expr::add(quarter) / Expr::int(4))
}

fn diagonal_table(m: &DiagonalMetric, provenance: Provenance, f: fn(&DiagonalMetric, usize, usize) -> Result<Expr, CurvatureError>) -> RtcTable {
    let mut t = RtcTable::new(m.dim(), provenance, Coverage::DiagonalOnly, None);
    for a in 0..m.dim() {
        for b in a + 1..m.dim() {
            let q = IndexQuad::new(a, b, a, b);
            t.insert(a, b, a, b, to_frame(m, &q, f(m, a, b).expect("valid indices")));
        }
    }
    t
}

/// Frame-converted sectional components from [`ll_rtc`].
pub fn ll_table(m: &DiagonalMetric) -> RtcTable {
    diagonal_table(m, Provenance::Ll, |m, a, b| ll_rtc(m, b, a))
}

/// Frame-converted sectional components from [`mathpages_rtc`].
pub fn mathpages_table(m: &DiagonalMetric) -> RtcTable {
    diagonal_table(m, Provenance::Mathpages, mathpages_rtc)
}

/// The logarithmic parametrization needs every `g_α > 0` on the sample domain.
pub fn ll_applicable(m: &DiagonalMetric, seed: u64) -> bool {
    m.validate(seed).is_valid()
}
