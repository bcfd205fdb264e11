//! Closed-form frame curvature of a diagonal metric, built from the roots
//! `g_α` and their derivatives only.

use super::{CurvatureError, IndexQuad, Provenance, RtcTable, SignConvention};
use crate::expr::{rat, Expr, Symbol};
use crate::metric::DiagonalMetric;
use crate::par::{self, Execution};

fn check(m: &DiagonalMetric, idx: &[usize]) -> Result<(), CurvatureError> {
    if let Some(&index) = idx.iter().find(|&&i| i >= m.dim()) {
        return Err(CurvatureError::IndexOutOfRange { index, dim: m.dim() });
    }
    for (k, i) in idx.iter().enumerate() {
        if idx[..k].contains(i) {
            return Err(CurvatureError::RepeatedIndex { indices: idx.to_vec() });
        }
    }
    Ok(())
}

fn sign(s: i8) -> Expr {
    Expr::int(s.into())
}

/// `g_{A,D} / g_D`.
fn ratio(m: &DiagonalMetric, a: usize, d: usize) -> Expr {
    m.dg(a, d) / m.g(d).clone()
}

/// The second-derivative family `−[g_A g_B]^{-1}{[g_{A,B}/g_B]_{,B} + η_A η_B [g_{B,A}/g_A]_{,A}}`.
fn second_derivative_term(m: &DiagonalMetric, a: usize, b: usize) -> Expr {
    let x = ratio(m, a, b).diff(m.coord(b));
    let y = ratio(m, b, a).diff(m.coord(a));
    let eab = sign(m.eta(a) * m.eta(b));
    -(x + eab * y) / (m.g(a).clone() * m.g(b).clone())
}

/// The connection-product family `−Σ_D η_D η_B g_D^{-2} [g_{A,D}/g_A][g_{B,D}/g_B]`.
fn product_term(m: &DiagonalMetric, a: usize, b: usize) -> Expr {
    let terms = (0..m.dim()).filter(|&d| d != a && d != b).filter_map(|d| {
        let (ga, gb) = (m.dg(a, d), m.dg(b, d));
        if ga.is_zero() || gb.is_zero() {
            return None;
        }
        let w = sign(-m.eta(d) * m.eta(b));
        Some(w * ga * gb / (m.g(a).clone() * m.g(b).clone() * Expr::powi(m.g(d).clone(), 2)))
    });
    Expr::add(terms)
}

fn overall(m: &DiagonalMetric, conv: SignConvention, a: usize, b: usize) -> Expr {
    sign(conv.placement_eta(m.eta(a), m.eta(b)) * conv.extraction)
}

/// Gaussian curvature of the `(A,B)` coordinate block.
pub fn gauss_k(m: &DiagonalMetric, a: usize, b: usize) -> Result<Expr, CurvatureError> {
    gauss_k_with(m, SignConvention::RESOLVED, a, b)
}

pub fn gauss_k_with(m: &DiagonalMetric, conv: SignConvention, a: usize, b: usize) -> Result<Expr, CurvatureError> {
    check(m, &[a, b])?;
    Ok(overall(m, conv, a, b) * second_derivative_term(m, a, b))
}

/// Gauss's formula in first-fundamental-form notation, `E du² + G dv²`:
/// `K = −1/(e g) [ε₁ (g_u/e)_u + ε₂ (e_v/g)_v]` with `e = √|E|`, `g = √|G|`.
pub fn gauss_k_oneill(e_coef: &Expr, g_coef: &Expr, eps1: i8, eps2: i8, u: &Symbol, v: &Symbol) -> Expr {
    let e = Expr::sqrt(e_coef.scale(rat(eps1.into())));
    let g = Expr::sqrt(g_coef.scale(rat(eps2.into())));
    let first = sign(eps1) * (g.diff(u) / e.clone()).diff(u);
    let second = sign(eps2) * (e.diff(v) / g.clone()).diff(v);
    -(first + second) / (e * g)
}

/// The intermediary term coupling `A` and `B` through every third coordinate.
pub fn intermediary_i(m: &DiagonalMetric, a: usize, b: usize) -> Result<Expr, CurvatureError> {
    intermediary_i_with(m, SignConvention::RESOLVED, a, b)
}

pub fn intermediary_i_with(m: &DiagonalMetric, conv: SignConvention, a: usize, b: usize) -> Result<Expr, CurvatureError> {
    check(m, &[a, b])?;
    let p = product_term(m, a, b);
    if p.is_zero() {
        return Ok(p);
    }
    Ok(overall(m, conv, a, b) * sign(conv.connection_product) * p)
}

/// `R^{AB}_{AB} = K_AB + I^AB`.
pub fn rtc_diag(m: &DiagonalMetric, a: usize, b: usize) -> Result<Expr, CurvatureError> {
    rtc_diag_with(m, SignConvention::RESOLVED, a, b)
}

pub fn rtc_diag_with(m: &DiagonalMetric, conv: SignConvention, a: usize, b: usize) -> Result<Expr, CurvatureError> {
    Ok(gauss_k_with(m, conv, a, b)? + intermediary_i_with(m, conv, a, b)?)
}

/// `R^{AB}_{AD}` for pairwise distinct `A`, `B`, `D`.
pub fn rtc_offdiag_ad(m: &DiagonalMetric, a: usize, b: usize, d: usize) -> Result<Expr, CurvatureError> {
    rtc_offdiag_ad_with(m, SignConvention::RESOLVED, a, b, d)
}

pub fn rtc_offdiag_ad_with(
    m: &DiagonalMetric,
    conv: SignConvention,
    a: usize,
    b: usize,
    d: usize,
) -> Result<Expr, CurvatureError> {
    check(m, &[a, b, d])?;
    let deriv = -ratio(m, a, b).diff(m.coord(d));
    let product = sign(conv.connection_product) * ratio(m, a, d) * ratio(m, d, b);
    Ok(overall(m, conv, a, b) * (deriv + product) / (m.g(a).clone() * m.g(d).clone()))
}

/// `R^{AB}_{BD}` for pairwise distinct `A`, `B`, `D`.
pub fn rtc_offdiag_bd(m: &DiagonalMetric, a: usize, b: usize, d: usize) -> Result<Expr, CurvatureError> {
    rtc_offdiag_bd_with(m, SignConvention::RESOLVED, a, b, d)
}

pub fn rtc_offdiag_bd_with(
    m: &DiagonalMetric,
    conv: SignConvention,
    a: usize,
    b: usize,
    d: usize,
) -> Result<Expr, CurvatureError> {
    check(m, &[a, b, d])?;
    let deriv = ratio(m, b, a).diff(m.coord(d));
    let product = -sign(conv.connection_product) * ratio(m, d, a) * ratio(m, b, d);
    let eab = sign(m.eta(a) * m.eta(b));
    Ok(overall(m, conv, a, b) * eab * (deriv + product) / (m.g(b).clone() * m.g(d).clone()))
}

/// `√Γ^D_{AA} ≡ g_{A,D} / g_D`, a factor of the Christoffel symbol rather than its root.
pub fn sqrt_connection(m: &DiagonalMetric, a: usize, d: usize) -> Result<Expr, CurvatureError> {
    check(m, &[a, d])?;
    Ok(ratio(m, a, d))
}

/// `Γ^D_{AA} = −η_D η_A (g_A / g_D) √Γ^D_{AA}`.
pub fn christoffel_daa(m: &DiagonalMetric, a: usize, d: usize) -> Result<Expr, CurvatureError> {
    let root = sqrt_connection(m, a, d)?;
    Ok(sign(-m.eta(d) * m.eta(a)) * m.g(a).clone() / m.g(d).clone() * root)
}

/// `Γ^D_{AA} = −½ g_{AA,D} / g_{DD}` straight from the metric coefficients.
pub fn christoffel_daa_from_metric(m: &DiagonalMetric, a: usize, d: usize) -> Result<Expr, CurvatureError> {
    check(m, &[a, d])?;
    Ok(-(m.g_diag(a).diff(m.coord(d))) / (Expr::int(2) * m.g_diag(d)))
}

/// Every closed-form component: the diagonal `(AB,AB)` family and both
/// three-index families. Four distinct indices are left implicit (zero).
pub fn closed_form_table(m: &DiagonalMetric, conv: SignConvention, exec: Execution) -> RtcTable {
    let n = m.dim();
    let jobs: Vec<(usize, usize, Option<usize>)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .flat_map(|(a, b)| std::iter::once((a, b, None)).chain((0..n).filter(move |&d| d != a && d != b).map(move |d| (a, b, Some(d)))))
        .collect();
    let values = par::map(exec, &jobs, |&(a, b, d)| match d {
        None => vec![((a, b, a, b), rtc_diag_with(m, conv, a, b).expect("valid indices"))],
        Some(d) => vec![
            ((a, b, a, d), rtc_offdiag_ad_with(m, conv, a, b, d).expect("valid indices")),
            ((a, b, b, d), rtc_offdiag_bd_with(m, conv, a, b, d).expect("valid indices")),
        ],
    });
    let mut t = RtcTable::new(n, Provenance::ClosedForm, super::Coverage::Full, Some(conv));
    for ((a, b, c, d), e) in values.into_iter().flatten() {
        t.insert(a, b, c, d, e);
    }
    t
}

/// Like [`closed_form_table`] but restricted to one quad.
pub fn closed_form_component(m: &DiagonalMetric, conv: SignConvention, q: IndexQuad) -> Expr {
    let (a, b) = (q.a, q.b);
    if q.is_diagonal() {
        return rtc_diag_with(m, conv, a, b).expect("valid indices");
    }
    let shared = [(q.c, q.d), (q.d, q.c)].into_iter().find(|&(x, _)| x == a || x == b);
    match (q.distinct_indices(), shared) {
        (3, Some((x, d))) => {
            let flip = if q.c == x { 1 } else { -1 };
            let v = if x == a {
                rtc_offdiag_ad_with(m, conv, a, b, d)
            } else {
                rtc_offdiag_bd_with(m, conv, a, b, d)
            }
            .expect("valid indices");
            if flip < 0 {
                -v
            } else {
                v
            }
        }
        _ => Expr::zero(),
    }
}
