use std::collections::BTreeMap;

use super::christoffels;
use crate::curvature::{Coverage, IndexQuad, Provenance, RtcTable};
use crate::expr::Expr;
use crate::metric::DiagonalMetric;
use crate::par::{self, Execution};

/// Fully lowered coordinate components `R_{ρσμν}` for canonical quads,
/// from `R^ρ_{σμν} = ∂_μΓ^ρ_{νσ} − ∂_νΓ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ}`.
pub fn riemann_lowered(m: &DiagonalMetric, exec: Execution) -> BTreeMap<IndexQuad, Expr> {
    let n = m.dim();
    let gam = christoffels(m);
    let quads = IndexQuad::all(n);
    let values = par::map(exec, &quads, |q| {
        let (rho, sigma, mu, nu) = (q.a, q.b, q.c, q.d);
        let mut terms = vec![
            gam.get(rho, nu, sigma).diff(m.coord(mu)),
            -gam.get(rho, mu, sigma).diff(m.coord(nu)),
        ];
        for l in 0..n {
            terms.push(gam.get(rho, mu, l).clone() * gam.get(l, nu, sigma).clone());
            terms.push(-(gam.get(rho, nu, l).clone() * gam.get(l, mu, sigma).clone()));
        }
        let up = Expr::add(terms);
        if up.is_zero() {
            up
        } else {
            m.g_diag(rho) * up
        }
    });
    quads.into_iter().zip(values).filter(|(_, v)| !v.is_zero()).collect()
}

/// `R^{AB}_{CD} = η_A η_B R_{ABCD} / (g_A g_B g_C g_D)`.
pub fn to_frame(m: &DiagonalMetric, q: &IndexQuad, lowered: Expr) -> Expr {
    if lowered.is_zero() {
        return lowered;
    }
    let eta = Expr::int((m.eta(q.a) * m.eta(q.b)).into());
    let g = Expr::mul([q.a, q.b, q.c, q.d].map(|i| m.g(i).clone()));
    eta * lowered / g
}

/// Orthonormal-frame components from the classical Christoffel route.
pub fn riemann_frame(m: &DiagonalMetric, exec: Execution) -> RtcTable {
    let mut t = RtcTable::new(m.dim(), Provenance::Oracle, Coverage::Full, None);
    for (q, v) in riemann_lowered(m, exec) {
        t.insert(q.a, q.b, q.c, q.d, to_frame(m, &q, v));
    }
    t
}
