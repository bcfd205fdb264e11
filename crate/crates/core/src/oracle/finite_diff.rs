use std::collections::BTreeMap;

use crate::curvature::IndexQuad;
use crate::expr::{ExprError, Point};
use crate::metric::DiagonalMetric;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum FiniteDiffError {
    #[error("point is within 2h of the sample-domain edge in '{coord}'")]
    TooCloseToEdge { coord: String },
    #[error("coordinate '{0}' is not bound at the point")]
    Unbound(String),
    #[error(transparent)]
    Eval(#[from] ExprError),
}

/// Frame components `R^{AB}_{CD}` at one point, keyed by canonical quad.
pub type NumericRtc = BTreeMap<IndexQuad, f64>;

/// Frame curvature at `p` from central differences of the metric coefficients.
///
/// First and second derivatives of `g_αα` carry `O(h²)` error; Christoffel
/// symbols and their derivatives are then assembled exactly from those.
pub fn finite_diff_riemann(m: &DiagonalMetric, p: &Point, h: f64) -> Result<NumericRtc, FiniteDiffError> {
    let n = m.dim();
    for c in m.coords() {
        let x = p.get(c.name()).ok_or_else(|| FiniteDiffError::Unbound(c.name().to_string()))?;
        let iv = m.domain().get(c.name()).expect("validated metric has a domain per coordinate");
        if x - 2.0 * h < iv.lo || x + 2.0 * h > iv.hi {
            return Err(FiniteDiffError::TooCloseToEdge { coord: c.name().to_string() });
        }
    }
    let at = |shifts: &[(usize, f64)]| -> Result<Vec<f64>, FiniteDiffError> {
        let mut q = p.clone();
        for &(i, dx) in shifts {
            let name = m.coord(i).name();
            q.set(name, p.get(name).expect("checked above") + dx);
        }
        (0..n).map(|a| Ok(m.g_diag(a).eval(&q)?)).collect()
    };

    let g0 = at(&[])?;
    // d1[mu][alpha] = ∂_mu g_αα, d2[mu][nu][alpha] = ∂_mu ∂_nu g_αα
    let mut d1 = vec![vec![0.0; n]; n];
    let mut d2 = vec![vec![vec![0.0; n]; n]; n];
    for mu in 0..n {
        let (plus, minus) = (at(&[(mu, h)])?, at(&[(mu, -h)])?);
        for a in 0..n {
            d1[mu][a] = (plus[a] - minus[a]) / (2.0 * h);
            d2[mu][mu][a] = (plus[a] - 2.0 * g0[a] + minus[a]) / (h * h);
        }
        for nu in 0..mu {
            let pp = at(&[(mu, h), (nu, h)])?;
            let pm = at(&[(mu, h), (nu, -h)])?;
            let mp = at(&[(mu, -h), (nu, h)])?;
            let mm = at(&[(mu, -h), (nu, -h)])?;
            for a in 0..n {
                let v = (pp[a] - pm[a] - mp[a] + mm[a]) / (4.0 * h * h);
                d2[mu][nu][a] = v;
                d2[nu][mu][a] = v;
            }
        }
    }

    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    // bracket of the Levi-Civita formula and its κ-derivative
    let bracket = |r: usize, mu: usize, nu: usize| {
        delta(r, mu) * d1[nu][r] + delta(r, nu) * d1[mu][r] - delta(mu, nu) * d1[r][mu]
    };
    let dbracket = |k: usize, r: usize, mu: usize, nu: usize| {
        delta(r, mu) * d2[k][nu][r] + delta(r, nu) * d2[k][mu][r] - delta(mu, nu) * d2[k][r][mu]
    };
    let gamma = |r: usize, mu: usize, nu: usize| bracket(r, mu, nu) / (2.0 * g0[r]);
    let dgamma = |k: usize, r: usize, mu: usize, nu: usize| {
        dbracket(k, r, mu, nu) / (2.0 * g0[r]) - d1[k][r] * bracket(r, mu, nu) / (2.0 * g0[r] * g0[r])
    };

    let roots: Vec<f64> = (0..n).map(|a| m.g(a).eval(p)).collect::<Result<_, _>>()?;
    let mut out = NumericRtc::new();
    for q in IndexQuad::all(n) {
        let (r, s, mu, nu) = (q.a, q.b, q.c, q.d);
        let mut up = dgamma(mu, r, nu, s) - dgamma(nu, r, mu, s);
        for l in 0..n {
            up += gamma(r, mu, l) * gamma(l, nu, s) - gamma(r, nu, l) * gamma(l, mu, s);
        }
        let lowered = g0[r] * up;
        let eta = f64::from(m.eta(r) * m.eta(s));
        out.insert(q, eta * lowered / (roots[r] * roots[s] * roots[mu] * roots[nu]));
    }
    Ok(out)
}
