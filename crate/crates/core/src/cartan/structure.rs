use super::{Basis, ExteriorForm};
use crate::curvature::{Coverage, Provenance, RtcTable, SignConvention};
use crate::expr::Expr;
use crate::metric::DiagonalMetric;
use crate::par::{self, Execution};

/// `ω^A_D = [g_A g_D]^{-1}{g_{A,D} ω^A − η_A η_D g_{D,A} ω^D}` in the coframe
/// basis, indexed `[A][D]`. The diagonal is zero.
pub fn connection_forms(m: &DiagonalMetric) -> Vec<Vec<ExteriorForm>> {
    let n = m.dim();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|d| {
                    if a == d {
                        return ExteriorForm::zero(Basis::Coframe, 1);
                    }
                    let denom = m.g(a).clone() * m.g(d).clone();
                    let sign = Expr::int((-m.eta(a) * m.eta(d)).into());
                    ExteriorForm::from_terms(
                        Basis::Coframe,
                        1,
                        [(vec![a], m.dg(a, d) / denom.clone()), (vec![d], sign * (m.dg(d, a) / denom))],
                    )
                })
                .collect()
        })
        .collect()
}

/// `ℛ^A_B = dω^A_B + s Σ_D ω^A_D ∧ ω^D_B`, with `s` the convention's
/// connection-product sign, in the coframe basis.
pub fn curvature_two_forms(m: &DiagonalMetric, conv: SignConvention, exec: Execution) -> Vec<Vec<ExteriorForm>> {
    let n = m.dim();
    let omega = connection_forms(m);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let flat = par::map(exec, &pairs, |&(a, b)| {
        let d_omega = omega[a][b].ext_d(m).expect("one-form").to_basis(Basis::Coframe, m);
        let mut product = ExteriorForm::zero(Basis::Coframe, 2);
        for d in 0..n {
            let w = omega[a][d].wedge(&omega[d][b]).expect("two one-forms");
            product = product.add(&w).expect("same grade");
        }
        let product = if conv.connection_product < 0 { product.neg() } else { product };
        d_omega.add(&product).expect("same grade")
    });
    let mut it = flat.into_iter();
    (0..n).map(|_| it.by_ref().take(n).collect()).collect()
}

/// Read `R^{AB}_{EF}` off the `ω^E ∧ ω^F` coefficients of `ℛ^A_B`.
pub fn extract_rtc(curv: &[Vec<ExteriorForm>], m: &DiagonalMetric, conv: SignConvention) -> RtcTable {
    let n = m.dim();
    let mut t = RtcTable::new(n, Provenance::Cartan, Coverage::Full, Some(conv));
    for a in 0..n {
        for b in a + 1..n {
            let factor = Expr::int((conv.placement_eta(m.eta(a), m.eta(b)) * conv.extraction).into());
            for (idx, c) in curv[a][b].terms() {
                t.insert(a, b, idx[0], idx[1], factor.clone() * c.clone());
            }
        }
    }
    t
}

pub fn cartan_table(m: &DiagonalMetric, conv: SignConvention, exec: Execution) -> RtcTable {
    extract_rtc(&curvature_two_forms(m, conv, exec), m, conv)
}

/// `dω^A + Σ_D ω^A_D ∧ ω^D` for each `A`, in the coframe basis. Zero for a
/// torsion-free connection.
pub fn torsion(m: &DiagonalMetric) -> Vec<ExteriorForm> {
    let omega = connection_forms(m);
    m.coframe()
        .iter()
        .enumerate()
        .map(|(a, w)| {
            let mut t = w.ext_d(m).expect("one-form").to_basis(Basis::Coframe, m);
            for (d, om) in omega[a].iter().enumerate() {
                let wd = ExteriorForm::one_form(Basis::Coframe, d, Expr::one());
                t = t.add(&om.wedge(&wd).expect("two one-forms")).expect("same grade");
            }
            t
        })
        .collect()
}
