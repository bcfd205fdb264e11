use crate::expr::Expr;
use crate::metric::DiagonalMetric;

/// `Γ^ρ_{μν}` of the Levi-Civita connection, symmetric in `μ, ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChristoffelTable {
    dim: usize,
    entries: Vec<Expr>,
}

impl ChristoffelTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn slot(&self, rho: usize, mu: usize, nu: usize) -> usize {
        let (mu, nu) = if mu <= nu { (mu, nu) } else { (nu, mu) };
        (rho * self.dim + mu) * self.dim + nu
    }

    pub fn get(&self, rho: usize, mu: usize, nu: usize) -> &Expr {
        &self.entries[self.slot(rho, mu, nu)]
    }
}

fn metric_coefficient(m: &DiagonalMetric, i: usize, j: usize) -> Expr {
    if i == j {
        m.g_diag(i)
    } else {
        Expr::zero()
    }
}

/// `Γ^ρ_{μν} = ½ g^{ρρ}(g_{ρμ,ν} + g_{ρν,μ} − g_{μν,ρ})` from `g_αα = η_α g_α²`.
pub fn christoffels(m: &DiagonalMetric) -> ChristoffelTable {
    let n = m.dim();
    let mut entries = vec![Expr::zero(); n * n * n];
    for rho in 0..n {
        let inv = Expr::int(2) * m.g_diag(rho);
        for mu in 0..n {
            for nu in mu..n {
                let x = |i| m.coord(i);
                let sum = metric_coefficient(m, rho, mu).diff(x(nu)) + metric_coefficient(m, rho, nu).diff(x(mu))
                    - metric_coefficient(m, mu, nu).diff(x(rho));
                entries[(rho * n + mu) * n + nu] = if sum.is_zero() { sum } else { sum / inv.clone() };
            }
        }
    }
    ChristoffelTable { dim: n, entries }
}
