//! Seeded generators of bounded random metrics and scalar fields.
//!
//! Every coordinate ranges over `[0.2, 1.2]`. Roots have the shape
//! `2 + Σ c_k b_k` with at most four terms, `|c_k| ≤ 3/10`, and each basis
//! function bounded by `sinh(1.2) < 1.6` there, so they stay above `0.08`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{rat_frac, Domain, Expr, Func, Symbol};
use crate::metric::DiagonalMetric;

pub const COORD_LO: f64 = 0.2;
pub const COORD_HI: f64 = 1.2;
const MAX_TERMS: usize = 4;

pub fn coordinate_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn basis_function(rng: &mut impl Rng, xs: &[Expr]) -> Expr {
    let j = rng.gen_range(0..xs.len());
    let x = xs[j].clone();
    match rng.gen_range(0..6) {
        0 => x,
        1 => Expr::powi(x, 2),
        2 => Expr::func(Func::Sin, x),
        3 => Expr::func(Func::Sinh, x),
        4 => Expr::func(Func::Exp, x).scale(rat_frac(1, 3)),
        _ => {
            let k = rng.gen_range(0..xs.len());
            x * xs[k].clone()
        }
    }
}

/// A positive scalar `2 + Σ c_k b_k` over `xs`.
pub fn random_root(rng: &mut impl Rng, xs: &[Expr]) -> Expr {
    let terms = rng.gen_range(0..=MAX_TERMS);
    let mut parts = vec![Expr::int(2)];
    for _ in 0..terms {
        let c = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
        parts.push(basis_function(rng, xs).scale(rat_frac(c, 10)));
    }
    Expr::add(parts)
}

pub fn random_metric(n: usize, rng: &mut impl Rng) -> DiagonalMetric {
    let names = coordinate_names(n);
    let coords: Vec<Symbol> = names.iter().map(|s| Symbol::coordinate(s)).collect();
    let xs: Vec<Expr> = coords.iter().map(Expr::symbol).collect();
    let eta: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let g: Vec<Expr> = (0..n).map(|_| random_root(rng, &xs)).collect();
    let mut domain = Domain::new();
    for s in &names {
        domain = domain.with(s, COORD_LO, COORD_HI);
    }
    DiagonalMetric::new(coords, eta, g, vec![], domain).expect("shapes agree")
}

/// `count` metrics of dimension `n`, reproducible from `seed`.
pub fn random_metrics(n: usize, count: usize, seed: u64) -> Vec<DiagonalMetric> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32));
    (0..count).map(|_| random_metric(n, &mut rng)).collect()
}
