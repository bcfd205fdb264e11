//! Rational normalization.
//!
//! An expression is expanded into a Laurent polynomial over *atoms*: symbols,
//! function applications, and powers that cannot be expanded (fractional or
//! negative powers of sums, roots of products). Pythagorean identities are
//! applied as rewrites on that polynomial and the result is rebuilt over a
//! common monomial denominator.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::node::{rat, Expr, Func, Node, Rational};

/// Expansion gives up (and keeps the product opaque) beyond this many terms.
const MAX_TERMS: usize = 2000;
const MAX_PASSES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplifyOptions {
    /// Rewrite with sin^2 + cos^2 = 1 and cosh^2 - sinh^2 = 1.
    pub pythagorean: bool,
}

impl Default for SimplifyOptions {
    fn default() -> Self {
        Self { pythagorean: true }
    }
}

type Monomial = Vec<(Expr, Rational)>;

#[derive(Clone, Debug, Default)]
struct Poly(BTreeMap<Monomial, Rational>);

impl Poly {
    fn constant(c: Rational) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.0.insert(Vec::new(), c);
        }
        p
    }

    fn atom(e: Expr, k: Rational) -> Self {
        if e.as_const().is_some() {
            if let Some(v) = Expr::pow(e.clone(), k.clone()).as_const() {
                return Poly::constant(v.clone());
            }
        }
        let mut p = Poly::default();
        p.0.insert(vec![(e, k)], Rational::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn add_assign(&mut self, other: Poly) {
        for (m, c) in other.0 {
            self.add_term(m, c);
        }
    }

    fn mul(&self, other: &Poly) -> Option<Poly> {
        if self.0.len().saturating_mul(other.0.len()) > MAX_TERMS * 8 {
            return None;
        }
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                let (k, m) = mono_mul(ma, mb);
                *out.entry(m).or_insert_with(Rational::zero) += ca * cb * k;
            }
        }
        out.retain(|_, v| !v.is_zero());
        (out.len() <= MAX_TERMS).then_some(Poly(out))
    }

    fn powu(&self, n: u32) -> Option<Poly> {
        let mut acc = Poly::constant(Rational::one());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Some(acc)
    }
}

/// Product of monomials; constant atoms whose exponent becomes integral fold
/// into the returned coefficient.
fn mono_mul(a: &Monomial, b: &Monomial) -> (Rational, Monomial) {
    let mut coeff = Rational::one();
    let mut out: Monomial = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut push = |atom: Expr, k: Rational, coeff: &mut Rational| {
        if k.is_zero() {
            return;
        }
        if atom.as_const().is_some() {
            if let Some(v) = Expr::pow(atom.clone(), k.clone()).as_const() {
                *coeff *= v;
                return;
            }
        }
        out.push((atom, k));
    };
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            push(a[i].0.clone(), a[i].1.clone(), &mut coeff);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            push(b[j].0.clone(), b[j].1.clone(), &mut coeff);
            j += 1;
        } else {
            push(a[i].0.clone(), &a[i].1 + &b[j].1, &mut coeff);
            i += 1;
            j += 1;
        }
    }
    (coeff, out)
}

fn poly_or_atom(e: &Expr) -> Poly {
    poly_of(e).unwrap_or_else(|| Poly::atom(e.clone(), Rational::one()))
}

fn poly_of(e: &Expr) -> Option<Poly> {
    match e.node() {
        Node::Const(c) => Some(Poly::constant(c.clone())),
        Node::Sym(_) | Node::Func(..) => Some(Poly::atom(e.clone(), Rational::one())),
        Node::Add(xs) => {
            let mut acc = Poly::default();
            for x in xs {
                acc.add_assign(poly_or_atom(x));
            }
            Some(acc)
        }
        Node::Mul(xs) => {
            let mut acc = Poly::constant(Rational::one());
            for x in xs {
                acc = acc.mul(&poly_or_atom(x))?;
            }
            Some(acc)
        }
        Node::Pow(b, k) => {
            if let (Node::Add(_), true) = (b.node(), k.is_integer() && k.is_positive()) {
                let n = k.to_u32()?;
                return poly_or_atom(b).powu(n);
            }
            Some(Poly::atom(b.clone(), k.clone()))
        }
    }
}

fn pythagorean_reduce(p: Poly) -> Poly {
    let mut sines: BTreeSet<(Func, Expr)> = BTreeSet::new();
    for m in p.0.keys() {
        for (atom, _) in m {
            if let Node::Func(f @ (Func::Sin | Func::Sinh), arg) = atom.node() {
                sines.insert((*f, arg.clone()));
            }
        }
    }
    if sines.is_empty() {
        return p;
    }
    // cos^k -> cos^(k-2) (1 - sin^2), cosh^k -> cosh^(k-2) (1 + sinh^2), k >= 2.
    let reducible = |m: &Monomial| {
        m.iter().position(|(atom, k)| {
            let partner = match atom.node() {
                Node::Func(Func::Cos, a) => (Func::Sin, a.clone()),
                Node::Func(Func::Cosh, a) => (Func::Sinh, a.clone()),
                _ => return false,
            };
            k.is_integer() && *k >= rat(2) && sines.contains(&partner)
        })
    };
    let mut current = p;
    loop {
        let mut changed = false;
        let mut next = Poly::default();
        for (m, c) in current.0 {
            let Some(idx) = reducible(&m) else {
                next.add_term(m, c);
                continue;
            };
            changed = true;
            let (atom, k) = m[idx].clone();
            let (sq_sign, partner) = match atom.node() {
                Node::Func(Func::Cos, a) => (rat(-1), Expr::func(Func::Sin, a.clone())),
                Node::Func(Func::Cosh, a) => (rat(1), Expr::func(Func::Sinh, a.clone())),
                _ => unreachable!(),
            };
            let mut rest = m.clone();
            let lowered = &k - rat(2);
            if lowered.is_zero() {
                rest.remove(idx);
            } else {
                rest[idx].1 = lowered;
            }
            // rest * (1 + sq_sign * partner^2)
            next.add_term(rest.clone(), c.clone());
            let (k2, m2) = mono_mul(&rest, &vec![(partner, rat(2))]);
            next.add_term(m2, c * sq_sign * k2);
        }
        current = next;
        if !changed {
            return current;
        }
    }
}

fn monomial_expr(m: &Monomial, c: &Rational) -> Expr {
    Expr::mul(
        std::iter::once(Expr::constant(c.clone())).chain(m.iter().map(|(a, k)| Expr::pow(a.clone(), k.clone()))),
    )
}

fn from_poly(p: &Poly) -> Expr {
    if p.0.is_empty() {
        return Expr::zero();
    }
    if p.0.len() == 1 {
        let (m, c) = p.0.iter().next().unwrap();
        return monomial_expr(m, c);
    }
    let mut mins: BTreeMap<Expr, Rational> = BTreeMap::new();
    for m in p.0.keys() {
        for (a, k) in m {
            if k.is_negative() {
                let slot = mins.entry(a.clone()).or_insert_with(Rational::zero);
                if k < slot {
                    *slot = k.clone();
                }
            }
        }
    }
    let numerator = Expr::add(p.0.iter().map(|(m, c)| {
        let mut shifted: BTreeMap<Expr, Rational> = m.iter().cloned().collect();
        for (a, min) in &mins {
            *shifted.entry(a.clone()).or_insert_with(Rational::zero) -= min;
        }
        let mono: Monomial = shifted.into_iter().filter(|(_, k)| !k.is_zero()).collect();
        monomial_expr(&mono, c)
    }));
    Expr::mul(std::iter::once(numerator).chain(mins.into_iter().map(|(a, k)| Expr::pow(a, k))))
}

/// Recursively simplify function arguments and power bases; rewrite tan and
/// tanh as quotients.
fn simplify_children(e: &Expr, opts: SimplifyOptions) -> Expr {
    match e.node() {
        Node::Const(_) | Node::Sym(_) => e.clone(),
        Node::Func(f, a) => {
            let a = e_simplify(a, opts);
            match f {
                Func::Tan => Expr::func(Func::Sin, a.clone()) / Expr::func(Func::Cos, a),
                Func::Tanh => Expr::func(Func::Sinh, a.clone()) / Expr::func(Func::Cosh, a),
                _ => Expr::func(*f, a),
            }
        }
        Node::Pow(b, k) => Expr::pow(e_simplify(b, opts), k.clone()),
        Node::Mul(xs) => Expr::mul(xs.iter().map(|x| simplify_children(x, opts))),
        Node::Add(xs) => Expr::add(xs.iter().map(|x| simplify_children(x, opts))),
    }
}

fn normalize_once(e: &Expr, opts: SimplifyOptions) -> Expr {
    let e = simplify_children(e, opts);
    let mut p = poly_or_atom(&e);
    if opts.pythagorean {
        p = pythagorean_reduce(p);
    }
    from_poly(&p)
}

fn e_simplify(e: &Expr, opts: SimplifyOptions) -> Expr {
    let mut cur = normalize_once(e, opts);
    for _ in 1..MAX_PASSES {
        let next = normalize_once(&cur, opts);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

impl Expr {
    /// Canonical simplified form: expanded over a common denominator with the
    /// Pythagorean rewrites applied. Idempotent; sound but not complete.
    pub fn simplify(&self) -> Expr {
        e_simplify(self, SimplifyOptions::default())
    }

    pub fn simplify_with(&self, opts: SimplifyOptions) -> Expr {
        e_simplify(self, opts)
    }

    /// True when the expression simplifies to the constant zero.
    pub fn is_symbolically_zero(&self) -> bool {
        self.is_zero() || self.simplify().is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Point, Symbol};

    fn coords() -> Vec<Symbol> {
        ["t", "r", "theta", "x", "y"].iter().map(|n| Symbol::coordinate(n)).collect()
    }

    fn p(s: &str) -> Expr {
        parse(s, &coords(), &[Symbol::parameter("M")]).unwrap()
    }

    #[test]
    fn cancellation_to_one() {
        assert!(p("sinh(r)*sin(theta)*(1/(sinh(r)*sin(theta)))").simplify().is_one());
    }

    #[test]
    fn second_derivative_ratio_minus_one() {
        let r = Symbol::coordinate("r");
        let s = p("sinh(r)");
        let e = s.diff(&r).diff(&r) / s - Expr::one();
        assert!(e.simplify().is_zero());
    }

    #[test]
    fn additive_identity() {
        assert_eq!((p("x") + Expr::zero()).simplify(), p("x"));
    }

    #[test]
    fn expands_and_collects() {
        assert_eq!(p("(x + y)^2 - x^2 - y^2").simplify(), p("2*x*y"));
        assert!(p("(x+1)*(x-1) - x^2 + 1").simplify().is_zero());
    }

    #[test]
    fn common_denominator() {
        assert!(p("1/x + 1/y - (x + y)/(x*y)").simplify().is_zero());
        let s = p("1/x + 1/y").simplify();
        assert_eq!(s, p("(x + y)/(x*y)"));
    }

    #[test]
    fn pythagorean_rules() {
        assert!(p("sin(x)^2 + cos(x)^2 - 1").simplify().is_zero());
        assert!(p("cosh(r)^2 - sinh(r)^2 - 1").simplify().is_zero());
        assert!(p("cosh(r)^2/(t^2*sinh(r)^2) - 1/(t^2*sinh(r)^2) - 1/t^2").simplify().is_zero());
        // cos^2 alone is left alone.
        assert_eq!(p("cos(x)^2").simplify(), p("cos(x)^2"));
        let off = p("sin(x)^2 + cos(x)^2").simplify_with(SimplifyOptions { pythagorean: false });
        assert!(!off.is_one());
    }

    #[test]
    fn roots_of_the_same_base_merge() {
        let e = p("sqrt(1 - 2*M/r) * (1/sqrt(1 - 2*M/r))");
        assert!(e.simplify().is_one());
    }

    #[test]
    fn tangent_as_quotient() {
        assert!(p("tan(x)*cos(x) - sin(x)").simplify().is_zero());
    }

    #[test]
    fn idempotent_on_samples() {
        for s in [
            "(x+y)^3/(x*y) + sin(x)^2*cos(x)^2",
            "sqrt(x*(y+1))^3 - x*(y+1)*sqrt(x*(y+1))",
            "exp(x)*(x + 1/x)^2",
            "cosh(y)^3 - sinh(y)*cosh(y)",
            "1/(x + y) + 1/(x - y)",
        ] {
            let once = p(s).simplify();
            assert_eq!(once.simplify(), once, "{s}");
            let pt = Point::from_pairs([("x", 0.7), ("y", 0.3)]);
            let (a, b) = (p(s).eval(&pt).unwrap(), once.eval(&pt).unwrap());
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{s}: {a} vs {b}");
        }
    }
}
