use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational used for constants and exponents.
pub type Rational = BigRational;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Coordinate,
    Parameter,
}

/// A named coordinate or parameter. Identity is the name alone.
#[derive(Clone, Debug)]
pub struct Symbol {
    name: Arc<str>,
    kind: SymbolKind,
}

impl Symbol {
    pub fn coordinate(name: &str) -> Self {
        Self { name: Arc::from(name), kind: SymbolKind::Coordinate }
    }

    pub fn parameter(name: &str) -> Self {
        Self { name: Arc::from(name), kind: SymbolKind::Parameter }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub(crate) fn mask_bit(&self) -> u64 {
        name_bit(&self.name)
    }
}

pub(crate) fn name_bit(name: &str) -> u64 {
    let mut h = DefaultHasher::new();
    name.hash(&mut h);
    1u64 << (h.finish() % 64)
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.name, &other.name) || self.name == other.name
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state);
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// The closed set of elementary functions. `sqrt` is not here: it is stored as
/// a power with exponent 1/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Ln,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug)]
pub enum Node {
    Const(Rational),
    Sym(Symbol),
    Func(Func, Expr),
    Pow(Expr, Rational),
    Mul(Vec<Expr>),
    Add(Vec<Expr>),
}

impl Node {
    fn rank(&self) -> u8 {
        match self {
            Node::Const(_) => 0,
            Node::Sym(_) => 1,
            Node::Func(..) => 2,
            Node::Pow(..) => 3,
            Node::Mul(_) => 4,
            Node::Add(_) => 5,
        }
    }
}

#[derive(Debug)]
struct Inner {
    node: Node,
    hash: u64,
    /// Bloom mask of the symbols occurring in the tree.
    mask: u64,
}

/// Immutable, shareable symbolic expression in canonical form.
///
/// All constructors canonicalize: sums and products are flattened and sorted,
/// like terms and like bases are merged, constants are folded.
#[derive(Clone)]
pub struct Expr(Arc<Inner>);

impl Expr {
    fn raw(node: Node) -> Self {
        let mut h = DefaultHasher::new();
        node.rank().hash(&mut h);
        let mask = match &node {
            Node::Const(c) => {
                c.hash(&mut h);
                0
            }
            Node::Sym(s) => {
                s.hash(&mut h);
                s.mask_bit()
            }
            Node::Func(f, a) => {
                f.hash(&mut h);
                a.0.hash.hash(&mut h);
                a.0.mask
            }
            Node::Pow(b, e) => {
                b.0.hash.hash(&mut h);
                e.hash(&mut h);
                b.0.mask
            }
            Node::Mul(xs) | Node::Add(xs) => {
                let mut m = 0;
                for x in xs {
                    x.0.hash.hash(&mut h);
                    m |= x.0.mask;
                }
                m
            }
        };
        Expr(Arc::new(Inner { node, hash: h.finish(), mask }))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn constant(c: Rational) -> Self {
        Self::raw(Node::Const(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn symbol(s: &Symbol) -> Self {
        Self::raw(Node::Sym(s.clone()))
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_one())
    }

    /// False only if the tree certainly does not mention `s`.
    pub(crate) fn may_depend_on(&self, s: &Symbol) -> bool {
        self.0.mask & s.mask_bit() != 0
    }

    /// Every symbol occurring in the expression, sorted by name.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_symbols(&self, out: &mut Vec<Symbol>) {
        match self.node() {
            Node::Const(_) => {}
            Node::Sym(s) => out.push(s.clone()),
            Node::Func(_, a) => a.collect_symbols(out),
            Node::Pow(b, _) => b.collect_symbols(out),
            Node::Mul(xs) | Node::Add(xs) => xs.iter().for_each(|x| x.collect_symbols(out)),
        }
    }

    /// Number of nodes, counting shared subtrees once per occurrence.
    pub fn size(&self) -> usize {
        1 + match self.node() {
            Node::Const(_) | Node::Sym(_) => 0,
            Node::Func(_, a) => a.size(),
            Node::Pow(b, _) => b.size(),
            Node::Mul(xs) | Node::Add(xs) => xs.iter().map(Expr::size).sum(),
        }
    }

    pub fn func(f: Func, arg: Expr) -> Self {
        if let Some(c) = arg.as_const() {
            if c.is_zero() {
                match f {
                    Func::Sin | Func::Tan | Func::Sinh | Func::Tanh | Func::Abs => return Expr::zero(),
                    Func::Cos | Func::Cosh | Func::Exp => return Expr::one(),
                    Func::Ln => {}
                }
            }
            if f == Func::Abs {
                return Expr::constant(c.abs());
            }
            if f == Func::Ln && c.is_one() {
                return Expr::zero();
            }
        }
        Self::raw(Node::Func(f, arg))
    }

    pub fn sqrt(arg: Expr) -> Self {
        Self::pow(arg, rat_frac(1, 2))
    }

    pub fn powi(base: Expr, n: i64) -> Self {
        Self::pow(base, rat(n))
    }

    pub fn pow(base: Expr, exp: Rational) -> Self {
        if exp.is_zero() {
            return Expr::one();
        }
        if exp.is_one() {
            return base;
        }
        match base.node() {
            Node::Const(c) => {
                if let Some(folded) = fold_const_pow(c, &exp) {
                    return Expr::constant(folded);
                }
                Self::raw(Node::Pow(base, exp))
            }
            Node::Pow(inner, a) => {
                // (b^a)^e = b^(ae) unless a is even and e fractional: (x^2)^(1/2) = |x|.
                let even_int = a.is_integer() && a.to_integer().is_even();
                if exp.is_integer() || !even_int {
                    Self::pow(inner.clone(), a * &exp)
                } else {
                    Self::raw(Node::Pow(base, exp))
                }
            }
            Node::Mul(factors) => {
                if exp.is_integer() {
                    return Self::mul(factors.iter().map(|f| Self::pow(f.clone(), exp.clone())));
                }
                // Only a positive numeric coefficient can be split off a fractional power.
                if let Some(c) = factors[0].as_const() {
                    if c.is_positive() {
                        let rest = Self::mul(factors[1..].iter().cloned());
                        return Self::mul([
                            Self::pow(factors[0].clone(), exp.clone()),
                            Self::pow(rest, exp),
                        ]);
                    }
                }
                Self::raw(Node::Pow(base, exp))
            }
            _ => Self::raw(Node::Pow(base, exp)),
        }
    }

    /// Split into `(base, exponent)`; non-powers have exponent 1.
    pub(crate) fn as_base_exp(&self) -> (Expr, Rational) {
        match self.node() {
            Node::Pow(b, e) => (b.clone(), e.clone()),
            _ => (self.clone(), Rational::one()),
        }
    }

    /// Split into `(coefficient, rest)` where rest carries no numeric factor.
    pub(crate) fn as_coeff_rest(&self) -> (Rational, Expr) {
        match self.node() {
            Node::Const(c) => (c.clone(), Expr::one()),
            Node::Mul(xs) => match xs[0].as_const() {
                Some(c) => {
                    let rest = if xs.len() == 2 { xs[1].clone() } else { Self::raw(Node::Mul(xs[1..].to_vec())) };
                    (c.clone(), rest)
                }
                None => (Rational::one(), self.clone()),
            },
            _ => (Rational::one(), self.clone()),
        }
    }

    pub fn mul<I: IntoIterator<Item = Expr>>(factors: I) -> Self {
        let mut pending: Vec<Expr> = factors.into_iter().collect();
        loop {
            let mut coeff = Rational::one();
            let mut bases: BTreeMap<Expr, Rational> = BTreeMap::new();
            let mut stack = std::mem::take(&mut pending);
            while let Some(f) = stack.pop() {
                match f.node() {
                    Node::Const(c) => {
                        if c.is_zero() {
                            return Expr::zero();
                        }
                        coeff *= c;
                    }
                    Node::Mul(xs) => stack.extend(xs.iter().cloned()),
                    _ => {
                        let (b, e) = f.as_base_exp();
                        *bases.entry(b).or_insert_with(Rational::zero) += e;
                    }
                }
            }
            let mut out = Vec::with_capacity(bases.len());
            let mut unstable = false;
            for (b, e) in bases {
                if e.is_zero() {
                    continue;
                }
                let p = Self::pow(b.clone(), e.clone());
                match p.node() {
                    Node::Const(c) => {
                        if c.is_zero() {
                            return Expr::zero();
                        }
                        coeff *= c;
                    }
                    Node::Mul(_) => {
                        unstable = true;
                        out.push(p);
                    }
                    _ => {
                        if p.as_base_exp().0 != b {
                            unstable = true;
                        }
                        out.push(p);
                    }
                }
            }
            if unstable {
                out.push(Expr::constant(coeff));
                pending = out;
                continue;
            }
            out.sort_by(|x, y| {
                let (bx, ex) = x.as_base_exp();
                let (by, ey) = y.as_base_exp();
                bx.cmp(&by).then_with(|| ex.cmp(&ey))
            });
            // Distinct bases can collide after unwrapping a nested power.
            if out.windows(2).any(|w| w[0].as_base_exp().0 == w[1].as_base_exp().0) {
                out.push(Expr::constant(coeff));
                pending = out;
                continue;
            }
            if out.is_empty() {
                return Expr::constant(coeff);
            }
            if coeff.is_one() && out.len() == 1 {
                return out.pop().unwrap();
            }
            // A number times a single sum distributes, so sums stay flat.
            if out.len() == 1 {
                if let Node::Add(terms) = out[0].node() {
                    return Self::add(terms.iter().map(|t| t.scale(coeff.clone())));
                }
            }
            if !coeff.is_one() {
                out.insert(0, Expr::constant(coeff));
            }
            return Self::raw(Node::Mul(out));
        }
    }

    pub fn add<I: IntoIterator<Item = Expr>>(terms: I) -> Self {
        let mut constant = Rational::zero();
        let mut like: BTreeMap<Expr, Rational> = BTreeMap::new();
        let mut stack: Vec<Expr> = terms.into_iter().collect();
        while let Some(t) = stack.pop() {
            match t.node() {
                Node::Const(c) => constant += c,
                Node::Add(xs) => stack.extend(xs.iter().cloned()),
                _ => {
                    let (c, rest) = t.as_coeff_rest();
                    *like.entry(rest).or_insert_with(Rational::zero) += c;
                }
            }
        }
        let mut out = Vec::with_capacity(like.len() + 1);
        if !constant.is_zero() {
            out.push(Expr::constant(constant));
        }
        for (rest, c) in like {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                out.push(rest);
            } else {
                out.push(Self::mul([Expr::constant(c), rest]));
            }
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Self::raw(Node::Add(out)),
        }
    }

    pub fn recip(&self) -> Self {
        Self::powi(self.clone(), -1)
    }

    pub fn scale(&self, c: Rational) -> Self {
        Self::mul([Expr::constant(c), self.clone()])
    }
}

/// Exact value of `c^exp` when it is rational.
fn fold_const_pow(c: &Rational, exp: &Rational) -> Option<Rational> {
    if c.is_one() {
        return Some(Rational::one());
    }
    if c.is_zero() {
        return exp.is_positive().then(Rational::zero);
    }
    let num = exp.numer().to_i32()?;
    let den = exp.denom().to_u32()?;
    if den == 1 {
        if num.unsigned_abs() > 4096 {
            return None;
        }
        return Some(c.pow(num));
    }
    if c.is_negative() {
        return None;
    }
    let rn = exact_root(c.numer(), den)?;
    let rd = exact_root(c.denom(), den)?;
    Some(Rational::new(rn, rd).pow(num))
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    (r.pow(k) == *n).then_some(r)
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.cmp(other) == Ordering::Equal)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state);
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order: node-kind rank, then symbol name, then children.
impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let (a, b) = (self.node(), other.node());
        a.rank().cmp(&b.rank()).then_with(|| match (a, b) {
            (Node::Const(x), Node::Const(y)) => x.cmp(y),
            (Node::Sym(x), Node::Sym(y)) => x.cmp(y),
            (Node::Func(f, x), Node::Func(g, y)) => f.cmp(g).then_with(|| x.cmp(y)),
            (Node::Pow(x, e), Node::Pow(y, d)) => x.cmp(y).then_with(|| e.cmp(d)),
            (Node::Mul(xs), Node::Mul(ys)) | (Node::Add(xs), Node::Add(ys)) => xs.cmp(ys),
            _ => unreachable!("equal ranks imply equal kinds"),
        })
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl std::ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl std::ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs.clone())
            }
        }
        impl std::ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs)
            }
        }
        impl std::ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs.clone())
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::add([a, b]));
binop!(Sub, sub, |a, b| Expr::add([a, -b]));
binop!(Mul, mul, |a, b| Expr::mul([a, b]));
binop!(Div, div, |a, b| Expr::mul([a, b.recip()]));

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(rat(-1))
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(rat(-1))
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::symbol(&Symbol::coordinate("x"))
    }

    fn y() -> Expr {
        Expr::symbol(&Symbol::coordinate("y"))
    }

    #[test]
    fn identities_fold() {
        assert_eq!(Expr::powi(x(), 1), x());
        assert!(Expr::powi(x(), 0).is_one());
        assert!((Expr::zero() * x()).is_zero());
        assert_eq!(Expr::one() * x(), x());
        assert_eq!(x() + Expr::zero(), x());
    }

    #[test]
    fn like_terms_and_bases_merge() {
        let e = x() * y() + x() * y().scale(rat(2));
        assert_eq!(e, (x() * y()).scale(rat(3)));
        let p = x() * x() * Expr::powi(x(), -2);
        assert!(p.is_one());
        assert!((x() - x()).is_zero());
    }

    #[test]
    fn order_is_commutative_invariant() {
        assert_eq!(x() * y(), y() * x());
        assert_eq!(x() + y() + Expr::int(3), Expr::int(3) + y() + x());
    }

    #[test]
    fn constant_powers() {
        let four = Expr::int(4);
        assert_eq!(Expr::sqrt(four), Expr::int(2));
        let two_root = Expr::sqrt(Expr::int(2));
        assert!(matches!(two_root.node(), Node::Pow(..)));
        assert_eq!(two_root.clone() * two_root, Expr::int(2));
        assert_eq!(Expr::powi(Expr::constant(rat_frac(2, 3)), -2), Expr::constant(rat_frac(9, 4)));
    }

    #[test]
    fn nested_even_power_under_root_is_kept() {
        let e = Expr::sqrt(Expr::powi(x(), 2));
        assert!(matches!(e.node(), Node::Pow(b, _) if matches!(b.node(), Node::Pow(..))));
        assert_eq!(Expr::powi(Expr::sqrt(x()), 2), x());
    }

    #[test]
    fn fractional_power_splits_positive_coefficient_only() {
        let e = Expr::sqrt(x().scale(rat(4)));
        assert_eq!(e, Expr::sqrt(x()).scale(rat(2)));
        let n = Expr::sqrt(-x());
        assert!(matches!(n.node(), Node::Pow(..)));
    }
}
