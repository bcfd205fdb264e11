use std::sync::Arc;

use num_traits::ToPrimitive;

use super::node::{Expr, Func, Node, Rational};
use super::ExprError;

/// A binding of symbol names to finite reals.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Point {
    bindings: Vec<(Arc<str>, f64)>,
}

impl Point {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a, I: IntoIterator<Item = (&'a str, f64)>>(pairs: I) -> Self {
        let mut p = Self::new();
        for (k, v) in pairs {
            p.set(k, v);
        }
        p
    }

    pub fn set(&mut self, name: &str, value: f64) {
        match self.bindings.iter_mut().find(|(k, _)| &**k == name) {
            Some(slot) => slot.1 = value,
            None => self.bindings.push((Arc::from(name), value)),
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.bindings.iter().find(|(k, _)| &**k == name).map(|&(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.bindings.iter().map(|(k, v)| (&**k, *v))
    }

    pub fn is_finite(&self) -> bool {
        self.bindings.iter().all(|(_, v)| v.is_finite())
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("}")
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn domain(e: &Expr, reason: &str) -> ExprError {
    ExprError::Domain { expr: e.to_string(), reason: reason.to_string() }
}

impl Expr {
    /// Evaluate in IEEE double precision.
    pub fn eval(&self, p: &Point) -> Result<f64, ExprError> {
        let v = match self.node() {
            Node::Const(c) => rational_to_f64(c),
            Node::Sym(s) => p.get(s.name()).ok_or_else(|| ExprError::Unbound { name: s.name().to_string() })?,
            Node::Add(xs) => {
                let mut acc = 0.0;
                for x in xs {
                    acc += x.eval(p)?;
                }
                acc
            }
            Node::Mul(xs) => {
                let mut acc = 1.0;
                for x in xs {
                    acc *= x.eval(p)?;
                }
                acc
            }
            Node::Pow(b, e) => {
                let base = b.eval(p)?;
                eval_pow(self, base, e)?
            }
            Node::Func(f, a) => {
                let x = a.eval(p)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Tanh => x.tanh(),
                    Func::Exp => x.exp(),
                    Func::Abs => x.abs(),
                    Func::Ln => {
                        if x <= 0.0 {
                            return Err(domain(self, "logarithm of a nonpositive value"));
                        }
                        x.ln()
                    }
                }
            }
        };
        if !v.is_finite() {
            return Err(domain(self, "non-finite value"));
        }
        Ok(v)
    }
}

fn eval_pow(e: &Expr, base: f64, exp: &Rational) -> Result<f64, ExprError> {
    if base == 0.0 && exp < &Rational::from_integer(0.into()) {
        return Err(domain(e, "division by zero"));
    }
    if exp.is_integer() {
        return match exp.to_i32() {
            Some(n) => Ok(base.powi(n)),
            None => Ok(base.powf(rational_to_f64(exp))),
        };
    }
    let q = exp.denom();
    if base < 0.0 {
        // Real odd roots of negative numbers exist; even roots do not.
        if (q % 2u8) == 0.into() {
            return Err(domain(e, "even root of a negative value"));
        }
        let mag = (-base).powf(rational_to_f64(exp));
        let odd_numer = (exp.numer() % 2u8) != 0.into();
        return Ok(if odd_numer { -mag } else { mag });
    }
    if *q == 2.into() && exp.numer() == &1.into() {
        return Ok(base.sqrt());
    }
    Ok(base.powf(rational_to_f64(exp)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Symbol};

    fn p(s: &str) -> Expr {
        let c: Vec<Symbol> = ["t", "r", "x"].iter().map(|n| Symbol::coordinate(n)).collect();
        parse(s, &c, &[]).unwrap()
    }

    #[test]
    fn basic_values() {
        assert_eq!(p("t*sinh(r)").eval(&Point::from_pairs([("t", 2.0), ("r", 0.0)])).unwrap(), 0.0);
        assert_eq!(p("r^2").eval(&Point::from_pairs([("r", 3.0)])).unwrap(), 9.0);
    }

    #[test]
    fn division_by_zero_is_a_domain_error() {
        let err = p("1/t^2").eval(&Point::from_pairs([("t", 0.0)])).unwrap_err();
        match err {
            ExprError::Domain { expr, reason } => {
                assert_eq!(expr, "1/t^2");
                assert!(reason.contains("division by zero"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn log_and_root_domains() {
        assert!(p("ln(x)").eval(&Point::from_pairs([("x", -1.0)])).is_err());
        assert!(p("sqrt(x)").eval(&Point::from_pairs([("x", -1.0)])).is_err());
        let cube = p("x^(1/3)").eval(&Point::from_pairs([("x", -8.0)])).unwrap();
        assert!((cube + 2.0).abs() < 1e-12);
    }

    #[test]
    fn unbound_symbol() {
        assert!(matches!(p("x + t").eval(&Point::from_pairs([("x", 1.0)])), Err(ExprError::Unbound { .. })));
    }
}
