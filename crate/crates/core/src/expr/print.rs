//! Rendering in the same grammar `parse` accepts.

use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::node::{Expr, Node, Rational};

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_ATOM: u8 = 5;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self).0)
    }
}

fn render(e: &Expr) -> (String, u8) {
    match e.node() {
        Node::Const(c) => render_const(c),
        Node::Sym(s) => (s.name().to_string(), PREC_ATOM),
        Node::Func(func, a) => (format!("{}({})", func.name(), render(a).0), PREC_ATOM),
        Node::Pow(b, exp) => render_pow(b, exp),
        Node::Mul(_) => render_mul(e),
        Node::Add(terms) => {
            let mut s = String::new();
            for (i, t) in terms.iter().enumerate() {
                let (c, _) = t.as_coeff_rest();
                if i == 0 {
                    s.push_str(&render(t).0);
                } else if c.is_negative() {
                    let _ = write!(s, " - {}", paren(render(&-t), PREC_MUL));
                } else {
                    let _ = write!(s, " + {}", paren(render(t), PREC_MUL));
                }
            }
            (s, PREC_ADD)
        }
    }
}

fn render_const(c: &Rational) -> (String, u8) {
    let prec = if c.is_negative() {
        PREC_UNARY
    } else if c.is_integer() {
        PREC_ATOM
    } else {
        PREC_MUL
    };
    let s = if c.is_integer() { c.numer().to_string() } else { format!("{}/{}", c.numer(), c.denom()) };
    (s, prec)
}

fn paren(s: (String, u8), min: u8) -> String {
    if s.1 < min {
        format!("({})", s.0)
    } else {
        s.0
    }
}

fn render_pow(b: &Expr, exp: &Rational) -> (String, u8) {
    if exp.is_negative() {
        let d = render(&Expr::pow(b.clone(), -exp));
        return (format!("1/{}", paren(d, PREC_UNARY + 1)), PREC_MUL);
    }
    let base = paren(render(b), PREC_ATOM);
    if *exp == Rational::new(1.into(), 2.into()) {
        return (format!("sqrt({})", render(b).0), PREC_ATOM);
    }
    let e = if exp.is_integer() && exp.is_positive() {
        exp.numer().to_string()
    } else {
        format!("({})", render_const(exp).0)
    };
    (format!("{base}^{e}"), PREC_ATOM)
}

fn render_mul(e: &Expr) -> (String, u8) {
    let Node::Mul(xs) = e.node() else { unreachable!() };
    let (coeff, factors) = match xs[0].as_const() {
        Some(c) => (c.clone(), &xs[1..]),
        None => (Rational::one(), &xs[..]),
    };
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<(String, u8)> = Vec::new();
    let abs = coeff.abs();
    if !abs.numer().is_one() {
        num.push(abs.numer().to_string());
    }
    let coeff_den = (!abs.denom().is_one()).then(|| abs.denom().to_string());
    for f in factors {
        let (b, exp) = f.as_base_exp();
        if exp.is_negative() {
            den.push(render(&Expr::pow(b, -exp)));
        } else {
            num.push(paren(render(f), PREC_MUL + 1));
        }
    }
    let mut s = if num.is_empty() { "1".to_string() } else { num.join("*") };
    // Written as its own division so the parser never multiplies it into a sum.
    if let Some(q) = coeff_den {
        let _ = write!(s, "/{q}");
    }
    if !den.is_empty() {
        s.push('/');
        if den.len() == 1 {
            let d = den.pop().unwrap();
            s.push_str(&paren(d, PREC_UNARY + 1));
        } else {
            let parts: Vec<String> = den.into_iter().map(|d| paren(d, PREC_MUL + 1)).collect();
            let _ = write!(s, "({})", parts.join("*"));
        }
    }
    if coeff.is_negative() {
        (format!("-{s}"), PREC_UNARY)
    } else {
        (s, PREC_MUL)
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::{parse, Symbol};

    fn roundtrip(s: &str) -> String {
        let coords = [Symbol::coordinate("x"), Symbol::coordinate("y"), Symbol::coordinate("theta")];
        let params = [Symbol::parameter("a")];
        let e = parse(s, &coords, &params).unwrap();
        let printed = e.to_string();
        let again = parse(&printed, &coords, &params).unwrap();
        assert_eq!(e, again, "{s} -> {printed}");
        printed
    }

    #[test]
    fn renders_readably() {
        assert_eq!(roundtrip("1/a^2"), "1/a^2");
        assert_eq!(roundtrip("a*sin(theta)"), "a*sin(theta)");
        assert_eq!(roundtrip("x - 2*y"), "x - 2*y");
        assert_eq!(roundtrip("-x/2"), "-x/2");
        assert_eq!(roundtrip("sqrt(1 - 2*a/x)"), "sqrt(1 - 2*a/x)");
        assert_eq!(roundtrip("1/sqrt(x)"), "1/sqrt(x)");
    }

    #[test]
    fn awkward_shapes_roundtrip() {
        for s in [
            "-3/2",
            "(x + y)^2",
            "(x + y)^(-3/2)*theta",
            "x^(1/3)/(y*a^2)",
            "(-2)^(1/2)",
            "2^(1/2)*x",
            "sqrt(x^2)",
            "1/sqrt(x^2)",
            "-(x+1)*y/(3*a)",
            "sin(x)^2 - cos(-x)",
            "exp(-x^2/2)",
            "abs(x - y)^3",
            "-x^2",
            "(x*y)^(1/2)",
            "x^(-2/3) + 0.25",
        ] {
            roundtrip(s);
        }
    }
}
