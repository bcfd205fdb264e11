//! Infix expression parser.
//!
//! Precedence, loosest first: `+ -`, `* /`, unary `-`, `^` (right-associative).
//! The exponent of `^` may carry its own unary minus (`x^-1`) and must reduce to
//! a rational constant.

use num_bigint::BigInt;
use num_traits::Zero;

use super::node::{Expr, Func, Rational, Symbol};
use super::ExprError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ExprError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (tok, at) = lx.next()?;
            let end = tok == Tok::End;
            out.push((tok, at));
            if end {
                return Ok(out);
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn next(&mut self) -> Result<(Tok, usize), ExprError> {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().unwrap().len_utf8();
        }
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || c == '.' {
            return self.number().map(|n| (Tok::Num(n), start));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        self.pos += c.len_utf8();
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ExprError::Syntax { position: start, message: format!("unexpected character '{other}'") })
            }
        };
        Ok((tok, start))
    }

    fn number(&mut self) -> Result<Rational, ExprError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let int_part = &self.src[start..self.pos];
        let mut frac_part = "";
        if self.peek() == Some('.') {
            self.pos += 1;
            let fs = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            frac_part = &self.src[fs..self.pos];
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(ExprError::Syntax { position: start, message: "malformed number".into() });
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().expect("ascii digits") };
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        Ok(Rational::new(numer, denom))
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    coords: &'a [Symbol],
    params: &'a [Symbol],
}

const BP_ADD: u8 = 1;
const BP_MUL: u8 = 2;
const BP_UNARY: u8 = 3;
const BP_POW: u8 = 4;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { position: self.pos(), message: message.into() })
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        match self.peek() {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            _ => self.syntax("expected ')'"),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, ExprError> {
        let mut lhs = self.prefix()?;
        // A chain of `*` and `/` becomes one product, built in a single step.
        let mut chain: Vec<Expr> = Vec::new();
        while let Tok::Op(op) = *self.peek() {
            let bp = match op {
                '+' | '-' => BP_ADD,
                '*' | '/' => BP_MUL,
                '^' => BP_POW,
                _ => unreachable!(),
            };
            if bp < min_bp {
                break;
            }
            self.bump();
            if op == '^' {
                let at = self.pos();
                let exp = self.expr(BP_POW)?;
                lhs = match exp.as_const() {
                    Some(e) => Expr::pow(lhs, e.clone()),
                    None => return Err(ExprError::NonConstantExponent { position: at }),
                };
                continue;
            }
            let rhs = self.expr(bp + 1)?;
            match op {
                '*' | '/' => {
                    if chain.is_empty() {
                        chain.push(lhs.clone());
                    }
                    chain.push(if op == '*' { rhs } else { rhs.recip() });
                    lhs = Expr::mul(chain.iter().cloned());
                }
                '+' => {
                    chain.clear();
                    lhs = lhs + rhs;
                }
                '-' => {
                    chain.clear();
                    lhs = lhs - rhs;
                }
                _ => unreachable!(),
            }
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr, ExprError> {
        let at = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(Expr::constant(n)),
            Tok::Op('-') => Ok(-self.expr(BP_UNARY)?),
            Tok::LParen => {
                let e = self.expr(0)?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let arg = self.expr(0)?;
                    self.expect_rparen()?;
                    if name == "sqrt" {
                        return Ok(Expr::sqrt(arg));
                    }
                    return match Func::from_name(&name) {
                        Some(f) => Ok(Expr::func(f, arg)),
                        None => Err(ExprError::UnknownFunction { name, position: at }),
                    };
                }
                self.coords
                    .iter()
                    .chain(self.params)
                    .find(|s| s.name() == name)
                    .map(Expr::symbol)
                    .ok_or(ExprError::Undeclared { name, position: at })
            }
            Tok::End => Err(ExprError::Syntax { position: at, message: "unexpected end of input".into() }),
            t => Err(ExprError::Syntax { position: at, message: format!("unexpected token {t:?}") }),
        }
    }
}

/// Parse `text` into canonical form. Every identifier must be one of `coords`
/// or `params`.
pub fn parse(text: &str, coords: &[Symbol], params: &[Symbol]) -> Result<Expr, ExprError> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, at: 0, coords, params };
    let e = p.expr(0)?;
    if *p.peek() != Tok::End {
        return p.syntax("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::node::{rat, rat_frac, Node};

    fn syms() -> (Vec<Symbol>, Vec<Symbol>) {
        (
            vec![Symbol::coordinate("t"), Symbol::coordinate("r"), Symbol::coordinate("theta"), Symbol::coordinate("x")],
            vec![Symbol::parameter("a")],
        )
    }

    fn p(s: &str) -> Result<Expr, ExprError> {
        let (c, q) = syms();
        parse(s, &c, &q)
    }

    fn v(name: &str) -> Expr {
        Expr::symbol(&Symbol::coordinate(name))
    }

    #[test]
    fn product_of_functions() {
        let e = p("t*sinh(r)*sin(theta)").unwrap();
        let expected = Expr::mul([v("t"), Expr::func(Func::Sinh, v("r")), Expr::func(Func::Sin, v("theta"))]);
        assert_eq!(e, expected);
        assert!(matches!(e.node(), Node::Mul(xs) if xs.len() == 3));
    }

    #[test]
    fn literal_one() {
        assert_eq!(p("1").unwrap(), Expr::one());
    }

    #[test]
    fn powers_of_symbols_and_functions() {
        let e = p("r^2*sin(theta)^2").unwrap();
        let expected = Expr::mul([Expr::powi(v("r"), 2), Expr::powi(Expr::func(Func::Sin, v("theta")), 2)]);
        assert_eq!(e, expected);
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(p("0.5").unwrap(), Expr::constant(rat_frac(1, 2)));
        assert_eq!(p("1.25*x").unwrap(), v("x").scale(rat_frac(5, 4)));
        assert_eq!(p(".5").unwrap(), Expr::constant(rat_frac(1, 2)));
    }

    #[test]
    fn precedence_and_associativity() {
        // ^ binds tighter than unary minus
        assert_eq!(p("-x^2").unwrap(), -Expr::powi(v("x"), 2));
        // right-associative
        assert_eq!(p("x^2^3").unwrap(), Expr::powi(v("x"), 8));
        assert_eq!(p("x^-1").unwrap(), v("x").recip());
        assert_eq!(p("2^3^2").unwrap(), Expr::int(512));
        assert_eq!(p("1 - x - x").unwrap(), Expr::one() - v("x").scale(rat(2)));
        assert_eq!(p("x/2/x").unwrap(), Expr::constant(rat_frac(1, 2)));
    }

    #[test]
    fn sqrt_is_half_power() {
        assert_eq!(p("sqrt(x)").unwrap(), Expr::pow(v("x"), rat_frac(1, 2)));
        assert_eq!(p("x^(1/2)").unwrap(), p("sqrt(x)").unwrap());
    }

    #[test]
    fn errors_carry_position_or_name() {
        match p("t + b") {
            Err(ExprError::Undeclared { name, position }) => {
                assert_eq!(name, "b");
                assert_eq!(position, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(p("t +"), Err(ExprError::Syntax { position: 3, .. })));
        assert!(matches!(p("(t"), Err(ExprError::Syntax { .. })));
        assert!(matches!(p("t $ r"), Err(ExprError::Syntax { position: 2, .. })));
        assert!(matches!(p("foo(t)"), Err(ExprError::UnknownFunction { .. })));
        assert!(matches!(p("t^r"), Err(ExprError::NonConstantExponent { position: 2 })));
        assert!(matches!(p("t r"), Err(ExprError::Syntax { .. })));
    }
}
