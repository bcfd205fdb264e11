//! Minimal computer algebra over chart coordinates and named parameters.

mod diff;
mod eval;
mod node;
mod numeric;
mod parse;
mod print;
mod simplify;

pub use eval::Point;
pub use node::{Expr, Func, Node, Rational, Symbol, SymbolKind};
pub use numeric::{equivalent_numeric, residual, Domain, Equivalence, Interval, TooManyRejections};
pub use parse::parse;
pub use simplify::SimplifyOptions;

pub(crate) use node::{rat, rat_frac};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("undeclared identifier '{name}' at position {position}")]
    Undeclared { name: String, position: usize },
    #[error("unknown function '{name}' at position {position}")]
    UnknownFunction { name: String, position: usize },
    #[error("exponent at position {position} is not a rational constant")]
    NonConstantExponent { position: usize },
    #[error("symbol '{name}' is not bound at the evaluation point")]
    Unbound { name: String },
    #[error("domain error in {expr}: {reason}")]
    Domain { expr: String, reason: String },
}
