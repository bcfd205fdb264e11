use super::node::{rat, Expr, Func, Node, Symbol};

impl Expr {
    /// Partial derivative with respect to `x`, in canonical form.
    pub fn diff(&self, x: &Symbol) -> Expr {
        if !self.may_depend_on(x) {
            return Expr::zero();
        }
        match self.node() {
            Node::Const(_) => Expr::zero(),
            Node::Sym(s) => {
                if s == x {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Add(terms) => Expr::add(terms.iter().map(|t| t.diff(x))),
            Node::Mul(factors) => {
                let mut sum = Vec::with_capacity(factors.len());
                for (i, f) in factors.iter().enumerate() {
                    let df = f.diff(x);
                    if df.is_zero() {
                        continue;
                    }
                    let others = factors.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone());
                    sum.push(Expr::mul(others.chain(std::iter::once(df))));
                }
                Expr::add(sum)
            }
            Node::Pow(b, e) => {
                let db = b.diff(x);
                if db.is_zero() {
                    return Expr::zero();
                }
                Expr::mul([Expr::constant(e.clone()), Expr::pow(b.clone(), e - rat(1)), db])
            }
            Node::Func(f, a) => {
                let da = a.diff(x);
                if da.is_zero() {
                    return Expr::zero();
                }
                let a = a.clone();
                let outer = match f {
                    Func::Sin => Expr::func(Func::Cos, a),
                    Func::Cos => -Expr::func(Func::Sin, a),
                    Func::Tan => Expr::one() + Expr::powi(Expr::func(Func::Tan, a), 2),
                    Func::Sinh => Expr::func(Func::Cosh, a),
                    Func::Cosh => Expr::func(Func::Sinh, a),
                    Func::Tanh => Expr::one() - Expr::powi(Expr::func(Func::Tanh, a), 2),
                    Func::Exp => Expr::func(Func::Exp, a),
                    Func::Ln => a.recip(),
                    // sign(a) = a/|a|; undefined at a = 0, where |a| has no derivative.
                    Func::Abs => &a / Expr::func(Func::Abs, a.clone()),
                };
                outer * da
            }
        }
    }
}
