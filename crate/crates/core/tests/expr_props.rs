use orthocurv_core::expr::{parse, residual, Expr, Func, Point, Symbol};
use proptest::prelude::*;

fn coords() -> Vec<Symbol> {
    vec![Symbol::coordinate("x"), Symbol::coordinate("y")]
}

fn params() -> Vec<Symbol> {
    vec![Symbol::parameter("a")]
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Expr::int(n) / Expr::int(d)),
        Just(Expr::symbol(&Symbol::coordinate("x"))),
        Just(Expr::symbol(&Symbol::coordinate("y"))),
        Just(Expr::symbol(&Symbol::parameter("a"))),
    ]
}

/// Expressions that are finite wherever x, y, a lie in [0.3, 1.5].
fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| a / (Expr::int(2) + Expr::func(Func::Sin, b))),
            (inner.clone(), 0i64..=3).prop_map(|(a, k)| Expr::powi(a, k)),
            inner.clone().prop_map(|a| Expr::sqrt(Expr::one() + Expr::powi(a, 2))),
            inner.clone().prop_map(|a| Expr::func(Func::Ln, Expr::int(2) + Expr::func(Func::Cos, a))),
            inner.clone().prop_map(|a| Expr::func(Func::Sin, a)),
            inner.clone().prop_map(|a| Expr::func(Func::Cos, a)),
            inner.clone().prop_map(|a| Expr::func(Func::Sinh, Expr::func(Func::Sin, a))),
            inner.clone().prop_map(|a| Expr::func(Func::Cosh, Expr::func(Func::Cos, a))),
            inner.clone().prop_map(|a| Expr::func(Func::Exp, Expr::func(Func::Sin, a))),
            inner.prop_map(|a| Expr::func(Func::Tanh, a)),
        ]
    })
}

fn point() -> impl Strategy<Value = Point> {
    (0.3f64..1.5, 0.3f64..1.5, 0.3f64..1.5).prop_map(|(x, y, a)| Point::from_pairs([("x", x), ("y", y), ("a", a)]))
}

/// Richardson-extrapolated central difference with a step scaled to `x`.
fn numeric_derivative(e: &Expr, p: &Point, var: &str) -> Option<f64> {
    let x0 = p.get(var)?;
    let h = 1e-3 * x0.abs().max(1.0);
    let central = |h: f64| -> Option<f64> {
        let (mut lo, mut hi) = (p.clone(), p.clone());
        lo.set(var, x0 - h);
        hi.set(var, x0 + h);
        Some((e.eval(&hi).ok()? - e.eval(&lo).ok()?) / (2.0 * h))
    };
    let (d1, d2) = (central(h)?, central(h / 2.0)?);
    Some((4.0 * d2 - d1) / 3.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn derivative_matches_finite_difference(e in expr(), p in point(), wrt_y in any::<bool>()) {
        let var = if wrt_y { "y" } else { "x" };
        let d = e.diff(&Symbol::coordinate(var));
        let exact = d.eval(&p).unwrap();
        let fd = numeric_derivative(&e, &p, var).unwrap();
        prop_assume!(exact.abs() < 1e6);
        prop_assert!(residual(exact, fd) <= 1e-6, "{e}\nd = {d}\nexact {exact} fd {fd}");
    }

    #[test]
    fn simplify_is_idempotent(e in expr()) {
        let s = e.simplify();
        prop_assert_eq!(s.simplify(), s);
    }

    #[test]
    fn simplify_preserves_values(e in expr(), p in point()) {
        let before = e.eval(&p).unwrap();
        let after = e.simplify().eval(&p).unwrap();
        prop_assert!(residual(before, after) <= 1e-12, "{e} -> {}: {before} vs {after}", e.simplify());
    }

    #[test]
    fn print_then_parse_is_identity(e in expr()) {
        let text = e.to_string();
        let again = parse(&text, &coords(), &params()).unwrap();
        prop_assert_eq!(&again, &e, "{}", text);
        let s = e.simplify();
        prop_assert_eq!(parse(&s.to_string(), &coords(), &params()).unwrap(), s);
    }

    #[test]
    fn derivative_is_linear(a in expr(), b in expr(), p in point()) {
        let x = Symbol::coordinate("x");
        let lhs = (a.clone() + b.clone()).diff(&x).eval(&p).unwrap();
        let rhs = a.diff(&x).eval(&p).unwrap() + b.diff(&x).eval(&p).unwrap();
        prop_assert!(residual(lhs, rhs) <= 1e-12);
    }
}
