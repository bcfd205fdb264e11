//! Diagonal metrics `ds² = Σ η_α g_α² (dx^α)²` and the `.metric` file format.

use std::collections::BTreeMap;
use std::fmt::{self, Write};

use crate::cartan::{Basis, ExteriorForm};
use crate::expr::{parse, rat, Domain, Expr, ExprError, Interval, Point, Symbol};

/// Samples drawn by [`DiagonalMetric::validate`].
pub const VALIDATION_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalMetric {
    coords: Vec<Symbol>,
    eta: Vec<i8>,
    g: Vec<Expr>,
    params: Vec<Symbol>,
    domain: Domain,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("line {line}: unknown symbol '{name}'")]
    UnknownSymbol { name: String, line: usize },
    #[error("line {line}: signature entry '{token}' is not + or -")]
    BadSignature { token: String, line: usize },
    #[error("line {line}: {source}")]
    Expression { line: usize, source: ExprError },
    #[error("metric failed validation: {0}")]
    Invalid(Validation),
}

impl MetricError {
    /// True when the file was well formed but the metric misbehaves numerically.
    pub fn is_domain_error(&self) -> bool {
        matches!(self, MetricError::Invalid(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ValidationFailure {
    Undeclared { coord: String, symbol: String },
    MissingDomain { symbol: String },
    NonPositive { coord: String, point: Point, value: f64 },
    Evaluation { coord: String, point: Point, error: ExprError },
    SignMismatch { coord: String, point: Point, value: f64 },
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Undeclared { coord, symbol } => write!(f, "g[{coord}] uses undeclared symbol '{symbol}'"),
            Self::MissingDomain { symbol } => write!(f, "no domain given for '{symbol}'"),
            Self::NonPositive { coord, point, value } => write!(f, "g[{coord}] = {value} at {point}"),
            Self::Evaluation { coord, point, error } => write!(f, "g[{coord}] at {point}: {error}"),
            Self::SignMismatch { coord, point, value } => {
                write!(f, "gg[{coord}] = {value} at {point} disagrees with the declared signature")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Validation {
    pub failures: Vec<ValidationFailure>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Validation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self.failures.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

impl DiagonalMetric {
    /// Assemble a metric, checking only shapes. Call [`validate`](Self::validate) for the rest.
    pub fn new(
        coords: Vec<Symbol>,
        eta: Vec<i8>,
        g: Vec<Expr>,
        params: Vec<Symbol>,
        domain: Domain,
    ) -> Result<Self, MetricError> {
        let n = coords.len();
        if n < 2 {
            return Err(MetricError::DimensionMismatch(format!("need at least 2 coordinates, got {n}")));
        }
        if eta.len() != n || g.len() != n {
            return Err(MetricError::DimensionMismatch(format!(
                "{n} coordinates but {} signature entries and {} roots",
                eta.len(),
                g.len()
            )));
        }
        if let Some(bad) = eta.iter().find(|e| e.abs() != 1) {
            return Err(MetricError::BadSignature { token: bad.to_string(), line: 0 });
        }
        Ok(Self { coords, eta, g, params, domain })
    }

    /// Build from textual parts. Each root is parsed against `coords` and `params`.
    pub fn from_parts(
        coords: &[&str],
        eta: &[i8],
        g: &[&str],
        params: &[&str],
        domain: &[(&str, f64, f64)],
    ) -> Result<Self, MetricError> {
        let cs: Vec<Symbol> = coords.iter().map(|c| Symbol::coordinate(c)).collect();
        let ps: Vec<Symbol> = params.iter().map(|p| Symbol::parameter(p)).collect();
        let g = g
            .iter()
            .map(|s| parse(s, &cs, &ps).map_err(|e| expr_error(0, e)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut d = Domain::new();
        for &(name, lo, hi) in domain {
            d.insert(name, Interval::new(lo, hi));
        }
        Self::new(cs, eta.to_vec(), g, ps, d)
    }

    pub fn load(text: &str) -> Result<Self, MetricError> {
        let (m, squares) = parse_file(text)?;
        let mut report = m.validate(0);
        for (i, gg) in squares.iter().enumerate() {
            if let Some(gg) = gg {
                report.failures.extend(m.check_square_sign(i, gg, 0));
            }
        }
        if report.is_valid() {
            Ok(m)
        } else {
            Err(MetricError::Invalid(report))
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Symbol {
        &self.coords[i]
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name() == name)
    }

    pub fn eta(&self, i: usize) -> i8 {
        self.eta[i]
    }

    pub fn etas(&self) -> &[i8] {
        &self.eta
    }

    /// The positive root `g_α`.
    pub fn g(&self, i: usize) -> &Expr {
        &self.g[i]
    }

    /// The metric coefficient `g_αα = η_α g_α²`.
    pub fn g_diag(&self, i: usize) -> Expr {
        Expr::powi(self.g[i].clone(), 2).scale(rat(self.eta[i].into()))
    }

    /// `∂_x g_α` for coordinate index `x`.
    pub fn dg(&self, alpha: usize, x: usize) -> Expr {
        self.g[alpha].diff(&self.coords[x])
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    /// Seeded sample points from the sample domain.
    pub fn sample_points(&self, n: usize, seed: u64) -> Vec<Point> {
        self.domain.sample_points(n, seed)
    }

    pub fn validate(&self, seed: u64) -> Validation {
        let mut failures = Vec::new();
        for s in self.coords.iter().chain(&self.params) {
            if self.domain.get(s.name()).is_none() {
                failures.push(ValidationFailure::MissingDomain { symbol: s.name().to_string() });
            }
        }
        for (c, g) in self.coords.iter().zip(&self.g) {
            for s in g.symbols() {
                if !self.coords.contains(&s) && !self.params.contains(&s) {
                    failures.push(ValidationFailure::Undeclared {
                        coord: c.name().to_string(),
                        symbol: s.name().to_string(),
                    });
                }
            }
        }
        if !failures.is_empty() {
            return Validation { failures };
        }
        let points = self.sample_points(VALIDATION_SAMPLES, seed);
        for (c, g) in self.coords.iter().zip(&self.g) {
            let coord = c.name().to_string();
            for p in &points {
                match g.eval(p) {
                    Ok(v) if v > 0.0 => continue,
                    Ok(value) => failures.push(ValidationFailure::NonPositive { coord, point: p.clone(), value }),
                    Err(error) => failures.push(ValidationFailure::Evaluation { coord, point: p.clone(), error }),
                }
                break;
            }
        }
        Validation { failures }
    }

    fn check_square_sign(&self, i: usize, gg: &Expr, seed: u64) -> Option<ValidationFailure> {
        let coord = self.coords[i].name().to_string();
        for p in self.sample_points(VALIDATION_SAMPLES, seed) {
            match gg.eval(&p) {
                Ok(v) if v * f64::from(self.eta[i]) > 0.0 => {}
                Ok(value) => return Some(ValidationFailure::SignMismatch { coord, point: p, value }),
                Err(error) => return Some(ValidationFailure::Evaluation { coord, point: p, error }),
            }
        }
        None
    }

    /// The coframe `ω^α = g_α dx^α`, one form per coordinate.
    pub fn coframe(&self) -> Vec<ExteriorForm> {
        (0..self.dim()).map(|a| ExteriorForm::one_form(Basis::Coordinate, a, self.g[a].clone())).collect()
    }

    /// Render in the `.metric` format accepted by [`load`](Self::load).
    pub fn to_file_string(&self) -> String {
        let names = |xs: &[Symbol]| xs.iter().map(Symbol::name).collect::<Vec<_>>().join(", ");
        let mut s = String::new();
        let _ = writeln!(s, "coords = {}", names(&self.coords));
        let sig: Vec<&str> = self.eta.iter().map(|&e| if e > 0 { "+" } else { "-" }).collect();
        let _ = writeln!(s, "signature = {}", sig.join(", "));
        if !self.params.is_empty() {
            let _ = writeln!(s, "param = {}", names(&self.params));
        }
        for (c, g) in self.coords.iter().zip(&self.g) {
            let _ = writeln!(s, "g[{}] = {}", c.name(), g);
        }
        for (name, iv) in self.domain.iter() {
            let _ = writeln!(s, "domain[{name}] = {:?}, {:?}", iv.lo, iv.hi);
        }
        s
    }
}

impl fmt::Display for DiagonalMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_file_string())
    }
}

fn expr_error(line: usize, e: ExprError) -> MetricError {
    match e {
        ExprError::Undeclared { name, .. } => MetricError::UnknownSymbol { name, line },
        source => MetricError::Expression { line, source },
    }
}

fn format_err<T>(line: usize, message: impl Into<String>) -> Result<T, MetricError> {
    Err(MetricError::Format { line, message: message.into() })
}

fn split_list(value: &str) -> Vec<&str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn check_ident(line: usize, name: &str) -> Result<(), MetricError> {
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        format_err(line, format!("'{name}' is not a valid identifier"))
    }
}

type Parsed = (DiagonalMetric, Vec<Option<Expr>>);

fn parse_file(text: &str) -> Result<Parsed, MetricError> {
    let mut coords: Option<(usize, Vec<String>)> = None;
    let mut signature: Option<(usize, Vec<String>)> = None;
    let mut params: Vec<String> = Vec::new();
    let mut roots: BTreeMap<String, (usize, bool, String)> = BTreeMap::new();
    let mut domains: Vec<(usize, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return format_err(line, "expected 'key = value'");
        };
        let (key, value) = (key.trim(), value.trim());
        if let Some((head, arg)) = key.split_once('[') {
            let Some(arg) = arg.strip_suffix(']') else {
                return format_err(line, format!("unterminated '[' in '{key}'"));
            };
            let arg = arg.trim().to_string();
            match head.trim() {
                h @ ("g" | "gg") => {
                    if roots.insert(arg.clone(), (line, h == "gg", value.to_string())).is_some() {
                        return format_err(line, format!("second g line for '{arg}'"));
                    }
                }
                "domain" => {
                    if domains.iter().any(|(_, n, _)| *n == arg) {
                        return format_err(line, format!("second domain line for '{arg}'"));
                    }
                    domains.push((line, arg, value.to_string()));
                }
                other => return format_err(line, format!("unknown key '{other}[...]'")),
            }
            continue;
        }
        let items = || split_list(value).into_iter().map(String::from).collect::<Vec<_>>();
        match key {
            "coords" if coords.is_some() => return format_err(line, "coords given twice"),
            "coords" => coords = Some((line, items())),
            "signature" if signature.is_some() => return format_err(line, "signature given twice"),
            "signature" => signature = Some((line, items())),
            "param" | "params" => params.extend(items()),
            other => return format_err(line, format!("unknown key '{other}'")),
        }
    }

    let Some((coord_line, coord_names)) = coords else {
        return format_err(0, "missing 'coords' line");
    };
    let Some((sig_line, sig_tokens)) = signature else {
        return format_err(0, "missing 'signature' line");
    };
    for name in coord_names.iter().chain(&params) {
        check_ident(coord_line, name)?;
    }
    let mut seen = std::collections::BTreeSet::new();
    for name in coord_names.iter().chain(&params) {
        if !seen.insert(name) {
            return format_err(coord_line, format!("symbol '{name}' declared twice"));
        }
    }
    if sig_tokens.len() != coord_names.len() {
        return Err(MetricError::DimensionMismatch(format!(
            "{} coordinates but {} signature entries",
            coord_names.len(),
            sig_tokens.len()
        )));
    }
    let eta = sig_tokens
        .iter()
        .map(|t| match t.as_str() {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            _ => Err(MetricError::BadSignature { token: t.clone(), line: sig_line }),
        })
        .collect::<Result<Vec<i8>, _>>()?;

    let cs: Vec<Symbol> = coord_names.iter().map(|c| Symbol::coordinate(c)).collect();
    let ps: Vec<Symbol> = params.iter().map(|p| Symbol::parameter(p)).collect();

    if let Some((name, (line, _, _))) = roots.iter().find(|(n, _)| !coord_names.contains(n)) {
        return Err(MetricError::UnknownSymbol { name: name.clone(), line: *line });
    }
    let mut g = Vec::with_capacity(cs.len());
    let mut squares = Vec::with_capacity(cs.len());
    for (c, &e) in coord_names.iter().zip(&eta) {
        let Some((line, is_square, text)) = roots.get(c) else {
            return Err(MetricError::DimensionMismatch(format!("no g[{c}] line")));
        };
        let parsed = parse(text, &cs, &ps).map_err(|err| expr_error(*line, err))?;
        if *is_square {
            g.push(Expr::sqrt(parsed.scale(rat(e.into()))));
            squares.push(Some(parsed));
        } else {
            g.push(parsed);
            squares.push(None);
        }
    }

    let mut domain = Domain::new();
    for (line, name, value) in &domains {
        if !coord_names.contains(name) && !params.contains(name) {
            return Err(MetricError::UnknownSymbol { name: name.clone(), line: *line });
        }
        let bounds = split_list(value);
        let [lo, hi] = bounds.as_slice() else {
            return format_err(*line, "domain needs exactly two bounds 'lo, hi'");
        };
        let (Ok(lo), Ok(hi)) = (lo.parse::<f64>(), hi.parse::<f64>()) else {
            return format_err(*line, format!("domain bounds '{value}' are not numbers"));
        };
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return format_err(*line, format!("domain [{lo}, {hi}] is empty or not finite"));
        }
        domain.insert(name, Interval::new(lo, hi));
    }
    if let Some(missing) = coord_names.iter().chain(&params).find(|n| domain.get(n).is_none()) {
        return format_err(0, format!("no domain line for '{missing}'"));
    }

    let m = DiagonalMetric::new(cs, eta, g, ps, domain)?;
    Ok((m, squares))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MILNE: &str = "\
# Milne universe
coords = t, r, theta, phi
signature = +, -, -, -
g[t] = 1
g[r] = t
g[theta] = t*sinh(r)
g[phi] = t*sinh(r)*sin(theta)
domain[t] = 0.5, 2.0
domain[r] = 0.1, 1.5
domain[theta] = 0.2, 1.4
domain[phi] = 0.1, 3.0
";

    #[test]
    fn loads_milne() {
        let m = DiagonalMetric::load(MILNE).unwrap();
        assert_eq!(m.dim(), 4);
        assert_eq!(m.etas(), &[1, -1, -1, -1]);
        assert_eq!(m.g(1).to_string(), "t");
        assert_eq!(m.coord(2).name(), "theta");
    }

    #[test]
    fn file_roundtrip() {
        let m = DiagonalMetric::load(MILNE).unwrap();
        let again = DiagonalMetric::load(&m.to_file_string()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn sphere_with_parameter() {
        let text = "coords = theta, phi\nsignature = +, +\nparam = a\ng[theta] = a\ng[phi] = a*sin(theta)\n\
                    domain[theta] = 0.3, 2.8\ndomain[phi] = 0, 6\ndomain[a] = 0.5, 3\n";
        let m = DiagonalMetric::load(text).unwrap();
        assert_eq!(m.params().len(), 1);
        let w = m.coframe();
        assert_eq!(w[1].coefficient(&[1]).to_string(), "a*sin(theta)");
    }

    #[test]
    fn squared_coefficients_convert() {
        let text = "coords = t, x\nsignature = -, +\ngg[t] = -(1 + x^2)\ng[x] = 1\n\
                    domain[t] = 0, 1\ndomain[x] = 0, 1\n";
        let m = DiagonalMetric::load(text).unwrap();
        let p = Point::from_pairs([("t", 0.3), ("x", 0.5)]);
        assert!((m.g(0).eval(&p).unwrap() - 1.25f64.sqrt()).abs() < 1e-15);
        let bad = text.replace("signature = -, +", "signature = +, +");
        assert!(matches!(DiagonalMetric::load(&bad), Err(MetricError::Invalid(_))));
    }

    #[test]
    fn format_errors() {
        let unknown = MILNE.replace("g[theta] = t*sinh(r)", "g[theta] = b*sinh(r)");
        match DiagonalMetric::load(&unknown) {
            Err(MetricError::UnknownSymbol { name, line }) => {
                assert_eq!(name, "b");
                assert_eq!(line, 6);
            }
            other => panic!("{other:?}"),
        }
        let sig = MILNE.replace("+, -, -, -", "+, -, x, -");
        assert!(matches!(DiagonalMetric::load(&sig), Err(MetricError::BadSignature { .. })));
        let short = MILNE.replace("+, -, -, -", "+, -, -");
        assert!(matches!(DiagonalMetric::load(&short), Err(MetricError::DimensionMismatch(_))));
        let missing = MILNE.replace("g[phi] = t*sinh(r)*sin(theta)\n", "");
        assert!(matches!(DiagonalMetric::load(&missing), Err(MetricError::DimensionMismatch(_))));
        let nodomain = MILNE.replace("domain[phi] = 0.1, 3.0\n", "");
        assert!(matches!(DiagonalMetric::load(&nodomain), Err(MetricError::Format { .. })));
        assert!(matches!(DiagonalMetric::load("coords t"), Err(MetricError::Format { line: 1, .. })));
        let syntax = MILNE.replace("t*sinh(r)*sin(theta)", "t*sinh(r)*");
        assert!(matches!(DiagonalMetric::load(&syntax), Err(MetricError::Expression { line: 7, .. })));
    }

    #[test]
    fn validation_verdicts() {
        let m = DiagonalMetric::load(MILNE).unwrap();
        assert!(m.validate(7).is_valid());

        let wide = m.clone().with_domain(m.domain().clone().with("t", -1.0, 1.0));
        let v = wide.validate(0);
        assert!(matches!(&v.failures[..], [ValidationFailure::NonPositive { coord, .. }, ..] if coord == "r"));

        let b = Symbol::parameter("b");
        let cs = m.coords().to_vec();
        let g_theta = parse("b*sinh(r)", &cs, &[b]).unwrap();
        let mut g: Vec<Expr> = (0..4).map(|i| m.g(i).clone()).collect();
        g[2] = g_theta;
        let rogue = DiagonalMetric::new(cs, m.etas().to_vec(), g, vec![], m.domain().clone()).unwrap();
        assert!(matches!(&rogue.validate(0).failures[..], [ValidationFailure::Undeclared { symbol, .. }] if symbol == "b"));
    }

    #[test]
    fn line_element_reconstruction() {
        let m = DiagonalMetric::load(MILNE).unwrap();
        for (k, p) in m.sample_points(16, 3).iter().enumerate() {
            let v: Vec<f64> = (0..4).map(|i| 0.3 + 0.2 * (i + k) as f64).collect();
            let lhs: f64 = (0..4).map(|a| f64::from(m.eta(a)) * (m.g(a).eval(p).unwrap() * v[a]).powi(2)).sum();
            let rhs: f64 = (0..4).map(|a| m.g_diag(a).eval(p).unwrap() * v[a] * v[a]).sum();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
    }
}
