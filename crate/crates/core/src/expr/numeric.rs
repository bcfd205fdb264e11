use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Expr, ExprError, Point};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Per-symbol sampling intervals, in declaration order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Domain {
    entries: Vec<(String, Interval)>,
}

impl Domain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, lo: f64, hi: f64) -> Self {
        self.insert(name, Interval::new(lo, hi));
        self
    }

    pub fn insert(&mut self, name: &str, iv: Interval) {
        match self.entries.iter_mut().find(|(k, _)| k == name) {
            Some(slot) => slot.1 = iv,
            None => self.entries.push((name.to_string(), iv)),
        }
    }

    pub fn get(&self, name: &str) -> Option<Interval> {
        self.entries.iter().find(|(k, _)| k == name).map(|&(_, iv)| iv)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Interval)> {
        self.entries.iter().map(|(k, iv)| (k.as_str(), *iv))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Point {
        let mut p = Point::new();
        for (name, iv) in &self.entries {
            p.set(name, iv.lo + iv.width() * rng.gen::<f64>());
        }
        p
    }

    /// `n` uniformly distributed points, reproducible from `seed`.
    pub fn sample_points(&self, n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.sample(&mut rng)).collect()
    }
}

/// Mixed residual: absolute when both magnitudes are below one, relative otherwise.
pub fn residual(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Equivalence {
    Agree { max_residual: f64, accepted: usize, rejected: usize },
    Disagree { worst: Point, residual: f64, left: f64, right: f64 },
}

impl Equivalence {
    pub fn agrees(&self) -> bool {
        matches!(self, Equivalence::Agree { .. })
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{rejected} of {total} sample points were outside the domain of evaluation (last: {last})")]
pub struct TooManyRejections {
    pub rejected: usize,
    pub total: usize,
    pub last: ExprError,
}

/// Compare two expressions at `n` seeded sample points.
pub fn equivalent_numeric(
    a: &Expr,
    b: &Expr,
    domain: &Domain,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<Equivalence, TooManyRejections> {
    assert!(n >= 1, "at least one sample is required");
    let mut worst: Option<(f64, Point, f64, f64)> = None;
    let mut rejected = 0;
    let mut last_err = None;
    for p in domain.sample_points(n, seed) {
        let (va, vb) = match (a.eval(&p), b.eval(&p)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) => {
                rejected += 1;
                last_err = Some(e);
                continue;
            }
        };
        let r = residual(va, vb);
        if worst.as_ref().is_none_or(|w| r > w.0) {
            worst = Some((r, p, va, vb));
        }
    }
    if rejected * 2 > n {
        return Err(TooManyRejections { rejected, total: n, last: last_err.expect("rejections record an error") });
    }
    let (r, p, va, vb) = worst.expect("fewer than half rejected");
    if r <= tol {
        Ok(Equivalence::Agree { max_residual: r, accepted: n - rejected, rejected })
    } else {
        Ok(Equivalence::Disagree { worst: p, residual: r, left: va, right: vb })
    }
}
