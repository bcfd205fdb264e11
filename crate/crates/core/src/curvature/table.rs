use std::collections::BTreeMap;
use std::fmt;

use super::SignConvention;
use crate::expr::Expr;

/// Index pattern `(A,B,C,D)` of `R^{AB}_{CD}` with `A < B` and `C < D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexQuad {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl IndexQuad {
    /// Canonical quad plus the sign picked up by reordering each pair.
    /// `None` when either pair repeats an index.
    pub fn canonical(a: usize, b: usize, c: usize, d: usize) -> Option<(IndexQuad, i8)> {
        if a == b || c == d {
            return None;
        }
        let mut sign = 1;
        let (a, b) = if a < b { (a, b) } else { sign = -sign; (b, a) };
        let (c, d) = if c < d { (c, d) } else { sign = -sign; (d, c) };
        Some((IndexQuad { a, b, c, d }, sign))
    }

    /// Panics unless already canonical.
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Self {
        assert!(a < b && c < d, "({a},{b},{c},{d}) is not canonical");
        IndexQuad { a, b, c, d }
    }

    pub fn is_diagonal(&self) -> bool {
        self.a == self.c && self.b == self.d
    }

    pub fn distinct_indices(&self) -> usize {
        let mut v = [self.a, self.b, self.c, self.d];
        v.sort_unstable();
        1 + v.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Every canonical quad in dimension `n`, ordered.
    pub fn all(n: usize) -> Vec<IndexQuad> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        pairs.iter().flat_map(|&(a, b)| pairs.iter().map(move |&(c, d)| IndexQuad { a, b, c, d })).collect()
    }

    /// Render with coordinate names, e.g. `(theta,phi,theta,phi)`.
    pub fn label(&self, names: &[&str]) -> String {
        format!("({},{},{},{})", names[self.a], names[self.b], names[self.c], names[self.d])
    }
}

impl fmt::Display for IndexQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    ClosedForm,
    Cartan,
    Oracle,
    Ll,
    Mathpages,
}

impl Provenance {
    pub const ALL: [Provenance; 5] =
        [Provenance::ClosedForm, Provenance::Cartan, Provenance::Oracle, Provenance::Ll, Provenance::Mathpages];

    pub fn name(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed_form",
            Provenance::Cartan => "cartan",
            Provenance::Oracle => "oracle",
            Provenance::Ll => "ll",
            Provenance::Mathpages => "mathpages",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which quads a table speaks for. Entries outside its coverage are unknown, not zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    Full,
    DiagonalOnly,
}

impl Coverage {
    pub fn covers(self, q: &IndexQuad) -> bool {
        match self {
            Coverage::Full => true,
            Coverage::DiagonalOnly => q.is_diagonal(),
        }
    }
}

/// Orthonormal-frame components `R^{AB}_{CD}`. Missing covered entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RtcTable {
    dim: usize,
    entries: BTreeMap<IndexQuad, Expr>,
    provenance: Provenance,
    coverage: Coverage,
    convention: Option<SignConvention>,
}

impl RtcTable {
    pub fn new(dim: usize, provenance: Provenance, coverage: Coverage, convention: Option<SignConvention>) -> Self {
        Self { dim, entries: BTreeMap::new(), provenance, coverage, convention }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn coverage(&self) -> Coverage {
        self.coverage
    }

    pub fn sign_convention(&self) -> Option<SignConvention> {
        self.convention
    }

    /// Store `R^{ab}_{cd}`, canonicalizing index order. Zero values are dropped.
    pub fn insert(&mut self, a: usize, b: usize, c: usize, d: usize, value: Expr) {
        let (q, sign) = IndexQuad::canonical(a, b, c, d).expect("antisymmetric pairs need distinct indices");
        assert!(q.b < self.dim && q.d < self.dim, "index out of range");
        let value = if sign < 0 { -value } else { value };
        if value.is_zero() {
            self.entries.remove(&q);
        } else {
            self.entries.insert(q, value);
        }
    }

    /// `R^{ab}_{cd}` for any index order; zero for repeated indices and absent entries.
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> Expr {
        match IndexQuad::canonical(a, b, c, d) {
            Some((q, sign)) => {
                let v = self.entries.get(&q).cloned().unwrap_or_else(Expr::zero);
                if sign < 0 {
                    -v
                } else {
                    v
                }
            }
            None => Expr::zero(),
        }
    }

    pub fn entry(&self, q: &IndexQuad) -> Expr {
        self.entries.get(q).cloned().unwrap_or_else(Expr::zero)
    }

    /// Stored (nonzero) entries in index order.
    pub fn entries(&self) -> impl Iterator<Item = (&IndexQuad, &Expr)> {
        self.entries.iter()
    }

    /// Every quad this table covers, in index order.
    pub fn covered_quads(&self) -> Vec<IndexQuad> {
        IndexQuad::all(self.dim).into_iter().filter(|q| self.coverage.covers(q)).collect()
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        let mut out = Self::new(self.dim, self.provenance, self.coverage, self.convention);
        for (q, e) in &self.entries {
            out.insert(q.a, q.b, q.c, q.d, f(e));
        }
        out
    }

    pub fn simplified(&self) -> Self {
        self.map(Expr::simplify)
    }

    pub fn negated(&self) -> Self {
        self.map(|e| -e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_signs() {
        assert_eq!(IndexQuad::canonical(1, 0, 2, 3), Some((IndexQuad::new(0, 1, 2, 3), -1)));
        assert_eq!(IndexQuad::canonical(1, 0, 3, 2), Some((IndexQuad::new(0, 1, 2, 3), 1)));
        assert_eq!(IndexQuad::canonical(1, 1, 2, 3), None);
    }

    #[test]
    fn quads_enumerate_pairs_squared() {
        assert_eq!(IndexQuad::all(2).len(), 1);
        assert_eq!(IndexQuad::all(4).len(), 36);
        assert_eq!(IndexQuad::new(0, 1, 0, 2).distinct_indices(), 3);
    }

    #[test]
    fn antisymmetric_storage() {
        let mut t = RtcTable::new(3, Provenance::Oracle, Coverage::Full, None);
        t.insert(1, 0, 0, 2, Expr::int(5));
        assert_eq!(t.get(0, 1, 0, 2), Expr::int(-5));
        assert_eq!(t.get(1, 0, 2, 0), Expr::int(-5));
        assert_eq!(t.get(1, 0, 0, 2), Expr::int(5));
        assert_eq!(t.get(1, 1, 0, 2), Expr::zero());
        t.insert(0, 1, 0, 2, Expr::zero());
        assert_eq!(t.entries().count(), 0);
    }

    #[test]
    fn provenance_names_roundtrip() {
        for p in Provenance::ALL {
            assert_eq!(Provenance::from_name(p.name()), Some(p));
        }
    }
}
