use std::collections::BTreeMap;
use std::fmt;

use crate::expr::{Expr, Point};
use crate::metric::DiagonalMetric;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Coordinate differentials `dx^A`.
    Coordinate,
    /// Coframe one-forms `ω^A = g_A dx^A`.
    Coframe,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("grade {0} exceeds the supported maximum of 2")]
    GradeOverflow(usize),
    #[error("cannot combine forms in different bases")]
    BasisMismatch,
    #[error("cannot add a {0}-form to a {1}-form")]
    GradeMismatch(usize, usize),
}

/// A 0-, 1- or 2-form stored over strictly increasing index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct ExteriorForm {
    grade: usize,
    basis: Basis,
    terms: BTreeMap<Vec<usize>, Expr>,
}

/// Sort `idx` in place, returning the permutation sign, or `None` on a repeat.
fn sort_sign(idx: &mut [usize]) -> Option<i8> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl ExteriorForm {
    pub fn zero(basis: Basis, grade: usize) -> Self {
        Self { grade, basis, terms: BTreeMap::new() }
    }

    pub fn scalar(f: Expr) -> Self {
        Self::from_terms(Basis::Coordinate, 0, [(vec![], f)])
    }

    pub fn one_form(basis: Basis, index: usize, coef: Expr) -> Self {
        Self::from_terms(basis, 1, [(vec![index], coef)])
    }

    pub fn two_form(basis: Basis, i: usize, j: usize, coef: Expr) -> Self {
        Self::from_terms(basis, 2, [(vec![i, j], coef)])
    }

    /// Build from `(indices, coefficient)` pairs in any order; repeated
    /// indices vanish and like terms are summed.
    pub fn from_terms(basis: Basis, grade: usize, terms: impl IntoIterator<Item = (Vec<usize>, Expr)>) -> Self {
        let mut f = Self::zero(basis, grade);
        for (mut idx, c) in terms {
            assert_eq!(idx.len(), grade, "index tuple does not match grade");
            if let Some(s) = sort_sign(&mut idx) {
                f.accumulate(idx, if s < 0 { -c } else { c });
            }
        }
        f
    }

    fn accumulate(&mut self, idx: Vec<usize>, c: Expr) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&idx) {
            Some(prev) => prev + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(idx, sum);
        }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Expr)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Coefficient of the given basis element, honouring antisymmetry.
    pub fn coefficient(&self, idx: &[usize]) -> Expr {
        let mut key = idx.to_vec();
        match sort_sign(&mut key) {
            Some(s) => {
                let c = self.terms.get(&key).cloned().unwrap_or_else(Expr::zero);
                if s < 0 {
                    -c
                } else {
                    c
                }
            }
            None => Expr::zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FormError> {
        if self.basis != other.basis && !(self.is_zero() || other.is_zero()) {
            return Err(FormError::BasisMismatch);
        }
        if self.grade != other.grade {
            return Err(FormError::GradeMismatch(self.grade, other.grade));
        }
        let mut out = if self.is_zero() { Self::zero(other.basis, self.grade) } else { self.clone() };
        for (k, v) in &other.terms {
            out.accumulate(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, f: &Expr) -> Self {
        Self::from_terms(self.basis, self.grade, self.terms.iter().map(|(k, v)| (k.clone(), f.clone() * v.clone())))
    }

    pub fn neg(&self) -> Self {
        self.scale(&Expr::int(-1))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        Self::from_terms(self.basis, self.grade, self.terms.iter().map(|(k, v)| (k.clone(), f(v))))
    }

    pub fn simplify(&self) -> Self {
        self.map_coefficients(Expr::simplify)
    }

    /// Re-express in `target`: `dx^A = ω^A / g_A`.
    pub fn to_basis(&self, target: Basis, m: &DiagonalMetric) -> Self {
        if self.basis == target {
            return self.clone();
        }
        let terms = self.terms.iter().map(|(k, v)| {
            let g = Expr::mul(k.iter().map(|&i| m.g(i).clone()));
            let c = match target {
                Basis::Coframe => v.clone() / g,
                Basis::Coordinate => v.clone() * g,
            };
            (k.clone(), c)
        });
        Self::from_terms(target, self.grade, terms)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, FormError> {
        let grade = self.grade + other.grade;
        if grade > 2 {
            return Err(FormError::GradeOverflow(grade));
        }
        let basis = if self.grade == 0 {
            other.basis
        } else if other.grade == 0 || self.basis == other.basis {
            self.basis
        } else {
            return Err(FormError::BasisMismatch);
        };
        let mut terms = Vec::new();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let idx: Vec<usize> = i.iter().chain(j).copied().collect();
                terms.push((idx, a.clone() * b.clone()));
            }
        }
        Ok(Self::from_terms(basis, grade, terms))
    }

    /// Exterior derivative, returned in the coordinate basis.
    pub fn ext_d(&self, m: &DiagonalMetric) -> Result<Self, FormError> {
        if self.grade >= 2 {
            return Err(FormError::GradeOverflow(self.grade + 1));
        }
        let coord = self.to_basis(Basis::Coordinate, m);
        let mut terms = Vec::new();
        for (k, v) in &coord.terms {
            for (mu, x) in m.coords().iter().enumerate() {
                let dv = v.diff(x);
                if !dv.is_zero() {
                    terms.push((std::iter::once(mu).chain(k.iter().copied()).collect(), dv));
                }
            }
        }
        Ok(Self::from_terms(Basis::Coordinate, self.grade + 1, terms))
    }

    /// Largest absolute coefficient at `p`.
    pub fn max_abs_at(&self, p: &Point) -> Result<f64, crate::expr::ExprError> {
        self.terms.values().try_fold(0.0f64, |acc, c| Ok(acc.max(c.eval(p)?.abs())))
    }
}

impl fmt::Display for ExteriorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let sym = match self.basis {
            Basis::Coordinate => "dx",
            Basis::Coframe => "w",
        };
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| {
                let wedge: Vec<String> = k.iter().map(|i| format!("{sym}{i}")).collect();
                if wedge.is_empty() {
                    format!("{v}")
                } else {
                    format!("({v}) {}", wedge.join("^"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
