//! Sparse multivariate polynomials with Gaussian-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::index::{LatticeVector, MultiIndex};
use crate::scalar::GaussianRational;

type Scalar = GaussianRational;

/// `Σ a_α x^α` over `d` variables. Zero coefficients are never stored, so the
/// zero polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

/// Total and per-variable degrees. `None` marks the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Degrees {
    pub total: Option<u32>,
    pub per_variable: Vec<Option<u32>>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        Self::monomial(MultiIndex::zero(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Scalar::one())
    }

    pub fn monomial(alpha: MultiIndex, c: Scalar) -> Self {
        let dim = alpha.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(alpha, c);
        }
        Self { dim, terms }
    }

    /// The coordinate function `x_i` (zero-based).
    pub fn variable(dim: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, i), Scalar::one())
    }

    /// Builds from `(α, coefficient)` pairs, summing repeated exponents.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Scalar)>,
    {
        let mut p = Self::zero(dim);
        for (alpha, c) in terms {
            check_dim(dim, alpha.dim())?;
            p.add_term(alpha, &c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    /// Terms sorted by the graded lexicographic order.
    pub fn grlex_terms(&self) -> Vec<(&MultiIndex, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.grlex_cmp(b.0));
        v
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Scalar {
        self.terms.get(alpha).cloned().unwrap_or_else(Scalar::zero)
    }

    pub(crate) fn add_term(&mut self, alpha: MultiIndex, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self { dim: self.dim, terms: self.terms.iter().map(|(a, x)| (a.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        check_dim(self.dim, other.dim)?;
        let mut out = Self::zero(self.dim);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.add(b), &(x * y));
            }
        }
        Ok(out)
    }

    /// Evaluation at an arbitrary point of `ℚ(i)^d`.
    pub fn evaluate_at(&self, x: &[Scalar]) -> Result<Scalar> {
        check_dim(self.dim, x.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(alpha, c)| {
                alpha.entries().iter().zip(x).fold(c.clone(), |acc, (&e, xi)| &acc * &xi.pow(i64::from(e)))
            })
            .sum())
    }

    /// Evaluation at a lattice point.
    pub fn evaluate(&self, n: &LatticeVector) -> Result<Scalar> {
        let x: Vec<Scalar> = n.entries().iter().map(|&v| Scalar::from(v)).collect();
        self.evaluate_at(&x)
    }

    /// `p(x + h)` by multinomial expansion of each term.
    pub fn shift(&self, h: &[Scalar]) -> Result<Polynomial> {
        check_dim(self.dim, h.len())?;
        let mut out = Self::zero(self.dim);
        for (alpha, c) in &self.terms {
            // (x + h)^α = Σ_{β ≤ α} Π_i C(α_i, β_i) h_i^{α_i − β_i} x^β
            for beta in alpha.divisors() {
                let mut coeff = c.clone();
                for ((&a, &b), hi) in alpha.entries().iter().zip(beta.entries()).zip(h) {
                    if a == b {
                        continue;
                    }
                    if hi.is_zero() {
                        coeff = Scalar::zero();
                        break;
                    }
                    coeff = &(&coeff * &Scalar::from(binomial(a, b))) * &hi.pow(i64::from(a - b));
                }
                out.add_term(beta, &coeff);
            }
        }
        Ok(out)
    }

    /// `p(x + h)` for an integer step.
    pub fn shift_lattice(&self, h: &LatticeVector) -> Result<Polynomial> {
        let h: Vec<Scalar> = h.entries().iter().map(|&v| Scalar::from(v)).collect();
        self.shift(&h)
    }

    pub fn degrees(&self) -> Degrees {
        if self.is_zero() {
            return Degrees { total: None, per_variable: vec![None; self.dim] };
        }
        let total = self.terms.keys().map(MultiIndex::degree).max();
        let per_variable = (0..self.dim).map(|i| self.terms.keys().map(|a| a.entries()[i]).max()).collect();
        Degrees { total, per_variable }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }
}

/// Free-function form of [`Polynomial::degrees`].
pub fn degrees(p: &Polynomial) -> Degrees {
    p.degrees()
}

/// `C(n, k)` as a big integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .grlex_terms()
            .into_iter()
            .map(|(alpha, c)| {
                let mono: Vec<String> = alpha
                    .entries()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("n{}", i + 1) } else { format!("n{}^{e}", i + 1) })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct TermJson {
    pub alpha: MultiIndex,
    pub coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    dim: usize,
    terms: Vec<TermJson>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson {
            dim: self.dim,
            terms: self
                .grlex_terms()
                .into_iter()
                .map(|(a, c)| TermJson { alpha: a.clone(), coeff: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolynomialJson::deserialize(d)?;
        Polynomial::from_terms(raw.dim, raw.terms.into_iter().map(|t| (t.alpha, t.coeff)))
            .map_err(serde::de::Error::custom)
    }
}

impl TryFrom<serde_json::Value> for Polynomial {
    type Error = Error;
    fn try_from(v: serde_json::Value) -> Result<Self> {
        serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gr;

    fn mono(alpha: &[u32], c: i64) -> Polynomial {
        Polynomial::monomial(MultiIndex::new(alpha.to_vec()), gr(c))
    }

    #[test]
    fn evaluate_examples() {
        let p = mono(&[2], 1);
        assert_eq!(p.evaluate(&LatticeVector::new(vec![3])).unwrap(), gr(9));
        assert!(p.evaluate(&LatticeVector::new(vec![3, 1])).is_err());
    }

    #[test]
    fn degree_examples() {
        let extremal = mono(&[2, 2], 1);
        assert_eq!(extremal.degrees(), Degrees { total: Some(4), per_variable: vec![Some(2), Some(2)] });
        assert_eq!(Polynomial::zero(2).degrees(), Degrees { total: None, per_variable: vec![None, None] });
        let p = mono(&[2, 1], 1).add(&mono(&[0, 3], 1)).unwrap();
        assert_eq!(p.degrees(), Degrees { total: Some(3), per_variable: vec![Some(2), Some(3)] });
    }

    #[test]
    fn shift_expands_binomially() {
        // (x+2)^3 = x^3 + 6x^2 + 12x + 8
        let p = mono(&[3], 1).shift_lattice(&LatticeVector::new(vec![2])).unwrap();
        let expected = Polynomial::from_terms(
            1,
            [(vec![3], 1), (vec![2], 6), (vec![1], 12), (vec![0], 8)]
                .into_iter()
                .map(|(a, c)| (MultiIndex::new(a), gr(c))),
        )
        .unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = mono(&[1, 1], 3).add(&mono(&[1, 1], -3)).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 0), BigInt::from(1));
        assert_eq!(binomial(2, 3), BigInt::from(0));
    }

    #[test]
    fn json_shape() {
        let p = mono(&[0, 1], 2).add(&mono(&[1, 0], 1)).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"dim":2,"terms":[{"alpha":[1,0],"coeff":"1"},{"alpha":[0,1],"coeff":"2"}]}"#);
        assert_eq!(serde_json::from_str::<Polynomial>(&s).unwrap(), p);
        assert!(serde_json::from_str::<Polynomial>(r#"{"dim":2,"terms":[{"alpha":[1],"coeff":"1"}]}"#).is_err());
    }
}
