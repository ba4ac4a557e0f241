//! Exponential polynomials `f(n) = Σ_k p_k(n) λ_k^n` on `ℤ^d`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::index::{LatticeVector, MultiIndex};
use crate::poly::Polynomial;
use crate::scalar::GaussianRational;

type Scalar = GaussianRational;

/// `λ^n = λ_1^{n_1} ⋯ λ_d^{n_d}`. Components must be nonzero when `n` has
/// negative entries.
pub fn lambda_power(lambda: &[Scalar], n: &LatticeVector) -> Result<Scalar> {
    check_dim(lambda.len(), n.dim())?;
    lambda
        .iter()
        .zip(n.entries())
        .map(|(l, &e)| l.checked_pow(e).ok_or_else(|| Error::InvalidInput("zero base in λ^n".into())))
        .product()
}

fn validate_lambda(lambda: &[Scalar]) -> Result<()> {
    if lambda.iter().any(Zero::is_zero) {
        return Err(Error::InvalidInput("exponential base λ has a zero component".into()));
    }
    Ok(())
}

/// `p(n) λ^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExpMonomialTerm {
    lambda: Vec<Scalar>,
    poly: Polynomial,
}

impl ExpMonomialTerm {
    pub fn new(lambda: Vec<Scalar>, poly: Polynomial) -> Result<Self> {
        check_dim(lambda.len(), poly.dim())?;
        validate_lambda(&lambda)?;
        if poly.is_zero() {
            return Err(Error::InvalidInput("exponential monomial with zero polynomial part".into()));
        }
        Ok(Self { lambda, poly })
    }

    pub fn lambda(&self) -> &[Scalar] {
        &self.lambda
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn is_polynomial(&self) -> bool {
        self.lambda.iter().all(One::is_one)
    }

    pub fn evaluate(&self, n: &LatticeVector) -> Result<Scalar> {
        Ok(&self.poly.evaluate(n)? * &lambda_power(&self.lambda, n)?)
    }
}

/// Finite sum of exponential monomials.
///
/// Values built by this crate's operations are normalized: the `λ` vectors are
/// pairwise distinct and sorted, and no term is zero. [`ExpPolynomial::from_raw_terms`]
/// keeps its input as given so that [`normalize`] has something to do.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExpPolynomial {
    dim: usize,
    terms: Vec<ExpMonomialTerm>,
}

impl ExpPolynomial {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    /// Normalized construction.
    pub fn new(dim: usize, terms: Vec<ExpMonomialTerm>) -> Result<Self> {
        Ok(Self::from_raw_terms(dim, terms)?.normalize())
    }

    /// Keeps duplicate `λ` vectors and term order as given.
    pub fn from_raw_terms(dim: usize, terms: Vec<ExpMonomialTerm>) -> Result<Self> {
        for t in &terms {
            check_dim(dim, t.lambda.len())?;
        }
        Ok(Self { dim, terms })
    }

    /// Single-term `p(n) λ^n`; zero `p` gives the zero function.
    pub fn exp_monomial(lambda: Vec<Scalar>, poly: Polynomial) -> Result<Self> {
        let dim = poly.dim();
        check_dim(dim, lambda.len())?;
        validate_lambda(&lambda)?;
        if poly.is_zero() {
            return Ok(Self::zero(dim));
        }
        Ok(Self { dim, terms: vec![ExpMonomialTerm { lambda, poly }] })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[ExpMonomialTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.poly.is_zero())
    }

    /// Sum of the terms with `λ = (1, …, 1)`.
    pub fn polynomial_part(&self) -> Polynomial {
        self.terms
            .iter()
            .filter(|t| t.is_polynomial())
            .fold(Polynomial::zero(self.dim), |acc, t| acc.add(&t.poly).expect("same dimension"))
    }

    /// Terms whose base is not the all-ones vector.
    pub fn exponential_terms(&self) -> impl Iterator<Item = &ExpMonomialTerm> {
        self.terms.iter().filter(|t| !t.is_polynomial())
    }

    pub fn is_polynomial(&self) -> bool {
        self.normalize().exponential_terms().next().is_none()
    }

    pub fn evaluate(&self, n: &LatticeVector) -> Result<Scalar> {
        check_dim(self.dim, n.dim())?;
        self.terms.iter().map(|t| t.evaluate(n)).sum()
    }

    pub fn add(&self, other: &ExpPolynomial) -> Result<ExpPolynomial> {
        check_dim(self.dim, other.dim)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self { dim: self.dim, terms }.normalize())
    }

    pub fn scale(&self, c: &Scalar) -> ExpPolynomial {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| ExpMonomialTerm { lambda: t.lambda.clone(), poly: t.poly.scale(c) })
                .collect(),
        }
        .normalize()
    }

    /// Merge equal `λ` vectors, drop zero terms, sort by `λ`.
    ///
    /// The sort key compares `λ` componentwise on `(re, im)` pairs.
    pub fn normalize(&self) -> ExpPolynomial {
        let mut merged: BTreeMap<Vec<Scalar>, Polynomial> = BTreeMap::new();
        for t in &self.terms {
            let slot = merged.entry(t.lambda.clone()).or_insert_with(|| Polynomial::zero(self.dim));
            *slot = slot.add(&t.poly).expect("dimensions validated on construction");
        }
        let terms = merged
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(lambda, poly)| ExpMonomialTerm { lambda, poly })
            .collect();
        Self { dim: self.dim, terms }
    }

    pub fn is_normalized(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].lambda < w[1].lambda) && self.terms.iter().all(|t| !t.poly.is_zero())
    }

    /// Applies `p ↦ g(p, λ)` to every term and renormalizes.
    pub(crate) fn map_terms<F>(&self, mut g: F) -> Result<ExpPolynomial>
    where
        F: FnMut(&ExpMonomialTerm) -> Result<Polynomial>,
    {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let poly = g(t)?;
            if !poly.is_zero() {
                terms.push(ExpMonomialTerm { lambda: t.lambda.clone(), poly });
            }
        }
        Ok(Self { dim: self.dim, terms }.normalize())
    }
}

/// Free-function form of [`ExpPolynomial::normalize`].
pub fn normalize(f: &ExpPolynomial) -> ExpPolynomial {
    f.normalize()
}

impl From<Polynomial> for ExpPolynomial {
    fn from(p: Polynomial) -> Self {
        let dim = p.dim();
        ExpPolynomial::exp_monomial(vec![Scalar::one(); dim], p).expect("all-ones base is valid")
    }
}

impl fmt::Debug for ExpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| format!("[{}]·{:?}^n", t.poly, t.lambda)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct ExpTermJson {
    lambda: Vec<Scalar>,
    alpha: MultiIndex,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct ExpPolynomialJson {
    dim: usize,
    terms: Vec<ExpTermJson>,
}

impl Serialize for ExpPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .flat_map(|t| {
                t.poly.grlex_terms().into_iter().map(move |(a, c)| ExpTermJson {
                    lambda: t.lambda.clone(),
                    alpha: a.clone(),
                    coeff: c.clone(),
                })
            })
            .collect();
        ExpPolynomialJson { dim: self.dim, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExpPolynomial {
    /// Each JSON term becomes one raw exponential monomial; the result is not
    /// normalized, so `normalize` requests see their input unchanged.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ExpPolynomialJson::deserialize(d)?;
        let dim = raw.dim;
        let mut terms = Vec::new();
        for t in raw.terms {
            let poly = Polynomial::monomial(t.alpha, t.coeff);
            if poly.dim() != dim {
                return Err(serde::de::Error::custom(Error::DimensionMismatch { expected: dim, found: poly.dim() }));
            }
            if poly.is_zero() {
                validate_lambda(&t.lambda).map_err(serde::de::Error::custom)?;
                continue;
            }
            terms.push(ExpMonomialTerm::new(t.lambda, poly).map_err(serde::de::Error::custom)?);
        }
        ExpPolynomial::from_raw_terms(dim, terms).map_err(serde::de::Error::custom)
    }
}
