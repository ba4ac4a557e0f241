//! Invariant-subspace closures `□_L^m` and `◇`, invariance tests and the
//! triangular chain certificate.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::GaussianRational;

type Scalar = GaussianRational;

/// A subspace of `Q(i)^n` held as the nonzero rows of its reduced row echelon
/// form, so two bases of the same subspace compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    /// Span of arbitrary (possibly dependent) vectors.
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        for v in &vectors {
            check_dim(ambient_dim, v.len())?;
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient_dim));
        }
        let (vectors, pivots) = ExactMatrix::from_rows(vectors)?.rref();
        Ok(Self { ambient_dim, vectors, pivots })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, vectors: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::coordinate(ambient_dim, 0..ambient_dim)
    }

    /// Span of the chosen standard basis vectors.
    pub fn coordinate<I: IntoIterator<Item = usize>>(ambient_dim: usize, indices: I) -> Self {
        let vectors = indices
            .into_iter()
            .map(|i| {
                let mut v = vec![Scalar::zero(); ambient_dim];
                v[i] = Scalar::one();
                v
            })
            .collect();
        Self::new(ambient_dim, vectors).expect("unit vectors have the ambient length")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    /// Remainder of `v` after clearing every pivot column.
    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut r = v.to_vec();
        for (row, &p) in self.vectors.iter().zip(&self.pivots) {
            let f = r[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &(&f * b);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        check_dim(self.ambient_dim, v.len())?;
        Ok(self.reduce(v).iter().all(Zero::is_zero))
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis) -> Result<bool> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        Ok(other.vectors.iter().all(|v| self.reduce(v).iter().all(Zero::is_zero)))
    }

    pub fn sum(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        Self::new(self.ambient_dim, self.vectors.iter().chain(&other.vectors).cloned().collect())
    }

    /// `L(self)`.
    pub fn image(&self, l: &ExactMatrix) -> Result<SubspaceBasis> {
        check_square(l, self.ambient_dim)?;
        let images = self.vectors.iter().map(|v| l.mul_vec(v)).collect::<Result<Vec<_>>>()?;
        Self::new(self.ambient_dim, images)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct SubspaceJson {
    ambient_dim: usize,
    vectors: Vec<Vec<Scalar>>,
}

impl Serialize for SubspaceBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceJson { ambient_dim: self.ambient_dim, vectors: self.vectors.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubspaceBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SubspaceJson::deserialize(d)?;
        SubspaceBasis::new(raw.ambient_dim, raw.vectors).map_err(serde::de::Error::custom)
    }
}

fn check_square(l: &ExactMatrix, n: usize) -> Result<()> {
    if !l.is_square() {
        return Err(Error::Shape(format!("operator is {}x{}, not square", l.rows(), l.cols())));
    }
    check_dim(n, l.rows())
}

/// Whether `L(W) ⊆ W`.
pub fn is_invariant(l: &ExactMatrix, w: &SubspaceBasis) -> Result<bool> {
    w.contains_subspace(&w.image(l)?)
}

/// Whether `L^m(V) ⊆ V`.
pub fn power_preserves(l: &ExactMatrix, v: &SubspaceBasis, m: u32) -> Result<bool> {
    check_square(l, v.ambient_dim())?;
    is_invariant(&l.pow(m)?, v)
}

fn require_positive(m: u32) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidInput("m must be positive".into()))
    } else {
        Ok(())
    }
}

/// `V + L(V) + … + L^m(V)`. When `L^m(V) ⊆ V` the result is the smallest
/// `L`-invariant subspace containing `V`, and its invariance is checked.
pub fn box_closure(l: &ExactMatrix, v: &SubspaceBasis, m: u32) -> Result<SubspaceBasis> {
    require_positive(m)?;
    check_square(l, v.ambient_dim())?;
    let mut acc = v.clone();
    let mut layer = v.clone();
    for _ in 0..m {
        layer = layer.image(l)?;
        acc = acc.sum(&layer)?;
    }
    if power_preserves(l, v, m)? && !is_invariant(l, &acc)? {
        return Err(Error::Internal("box closure is not invariant although L^m(V) ⊆ V".into()));
    }
    Ok(acc)
}

/// Fixpoint of `W ↦ W + L(W)` starting from `V`.
pub fn orbit_closure(l: &ExactMatrix, v: &SubspaceBasis) -> Result<SubspaceBasis> {
    check_square(l, v.ambient_dim())?;
    let mut w = v.clone();
    loop {
        let next = w.sum(&w.image(l)?)?;
        if next.dim() == w.dim() {
            return Ok(w);
        }
        w = next;
    }
}

/// `□_{L_t}^m(⋯ □_{L_1}^m(V) ⋯)` in the given order, after checking that the
/// operators commute and that each `L_i^m` maps `V` into itself.
pub fn diamond_closure(ls: &[ExactMatrix], v: &SubspaceBasis, m: u32) -> Result<SubspaceBasis> {
    require_positive(m)?;
    if ls.is_empty() {
        return Err(Error::InvalidInput("no operators given".into()));
    }
    for l in ls {
        check_square(l, v.ambient_dim())?;
    }
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            if ls[i].matmul(&ls[j])? != ls[j].matmul(&ls[i])? {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    for (i, l) in ls.iter().enumerate() {
        if !power_preserves(l, v, m)? {
            return Err(Error::ContainmentViolated(i));
        }
    }
    let mut w = v.clone();
    for l in ls {
        w = box_closure(l, &w, m)?;
    }
    if !w.contains_subspace(v)? {
        return Err(Error::Internal("diamond closure lost part of V".into()));
    }
    for (i, l) in ls.iter().enumerate() {
        if !is_invariant(l, &w)? {
            return Err(Error::Internal(format!("diamond closure is not invariant under operator {i}")));
        }
    }
    Ok(w)
}

/// The diamond closure in the given and in the reversed operator order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderComparison {
    pub given: SubspaceBasis,
    pub reversed: SubspaceBasis,
    pub identical: bool,
}

pub fn compare_orders(ls: &[ExactMatrix], v: &SubspaceBasis, m: u32) -> Result<OrderComparison> {
    let given = diamond_closure(ls, v, m)?;
    let rev: Vec<ExactMatrix> = ls.iter().rev().cloned().collect();
    let reversed = diamond_closure(&rev, v, m)?;
    Ok(OrderComparison { identical: given == reversed, given, reversed })
}

/// Invariance of `V_k = span{e_1, …, e_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainLevel {
    pub k: usize,
    pub invariant_under_a: bool,
    pub invariant_under_power: bool,
}

/// Shape of `A^m − λ^m I` for `λ ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerShape {
    pub strictly_upper: bool,
    pub superdiagonal: Vec<Scalar>,
    /// Entries equal `m·λ^{m−1}·b_{i,i+1}`.
    pub matches_formula: bool,
    pub superdiagonal_nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub size: usize,
    pub m: u32,
    pub lambda: Scalar,
    pub lambda_nonzero: bool,
    pub chain: Vec<ChainLevel>,
    pub power_shape: Option<PowerShape>,
    /// For `λ = 0` and `m ≥ size`: whether `A^m = 0`, which makes every
    /// subspace `A^m`-invariant.
    pub power_vanishes: Option<bool>,
    pub holds: bool,
}

/// Certifies the invariant chain of `A = λI + B`, `B` strictly upper
/// triangular with a nonvanishing first superdiagonal.
pub fn chain_check(a: &ExactMatrix, m: u32) -> Result<ChainReport> {
    require_positive(m)?;
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Shape("expected a nonempty square matrix".into()));
    }
    if !a.is_upper_triangular() {
        return Err(Error::Shape("matrix is not upper triangular".into()));
    }
    let n = a.rows();
    let diag = a.diagonal();
    let lambda = diag[0].clone();
    if diag.iter().any(|x| *x != lambda) {
        return Err(Error::Shape("diagonal is not constant".into()));
    }
    let sup = a.superdiagonal();
    if sup.iter().any(Zero::is_zero) {
        return Err(Error::Shape("first superdiagonal has a zero entry".into()));
    }

    let power = a.pow(m)?;
    let chain = (1..=n)
        .map(|k| {
            let v = SubspaceBasis::coordinate(n, 0..k);
            Ok(ChainLevel {
                k,
                invariant_under_a: is_invariant(a, &v)?,
                invariant_under_power: is_invariant(&power, &v)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let lambda_nonzero = !lambda.is_zero();
    let power_shape = lambda_nonzero.then(|| {
        let c = power.sub(&ExactMatrix::identity(n).scale(&lambda.pow(i64::from(m)))).expect("same shape");
        let factor = &Scalar::from(i64::from(m)) * &lambda.pow(i64::from(m) - 1);
        let superdiagonal = c.superdiagonal();
        PowerShape {
            strictly_upper: c.is_strictly_upper_triangular(),
            matches_formula: superdiagonal.iter().zip(&sup).all(|(x, b)| *x == &factor * b),
            superdiagonal_nonzero: superdiagonal.iter().all(|x| !x.is_zero()),
            superdiagonal,
        }
    });
    let power_vanishes = (!lambda_nonzero && m as usize >= n).then(|| power.is_zero());

    let holds = chain.iter().all(|c| c.invariant_under_a && c.invariant_under_power)
        && power_shape.as_ref().is_none_or(|s| s.strictly_upper && s.matches_formula && s.superdiagonal_nonzero)
        && power_vanishes.unwrap_or(true);
    Ok(ChainReport { size: n, m, lambda, lambda_nonzero, chain, power_shape, power_vanishes, holds })
}
