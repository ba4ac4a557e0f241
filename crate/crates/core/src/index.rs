//! Exponent vectors, lattice steps and the graded lexicographic order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};

/// An exponent vector `α ∈ ℕ^d`.
///
/// The derived `Ord` is plain lexicographic on the entries and is only used
/// for map keys; basis orderings go through [`grlex_compare`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// The unit index with a one in position `i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Every `β` with `β ≤ α` componentwise, in lexicographic order.
    pub fn divisors(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.dim())];
        for &a in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=a).map(move |k| {
                        let mut p = prefix.clone();
                        p.push(k);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// Graded lexicographic comparison; see [`grlex_compare`].
    pub fn grlex_cmp(&self, other: &MultiIndex) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // The largest differing position decides.
            self.0.iter().zip(&other.0).rev().find(|(a, b)| a != b).map_or(Ordering::Equal, |(a, b)| a.cmp(b))
        })
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Graded lexicographic order on exponent vectors.
///
/// Total degree is compared first. Ties are broken at the *largest* index
/// `k` where the entries differ: `α < γ` iff `α_k < γ_k`.
pub fn grlex_compare(a: &MultiIndex, b: &MultiIndex) -> Result<Ordering> {
    check_dim(a.dim(), b.dim())?;
    Ok(a.grlex_cmp(b))
}

/// All `α ∈ ℕ^dim` with `|α| ≤ max_degree`, sorted by [`grlex_compare`].
pub fn grlex_monomials(dim: usize, max_degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; dim];
    fill(&mut current, 0, max_degree, &mut out);
    out.sort_by(|a, b| a.grlex_cmp(b));
    out
}

fn fill(current: &mut Vec<u32>, pos: usize, budget: u32, out: &mut Vec<MultiIndex>) {
    if pos == current.len() {
        out.push(MultiIndex(current.clone()));
        return;
    }
    for k in 0..=budget {
        current[pos] = k;
        fill(current, pos + 1, budget - k, out);
    }
    current[pos] = 0;
}

/// A point or step `h ∈ ℤ^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// Standard basis vector `e_i` (zero-based `i`).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn grlex_examples() {
        assert_eq!(grlex_compare(&mi(&[1, 0]), &mi(&[0, 1])).unwrap(), Ordering::Less);
        assert_eq!(grlex_compare(&mi(&[0, 0]), &mi(&[1, 0])).unwrap(), Ordering::Less);
        assert_eq!(grlex_compare(&mi(&[2, 1]), &mi(&[2, 1])).unwrap(), Ordering::Equal);
        assert_eq!(grlex_compare(&mi(&[1]), &mi(&[1, 0])), Err(Error::DimensionMismatch { expected: 1, found: 2 }));
    }

    #[test]
    fn grlex_is_a_total_order_exhaustively() {
        // If every pairwise comparison agrees with the comparison of positions in
        // the sorted list, the relation is order-isomorphic to an initial segment
        // of ℕ: antisymmetric, transitive and total.
        for dim in 1..=4usize {
            let all = grlex_monomials(dim, 6);
            for (i, a) in all.iter().enumerate() {
                for (j, b) in all.iter().enumerate() {
                    assert_eq!(a.grlex_cmp(b), i.cmp(&j), "{a:?} vs {b:?}");
                }
            }
        }
    }

    #[test]
    fn monomial_count_is_binomial() {
        // C(D + d, d)
        assert_eq!(grlex_monomials(1, 4).len(), 5);
        assert_eq!(grlex_monomials(2, 2).len(), 6);
        assert_eq!(grlex_monomials(3, 4).len(), 35);
        let bivariate: Vec<_> = grlex_monomials(2, 2).iter().map(|a| a.entries().to_vec()).collect();
        assert_eq!(bivariate, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn divisors_enumerate_box() {
        assert_eq!(mi(&[2, 1]).divisors().len(), 6);
        assert_eq!(mi(&[]).divisors(), vec![mi(&[])]);
    }
}
