//! Dense matrices over the Gaussian rationals.
//!
//! Elimination is fraction-free in the Bareiss sense: every update is
//! `(p·a_ij − a_ik·a_pj) / p_prev`, where the division is exact. Pivots are
//! the first nonzero entry at the lowest row index, so results are
//! reproducible bit for bit.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::scalar::GaussianRational;

type Scalar = GaussianRational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Row echelon data produced by [`ExactMatrix::echelon`].
#[derive(Clone, Debug)]
pub struct Echelon {
    /// The fraction-free echelon form (same shape as the input).
    pub form: ExactMatrix,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Builds from row vectors. An empty list gives a `0 x 0` matrix.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::InvalidInput(format!("ragged matrix: row of length {} vs {c}", bad.len())));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from small integers.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from(x)).collect()).collect())
            .expect("rectangular input")
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            check_dim(rows, col.len())?;
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        check_dim(self.cols, rhs.rows)?;
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn add(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        check_dim(self.rows, rhs.rows)?;
        check_dim(self.cols, rhs.cols)?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        check_dim(self.rows, rhs.rows)?;
        check_dim(self.cols, rhs.cols)?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &Scalar) -> ExactMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// `self^k` for a square matrix (`k = 0` gives the identity).
    pub fn pow(&self, k: u32) -> Result<ExactMatrix> {
        if !self.is_square() {
            return Err(Error::Shape(format!("power of a non-square {}x{} matrix", self.rows, self.cols)));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[ExactMatrix]) -> Result<ExactMatrix> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            check_dim(cols, b.cols)?;
            rows += b.rows;
            data.extend(b.data.iter().cloned());
        }
        Ok(Self { rows, cols, data })
    }

    /// Block-diagonal assembly.
    pub fn block_diagonal(blocks: &[ExactMatrix]) -> ExactMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i)).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_strictly_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i + 1)).all(|j| self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    /// Entries `a_{i,i+1}`.
    pub fn superdiagonal(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols.saturating_sub(1))).map(|i| self[(i, i + 1)].clone()).collect()
    }

    /// Fraction-free forward elimination.
    pub fn echelon(&self) -> Echelon {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut prev = Scalar::one();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap_rows(p, r);
            }
            let piv = a[(r, c)].clone();
            for i in r + 1..a.rows {
                let lead = a[(i, c)].clone();
                for j in c + 1..a.cols {
                    let lhs = &piv * &a[(i, j)];
                    let rhs = &lead * &a[(r, j)];
                    a[(i, j)] = &(&lhs - &rhs) / &prev;
                }
                a[(i, c)] = Scalar::zero();
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        Echelon { form: a, pivots }
    }

    /// Nonzero rows of the reduced row echelon form with their pivot columns.
    pub fn rref(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let Echelon { form, pivots } = self.echelon();
        let mut rows: Vec<Vec<Scalar>> = (0..pivots.len())
            .map(|r| {
                let inv = form[(r, pivots[r])].inv().expect("pivot is nonzero");
                form.row(r).iter().map(|x| x * &inv).collect()
            })
            .collect();
        for r in (0..rows.len()).rev() {
            let pc = pivots[r];
            for above in 0..r {
                let f = rows[above][pc].clone();
                if f.is_zero() {
                    continue;
                }
                let pivot_row = rows[r].clone();
                for (x, y) in rows[above][pc..].iter_mut().zip(&pivot_row[pc..]) {
                    *x -= &(&f * y);
                }
            }
        }
        (rows, pivots)
    }

    /// Exact inverse by reducing `[A | I]`; `None` if `A` is singular.
    pub fn inverse(&self) -> Result<Option<ExactMatrix>> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = ExactMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one();
        }
        let (rows, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Ok(None);
        }
        let inv = rows.into_iter().map(|r| r[n..].to_vec()).collect();
        ExactMatrix::from_rows(inv).map(Some)
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{v : M v = 0}`.
    ///
    /// One vector per non-pivot column `f`, with a one at `f`, zeros at the
    /// other free columns, and pivot entries solved by back substitution. This
    /// is the same basis the reduced row echelon form would give.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let Echelon { form, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (r, &pc) in pivots.iter().enumerate().rev() {
                let s: Scalar = (pc + 1..self.cols)
                    .filter(|&j| !v[j].is_zero() && !form[(r, j)].is_zero())
                    .map(|j| &form[(r, j)] * &v[j])
                    .sum();
                v[pc] = -(&s / &form[(r, pc)]);
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant via Bareiss elimination.
    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one());
        }
        let mut a = self.clone();
        let mut sign = Scalar::one();
        let mut prev = Scalar::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            let piv = a[(k, k)].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&(&piv * &a[(i, j)]) - &(&a[(i, k)] * &a[(k, j)])) / &prev;
                    a[(i, j)] = v;
                }
                a[(i, k)] = Scalar::zero();
            }
            prev = piv;
        }
        Ok(&sign * &a[(n - 1, n - 1)])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Free-function form of [`ExactMatrix::nullspace`].
pub fn nullspace(m: &ExactMatrix) -> Vec<Vec<Scalar>> {
    m.nullspace()
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Scalar>>::deserialize(d)?;
        Self::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
