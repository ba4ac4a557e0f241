//! Integer matrices, Smith normal form and the lattice generation test
//! `h_1ℤ + … + h_tℤ = ℤ^d`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::index::LatticeVector;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// `S = U·M·V` with `U`, `V` unimodular and `S` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    #[serde(rename = "U")]
    pub u: IntMatrix,
    #[serde(rename = "S")]
    pub s: IntMatrix,
    #[serde(rename = "V")]
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | …`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged integer matrix".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .expect("rectangular input")
    }

    /// Matrix whose rows are the given lattice vectors.
    pub fn from_lattice_vectors(vectors: &[LatticeVector]) -> Result<Self> {
        let dim = vectors.first().map_or(0, LatticeVector::dim);
        let mut rows = Vec::with_capacity(vectors.len());
        for v in vectors {
            check_dim(dim, v.dim())?;
            rows.push(v.entries().iter().map(|&x| BigInt::from(x)).collect());
        }
        Self::from_rows(rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn matmul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        check_dim(self.cols, rhs.rows)?;
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    /// Determinant by integer Bareiss elimination (all divisions exact).
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of a non-square integer matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                a.swap_rows(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        let det = a[(n - 1, n - 1)].clone();
        Ok(if negate { -det } else { det })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = k * &self[(src, j)];
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k · col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = k * &self[(i, src)];
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

/// Smith normal form by repeated gcd-driven row and column reduction.
///
/// Returns `U`, `S`, `V` with `S = U·M·V`. Deterministic: the pivot is the
/// smallest nonzero entry in absolute value, first in row-major order.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&s, t) else {
                return finish(u, s, v);
            };
            if pi != t {
                s.swap_rows(pi, t);
                u.swap_rows(pi, t);
            }
            if pj != t {
                s.swap_cols(pj, t);
                v.swap_cols(pj, t);
            }
            let mut dirty = false;
            for i in t + 1..rows {
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                if !q.is_zero() {
                    let nq = -q;
                    s.add_row(i, t, &nq);
                    u.add_row(i, t, &nq);
                }
                dirty |= !s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                if !q.is_zero() {
                    let nq = -q;
                    s.add_col(j, t, &nq);
                    v.add_col(j, t, &nq);
                }
                dirty |= !s[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Pivot isolated; enforce divisibility of the remaining block.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !s[(i, j)].is_multiple_of(&s[(t, t)]));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    s.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, s, v)
}

fn finish(u: IntMatrix, s: IntMatrix, v: IntMatrix) -> SmithForm {
    SmithForm { u, s, v }
}

fn smallest_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows {
        for j in t..s.cols {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < s[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Extended Euclid: `g = gcd(a, b) > 0` and `g = a·x + b·y`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::InvalidInput("extended_gcd(0, 0) is undefined".into()));
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut x0, mut x1) = (BigInt::one(), BigInt::zero());
    let (mut y0, mut y1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        let x2 = &x0 - &q * &x1;
        let y2 = &y0 - &q * &y1;
        (r0, r1) = (r1, r2);
        (x0, x1) = (x1, x2);
        (y0, y1) = (y1, y2);
    }
    if r0.is_negative() {
        Ok((-r0, -x0, -y0))
    } else {
        Ok((r0, x0, y0))
    }
}

/// Bézout coefficients for a list: `gcd = Σ c_k a_k`. Errors if all zero.
pub fn bezout_coefficients(values: &[BigInt]) -> Result<(BigInt, Vec<BigInt>)> {
    let first =
        values.iter().position(|x| !x.is_zero()).ok_or_else(|| Error::InvalidInput("all values are zero".into()))?;
    let mut coeffs = vec![BigInt::zero(); values.len()];
    let mut g = values[first].abs();
    coeffs[first] = if values[first].is_negative() { -BigInt::one() } else { BigInt::one() };
    for k in first + 1..values.len() {
        if values[k].is_zero() {
            continue;
        }
        let (ng, x, y) = extended_gcd(&g, &values[k])?;
        for c in coeffs.iter_mut().take(k) {
            *c *= &x;
        }
        coeffs[k] = y;
        g = ng;
    }
    Ok((g, coeffs))
}

/// Whether the steps generate all of `ℤ^d`: the Smith form of the matrix with
/// the steps as rows has exactly `d` invariant factors, all equal to one.
pub fn generates_lattice(steps: &[LatticeVector]) -> Result<bool> {
    if steps.is_empty() {
        return Err(Error::InvalidInput("step list is empty".into()));
    }
    let dim = steps[0].dim();
    let m = IntMatrix::from_lattice_vectors(steps)?;
    let factors = smith_normal_form(&m).invariant_factors();
    Ok(factors.len() == dim && factors.iter().all(One::is_one))
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            self.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Entry {
            Int(i64),
            Text(String),
        }
        let rows = Vec::<Vec<Entry>>::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|e| match e {
                        Entry::Int(n) => Ok(BigInt::from(n)),
                        Entry::Text(s) => s.parse::<BigInt>().map_err(serde::de::Error::custom),
                    })
                    .collect::<std::result::Result<Vec<_>, D::Error>>()
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        IntMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
