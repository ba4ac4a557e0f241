//! Exact samples of a lattice function on a rectangular box.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::exppoly::ExpPolynomial;
use crate::index::LatticeVector;
use crate::poly::Polynomial;
use crate::scalar::GaussianRational;

type Scalar = GaussianRational;

/// Something that can be evaluated at lattice points.
pub trait LatticeFunction {
    fn dim(&self) -> usize;
    fn value_at(&self, n: &LatticeVector) -> Result<Scalar>;
}

impl LatticeFunction for Polynomial {
    fn dim(&self) -> usize {
        Polynomial::dim(self)
    }
    fn value_at(&self, n: &LatticeVector) -> Result<Scalar> {
        self.evaluate(n)
    }
}

impl LatticeFunction for ExpPolynomial {
    fn dim(&self) -> usize {
        ExpPolynomial::dim(self)
    }
    fn value_at(&self, n: &LatticeVector) -> Result<Scalar> {
        self.evaluate(n)
    }
}

/// Values on the box `[lower, upper]` (inclusive), stored densely in
/// row-major order with the last coordinate varying fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SampleTable {
    lower: LatticeVector,
    upper: LatticeVector,
    values: Vec<Scalar>,
}

/// Iterator over the points of a box in storage order.
pub struct BoxPoints {
    lower: Vec<i64>,
    upper: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl Iterator for BoxPoints {
    type Item = LatticeVector;

    fn next(&mut self) -> Option<LatticeVector> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut k = succ.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            if succ[k] < self.upper[k] {
                succ[k] += 1;
                self.next = Some(succ);
                break;
            }
            succ[k] = self.lower[k];
        }
        Some(LatticeVector::new(current))
    }
}

/// Points of `[lower, upper]`; empty if any `lower_i > upper_i`.
pub fn box_points(lower: &LatticeVector, upper: &LatticeVector) -> BoxPoints {
    let empty = lower.entries().iter().zip(upper.entries()).any(|(l, u)| l > u);
    BoxPoints {
        lower: lower.entries().to_vec(),
        upper: upper.entries().to_vec(),
        next: if empty { None } else { Some(lower.entries().to_vec()) },
    }
}

fn box_len(lower: &LatticeVector, upper: &LatticeVector) -> usize {
    lower.entries().iter().zip(upper.entries()).map(|(l, u)| if u >= l { (u - l + 1) as usize } else { 0 }).product()
}

impl SampleTable {
    pub fn new(lower: LatticeVector, upper: LatticeVector, values: Vec<Scalar>) -> Result<Self> {
        check_dim(lower.dim(), upper.dim())?;
        if lower.entries().iter().zip(upper.entries()).any(|(l, u)| l > u) {
            return Err(Error::EmptyBox);
        }
        let n = box_len(&lower, &upper);
        if values.len() != n {
            return Err(Error::InvalidInput(format!("box has {n} points but {} values were given", values.len())));
        }
        Ok(Self { lower, upper, values })
    }

    pub fn from_fn<F>(lower: LatticeVector, upper: LatticeVector, mut f: F) -> Result<Self>
    where
        F: FnMut(&LatticeVector) -> Result<Scalar>,
    {
        check_dim(lower.dim(), upper.dim())?;
        let values = box_points(&lower, &upper).map(|p| f(&p)).collect::<Result<Vec<_>>>()?;
        Self::new(lower, upper, values)
    }

    /// Samples `f` on `[lower, upper]`.
    pub fn sample<F: LatticeFunction + ?Sized>(f: &F, lower: LatticeVector, upper: LatticeVector) -> Result<Self> {
        check_dim(f.dim(), lower.dim())?;
        Self::from_fn(lower, upper, |n| f.value_at(n))
    }

    /// Builds from explicit `(point, value)` pairs that must cover the box exactly once.
    pub fn from_pairs(lower: LatticeVector, upper: LatticeVector, pairs: Vec<(LatticeVector, Scalar)>) -> Result<Self> {
        check_dim(lower.dim(), upper.dim())?;
        let mut map = BTreeMap::new();
        for (p, v) in pairs {
            check_dim(lower.dim(), p.dim())?;
            if !contains(&lower, &upper, &p) {
                return Err(Error::InvalidInput(format!("point {p:?} lies outside the box")));
            }
            if map.insert(p.clone(), v).is_some() {
                return Err(Error::InvalidInput(format!("point {p:?} given twice")));
            }
        }
        let n = box_len(&lower, &upper);
        if map.len() != n {
            return Err(Error::InvalidInput(format!("box has {n} points but only {} were given", map.len())));
        }
        Self::from_fn(lower, upper, |p| Ok(map[p].clone()))
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &LatticeVector {
        &self.lower
    }

    pub fn upper(&self) -> &LatticeVector {
        &self.upper
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of points along each axis.
    pub fn shape(&self) -> Vec<usize> {
        self.lower.entries().iter().zip(self.upper.entries()).map(|(l, u)| (u - l + 1) as usize).collect()
    }

    pub fn contains(&self, n: &LatticeVector) -> bool {
        n.dim() == self.dim() && contains(&self.lower, &self.upper, n)
    }

    fn offset(&self, n: &LatticeVector) -> Option<usize> {
        if !self.contains(n) {
            return None;
        }
        let shape = self.shape();
        let mut idx = 0usize;
        for ((&x, &l), &s) in n.entries().iter().zip(self.lower.entries()).zip(&shape) {
            idx = idx * s + (x - l) as usize;
        }
        Some(idx)
    }

    pub fn get(&self, n: &LatticeVector) -> Option<&Scalar> {
        self.offset(n).map(|i| &self.values[i])
    }

    pub fn points(&self) -> BoxPoints {
        box_points(&self.lower, &self.upper)
    }

    pub fn iter(&self) -> impl Iterator<Item = (LatticeVector, &Scalar)> {
        self.points().zip(self.values.iter())
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// The box `{n : n and n + k·h both in the box}`, or `None` if it is empty.
    pub fn shrunken_box(&self, h: &LatticeVector, k: i64) -> Option<(LatticeVector, LatticeVector)> {
        let mut lo = Vec::with_capacity(self.dim());
        let mut hi = Vec::with_capacity(self.dim());
        for ((&l, &u), &s) in self.lower.entries().iter().zip(self.upper.entries()).zip(h.entries()) {
            let step = s * k;
            let (a, b) = (l - step.min(0), u - step.max(0));
            if a > b {
                return None;
            }
            lo.push(a);
            hi.push(b);
        }
        Some((LatticeVector::new(lo), LatticeVector::new(hi)))
    }

    /// Restriction to a sub-box.
    pub fn restrict(&self, lower: &LatticeVector, upper: &LatticeVector) -> Result<SampleTable> {
        if !self.contains(lower) || !self.contains(upper) {
            return Err(Error::InvalidInput("restriction box is not inside the table".into()));
        }
        Self::from_fn(lower.clone(), upper.clone(), |p| Ok(self.get(p).expect("inside").clone()))
    }

    /// First point with a nonzero value, in storage order.
    pub fn first_nonzero(&self) -> Option<(LatticeVector, Scalar)> {
        self.iter().find(|(_, v)| !v.is_zero()).map(|(p, v)| (p, v.clone()))
    }
}

fn contains(lower: &LatticeVector, upper: &LatticeVector, n: &LatticeVector) -> bool {
    n.entries().iter().zip(lower.entries()).zip(upper.entries()).all(|((x, l), u)| l <= x && x <= u)
}

#[derive(Serialize, Deserialize)]
struct SampleTableJson {
    lower: LatticeVector,
    upper: LatticeVector,
    values: Vec<(LatticeVector, Scalar)>,
}

impl Serialize for SampleTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SampleTableJson {
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            values: self.iter().map(|(p, v)| (p, v.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SampleTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SampleTableJson::deserialize(d)?;
        SampleTable::from_pairs(raw.lower, raw.upper, raw.values).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gr;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector::new(v.to_vec())
    }

    #[test]
    fn box_iteration_order() {
        let pts: Vec<_> = box_points(&lv(&[0, -1]), &lv(&[1, 0])).map(|p| p.entries().to_vec()).collect();
        assert_eq!(pts, vec![vec![0, -1], vec![0, 0], vec![1, -1], vec![1, 0]]);
        assert_eq!(box_points(&lv(&[1]), &lv(&[0])).count(), 0);
    }

    #[test]
    fn lookup_and_shrink() {
        let t =
            SampleTable::from_fn(lv(&[-2, 0]), lv(&[2, 3]), |p| Ok(gr(p.entries()[0] * 10 + p.entries()[1]))).unwrap();
        assert_eq!(t.len(), 20);
        assert_eq!(t.get(&lv(&[1, 2])), Some(&gr(12)));
        assert_eq!(t.get(&lv(&[3, 0])), None);
        assert_eq!(t.shrunken_box(&lv(&[1, -1]), 2), Some((lv(&[-2, 2]), lv(&[0, 3]))));
        assert_eq!(t.shrunken_box(&lv(&[5, 0]), 1), None);
    }

    #[test]
    fn pairs_must_cover_box() {
        let pairs = vec![(lv(&[0]), gr(1)), (lv(&[1]), gr(2))];
        assert!(SampleTable::from_pairs(lv(&[0]), lv(&[1]), pairs.clone()).is_ok());
        assert!(SampleTable::from_pairs(lv(&[0]), lv(&[2]), pairs.clone()).is_err());
        let dup = vec![(lv(&[0]), gr(1)), (lv(&[0]), gr(2))];
        assert!(SampleTable::from_pairs(lv(&[0]), lv(&[1]), dup).is_err());
    }

    #[test]
    fn json_shape() {
        let t = SampleTable::new(lv(&[0]), lv(&[1]), vec![gr(3), GaussianRational::ratio(1, 2)]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"lower":[0],"upper":[1],"values":[[[0],"3"],[[1],"1/2"]]}"#);
        assert_eq!(serde_json::from_str::<SampleTable>(&s).unwrap(), t);
    }
}
