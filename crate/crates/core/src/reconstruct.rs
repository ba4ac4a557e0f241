//! Newton forward-difference reconstruction of polynomials from samples, and
//! the two-step table `f(p, q) = p·q`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::difference::{delta_mixed, is_frechet_solution, Difference};
use crate::error::{Error, Result};
use crate::index::{LatticeVector, MultiIndex};
use crate::poly::Polynomial;
use crate::sample::{box_points, SampleTable};
use crate::scalar::GaussianRational;

type Scalar = GaussianRational;

fn require_window(table: &SampleTable, m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    if let Some(axis) = table.shape().iter().position(|&s| s < m as usize) {
        return Err(Error::WindowTooSmall(format!(
            "axis {axis} has {} points, at least m = {m} are needed",
            table.shape()[axis]
        )));
    }
    Ok(())
}

/// `c_α = (Δ_{e_1}^{α_1} ⋯ Δ_{e_d}^{α_d} f)(lower)` for every `α` with all
/// `α_i ≤ m − 1`. These are the coefficients of `f` in the basis
/// `∏ C(n_i − lower_i, α_i)`.
pub fn newton_coefficients(table: &SampleTable, m: u32) -> Result<BTreeMap<MultiIndex, Scalar>> {
    require_window(table, m)?;
    let d = table.dim();
    let m = m as usize;
    let lower = table.lower().clone();
    let corner = LatticeVector::new(lower.entries().iter().map(|l| l + m as i64 - 1).collect());
    // Dense m^d cube, last axis fastest, differenced in place along each axis.
    let mut a = table.restrict(&lower, &corner)?.values().to_vec();
    for axis in 0..d {
        let stride = m.pow((d - 1 - axis) as u32);
        for base in (0..a.len()).filter(|i| (i / stride).is_multiple_of(m)) {
            for k in 1..m {
                for j in (k..m).rev() {
                    let prev = a[base + (j - 1) * stride].clone();
                    a[base + j * stride] -= &prev;
                }
            }
        }
    }
    let origin = LatticeVector::zero(d);
    let top = LatticeVector::new(vec![m as i64 - 1; d]);
    Ok(box_points(&origin, &top)
        .zip(a)
        .map(|(alpha, c)| (MultiIndex::new(alpha.entries().iter().map(|&x| x as u32).collect()), c))
        .collect())
}

/// `C(x_i, k) = x_i (x_i − 1) ⋯ (x_i − k + 1) / k!` as a polynomial in `d` variables.
fn binomial_poly(d: usize, i: usize, k: u32) -> Result<Polynomial> {
    let mut p = Polynomial::one(d);
    let mut fact = Scalar::one();
    for j in 0..k {
        let factor = Polynomial::variable(d, i).sub(&Polynomial::constant(d, Scalar::from(i64::from(j))))?;
        p = p.mul(&factor)?;
        fact *= &Scalar::from(i64::from(j) + 1);
    }
    Ok(p.scale(&fact.inv().expect("factorial is nonzero")))
}

/// The polynomial with per-variable degrees `≤ m − 1` that agrees with the
/// table on its window.
///
/// The table must satisfy `Δ_{e_i}^m f = 0` for every coordinate step. A step
/// whose window is too short for `Δ^m` (exactly `m` points along its axis)
/// imposes nothing and is skipped.
pub fn reconstruct_polynomial(table: &SampleTable, m: u32) -> Result<Polynomial> {
    require_window(table, m)?;
    let d = table.dim();
    let shape = table.shape();
    let steps: Vec<LatticeVector> =
        (0..d).filter(|&i| shape[i] > m as usize).map(|i| LatticeVector::unit(d, i)).collect();
    if !steps.is_empty() {
        let verdict = is_frechet_solution(table, &steps, m)?;
        if let Some((h, w)) = verdict.witness() {
            return Err(Error::Precondition(format!(
                "Δ^{m} along {h:?} is {} at {:?}, so the table is not a solution",
                w.value, w.point
            )));
        }
    }

    let mut basis_cache: BTreeMap<(usize, u32), Polynomial> = BTreeMap::new();
    let mut p = Polynomial::zero(d);
    for (alpha, c) in newton_coefficients(table, m)? {
        if c.is_zero() {
            continue;
        }
        let mut term = Polynomial::constant(d, c);
        for (i, &k) in alpha.entries().iter().enumerate() {
            if k == 0 {
                continue;
            }
            if let std::collections::btree_map::Entry::Vacant(e) = basis_cache.entry((i, k)) {
                e.insert(binomial_poly(d, i, k)?);
            }
            term = term.mul(&basis_cache[&(i, k)])?;
        }
        p = p.add(&term)?;
    }
    let p = p.shift_lattice(&table.lower().scale(-1))?;

    for (n, v) in table.iter() {
        if p.evaluate(&n)? != *v {
            return Err(Error::Internal(format!("reconstruction disagrees with the table at {n:?}")));
        }
    }
    let degrees = p.degrees();
    let bound = (m - 1) * d as u32;
    if degrees.per_variable.iter().flatten().any(|&k| k >= m) || degrees.total.is_some_and(|t| t > bound) {
        return Err(Error::Internal("reconstruction exceeds the degree bounds".into()));
    }
    Ok(p)
}

/// `Δ_{u_1}^n f` and `Δ_{u_2}^n f` on the window for one order `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PureOrderCheck {
    pub order: u32,
    pub u1_vanishes: bool,
    pub u2_vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub radius: u32,
    pub max_order: u32,
    pub table: SampleTable,
    pub pure_checks: Vec<PureOrderCheck>,
    /// `Δ_{u_1} f = q` on its window, so first differences do not vanish.
    pub first_difference_is_q: bool,
    /// Value of `Δ_{u_1}Δ_{u_2} f` if it is constant on its window.
    pub mixed_difference_constant: Option<Scalar>,
    pub certified: bool,
}

/// The table `f(p, q) = p·q` on `[−R, R]²`, where `(p, q)` are the
/// coordinates of `p·h_1 + q·h_2` for two reals with irrational ratio. Each
/// single step is then a coordinate shift. The report certifies that every
/// pure difference of order `2..=max_order` vanishes while the mixed second
/// difference is identically `1`.
pub fn counterexample_case(radius: u32, max_order: u32) -> Result<CounterexampleReport> {
    if radius < 2 || max_order < 2 {
        return Err(Error::InvalidInput("radius and maxOrder must both be at least 2".into()));
    }
    if max_order > 2 * radius {
        return Err(Error::WindowTooSmall(format!(
            "order {max_order} needs a window wider than 2R + 1 = {}",
            2 * radius + 1
        )));
    }
    let r = i64::from(radius);
    let table = SampleTable::from_fn(LatticeVector::new(vec![-r, -r]), LatticeVector::new(vec![r, r]), |n| {
        Ok(Scalar::from(n.entries()[0] * n.entries()[1]))
    })?;
    let u1 = LatticeVector::unit(2, 0);
    let u2 = LatticeVector::unit(2, 1);

    let pure_checks = (2..=max_order)
        .map(|order| {
            Ok(PureOrderCheck {
                order,
                u1_vanishes: table.delta_power(&u1, order)?.is_zero(),
                u2_vanishes: table.delta_power(&u2, order)?.is_zero(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let first_difference_is_q = table.delta(&u1)?.iter().all(|(n, v)| *v == Scalar::from(n.entries()[1]));

    let mixed = delta_mixed(&[u1, u2], &table)?;
    let first = mixed.values()[0].clone();
    let mixed_difference_constant = mixed.values().iter().all(|v| *v == first).then_some(first);

    let certified = pure_checks.iter().all(|c| c.u1_vanishes && c.u2_vanishes)
        && first_difference_is_q
        && mixed_difference_constant.as_ref().is_some_and(One::is_one);
    Ok(CounterexampleReport {
        radius,
        max_order,
        table,
        pure_checks,
        first_difference_is_q,
        mixed_difference_constant,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gr;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector::new(v.to_vec())
    }

    fn mono(a: &[u32]) -> Polynomial {
        Polynomial::monomial(MultiIndex::new(a.to_vec()), gr(1))
    }

    #[test]
    fn newton_of_square() {
        let t = SampleTable::sample(&mono(&[2]), lv(&[0]), lv(&[4])).unwrap();
        let c = newton_coefficients(&t, 3).unwrap();
        let got: Vec<Scalar> = c.values().cloned().collect();
        assert_eq!(got, vec![gr(0), gr(1), gr(2)]);
    }

    #[test]
    fn newton_of_constant_and_product() {
        let t = SampleTable::from_fn(lv(&[0, 0]), lv(&[2, 2]), |_| Ok(gr(7))).unwrap();
        let c = newton_coefficients(&t, 3).unwrap();
        assert_eq!(c[&MultiIndex::zero(2)], gr(7));
        assert!(c.iter().filter(|(a, _)| a.degree() > 0).all(|(_, v)| v.is_zero()));

        let t = SampleTable::sample(&mono(&[1, 1]), lv(&[0, 0]), lv(&[1, 1])).unwrap();
        let c = newton_coefficients(&t, 2).unwrap();
        assert_eq!(c[&MultiIndex::new(vec![1, 1])], gr(1));
        assert_eq!(c.values().filter(|v| !v.is_zero()).count(), 1);
    }

    #[test]
    fn reconstruct_examples() {
        let t = SampleTable::sample(&mono(&[2]), lv(&[0]), lv(&[4])).unwrap();
        assert_eq!(reconstruct_polynomial(&t, 3).unwrap(), mono(&[2]));

        let t = SampleTable::sample(&mono(&[1, 1]), lv(&[0, 0]), lv(&[1, 1])).unwrap();
        let p = reconstruct_polynomial(&t, 2).unwrap();
        assert_eq!(p, mono(&[1, 1]));
        assert_eq!(p.total_degree(), Some(2));
    }

    #[test]
    fn reconstruct_off_origin_window() {
        let p =
            Polynomial::from_terms(2, [(MultiIndex::new(vec![1, 2]), gr(3)), (MultiIndex::new(vec![0, 0]), gr(-1))])
                .unwrap();
        let t = SampleTable::sample(&p, lv(&[-3, 2]), lv(&[1, 6])).unwrap();
        assert_eq!(reconstruct_polynomial(&t, 3).unwrap(), p);
    }

    #[test]
    fn reconstruct_rejects_non_solutions() {
        let t = SampleTable::sample(&mono(&[3]), lv(&[0]), lv(&[5])).unwrap();
        assert!(matches!(reconstruct_polynomial(&t, 3), Err(Error::Precondition(_))));
        let t = SampleTable::sample(&mono(&[1]), lv(&[0]), lv(&[1])).unwrap();
        assert!(matches!(reconstruct_polynomial(&t, 3), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn counterexample_small() {
        let r = counterexample_case(3, 4).unwrap();
        assert!(r.certified);
        assert_eq!(r.pure_checks.len(), 3);
        assert_eq!(r.mixed_difference_constant, Some(gr(1)));
        assert!(counterexample_case(1, 4).is_err());
        assert!(counterexample_case(2, 5).is_err());
    }
}
