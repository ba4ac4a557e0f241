//! Forward difference operators `Δ_h f(x) = f(x + h) − f(x)`, their powers
//! and mixed compositions, on polynomials, exponential polynomials and
//! sample tables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::exppoly::{lambda_power, ExpPolynomial};
use crate::index::LatticeVector;
use crate::poly::{binomial, Polynomial};
use crate::sample::{box_points, SampleTable};
use crate::scalar::GaussianRational;

type Scalar = GaussianRational;

/// Signed binomial weights `C(m, k)(−1)^{m−k}` for `k = 0..=m`.
fn binomial_weights(m: u32) -> Vec<Scalar> {
    (0..=m)
        .map(|k| {
            let c = Scalar::from(binomial(m, k));
            if (m - k) % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

fn require_positive(m: u32) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidInput("difference order m must be positive".into()))
    } else {
        Ok(())
    }
}

/// A point where a function does not vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub point: LatticeVector,
    pub value: Scalar,
}

/// A lattice function on which forward differences act.
pub trait Difference: Sized {
    fn dim(&self) -> usize;

    fn delta(&self, h: &LatticeVector) -> Result<Self>;

    /// `Δ_h^m f(x) = Σ_{k=0}^{m} C(m,k)(−1)^{m−k} f(x + k h)`.
    fn delta_power(&self, h: &LatticeVector, m: u32) -> Result<Self>;

    /// A lattice point where the function is nonzero, or `None` if it
    /// vanishes identically (on its domain, for tables).
    fn nonzero_witness(&self) -> Option<Witness>;

    /// The sample box for tables; `None` for functions defined on all of `ℤ^d`.
    fn domain(&self) -> Option<(LatticeVector, LatticeVector)> {
        None
    }

    fn is_identically_zero(&self) -> bool {
        self.nonzero_witness().is_none()
    }
}

impl Polynomial {
    /// `Δ_h p` for an arbitrary (e.g. rational) step.
    pub fn delta_by(&self, h: &[Scalar]) -> Result<Polynomial> {
        self.shift(h)?.sub(self)
    }

    /// `Δ_h^m p` for an arbitrary step, by the binomial formula.
    pub fn delta_power_by(&self, h: &[Scalar], m: u32) -> Result<Polynomial> {
        check_dim(self.dim(), h.len())?;
        let mut acc = Polynomial::zero(self.dim());
        for (k, w) in binomial_weights(m).iter().enumerate() {
            let kh: Vec<Scalar> = h.iter().map(|x| x * &Scalar::from(k as i64)).collect();
            acc = acc.add(&self.shift(&kh)?.scale(w))?;
        }
        Ok(acc)
    }
}

fn lattice_to_scalars(h: &LatticeVector) -> Vec<Scalar> {
    h.entries().iter().map(|&x| Scalar::from(x)).collect()
}

impl Difference for Polynomial {
    fn dim(&self) -> usize {
        Polynomial::dim(self)
    }

    fn delta(&self, h: &LatticeVector) -> Result<Self> {
        check_dim(self.dim(), h.dim())?;
        self.delta_by(&lattice_to_scalars(h))
    }

    fn delta_power(&self, h: &LatticeVector, m: u32) -> Result<Self> {
        require_positive(m)?;
        check_dim(self.dim(), h.dim())?;
        self.delta_power_by(&lattice_to_scalars(h), m)
    }

    fn nonzero_witness(&self) -> Option<Witness> {
        // A nonzero polynomial of total degree D cannot vanish on the whole grid {0..D}^d.
        let deg = i64::from(self.total_degree()?);
        let lower = LatticeVector::zero(self.dim());
        let upper = LatticeVector::new(vec![deg; self.dim()]);
        box_points(&lower, &upper).find_map(|p| {
            let v = self.evaluate(&p).ok()?;
            (!v.is_zero()).then_some(Witness { point: p, value: v })
        })
    }
}

impl Difference for ExpPolynomial {
    fn dim(&self) -> usize {
        ExpPolynomial::dim(self)
    }

    fn delta(&self, h: &LatticeVector) -> Result<Self> {
        check_dim(self.dim(), h.dim())?;
        // Δ_h(p(n) λ^n) = (p(n+h) λ^h − p(n)) λ^n
        self.map_terms(|t| {
            let lh = lambda_power(t.lambda(), h)?;
            t.poly().shift_lattice(h)?.scale(&lh).sub(t.poly())
        })
    }

    fn delta_power(&self, h: &LatticeVector, m: u32) -> Result<Self> {
        require_positive(m)?;
        check_dim(self.dim(), h.dim())?;
        let weights = binomial_weights(m);
        self.map_terms(|t| {
            let mut acc = Polynomial::zero(t.poly().dim());
            for (k, w) in weights.iter().enumerate() {
                let kh = h.scale(k as i64);
                let factor = w * &lambda_power(t.lambda(), &kh)?;
                acc = acc.add(&t.poly().shift_lattice(&kh)?.scale(&factor))?;
            }
            Ok(acc)
        })
    }

    fn nonzero_witness(&self) -> Option<Witness> {
        let f = self.normalize();
        if f.terms().is_empty() {
            return None;
        }
        // Along each axis f is a sum of at most r = Σ_k (deg p_k + 1) terms
        // n_i^j μ^{n_i}, so it cannot vanish on r consecutive values unless zero.
        let r: i64 = f.terms().iter().map(|t| i64::from(t.poly().total_degree().unwrap_or(0)) + 1).sum();
        let lower = LatticeVector::zero(f.dim());
        let upper = LatticeVector::new(vec![r - 1; f.dim()]);
        box_points(&lower, &upper).find_map(|p| {
            let v = f.evaluate(&p).ok()?;
            (!v.is_zero()).then_some(Witness { point: p, value: v })
        })
    }
}

impl Difference for SampleTable {
    fn dim(&self) -> usize {
        SampleTable::dim(self)
    }

    fn delta(&self, h: &LatticeVector) -> Result<Self> {
        check_dim(self.dim(), h.dim())?;
        let (lo, hi) = self.shrunken_box(h, 1).ok_or(Error::EmptyBox)?;
        SampleTable::from_fn(lo, hi, |n| {
            let a = self.get(&n.add(h)).expect("shifted point inside box");
            let b = self.get(n).expect("point inside box");
            Ok(a - b)
        })
    }

    fn delta_power(&self, h: &LatticeVector, m: u32) -> Result<Self> {
        require_positive(m)?;
        check_dim(self.dim(), h.dim())?;
        let (lo, hi) = self.shrunken_box(h, i64::from(m)).ok_or(Error::EmptyBox)?;
        let weights = binomial_weights(m);
        SampleTable::from_fn(lo, hi, |n| {
            Ok(weights
                .iter()
                .enumerate()
                .map(|(k, w)| w * self.get(&n.add(&h.scale(k as i64))).expect("box is convex"))
                .sum())
        })
    }

    fn nonzero_witness(&self) -> Option<Witness> {
        self.first_nonzero().map(|(point, value)| Witness { point, value })
    }

    fn domain(&self) -> Option<(LatticeVector, LatticeVector)> {
        Some((self.lower().clone(), self.upper().clone()))
    }
}

pub fn delta<F: Difference>(h: &LatticeVector, f: &F) -> Result<F> {
    f.delta(h)
}

pub fn delta_power<F: Difference>(h: &LatticeVector, m: u32, f: &F) -> Result<F> {
    f.delta_power(h, m)
}

/// `Δ_{h_1 h_2 ⋯ h_s} f = Δ_{h_1}(Δ_{h_2 ⋯ h_s} f)`; the last step is applied first.
pub fn delta_mixed<F: Difference + Clone>(steps: &[LatticeVector], f: &F) -> Result<F> {
    let mut acc = f.clone();
    for h in steps.iter().rev() {
        acc = acc.delta(h)?;
    }
    Ok(acc)
}

/// Both sides of the mixed-difference expansion and whether they agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DjokovicReport {
    pub holds: bool,
    pub lhs: Polynomial,
    pub rhs: Polynomial,
}

/// Checks, for a polynomial over `ℚ^d` and rational steps `h_1, …, h_s`,
///
/// `Δ_{h_1⋯h_s} p(x) = Σ_{ε ∈ {0,1}^s} (−1)^{|ε|} Δ_{α(ε)}^s p(x + β(ε))`
///
/// with `α(ε) = −Σ_r ε_r h_r / r` and `β(ε) = Σ_r ε_r h_r`.
pub fn djokovic_check(steps: &[Vec<BigRational>], p: &Polynomial) -> Result<DjokovicReport> {
    let s = steps.len();
    if s == 0 {
        return Err(Error::InvalidInput("at least one step is required".into()));
    }
    if s > 16 {
        return Err(Error::InvalidInput("too many steps (2^s sign patterns)".into()));
    }
    let dim = p.dim();
    let steps: Vec<Vec<Scalar>> = steps
        .iter()
        .map(|h| {
            check_dim(dim, h.len())?;
            Ok(h.iter().cloned().map(Scalar::from).collect())
        })
        .collect::<Result<_>>()?;

    let mut lhs = p.clone();
    for h in steps.iter().rev() {
        lhs = lhs.delta_by(h)?;
    }

    let mut rhs = Polynomial::zero(dim);
    for mask in 0u32..(1 << s) {
        let mut alpha = vec![Scalar::zero(); dim];
        let mut beta = vec![Scalar::zero(); dim];
        for (r, h) in steps.iter().enumerate() {
            if mask & (1 << r) == 0 {
                continue;
            }
            let inv_r = Scalar::real(BigRational::new(BigInt::one(), BigInt::from(r as u64 + 1)));
            for i in 0..dim {
                alpha[i] -= &(&h[i] * &inv_r);
                beta[i] += &h[i];
            }
        }
        let term = p.delta_power_by(&alpha, s as u32)?.shift(&beta)?;
        rhs = if mask.count_ones() % 2 == 1 { rhs.sub(&term)? } else { rhs.add(&term)? };
    }
    Ok(DjokovicReport { holds: lhs == rhs, lhs, rhs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepVerdict {
    pub step: LatticeVector,
    pub holds: bool,
    pub witness: Option<Witness>,
    /// Box on which `Δ_h^m f` was checked (tables only).
    pub domain: Option<(LatticeVector, LatticeVector)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrechetVerdict {
    pub m: u32,
    pub holds: bool,
    pub steps: Vec<StepVerdict>,
}

impl FrechetVerdict {
    /// First failing witness, if any.
    pub fn witness(&self) -> Option<(&LatticeVector, &Witness)> {
        self.steps.iter().find_map(|s| s.witness.as_ref().map(|w| (&s.step, w)))
    }
}

/// Whether `Δ_{h_j}^m f = 0` for every step. For tables the check runs on the
/// shrunken box of each step, and a step whose shrunken box is empty makes the
/// whole check impossible (reported as [`Error::WindowTooSmall`]).
pub fn is_frechet_solution<F: Difference>(f: &F, steps: &[LatticeVector], m: u32) -> Result<FrechetVerdict> {
    require_positive(m)?;
    if steps.is_empty() {
        return Err(Error::InvalidInput("no steps given".into()));
    }
    let mut out = Vec::with_capacity(steps.len());
    for h in steps {
        check_dim(f.dim(), h.dim())?;
        let g = match f.delta_power(h, m) {
            Ok(g) => g,
            Err(Error::EmptyBox) => {
                return Err(Error::WindowTooSmall(format!("no point n with n and n + {m}·{h:?} both in the window")))
            }
            Err(e) => return Err(e),
        };
        let witness = g.nonzero_witness();
        out.push(StepVerdict { step: h.clone(), holds: witness.is_none(), witness, domain: g.domain() });
    }
    Ok(FrechetVerdict { m, holds: out.iter().all(|s| s.holds), steps: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::MultiIndex;
    use crate::scalar::gr;

    fn x(dim: usize, i: usize) -> Polynomial {
        Polynomial::variable(dim, i)
    }

    fn h1(v: i64) -> LatticeVector {
        LatticeVector::new(vec![v])
    }

    fn pow1(k: u32) -> Polynomial {
        Polynomial::monomial(MultiIndex::new(vec![k]), gr(1))
    }

    #[test]
    fn delta_examples() {
        let n2 = pow1(2);
        let expected = x(1, 0).scale(&gr(2)).add(&Polynomial::one(1)).unwrap();
        assert_eq!(n2.delta(&h1(1)).unwrap(), expected);
        assert!(Polynomial::constant(1, gr(7)).delta(&h1(5)).unwrap().is_zero());

        let lam = gr(3);
        let f = ExpPolynomial::exp_monomial(vec![lam.clone()], Polynomial::one(1)).unwrap();
        let d = f.delta(&h1(2)).unwrap();
        let expected =
            ExpPolynomial::exp_monomial(vec![lam.clone()], Polynomial::constant(1, &lam.pow(2) - &gr(1))).unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn delta_power_examples() {
        let n2 = pow1(2);
        assert!(n2.delta_power(&h1(1), 3).unwrap().is_zero());
        // oracle: two iterated single deltas
        let iterated = n2.delta(&h1(1)).unwrap().delta(&h1(1)).unwrap();
        assert_eq!(n2.delta_power(&h1(1), 2).unwrap(), iterated);
        assert_eq!(iterated, Polynomial::constant(1, gr(2)));
        assert!(Polynomial::zero(1).delta_power(&h1(4), 3).unwrap().is_zero());
        assert!(n2.delta_power(&h1(1), 0).is_err());
    }

    #[test]
    fn mixed_examples() {
        let n2 = pow1(2);
        assert_eq!(delta_mixed(&[h1(1), h1(1)], &n2).unwrap(), Polynomial::constant(1, gr(2)));
        let prod = x(2, 0).mul(&x(2, 1)).unwrap();
        let e1 = LatticeVector::unit(2, 0);
        let e2 = LatticeVector::unit(2, 1);
        assert_eq!(delta_mixed(&[e1, e2], &prod).unwrap(), Polynomial::one(2));
    }

    #[test]
    fn table_mixed_difference_of_pq() {
        let lv = |v: &[i64]| LatticeVector::new(v.to_vec());
        let t = SampleTable::from_fn(lv(&[-2, -2]), lv(&[2, 2]), |p| Ok(gr(p.entries()[0] * p.entries()[1]))).unwrap();
        let d = delta_mixed(&[lv(&[1, 0]), lv(&[0, 1])], &t).unwrap();
        assert_eq!(d.get(&lv(&[0, 0])), Some(&gr(1)));
        assert!(d.values().iter().all(|v| *v == gr(1)));
        assert_eq!(d.lower(), &lv(&[-2, -2]));
        assert_eq!(d.upper(), &lv(&[1, 1]));
    }

    #[test]
    fn table_delta_errors_on_empty_box() {
        let t = SampleTable::from_fn(h1(0), h1(2), |p| Ok(gr(p.entries()[0]))).unwrap();
        assert_eq!(t.delta(&h1(3)), Err(Error::EmptyBox));
        assert_eq!(t.delta_power(&h1(1), 3), Err(Error::EmptyBox));
        assert!(t.delta_power(&h1(1), 2).is_ok());
    }

    #[test]
    fn djokovic_small_cases() {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let cube = pow1(3);
        let r = djokovic_check(&[vec![q(1, 1)], vec![q(1, 1)]], &cube).unwrap();
        assert!(r.holds);
        let six_x_plus_six = x(1, 0).scale(&gr(6)).add(&Polynomial::constant(1, gr(6))).unwrap();
        assert_eq!(r.lhs, six_x_plus_six);
        assert_eq!(r.rhs, six_x_plus_six);

        let r1 = djokovic_check(&[vec![q(-3, 2)]], &pow1(4)).unwrap();
        assert!(r1.holds);
        assert_eq!(r1.lhs, pow1(4).delta_by(&[GaussianRational::ratio(-3, 2)]).unwrap());

        assert!(djokovic_check(&[], &cube).is_err());
        assert!(djokovic_check(&[vec![q(1, 1), q(1, 1)]], &cube).is_err());
    }

    #[test]
    fn frechet_examples() {
        let m = 2;
        let f = Polynomial::monomial(MultiIndex::new(vec![m - 1, m - 1]), gr(1));
        let steps = [LatticeVector::unit(2, 0), LatticeVector::unit(2, 1)];
        assert!(is_frechet_solution(&f, &steps, m).unwrap().holds);

        for m in 1..=4u32 {
            let v = is_frechet_solution(&pow1(m), &[h1(1)], m).unwrap();
            assert!(!v.holds);
            let (_, w) = v.witness().unwrap();
            // Δ_1^m n^m = m!
            let fact: i64 = (1..=i64::from(m)).product();
            assert_eq!(w.value, gr(fact));
        }
    }

    #[test]
    fn frechet_on_tables() {
        let lv = |v: &[i64]| LatticeVector::new(v.to_vec());
        let t = SampleTable::from_fn(lv(&[-3, -3]), lv(&[3, 3]), |p| Ok(gr(p.entries()[0] * p.entries()[1]))).unwrap();
        let v = is_frechet_solution(&t, &[lv(&[1, 0]), lv(&[0, 1])], 2).unwrap();
        assert!(v.holds);
        assert_eq!(v.steps[0].domain, Some((lv(&[-3, -3]), lv(&[1, 3]))));

        let small = SampleTable::from_fn(lv(&[0, 0]), lv(&[1, 1]), |_| Ok(gr(1))).unwrap();
        assert!(matches!(is_frechet_solution(&small, &[lv(&[1, 0])], 2), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn exp_witness_finds_nonzero_point() {
        // (-1)^n + 1 vanishes at odd n only
        let f = ExpPolynomial::exp_monomial(vec![gr(-1)], Polynomial::one(1))
            .unwrap()
            .add(&ExpPolynomial::from(Polynomial::one(1)))
            .unwrap();
        let w = f.nonzero_witness().unwrap();
        assert_eq!(f.evaluate(&w.point).unwrap(), w.value);
        assert!(ExpPolynomial::zero(1).nonzero_witness().is_none());
    }
}
