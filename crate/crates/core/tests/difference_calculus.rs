use montel::random::Sampler;
use montel::sample::box_points;
use montel::{
    delta, delta_mixed, delta_power, djokovic_check, gr, Difference, ExpMonomialTerm, ExpPolynomial, GaussianRational,
    LatticeVector, Polynomial, SampleTable,
};
use proptest::prelude::*;

fn window(d: usize, r: i64) -> Vec<LatticeVector> {
    box_points(&LatticeVector::new(vec![-r; d]), &LatticeVector::new(vec![r; d])).collect()
}

fn binom(m: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * i64::from(m - j) / i64::from(j + 1))
}

/// `Σ_k C(m,k) (−1)^{m−k} f(n + k h)` straight from point values.
fn pointwise_power(f: &ExpPolynomial, h: &LatticeVector, m: u32, n: &LatticeVector) -> GaussianRational {
    let mut acc = gr(0);
    for k in 0..=m {
        let sign = if (m - k).is_multiple_of(2) { 1 } else { -1 };
        let v = f.evaluate(&n.add(&h.scale(i64::from(k)))).unwrap();
        acc += &(&gr(sign * binom(m, k)) * &v);
    }
    acc
}

fn random_exp(s: &mut Sampler, d: usize) -> ExpPolynomial {
    let p = s.polynomial(d, 2, 3, false);
    let lambda = (0..d).map(|_| gr(s.nonzero_int(2))).collect();
    let q = s.polynomial(d, 1, 3, true);
    let mut terms = Vec::new();
    if !p.is_zero() {
        terms.push(ExpMonomialTerm::new(vec![gr(1); d], p).unwrap());
    }
    if !q.is_zero() {
        terms.push(ExpMonomialTerm::new(lambda, q).unwrap());
    }
    ExpPolynomial::from_raw_terms(d, terms).unwrap().normalize()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn differences_commute(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let d = s.int(1, 3) as usize;
        let p = s.polynomial(d, 4, 5, true);
        let (h, k) = (s.lattice_vector(d, 3), s.lattice_vector(d, 3));
        prop_assert_eq!(delta(&h, &delta(&k, &p).unwrap()).unwrap(), delta(&k, &delta(&h, &p).unwrap()).unwrap());
        let f = random_exp(&mut s, d);
        prop_assert_eq!(delta_mixed(&[h.clone(), k.clone()], &f).unwrap(), delta_mixed(&[k, h], &f).unwrap());
    }

    #[test]
    fn binomial_power_matches_iteration_and_point_values(seed in any::<u64>(), m in 1u32..=4) {
        let mut s = Sampler::new(seed);
        let d = s.int(1, 2) as usize;
        let f = random_exp(&mut s, d);
        let h = s.lattice_vector(d, 2);
        let power = delta_power(&h, m, &f).unwrap();
        let iterated = delta_mixed(&vec![h.clone(); m as usize], &f).unwrap();
        prop_assert_eq!(&power, &iterated);
        for n in window(d, 2) {
            prop_assert_eq!(power.evaluate(&n).unwrap(), pointwise_power(&f, &h, m, &n));
        }
    }

    #[test]
    fn difference_lowers_total_degree(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let d = s.int(1, 3) as usize;
        let p = s.polynomial(d, 5, 4, true);
        let h = s.lattice_vector(d, 3);
        let q = delta(&h, &p).unwrap();
        if let Some(deg) = p.total_degree() {
            prop_assert!(q.total_degree().is_none_or(|e| e < deg.max(1)));
        }
    }

    #[test]
    fn differences_stay_in_their_exponential_module(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let d = s.int(1, 3) as usize;
        let f = random_exp(&mut s, d);
        let h = s.lattice_vector(d, 2);
        let g = delta(&h, &f).unwrap();
        for t in g.terms() {
            let src = f.terms().iter().find(|u| u.lambda() == t.lambda());
            prop_assert!(src.is_some());
            let (a, b) = (t.poly().total_degree(), src.unwrap().poly().total_degree());
            prop_assert!(a <= b);
        }
    }

    #[test]
    fn table_differences_agree_with_symbolic(seed in any::<u64>(), m in 1u32..=3) {
        let mut s = Sampler::new(seed);
        let d = s.int(1, 2) as usize;
        let f = random_exp(&mut s, d);
        let h = s.lattice_vector(d, 2);
        let t = SampleTable::sample(&f, LatticeVector::new(vec![-4; d]), LatticeVector::new(vec![4; d])).unwrap();
        let symbolic = delta_power(&h, m, &f).unwrap();
        match t.delta_power(&h, m) {
            Ok(dt) => {
                for (n, v) in dt.iter() {
                    prop_assert_eq!(v, &symbolic.evaluate(&n).unwrap());
                }
            }
            Err(montel::Error::EmptyBox) => prop_assert!(h.entries().iter().any(|&x| x.abs() * m as i64 > 8)),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn mixed_difference_expansion_holds(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let steps = s.int(1, 3) as usize;
        let d = s.int(1, 2) as usize;
        let hs = s.rational_steps(steps, d, 4);
        let p: Polynomial = s.polynomial(d, 4, 4, false);
        prop_assert!(djokovic_check(&hs, &p).unwrap().holds);
    }
}

#[test]
fn polynomial_of_degree_m_minus_one_is_killed() {
    let p = Polynomial::from_terms(2, [(montel::MultiIndex::new(vec![2, 1]), gr(3))]).unwrap();
    let h = LatticeVector::new(vec![1, -2]);
    assert!(!delta_power(&h, 3, &p).unwrap().is_identically_zero());
    assert!(delta_power(&h, 4, &p).unwrap().is_identically_zero());
}
