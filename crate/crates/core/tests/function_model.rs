use montel::random::Sampler;
use montel::sample::box_points;
use montel::{gr, ExpMonomialTerm, ExpPolynomial, GaussianRational, LatticeVector, Polynomial};
use proptest::prelude::*;

fn random_exp(s: &mut Sampler, d: usize) -> ExpPolynomial {
    let k = s.int(0, 3) as usize;
    let mut terms = Vec::new();
    for _ in 0..k {
        let pick = s.int(0, 2);
        let lambda: Vec<GaussianRational> = (0..d)
            .map(|_| match pick {
                0 => gr(2),
                1 => gr(-1),
                _ => GaussianRational::i(),
            })
            .collect();
        let p = s.polynomial(d, 2, 4, true);
        if !p.is_zero() {
            terms.push(ExpMonomialTerm::new(lambda, p).unwrap());
        }
    }
    ExpPolynomial::from_raw_terms(d, terms).unwrap()
}

fn window(d: usize, r: i64) -> impl Iterator<Item = LatticeVector> {
    box_points(&LatticeVector::new(vec![-r; d]), &LatticeVector::new(vec![r; d]))
}

/// Direct evaluation term by term, with `λ^n` by repeated multiplication.
fn naive_value(f: &ExpPolynomial, n: &LatticeVector) -> GaussianRational {
    let mut total = gr(0);
    for t in f.terms() {
        let mut lp = gr(1);
        for (l, &k) in t.lambda().iter().zip(n.entries()) {
            let base = if k < 0 { l.inv().unwrap() } else { l.clone() };
            for _ in 0..k.abs() {
                lp = &lp * &base;
            }
        }
        let mut pv = gr(0);
        for (alpha, c) in t.poly().terms() {
            let mut mono = c.clone();
            for (&e, &x) in alpha.entries().iter().zip(n.entries()) {
                for _ in 0..e {
                    mono = &mono * &gr(x);
                }
            }
            pv += &mono;
        }
        total += &(&pv * &lp);
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evaluation_is_linear(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let d = s.int(1, 3) as usize;
        let (f, g) = (random_exp(&mut s, d), random_exp(&mut s, d));
        let sum = f.add(&g).unwrap();
        for n in window(d, 2) {
            prop_assert_eq!(sum.evaluate(&n).unwrap(), &f.evaluate(&n).unwrap() + &g.evaluate(&n).unwrap());
            prop_assert_eq!(f.evaluate(&n).unwrap(), naive_value(&f, &n));
        }
    }

    #[test]
    fn normalize_preserves_values(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let d = s.int(1, 2) as usize;
        let f = random_exp(&mut s, d);
        let g = f.normalize();
        prop_assert!(g.is_normalized());
        prop_assert_eq!(g.normalize(), g.clone());
        for n in window(d, 3) {
            prop_assert_eq!(g.evaluate(&n).unwrap(), f.evaluate(&n).unwrap());
        }
    }

    #[test]
    fn polynomials_embed_as_exponential_polynomials(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let d = s.int(1, 3) as usize;
        let p: Polynomial = s.polynomial(d, 3, 5, true);
        let e = ExpPolynomial::from(p.clone());
        prop_assert!(e.is_polynomial());
        for n in window(d, 2) {
            prop_assert_eq!(e.evaluate(&n).unwrap(), p.evaluate(&n).unwrap());
        }
    }
}
