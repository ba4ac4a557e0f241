use montel::random::Sampler;
use montel::{
    delta, diagonal_factor, gr, operator_matrix, solve_montel_system, AmbientBasis, AmbientSpec, ExpModule,
    ExpPolynomial, GaussianRational, LatticeVector, ModuleBasis, Polynomial,
};
use num_traits::Zero;
use proptest::prelude::*;

fn naive_factor(lambda: &[GaussianRational], h: &LatticeVector) -> GaussianRational {
    let mut acc = gr(1);
    for (l, &k) in lambda.iter().zip(h.entries()) {
        let base = if k < 0 { l.inv().unwrap() } else { l.clone() };
        for _ in 0..k.abs() {
            acc = &acc * &base;
        }
    }
    &acc - &gr(1)
}

/// Exponents `α` with `|α| ≤ n` and every `α_i < m`, by brute force.
fn count_box_in_simplex(d: usize, n: u32, m: u32) -> usize {
    let mut count = 0;
    let mut alpha = vec![0u32; d];
    loop {
        if alpha.iter().sum::<u32>() <= n {
            count += 1;
        }
        let mut i = 0;
        while i < d {
            alpha[i] += 1;
            if alpha[i] < m {
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
        if i == d {
            return count;
        }
    }
}

fn lambda_choice(s: &mut Sampler, d: usize) -> Vec<GaussianRational> {
    (0..d)
        .map(|_| match s.int(0, 3) {
            0 => gr(1),
            1 => gr(-1),
            2 => GaussianRational::i(),
            _ => gr(s.nonzero_int(3)),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn columns_are_coordinates_of_the_image(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let d = s.int(1, 3) as usize;
        let n = s.int(0, 4) as u32;
        let lambda = lambda_choice(&mut s, d);
        let module = ModuleBasis::new(lambda.clone(), n).unwrap();
        let h = s.lattice_vector(d, 3);
        let a = operator_matrix(&h, &module).unwrap();
        let p: Polynomial = s.polynomial(d, n, 4, true);
        let coords = module.coordinates(&p).unwrap();
        let f = if p.is_zero() { ExpPolynomial::zero(d) } else { ExpPolynomial::exp_monomial(lambda, p).unwrap() };
        let image = delta(&h, &f).unwrap();
        prop_assert_eq!(module.function_from(&a.mul_vec(&coords).unwrap()).unwrap(), image);
    }

    #[test]
    fn matrix_is_upper_triangular_with_constant_diagonal(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let d = s.int(1, 3) as usize;
        let lambda = lambda_choice(&mut s, d);
        let module = ModuleBasis::new(lambda.clone(), s.int(0, 4) as u32).unwrap();
        let h = s.lattice_vector(d, 3);
        let a = operator_matrix(&h, &module).unwrap();
        let c = naive_factor(&lambda, &h);
        prop_assert_eq!(diagonal_factor(&lambda, &h).unwrap(), c.clone());
        for i in 0..a.rows() {
            prop_assert_eq!(&a[(i, i)], &c);
            for j in 0..i {
                prop_assert!(a[(i, j)].is_zero());
            }
        }
    }

    #[test]
    fn coordinate_steps_have_the_counted_kernel(d in 1usize..=3, n in 0u32..=5, m in 1u32..=3) {
        let steps: Vec<_> = (0..d).map(|i| LatticeVector::unit(d, i)).collect();
        let sol = solve_montel_system(&steps, m, &AmbientSpec::polynomial(d, n)).unwrap();
        prop_assert_eq!(sol.basis.dimension(), count_box_in_simplex(d, n, m));
    }

    #[test]
    fn generating_steps_leave_no_exponential_solutions(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let d = s.int(1, 2) as usize;
        let m = s.int(1, 3) as u32;
        let mut steps: Vec<_> = (0..d).map(|i| LatticeVector::unit(d, i)).collect();
        steps.push(s.lattice_vector(d, 3));
        let mut modules = Vec::new();
        for _ in 0..2 {
            let lambda = lambda_choice(&mut s, d);
            if lambda.iter().all(|x| *x == gr(1)) || modules.iter().any(|e: &ExpModule| e.lambda == lambda) {
                continue;
            }
            modules.push(ExpModule { lambda, max_degree: s.int(0, 2) as u32 });
        }
        let ambient = AmbientSpec::new(d, Some(m + 1), modules).unwrap();
        let sol = solve_montel_system(&steps, m, &ambient).unwrap();
        prop_assert!(sol.generates_lattice);
        prop_assert!(sol.block_dimensions[1..].iter().all(|&k| k == 0));
        prop_assert!(sol.theorem_holds());
        let basis = AmbientBasis::new(&ambient).unwrap();
        for f in &sol.basis.elements {
            for h in &steps {
                let g = montel::delta_power(h, m, f).unwrap();
                prop_assert!(g.is_zero());
            }
            let back = basis.function_from(&basis.coordinates(f).unwrap()).unwrap();
            prop_assert_eq!(&back, f);
        }
    }
}

#[test]
fn doubled_step_admits_an_alternating_solution() {
    let h = LatticeVector::new(vec![2]);
    let ambient = AmbientSpec::new(1, Some(2), vec![ExpModule { lambda: vec![gr(-1)], max_degree: 0 }]).unwrap();
    let sol = solve_montel_system(&[h], 1, &ambient).unwrap();
    assert!(!sol.generates_lattice);
    assert_eq!(sol.block_dimensions, vec![1, 1]);
    assert!(!sol.all_polynomial);
    assert!(sol.theorem_holds());
}
