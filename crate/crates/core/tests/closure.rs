use montel::random::Sampler;
use montel::{
    box_closure, chain_check, compare_orders, diamond_closure, gr, is_invariant, orbit_closure, power_preserves,
    ExactMatrix, GaussianRational, SubspaceBasis,
};
use proptest::prelude::*;

/// Span of `{ L^α v }` over all words in the operators, grown until the rank
/// of the stacked rows stops increasing.
fn krylov_rank(ops: &[ExactMatrix], seeds: &[Vec<GaussianRational>]) -> usize {
    let mut rows: Vec<Vec<GaussianRational>> = seeds.to_vec();
    let rank_of = |rows: &Vec<Vec<GaussianRational>>| {
        if rows.is_empty() {
            0
        } else {
            ExactMatrix::from_rows(rows.clone()).unwrap().rank()
        }
    };
    let mut frontier = rows.clone();
    let mut rank = rank_of(&rows);
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for l in ops {
                let w = l.mul_vec(v).unwrap();
                rows.push(w.clone());
                let r = rank_of(&rows);
                if r > rank {
                    rank = r;
                    next.push(w);
                } else {
                    rows.pop();
                }
            }
        }
        frontier = next;
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn box_closure_is_the_smallest_invariant_superspace(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let m = s.int(2, 4) as u32;
        let inst = s.closure_instance(7, 1, m);
        let l = &inst.operators[0];
        let w = box_closure(l, &inst.subspace, m).unwrap();
        prop_assert!(w.contains_subspace(&inst.subspace).unwrap());
        prop_assert!(is_invariant(l, &w).unwrap());
        prop_assert_eq!(w.dim(), krylov_rank(std::slice::from_ref(l), inst.subspace.vectors()));
        prop_assert_eq!(&w, &orbit_closure(l, &inst.subspace).unwrap());
        prop_assert_eq!(&box_closure(l, &w, m).unwrap(), &w);
    }

    #[test]
    fn diamond_closure_is_jointly_invariant_and_minimal(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let m = s.int(2, 4) as u32;
        let inst = s.closure_instance(7, 3, m);
        let w = diamond_closure(&inst.operators, &inst.subspace, m).unwrap();
        prop_assert!(w.contains_subspace(&inst.subspace).unwrap());
        for l in &inst.operators {
            prop_assert!(is_invariant(l, &w).unwrap());
            prop_assert!(power_preserves(l, &w, m).unwrap());
        }
        prop_assert_eq!(w.dim(), krylov_rank(&inst.operators, inst.subspace.vectors()));
        prop_assert!(compare_orders(&inst.operators, &inst.subspace, m).unwrap().identical);
    }

    #[test]
    fn chain_power_has_the_predicted_superdiagonal(seed in any::<u64>(), size in 1usize..=6, m in 1u32..=5) {
        let mut s = Sampler::new(seed);
        let lambda = s.nonzero_scalar(3, false);
        let a = s.chain_matrix(size, lambda.clone(), 3);
        let report = chain_check(&a, m).unwrap();
        prop_assert!(report.holds);
        let power = a.pow(m).unwrap();
        for i in 0..size.saturating_sub(1) {
            let expected = &(&gr(i64::from(m)) * &lambda.pow(i64::from(m) - 1)) * &a[(i, i + 1)];
            prop_assert_eq!(&power[(i, i + 1)], &expected);
        }
        for k in 1..=size {
            let v = SubspaceBasis::coordinate(size, 0..k);
            prop_assert!(is_invariant(&power, &v).unwrap());
        }
    }
}

#[test]
fn diamond_rejects_non_commuting_operators() {
    let a = ExactMatrix::from_int_rows(&[&[0, 1], &[0, 0]]);
    let b = ExactMatrix::from_int_rows(&[&[0, 0], &[1, 0]]);
    let v = SubspaceBasis::coordinate(2, [0]);
    assert!(matches!(diamond_closure(&[a, b], &v, 2), Err(montel::Error::NonCommuting(_, _))));
}

#[test]
fn nilpotent_chain_collapses() {
    let a = ExactMatrix::from_int_rows(&[&[0, 1, 4], &[0, 0, -2], &[0, 0, 0]]);
    let r = chain_check(&a, 3).unwrap();
    assert_eq!(r.power_vanishes, Some(true));
    assert!(r.holds);
}
