use montel::{generates_lattice, gr, ExactMatrix, GaussianRational, LatticeVector};
use num_traits::Zero;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, entries: Vec<(i64, i64)>) -> ExactMatrix {
    let data = entries.into_iter().map(|(a, b)| GaussianRational::complex(a, b)).collect();
    ExactMatrix::new(rows, cols, data).unwrap()
}

/// Rank by plain Gaussian elimination with the last nonzero row as pivot,
/// a different order from the library's elimination.
fn rank_reverse_pivot(m: &ExactMatrix) -> usize {
    let mut rows = m.to_rows();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..rows.len()).rev().find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][c].inv().unwrap();
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = &rows[i][c] * &inv;
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &(&f * y);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn sparse_entry() -> impl Strategy<Value = (i64, i64)> {
    prop_oneof![3 => Just((0, 0)), 2 => (-4i64..=4, Just(0)), 1 => (-3i64..=3, -3i64..=3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nullspace_vectors_are_exact_and_complete(
        (r, c, entries) in (1usize..=5, 1usize..=6)
            .prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(sparse_entry(), r * c)))
    ) {
        let m = matrix(r, c, entries);
        let ker = m.nullspace();
        for v in &ker {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        prop_assert_eq!(ker.len() + m.rank(), c);
        prop_assert_eq!(m.rank(), rank_reverse_pivot(&m));
        let kmat = ExactMatrix::from_rows(ker.clone());
        if !ker.is_empty() {
            prop_assert_eq!(kmat.unwrap().rank(), ker.len());
        }
    }
}

#[test]
fn standard_basis_generates_and_scaled_basis_does_not() {
    for d in 1..=4 {
        let basis: Vec<_> = (0..d).map(|i| LatticeVector::unit(d, i)).collect();
        assert!(generates_lattice(&basis).unwrap());
        for c in 2..=5 {
            let scaled: Vec<_> = basis.iter().map(|h| h.scale(c)).collect();
            assert!(!generates_lattice(&scaled).unwrap());
        }
    }
}

#[test]
fn determinant_of_triangular_product() {
    let l = ExactMatrix::from_int_rows(&[&[2, 0, 0], &[5, -1, 0], &[1, 7, 3]]);
    let u = ExactMatrix::from_int_rows(&[&[1, 4, -2], &[0, 2, 9], &[0, 0, -5]]);
    assert_eq!(l.matmul(&u).unwrap().determinant().unwrap(), gr(-2 * 3 * 2 * -5));
}
