//! Recovering a polynomial from samples on a box through Newton coefficients.

use montel::{degree_bound_check, newton_coefficients, reconstruct_polynomial, LatticeVector, SampleTable};

fn main() -> montel::Result<()> {
    let lower = LatticeVector::new(vec![-1, 2]);
    let upper = LatticeVector::new(vec![2, 5]);
    let table = SampleTable::from_fn(lower, upper, |n| {
        let (x, y) = (n.entries()[0], n.entries()[1]);
        Ok((x * x * y - 3 * y + 7).into())
    })?;
    for (alpha, c) in newton_coefficients(&table, 3)? {
        if !num_traits::Zero::is_zero(&c) {
            println!("c{:?} = {c}", alpha.entries());
        }
    }
    let p = reconstruct_polynomial(&table, 3)?;
    println!("reconstructed: {p}");
    let bound = degree_bound_check(&p, 3)?;
    println!("degrees {:?}, bound {} ({:?})", bound.degrees, bound.bound, bound.status);
    Ok(())
}
