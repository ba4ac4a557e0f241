//! Forward differences on polynomials, exponential polynomials and sample tables.

use montel::{
    delta, delta_mixed, delta_power, gr, Difference, ExpPolynomial, LatticeVector, MultiIndex, Polynomial, SampleTable,
};

fn main() -> montel::Result<()> {
    let h = LatticeVector::new(vec![1]);
    let square = Polynomial::monomial(MultiIndex::new(vec![2]), gr(1));
    println!("Δ n² = {}", delta(&h, &square)?);
    println!("Δ² n² = {}", delta_power(&h, 2, &square)?);
    println!("Δ³ n² = {}", delta_power(&h, 3, &square)?);

    let two_n = ExpPolynomial::exp_monomial(vec![gr(2)], Polynomial::variable(1, 0))?;
    println!("Δ (n·2^n) = {:?}", delta(&h, &two_n)?);

    let (e1, e2) = (LatticeVector::unit(2, 0), LatticeVector::unit(2, 1));
    let table = SampleTable::from_fn(LatticeVector::new(vec![-2, -2]), LatticeVector::new(vec![2, 2]), |n| {
        Ok(gr(n.entries()[0] * n.entries()[1]))
    })?;
    let mixed = delta_mixed(&[e1.clone(), e2], &table)?;
    println!(
        "Δ_e1 Δ_e2 (n1·n2) on the window: {:?}",
        mixed.values().iter().map(ToString::to_string).collect::<Vec<_>>()
    );
    println!("Δ_e1² (n1·n2) vanishes: {}", table.delta_power(&e1, 2)?.is_zero());
    Ok(())
}
