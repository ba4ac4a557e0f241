//! Matrices of Δ_h on finite modules spanned by n^α λ^n in graded lexicographic order.

use montel::{
    diagonal_factor, gr, is_invertible_on_module, operator_matrix, ExactMatrix, GaussianRational, LatticeVector,
    ModuleBasis,
};

fn show(a: &ExactMatrix) {
    for row in a.to_rows() {
        let cells: Vec<String> = row.iter().map(|x| format!("{:>6}", x.to_string())).collect();
        println!("  [{}]", cells.join(" "));
    }
}

fn main() -> montel::Result<()> {
    let module = ModuleBasis::polynomial(1, 3);
    println!("Δ_2 on span{{1, n, n², n³}}:");
    show(&operator_matrix(&LatticeVector::new(vec![2]), &module)?);

    let bivariate = ModuleBasis::polynomial(2, 2);
    println!("monomial order: {:?}", bivariate.monomials());
    println!("Δ_(1,1) on bivariate quadratics:");
    show(&operator_matrix(&LatticeVector::new(vec![1, 1]), &bivariate)?);

    let lambda = vec![GaussianRational::i()];
    let exp = ModuleBasis::new(lambda.clone(), 1)?;
    for h in [1, 2, 4] {
        let h = LatticeVector::new(vec![h]);
        println!(
            "λ = i, h = {:?}: diagonal {} invertible {}",
            h.entries(),
            diagonal_factor(&lambda, &h)?,
            is_invertible_on_module(&lambda, &h)?
        );
    }
    show(&operator_matrix(&LatticeVector::new(vec![1]), &exp)?);
    println!("λ = -1, h = 2 invertible: {}", is_invertible_on_module(&[gr(-1)], &LatticeVector::new(vec![2]))?);
    Ok(())
}
