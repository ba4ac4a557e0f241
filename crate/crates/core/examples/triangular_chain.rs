//! The invariant flag of λI + B and the shape of its powers.

use montel::{chain_check, gr, ExactMatrix};

fn main() -> montel::Result<()> {
    let mut a = ExactMatrix::from_int_rows(&[&[3, 1, 5, 0], &[0, 3, -2, 4], &[0, 0, 3, 7], &[0, 0, 0, 3]]);
    let r = chain_check(&a, 4)?;
    println!("λ = {}, m = {}", r.lambda, r.m);
    for level in &r.chain {
        println!(
            "  V_{} invariant under A: {}, under A^m: {}",
            level.k, level.invariant_under_a, level.invariant_under_power
        );
    }
    if let Some(shape) = &r.power_shape {
        let sup: Vec<String> = shape.superdiagonal.iter().map(ToString::to_string).collect();
        println!(
            "  superdiagonal of A^m − λ^m I: [{}], matches m·λ^(m−1)·b: {}",
            sup.join(", "),
            shape.matches_formula
        );
    }

    for i in 0..4 {
        a[(i, i)] = gr(0);
    }
    let r = chain_check(&a, 4)?;
    println!("nilpotent case: A^4 = 0: {:?}, holds: {}", r.power_vanishes, r.holds);
    Ok(())
}
