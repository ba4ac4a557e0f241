//! f(p·h1 + q·h2) = p·q: every pure difference of order two or more vanishes,
//! yet the mixed second difference is 1.

use montel::counterexample_case;

fn main() -> montel::Result<()> {
    let r = counterexample_case(4, 5)?;
    println!("window [-{0}, {0}]², {1} points", r.radius, r.table.len());
    for c in &r.pure_checks {
        println!("  order {}: Δ_u1 vanishes {}, Δ_u2 vanishes {}", c.order, c.u1_vanishes, c.u2_vanishes);
    }
    println!("Δ_u1 f = q: {}", r.first_difference_is_q);
    match &r.mixed_difference_constant {
        Some(c) => println!("Δ_u1 Δ_u2 f ≡ {c}"),
        None => println!("Δ_u1 Δ_u2 f is not constant"),
    }
    println!("certified: {}", r.certified);
    Ok(())
}
