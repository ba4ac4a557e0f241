//! Solving Δ_{h_j}^m f = 0 inside polynomial and exponential blocks.

use montel::{gr, solve_montel_system, AmbientSpec, ExpModule, GaussianRational, LatticeVector};

fn report(label: &str, steps: &[LatticeVector], m: u32, ambient: &AmbientSpec) -> montel::Result<()> {
    let sol = solve_montel_system(steps, m, ambient)?;
    println!("{label}");
    println!("  generates lattice: {}, block dimensions: {:?}", sol.generates_lattice, sol.block_dimensions);
    for f in &sol.basis.elements {
        println!("  {f:?}");
    }
    println!("  conclusion holds: {}", sol.theorem_holds());
    Ok(())
}

fn main() -> montel::Result<()> {
    let exp = |l: Vec<GaussianRational>| ExpModule { lambda: l, max_degree: 1 };
    let ambient =
        AmbientSpec::new(1, Some(5), vec![exp(vec![gr(2)]), exp(vec![gr(-1)]), exp(vec![GaussianRational::i()])])?;
    report("steps {2, 3}, m = 3", &[LatticeVector::new(vec![2]), LatticeVector::new(vec![3])], 3, &ambient)?;
    report("step {2} alone, m = 1", &[LatticeVector::new(vec![2])], 1, &ambient)?;

    let plane = AmbientSpec::new(2, Some(3), vec![exp(vec![gr(2), gr(3)])])?;
    report("steps (1,0), (1,1), m = 2", &[LatticeVector::new(vec![1, 0]), LatticeVector::new(vec![1, 1])], 2, &plane)?;
    Ok(())
}
