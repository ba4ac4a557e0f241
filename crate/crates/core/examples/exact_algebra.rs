//! Gaussian rationals, exact nullspaces and the lattice test via Smith normal form.

use montel::{generates_lattice, smith_normal_form, ExactMatrix, GaussianRational, IntMatrix, LatticeVector};

fn main() -> montel::Result<()> {
    let z: GaussianRational = "3/4+1/2i".parse()?;
    let w = GaussianRational::complex(1, -1);
    println!("z = {z}, w = {w}");
    println!("z·w = {}, z/w = {}", &z * &w, &z * &w.inv().expect("nonzero"));

    let a = ExactMatrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, -1]]);
    println!("rank = {}, det = {}", a.rank(), a.determinant()?);
    for v in a.nullspace() {
        let shown: Vec<String> = v.iter().map(ToString::to_string).collect();
        println!("kernel vector [{}]", shown.join(", "));
    }

    let m = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 9]]);
    let snf = smith_normal_form(&m);
    println!("invariant factors of [[2,4],[6,9]]: {:?}", snf.invariant_factors());

    for steps in [
        vec![LatticeVector::new(vec![2]), LatticeVector::new(vec![3])],
        vec![LatticeVector::new(vec![4]), LatticeVector::new(vec![6])],
    ] {
        println!("{steps:?} generates Z: {}", generates_lattice(&steps)?);
    }
    Ok(())
}
