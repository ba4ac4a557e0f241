//! Smallest invariant subspaces for one operator and for commuting families.

use montel::random::Sampler;
use montel::{box_closure, compare_orders, diamond_closure, is_invariant, ExactMatrix, SubspaceBasis};

fn main() -> montel::Result<()> {
    let shift = ExactMatrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    let v = SubspaceBasis::coordinate(3, [2]);
    let w = box_closure(&shift, &v, 3)?;
    println!("span{{e3}} closed under the shift has dimension {}", w.dim());
    println!("span{{e3}} itself invariant: {}", is_invariant(&shift, &v)?);

    let mut s = Sampler::new(9);
    let inst = s.closure_instance(6, 3, 2);
    println!(
        "random instance: {} commuting operators on Q^{}, dim V = {}",
        inst.operators.len(),
        inst.subspace.ambient_dim(),
        inst.subspace.dim()
    );
    let closed = diamond_closure(&inst.operators, &inst.subspace, inst.m)?;
    println!("closure dimension {}", closed.dim());
    for (k, l) in inst.operators.iter().enumerate() {
        println!("  invariant under L{}: {}", k + 1, is_invariant(l, &closed)?);
    }
    println!("order independent: {}", compare_orders(&inst.operators, &inst.subspace, inst.m)?.identical);
    Ok(())
}
