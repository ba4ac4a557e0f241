//! Mixed differences with rational steps rewritten as signed sums of equal-step powers.

use montel::random::Sampler;
use montel::{djokovic_check, gr, MultiIndex, Polynomial};
use num_rational::BigRational;

fn main() -> montel::Result<()> {
    let half = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let steps = vec![vec![half(1, 2), half(0, 1)], vec![half(-1, 3), half(2, 1)]];
    let p = Polynomial::from_terms(2, [(MultiIndex::new(vec![2, 1]), gr(1)), (MultiIndex::new(vec![0, 3]), gr(-2))])?;
    let report = djokovic_check(&steps, &p)?;
    println!("p = {p}");
    println!("left  = {}", report.lhs);
    println!("right = {}", report.rhs);
    println!("equal: {}", report.holds);

    let mut s = Sampler::new(2024);
    let mut ok = 0;
    for _ in 0..25 {
        let count = s.int(1, 3) as usize;
        let hs = s.rational_steps(count, 2, 5);
        let q = s.polynomial(2, 4, 5, false);
        ok += usize::from(djokovic_check(&hs, &q)?.holds);
    }
    println!("random instances verified: {ok}/25");
    Ok(())
}
