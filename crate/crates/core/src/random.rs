//! Seeded generators for property campaigns and the `self-test` command.
//!
//! Everything is driven by a ChaCha stream, so a seed fixes every instance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closure::SubspaceBasis;
use crate::index::{grlex_monomials, LatticeVector, MultiIndex};
use crate::matrix::ExactMatrix;
use crate::poly::Polynomial;
use crate::scalar::GaussianRational;

type Scalar = GaussianRational;

/// Commuting operators `L_i` and a subspace `V` with `L_i^m(V) ⊆ V`.
#[derive(Clone, Debug)]
pub struct ClosureInstance {
    pub operators: Vec<ExactMatrix>,
    pub subspace: SubspaceBasis,
    pub m: u32,
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform in `lo..=hi`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn nonzero_int(&mut self, bound: i64) -> i64 {
        let k = self.int(1, bound);
        if self.rng.gen() {
            k
        } else {
            -k
        }
    }

    /// `a/b` with `|a| ≤ bound`, `1 ≤ b ≤ bound`.
    pub fn rational(&mut self, bound: i64) -> BigRational {
        BigRational::new(BigInt::from(self.int(-bound, bound)), BigInt::from(self.int(1, bound)))
    }

    pub fn scalar(&mut self, bound: i64, complex: bool) -> Scalar {
        let re = self.rational(bound);
        let im = if complex { self.rational(bound) } else { BigRational::zero() };
        Scalar::new(re, im)
    }

    pub fn nonzero_scalar(&mut self, bound: i64, complex: bool) -> Scalar {
        loop {
            let x = self.scalar(bound, complex);
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn lattice_vector(&mut self, dim: usize, bound: i64) -> LatticeVector {
        LatticeVector::new((0..dim).map(|_| self.int(-bound, bound)).collect())
    }

    /// Each monomial of total degree `≤ max_degree` appears with probability
    /// one half.
    pub fn polynomial(&mut self, dim: usize, max_degree: u32, bound: i64, complex: bool) -> Polynomial {
        let mut terms = Vec::new();
        for a in grlex_monomials(dim, max_degree) {
            if self.rng.gen() {
                terms.push((a, self.scalar(bound, complex)));
            }
        }
        Polynomial::from_terms(dim, terms).expect("monomials have the right dimension")
    }

    /// Like [`Sampler::polynomial`] but bounds each variable's degree by
    /// `max_per_variable` instead of the total degree.
    pub fn box_polynomial(&mut self, dim: usize, max_per_variable: u32, bound: i64, complex: bool) -> Polynomial {
        let top = LatticeVector::new(vec![i64::from(max_per_variable); dim]);
        let mut terms = Vec::new();
        for p in crate::sample::box_points(&LatticeVector::zero(dim), &top) {
            if self.rng.gen() {
                let alpha = MultiIndex::new(p.entries().iter().map(|&x| x as u32).collect());
                terms.push((alpha, self.scalar(bound, complex)));
            }
        }
        Polynomial::from_terms(dim, terms).expect("monomials have the right dimension")
    }

    pub fn rational_steps(&mut self, count: usize, dim: usize, bound: i64) -> Vec<Vec<BigRational>> {
        (0..count).map(|_| (0..dim).map(|_| self.rational(bound)).collect()).collect()
    }

    /// `λI + B` with `B` strictly upper triangular and a nonvanishing first
    /// superdiagonal.
    pub fn chain_matrix(&mut self, size: usize, lambda: Scalar, bound: i64) -> ExactMatrix {
        let mut a = ExactMatrix::identity(size).scale(&lambda);
        for i in 0..size {
            for j in i + 1..size {
                a[(i, j)] = if j == i + 1 { self.nonzero_scalar(bound, false) } else { self.scalar(bound, false) };
            }
        }
        a
    }

    /// `P` with `det P = 1`, built as a product of unit triangular factors,
    /// together with its inverse.
    pub fn unimodular(&mut self, n: usize, bound: i64) -> (ExactMatrix, ExactMatrix) {
        let mut lower = ExactMatrix::identity(n);
        let mut upper = ExactMatrix::identity(n);
        for i in 0..n {
            for j in 0..i {
                lower[(i, j)] = Scalar::from(self.int(-bound, bound));
                upper[(j, i)] = Scalar::from(self.int(-bound, bound));
            }
        }
        let p = lower.matmul(&upper).expect("square");
        let inv = p.inverse().expect("square").expect("unit triangular factors");
        (p, inv)
    }

    /// Engineered closure instance in an ambient of dimension `≤ max_dim`.
    ///
    /// The ambient splits into blocks. On each block every `L_i` is a
    /// polynomial in one block generator `G`: either the nilpotent shift of
    /// size `≤ m` (no constant term, so `L_i^m = 0` there) or a cyclic
    /// permutation whose order divides `m` (a scaled power of `G`, so `L_i^m`
    /// is scalar there). `V` is a sum of random subspaces of the blocks.
    /// Conjugating everything by a random unimodular `P` hides the structure.
    pub fn closure_instance(&mut self, max_dim: usize, max_ops: usize, m: u32) -> ClosureInstance {
        assert!(m >= 2 && max_dim >= 2);
        let t = self.int(1, max_ops as i64) as usize;
        let n = self.int(2, max_dim as i64) as usize;
        let divisors: Vec<usize> = (2..=m as usize).filter(|k| (m as usize).is_multiple_of(*k)).collect();

        let mut blocks_per_op: Vec<Vec<ExactMatrix>> = vec![Vec::new(); t];
        let mut v_vectors = Vec::new();
        let mut offset = 0;
        while offset < n {
            let room = n - offset;
            let nilpotent = self.rng.gen::<bool>() || room < 2;
            let size = if nilpotent {
                self.int(1, room.min(m as usize) as i64) as usize
            } else {
                let fits: Vec<usize> = divisors.iter().copied().filter(|&k| k <= room).collect();
                if fits.is_empty() {
                    self.int(1, room.min(m as usize) as i64) as usize
                } else {
                    fits[self.int(0, fits.len() as i64 - 1) as usize]
                }
            };
            let nilpotent = nilpotent || !divisors.contains(&size);
            let mut g = ExactMatrix::zeros(size, size);
            for i in 0..size {
                if nilpotent {
                    if i + 1 < size {
                        g[(i, i + 1)] = Scalar::from(1);
                    }
                } else {
                    g[((i + 1) % size, i)] = Scalar::from(1);
                }
            }
            for ops in blocks_per_op.iter_mut() {
                let block = if nilpotent {
                    let mut acc = ExactMatrix::zeros(size, size);
                    let mut power = g.clone();
                    for _ in 1..size.max(2) {
                        acc = acc.add(&power.scale(&Scalar::from(self.int(-2, 2)))).expect("same shape");
                        power = power.matmul(&g).expect("square");
                    }
                    acc
                } else {
                    let k = self.int(0, size as i64 - 1) as u32;
                    g.pow(k).expect("square").scale(&Scalar::from(self.nonzero_int(2)))
                };
                ops.push(block);
            }
            let k = self.int(0, size as i64) as usize;
            for _ in 0..k {
                let mut v = vec![Scalar::zero(); n];
                for x in v.iter_mut().skip(offset).take(size) {
                    *x = Scalar::from(self.int(-2, 2));
                }
                v_vectors.push(v);
            }
            offset += size;
        }

        let (p, p_inv) = self.unimodular(n, 1);
        let operators = blocks_per_op
            .iter()
            .map(|blocks| {
                let d = ExactMatrix::block_diagonal(blocks);
                p.matmul(&d).and_then(|x| x.matmul(&p_inv)).expect("square")
            })
            .collect();
        let moved = v_vectors.iter().map(|v| p.mul_vec(v).expect("length n")).collect();
        let subspace = SubspaceBasis::new(n, moved).expect("length n");
        ClosureInstance { operators, subspace, m }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::power_preserves;

    #[test]
    fn seeds_are_reproducible() {
        let a = Sampler::new(7).polynomial(2, 3, 5, true);
        let b = Sampler::new(7).polynomial(2, 3, 5, true);
        assert_eq!(a, b);
    }

    #[test]
    fn engineered_instances_meet_the_hypotheses() {
        let mut s = Sampler::new(11);
        for _ in 0..20 {
            let m = s.int(2, 4) as u32;
            let inst = s.closure_instance(8, 3, m);
            for (i, a) in inst.operators.iter().enumerate() {
                for b in &inst.operators[i + 1..] {
                    assert_eq!(a.matmul(b).unwrap(), b.matmul(a).unwrap());
                }
                assert!(power_preserves(a, &inst.subspace, m).unwrap());
            }
        }
    }

    #[test]
    fn unimodular_inverse() {
        let (p, q) = Sampler::new(3).unimodular(5, 2);
        assert_eq!(p.matmul(&q).unwrap(), ExactMatrix::identity(5));
    }
}
