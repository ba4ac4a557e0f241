//! Exact finite-difference calculus on the integer lattice `ℤ^d`.

pub mod ambient;
pub mod cli;
pub mod closure;
pub mod difference;
pub mod error;
pub mod exppoly;
pub mod index;
pub mod lattice;
pub mod matrix;
pub mod operator;
pub mod poly;
pub mod random;
pub mod reconstruct;
pub mod sample;
pub mod scalar;

pub use ambient::{AmbientSpec, ExpModule};
pub use closure::{
    box_closure, chain_check, compare_orders, diamond_closure, is_invariant, orbit_closure, power_preserves,
    ChainReport, SubspaceBasis,
};
pub use difference::{delta, delta_mixed, delta_power, djokovic_check, is_frechet_solution, Difference};
pub use error::{Error, Result};
pub use exppoly::{normalize, ExpMonomialTerm, ExpPolynomial};
pub use index::{grlex_compare, grlex_monomials, LatticeVector, MultiIndex};
pub use lattice::{extended_gcd, generates_lattice, smith_normal_form, IntMatrix, SmithForm};
pub use matrix::{nullspace, ExactMatrix};
pub use operator::{
    degree_bound_check, diagonal_factor, is_invertible_on_module, operator_matrix, solve_montel_system, AmbientBasis,
    DegreeBoundStatus, DegreeBoundVerdict, ModuleBasis, MontelSolution, SolutionBasis,
};
pub use poly::{degrees, Degrees, Polynomial};
pub use reconstruct::{counterexample_case, newton_coefficients, reconstruct_polynomial, CounterexampleReport};
pub use sample::{LatticeFunction, SampleTable};
pub use scalar::{gr, GaussianRational};
