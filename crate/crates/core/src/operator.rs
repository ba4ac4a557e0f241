//! Matrix representations of `Δ_h` on the blocks `P` and `E_k`, the exact
//! solver for `Δ_{h_j}^m f = 0` inside a finite ambient space, and the
//! degree-bound check for coordinate steps.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::ambient::{AmbientSpec, ExpModule};
use crate::error::{check_dim, Error, Result};
use crate::exppoly::{lambda_power, ExpPolynomial};
use crate::index::{grlex_monomials, LatticeVector, MultiIndex};
use crate::lattice::generates_lattice;
use crate::matrix::ExactMatrix;
use crate::poly::{Degrees, Polynomial};
use crate::scalar::GaussianRational;

type Scalar = GaussianRational;

/// The ordered basis `{n^α λ^n : |α| ≤ max_degree}` sorted by grlex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleBasis {
    lambda: Vec<Scalar>,
    max_degree: u32,
    monomials: Vec<MultiIndex>,
}

impl ModuleBasis {
    pub fn new(lambda: Vec<Scalar>, max_degree: u32) -> Result<Self> {
        if lambda.iter().any(Zero::is_zero) {
            return Err(Error::InvalidInput("λ has a zero component".into()));
        }
        let monomials = grlex_monomials(lambda.len(), max_degree);
        Ok(Self { lambda, max_degree, monomials })
    }

    /// The pure polynomial block `Π_N^d` (base `λ = (1, …, 1)`).
    pub fn polynomial(dim: usize, max_degree: u32) -> Self {
        Self::new(vec![Scalar::one(); dim], max_degree).expect("all-ones base")
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[Scalar] {
        &self.lambda
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.lambda.iter().all(One::is_one)
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.monomials.binary_search_by(|m| m.grlex_cmp(alpha)).ok()
    }

    /// Coordinates of `p(n) λ^n` in this basis; `None` if `p` has a term of
    /// too high degree or the wrong dimension.
    pub fn coordinates(&self, p: &Polynomial) -> Option<Vec<Scalar>> {
        if p.dim() != self.dim() {
            return None;
        }
        let mut v = vec![Scalar::zero(); self.len()];
        for (alpha, c) in p.terms() {
            v[self.index_of(alpha)?] = c.clone();
        }
        Some(v)
    }

    /// The polynomial part `p` of the element `p(n) λ^n` with these coordinates.
    pub fn polynomial_from(&self, coords: &[Scalar]) -> Result<Polynomial> {
        check_dim(self.len(), coords.len())?;
        Polynomial::from_terms(self.dim(), self.monomials.iter().cloned().zip(coords.iter().cloned()))
    }

    pub fn function_from(&self, coords: &[Scalar]) -> Result<ExpPolynomial> {
        ExpPolynomial::exp_monomial(self.lambda.clone(), self.polynomial_from(coords)?)
    }
}

/// `λ^h − 1`, the constant diagonal of `Δ_h` on the block with base `λ`.
pub fn diagonal_factor(lambda: &[Scalar], h: &LatticeVector) -> Result<Scalar> {
    Ok(&lambda_power(lambda, h)? - &Scalar::one())
}

/// Whether `Δ_h` is invertible on the block with base `λ`.
pub fn is_invertible_on_module(lambda: &[Scalar], h: &LatticeVector) -> Result<bool> {
    Ok(!diagonal_factor(lambda, h)?.is_zero())
}

/// Matrix of `Δ_h` restricted to the module: column `j` holds the coordinates
/// of `Δ_h(n^{α_j} λ^n) = ((n+h)^{α_j} λ^h − n^{α_j}) λ^n`.
pub fn operator_matrix(h: &LatticeVector, module: &ModuleBasis) -> Result<ExactMatrix> {
    check_dim(module.dim(), h.dim())?;
    let lh = lambda_power(module.lambda(), h)?;
    let n = module.len();
    let mut columns = Vec::with_capacity(n);
    for alpha in module.monomials() {
        let mono = Polynomial::monomial(alpha.clone(), Scalar::one());
        let image = mono.shift_lattice(h)?.scale(&lh).sub(&mono)?;
        let col = module.coordinates(&image).ok_or_else(|| Error::Internal("Δ_h left its module".into()))?;
        columns.push(col);
    }
    ExactMatrix::from_columns(n, &columns)
}

/// The full ambient `P ⊕ E_1 ⊕ … ⊕ E_s` as an ordered list of blocks, with
/// coordinates concatenated block by block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientBasis {
    dim: usize,
    blocks: Vec<ModuleBasis>,
}

impl AmbientBasis {
    pub fn new(ambient: &AmbientSpec) -> Result<Self> {
        let mut blocks = Vec::new();
        if let Some(n) = ambient.poly_degree {
            blocks.push(ModuleBasis::polynomial(ambient.dim, n));
        }
        for ExpModule { lambda, max_degree } in &ambient.exp_modules {
            check_dim(ambient.dim, lambda.len())?;
            blocks.push(ModuleBasis::new(lambda.clone(), *max_degree)?);
        }
        Ok(Self { dim: ambient.dim, blocks })
    }

    /// Ambient made of explicit blocks, in the given order.
    pub fn from_blocks(dim: usize, blocks: Vec<ModuleBasis>) -> Self {
        Self { dim, blocks }
    }

    pub fn blocks(&self) -> &[ModuleBasis] {
        &self.blocks
    }

    /// Total number of basis functions.
    pub fn len(&self) -> usize {
        self.blocks.iter().map(ModuleBasis::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Block-diagonal matrix of `Δ_h` on the whole ambient.
    pub fn operator_matrix(&self, h: &LatticeVector) -> Result<ExactMatrix> {
        let blocks = self.blocks.iter().map(|b| operator_matrix(h, b)).collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix::block_diagonal(&blocks))
    }

    pub fn coordinates(&self, f: &ExpPolynomial) -> Result<Vec<Scalar>> {
        check_dim(self.dim, f.dim())?;
        let mut out = vec![Scalar::zero(); self.len()];
        for term in f.normalize().terms() {
            let mut offset = 0;
            let mut placed = false;
            for b in &self.blocks {
                if b.lambda() == term.lambda() {
                    let coords = b.coordinates(term.poly()).ok_or_else(|| {
                        Error::InvalidInput(format!("a term with λ = {:?} exceeds the block degree", term.lambda()))
                    })?;
                    for (k, c) in coords.into_iter().enumerate() {
                        out[offset + k] += &c;
                    }
                    placed = true;
                    break;
                }
                offset += b.len();
            }
            if !placed {
                return Err(Error::InvalidInput(format!("no ambient block has λ = {:?}", term.lambda())));
            }
        }
        Ok(out)
    }

    pub fn function_from(&self, coords: &[Scalar]) -> Result<ExpPolynomial> {
        check_dim(self.len(), coords.len())?;
        let mut f = ExpPolynomial::zero(self.dim);
        let mut offset = 0;
        for b in &self.blocks {
            f = f.add(&b.function_from(&coords[offset..offset + b.len()])?)?;
            offset += b.len();
        }
        Ok(f)
    }
}

/// Solution space of `Δ_{h_j}^m f = 0` (all `j`) inside an ambient space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionBasis {
    pub elements: Vec<ExpPolynomial>,
    pub ambient: AmbientSpec,
}

impl SolutionBasis {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MontelSolution {
    pub basis: SolutionBasis,
    /// Kernel dimension contributed by each block, polynomial block first.
    pub block_dimensions: Vec<usize>,
    pub generates_lattice: bool,
    /// Every solution lies in the polynomial block.
    pub all_polynomial: bool,
    /// For `d = 1`: every solution has degree at most `m − 1`.
    pub d1_degree_ok: Option<bool>,
    pub warnings: Vec<String>,
}

impl MontelSolution {
    /// The discrete Montel conclusion, asserted only when the steps generate `ℤ^d`.
    pub fn theorem_holds(&self) -> bool {
        !self.generates_lattice || (self.all_polynomial && self.d1_degree_ok.unwrap_or(true))
    }
}

/// Kernel of the stacked matrices of `Δ_{h_j}^m` on one block.
fn block_kernel(steps: &[LatticeVector], m: u32, module: &ModuleBasis) -> Result<Vec<ExpPolynomial>> {
    let powers = steps.iter().map(|h| operator_matrix(h, module)?.pow(m)).collect::<Result<Vec<_>>>()?;
    let stacked = ExactMatrix::vstack(&powers)?;
    stacked.nullspace().iter().map(|v| module.function_from(v)).collect()
}

/// Solves `Δ_{h_j}^m f = 0` for all steps inside `P ⊕ E_1 ⊕ … ⊕ E_s`.
///
/// `Δ_h` maps every block into itself, so the system splits into one stacked
/// kernel computation per block, in ambient order.
pub fn solve_montel_system(steps: &[LatticeVector], m: u32, ambient: &AmbientSpec) -> Result<MontelSolution> {
    if steps.is_empty() {
        return Err(Error::InvalidInput("no steps given".into()));
    }
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    for h in steps {
        check_dim(ambient.dim, h.dim())?;
    }
    let mut warnings = Vec::new();
    if let Some(n) = ambient.poly_degree.filter(|&n| n + 1 < m) {
        warnings.push(format!(
            "polynomial block degree {n} < m - 1 = {}: the block cannot hold every polynomial solution",
            m - 1
        ));
    }
    let basis = AmbientBasis::new(ambient)?;

    let mut elements = Vec::new();
    let mut block_dimensions = Vec::new();
    let mut all_polynomial = true;
    for block in basis.blocks() {
        let kernel = block_kernel(steps, m, block)?;
        if !block.is_polynomial() && !kernel.is_empty() {
            all_polynomial = false;
        }
        block_dimensions.push(kernel.len());
        elements.extend(kernel);
    }

    let d1_degree_ok = (ambient.dim == 1).then(|| {
        elements
            .iter()
            .all(|f| f.terms().iter().all(|t| t.is_polynomial() && t.poly().total_degree().is_none_or(|deg| deg < m)))
    });

    Ok(MontelSolution {
        basis: SolutionBasis { elements, ambient: ambient.clone() },
        block_dimensions,
        generates_lattice: generates_lattice(steps)?,
        all_polynomial,
        d1_degree_ok,
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeBoundStatus {
    /// Per-variable degrees are all `≤ m − 1` and the total is `≤ (m − 1)d`.
    Pass,
    /// Some per-variable degree exceeds `m − 1`; the bound does not apply.
    NotApplicable,
    /// Hypothesis holds but the total degree exceeds `(m − 1)d`.
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBoundVerdict {
    pub degrees: Degrees,
    pub bound: u64,
    pub status: DegreeBoundStatus,
    /// Total degree sits exactly on the bound.
    pub extremal: bool,
}

/// If every per-variable degree of `p` is at most `m − 1`, its total degree
/// is at most `(m − 1)·d`.
pub fn degree_bound_check(p: &Polynomial, m: u32) -> Result<DegreeBoundVerdict> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let degrees = p.degrees();
    let bound = u64::from(m - 1) * p.dim() as u64;
    let hypothesis = degrees.per_variable.iter().all(|d| d.is_none_or(|d| d < m));
    let total = degrees.total.map(u64::from);
    let status = if !hypothesis {
        DegreeBoundStatus::NotApplicable
    } else if total.is_none_or(|t| t <= bound) {
        DegreeBoundStatus::Pass
    } else {
        DegreeBoundStatus::Violated
    };
    Ok(DegreeBoundVerdict { extremal: total == Some(bound), degrees, bound, status })
}
