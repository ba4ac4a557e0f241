//! Finite ambient spaces `P ⊕ E_1 ⊕ … ⊕ E_s` for the Montel solver.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::scalar::GaussianRational;

/// One exponential block `E_k = span{n^α λ_k^n : |α| ≤ max_degree}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExpModule {
    pub lambda: Vec<GaussianRational>,
    pub max_degree: u32,
}

/// The pure polynomial block `P = Π_N` (absent when `poly_degree` is `None`)
/// plus exponential blocks. The all-ones base never appears among the
/// exponential blocks: the polynomial block plays that role.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AmbientSpec {
    pub dim: usize,
    pub poly_degree: Option<u32>,
    pub exp_modules: Vec<ExpModule>,
}

impl AmbientSpec {
    pub fn new(dim: usize, poly_degree: Option<u32>, exp_modules: Vec<ExpModule>) -> Result<Self> {
        for (k, m) in exp_modules.iter().enumerate() {
            check_dim(dim, m.lambda.len())?;
            if m.lambda.iter().any(Zero::is_zero) {
                return Err(Error::InvalidInput(format!("exp module {k}: λ has a zero component")));
            }
            if m.lambda.iter().all(One::is_one) {
                return Err(Error::InvalidInput(format!(
                    "exp module {k}: λ = (1, …, 1) belongs to the polynomial block (use polyDegree)"
                )));
            }
            if exp_modules[..k].iter().any(|o| o.lambda == m.lambda) {
                return Err(Error::InvalidInput(format!("exp module {k}: repeated λ")));
            }
        }
        if poly_degree.is_none() && exp_modules.is_empty() {
            return Err(Error::InvalidInput("ambient space has no blocks".into()));
        }
        Ok(Self { dim, poly_degree, exp_modules })
    }

    /// Pure polynomial ambient `Π_N`.
    pub fn polynomial(dim: usize, degree: u32) -> Self {
        Self { dim, poly_degree: Some(degree), exp_modules: Vec::new() }
    }
}

/// Wire form used by requests; `dim` may be omitted and supplied by the caller.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AmbientJson {
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub poly_degree: Option<u32>,
    #[serde(default)]
    pub exp_modules: Vec<ExpModule>,
}

impl AmbientJson {
    pub fn resolve(self, dim: usize) -> Result<AmbientSpec> {
        if let Some(d) = self.dim {
            check_dim(dim, d)?;
        }
        AmbientSpec::new(dim, self.poly_degree, self.exp_modules)
    }
}
