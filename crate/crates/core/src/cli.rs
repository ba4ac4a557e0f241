//! JSON request/response layer behind the `montel` binary.
//!
//! A request is `{"command": name, "params": {...}}`. [`dispatch`] returns an
//! exit code and a JSON body: 0 when everything computed and every asserted
//! property holds, 1 when a checked property fails, 2 for invalid input and 3
//! for internal errors. Scalars are always exact strings. Object keys come
//! out sorted, so identical requests give identical bytes.

use std::cmp::Ordering;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::ambient::{AmbientJson, ExpModule};
use crate::closure::{
    box_closure, chain_check, compare_orders, diamond_closure, is_invariant, orbit_closure, power_preserves,
    SubspaceBasis,
};
use crate::difference::{delta_mixed, djokovic_check, is_frechet_solution, Difference, FrechetVerdict};
use crate::error::{Error, Result};
use crate::exppoly::ExpPolynomial;
use crate::index::{grlex_compare, grlex_monomials, LatticeVector, MultiIndex};
use crate::lattice::{bezout_coefficients, extended_gcd, generates_lattice, smith_normal_form, IntMatrix};
use crate::matrix::ExactMatrix;
use crate::operator::{
    degree_bound_check, diagonal_factor, solve_montel_system, AmbientBasis, DegreeBoundStatus, ModuleBasis,
};
use crate::poly::Polynomial;
use crate::random::Sampler;
use crate::reconstruct::{counterexample_case, newton_coefficients, reconstruct_polynomial};
use crate::sample::SampleTable;
use crate::scalar::GaussianRational;

type Scalar = GaussianRational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    Verify,
    Closure,
    Reconstruct,
    Counterexample,
    LatticeCheck,
    DjokovicCheck,
    Matrix,
    Delta,
    Evaluate,
    Degrees,
    Normalize,
    Grlex,
    Nullspace,
    Smith,
    Gcd,
    DiagonalFactor,
    DegreeBound,
    Invariant,
    ChainCheck,
    Newton,
    SelfTest,
}

impl Command {
    pub const ALL: [Command; 22] = [
        Command::Solve,
        Command::Verify,
        Command::Closure,
        Command::Reconstruct,
        Command::Counterexample,
        Command::LatticeCheck,
        Command::DjokovicCheck,
        Command::Matrix,
        Command::Delta,
        Command::Evaluate,
        Command::Degrees,
        Command::Normalize,
        Command::Grlex,
        Command::Nullspace,
        Command::Smith,
        Command::Gcd,
        Command::DiagonalFactor,
        Command::DegreeBound,
        Command::Invariant,
        Command::ChainCheck,
        Command::Newton,
        Command::SelfTest,
    ];

    pub fn name(self) -> String {
        match serde_json::to_value(self) {
            Ok(Value::String(s)) => s,
            _ => unreachable!("unit variants serialize as strings"),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.to_string()))
            .map_err(|_| Error::InvalidInput(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandRequest {
    pub command: Command,
    #[serde(default = "empty_object")]
    pub params: Value,
}

fn empty_object() -> Value {
    json!({})
}

impl CommandRequest {
    pub fn new(command: Command, params: Value) -> Self {
        Self { command, params }
    }

    pub fn render(&self) -> String {
        serde_json::to_string(self).expect("requests always serialize")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Response {
    pub exit_code: i32,
    pub body: Value,
}

impl Response {
    fn verdict(body: Value, ok: bool) -> Self {
        Self { exit_code: if ok { EXIT_OK } else { EXIT_PROPERTY_FAILED }, body }
    }

    pub fn error(e: &Error) -> Self {
        let exit_code = if matches!(e, Error::Internal(_)) { EXIT_INTERNAL } else { EXIT_INVALID_INPUT };
        Self { exit_code, body: json!({"error": {"kind": error_kind(e), "message": e.to_string()}}) }
    }

    /// Body text with a trailing newline.
    pub fn render(&self, pretty: bool) -> String {
        let mut s = if pretty { serde_json::to_string_pretty(&self.body) } else { serde_json::to_string(&self.body) }
            .expect("values always serialize");
        s.push('\n');
        s
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::InvalidInput(_) => "invalid_input",
        Error::Parse(_) => "parse",
        Error::EmptyBox => "empty_box",
        Error::WindowTooSmall(_) => "window_too_small",
        Error::NonCommuting(..) => "non_commuting",
        Error::ContainmentViolated(_) => "containment_violated",
        Error::Shape(_) => "shape",
        Error::Precondition(_) => "precondition",
        Error::Internal(_) => "internal",
    }
}

/// Runs one request. Panics inside a command become exit code 3.
pub fn dispatch(request: &CommandRequest) -> Response {
    match catch_unwind(AssertUnwindSafe(|| run(request))) {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => Response::error(&e),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            Response::error(&Error::Internal(msg))
        }
    }
}

/// Parses and runs raw request text.
pub fn dispatch_str(text: &str) -> Response {
    match CommandRequest::parse(text) {
        Ok(r) => dispatch(&r),
        Err(e) => Response::error(&e),
    }
}

fn run(req: &CommandRequest) -> Result<Response> {
    let p = &req.params;
    match req.command {
        Command::Solve => solve(params(p)?),
        Command::Verify => verify(params(p)?),
        Command::Closure => closure(params(p)?),
        Command::Reconstruct => reconstruct(params(p)?),
        Command::Counterexample => counterexample(params(p)?),
        Command::LatticeCheck => lattice_check(params(p)?),
        Command::DjokovicCheck => djokovic(params(p)?),
        Command::Matrix => matrix(params(p)?),
        Command::Delta => delta_cmd(params(p)?),
        Command::Evaluate => evaluate(params(p)?),
        Command::Degrees => degrees(params(p)?),
        Command::Normalize => normalize(params(p)?),
        Command::Grlex => grlex(params(p)?),
        Command::Nullspace => nullspace(params(p)?),
        Command::Smith => smith(params(p)?),
        Command::Gcd => gcd(params(p)?),
        Command::DiagonalFactor => diag_factor(params(p)?),
        Command::DegreeBound => degree_bound(params(p)?),
        Command::Invariant => invariant(params(p)?),
        Command::ChainCheck => chain(params(p)?),
        Command::Newton => newton(params(p)?),
        Command::SelfTest => self_test(params(p)?),
    }
}

fn params<T: DeserializeOwned>(v: &Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Parse(e.to_string()))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types always serialize")
}

/// Any of the three function representations, told apart by shape: a
/// `lower` key means a table, a `lambda` in any term an exponential
/// polynomial, otherwise a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Function {
    Polynomial(Polynomial),
    Exp(ExpPolynomial),
    Table(SampleTable),
}

impl Function {
    fn from_value(v: Value) -> std::result::Result<Self, serde_json::Error> {
        if v.get("lower").is_some() {
            return serde_json::from_value(v).map(Function::Table);
        }
        let has_lambda =
            v.get("terms").and_then(Value::as_array).is_some_and(|ts| ts.iter().any(|t| t.get("lambda").is_some()));
        if has_lambda {
            serde_json::from_value(v).map(Function::Exp)
        } else {
            serde_json::from_value(v).map(Function::Polynomial)
        }
    }

    fn as_exp(&self) -> Result<ExpPolynomial> {
        match self {
            Function::Polynomial(p) => Ok(p.clone().into()),
            Function::Exp(f) => Ok(f.clone()),
            Function::Table(_) => Err(Error::InvalidInput("expected a polynomial or exponential polynomial".into())),
        }
    }
}

impl<'de> Deserialize<'de> for Function {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Function::from_value(Value::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Function {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Function::Polynomial(p) => p.serialize(s),
            Function::Exp(f) => f.serialize(s),
            Function::Table(t) => t.serialize(s),
        }
    }
}

/// Integer given as a JSON number or a decimal string.
#[derive(Clone, Debug)]
struct Int(BigInt);

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) if n.is_i64() => Ok(Int(BigInt::from(n.as_i64().expect("checked")))),
            Value::String(s) => s.parse().map(Int).map_err(serde::de::Error::custom),
            other => Err(serde::de::Error::custom(format!("expected an integer, got {other}"))),
        }
    }
}

fn first_dim(steps: &[LatticeVector]) -> Result<usize> {
    steps.first().map(LatticeVector::dim).ok_or_else(|| Error::InvalidInput("no steps given".into()))
}

// ---- solve / verify ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveParams {
    steps: Vec<LatticeVector>,
    m: u32,
    ambient: AmbientJson,
}

fn solve(p: SolveParams) -> Result<Response> {
    let ambient = p.ambient.resolve(first_dim(&p.steps)?)?;
    let sol = solve_montel_system(&p.steps, p.m, &ambient)?;
    let ok = sol.theorem_holds();
    Ok(Response::verdict(
        json!({
            "basis": to_value(&sol.basis.elements),
            "dimension": sol.basis.dimension(),
            "block_dimensions": sol.block_dimensions,
            "generates_lattice": sol.generates_lattice,
            "all_polynomial": sol.all_polynomial,
            "d1_degree_ok": sol.d1_degree_ok,
            "theorem_holds": ok,
            "warnings": sol.warnings,
        }),
        ok,
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyParams {
    f: Function,
    steps: Vec<LatticeVector>,
    m: u32,
}

fn verdict_json(v: &FrechetVerdict) -> Value {
    let witness = v.witness().map(|(h, w)| json!({"step": h, "point": w.point, "value": w.value}));
    json!({"ok": v.holds, "m": v.m, "witness": witness, "steps": to_value(&v.steps)})
}

fn verify(p: VerifyParams) -> Result<Response> {
    let v = match &p.f {
        Function::Polynomial(f) => is_frechet_solution(f, &p.steps, p.m)?,
        Function::Exp(f) => is_frechet_solution(f, &p.steps, p.m)?,
        Function::Table(f) => is_frechet_solution(f, &p.steps, p.m)?,
    };
    Ok(Response::verdict(verdict_json(&v), v.holds))
}

// ---- closure family ----

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct SubspaceParams {
    #[serde(default)]
    vectors: Option<Vec<Vec<Scalar>>>,
    #[serde(default)]
    functions: Option<Vec<Function>>,
    #[serde(default, rename = "ambientDim")]
    ambient_dim: Option<usize>,
}

#[derive(Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum ClosureMode {
    Box,
    Diamond,
    Orbit,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct ClosureParams {
    #[serde(default)]
    mode: Option<ClosureMode>,
    #[serde(default)]
    operators: Option<Vec<ExactMatrix>>,
    #[serde(default)]
    steps: Option<Vec<LatticeVector>>,
    #[serde(default)]
    ambient: Option<AmbientJson>,
    subspace: SubspaceParams,
    #[serde(default)]
    m: Option<u32>,
    #[serde(default)]
    compare_orders: bool,
}

/// Operators given directly, or as `Δ_h` on an ambient (returned for
/// translating functions to coordinates).
fn resolve_operators(
    operators: Option<Vec<ExactMatrix>>,
    steps: Option<Vec<LatticeVector>>,
    ambient: Option<AmbientJson>,
) -> Result<(Vec<ExactMatrix>, Option<AmbientBasis>)> {
    match (operators, steps) {
        (Some(ops), None) => {
            let basis = match ambient {
                Some(a) => {
                    let dim = a.dim.ok_or_else(|| Error::InvalidInput("ambient needs `dim` here".into()))?;
                    Some(AmbientBasis::new(&a.resolve(dim)?)?)
                }
                None => None,
            };
            Ok((ops, basis))
        }
        (None, Some(steps)) => {
            let a = ambient.ok_or_else(|| Error::InvalidInput("`steps` need an `ambient`".into()))?;
            let basis = AmbientBasis::new(&a.resolve(first_dim(&steps)?)?)?;
            let ops = steps.iter().map(|h| basis.operator_matrix(h)).collect::<Result<Vec<_>>>()?;
            Ok((ops, Some(basis)))
        }
        _ => Err(Error::InvalidInput("give exactly one of `operators` or `steps`".into())),
    }
}

fn resolve_subspace(s: SubspaceParams, n: usize, basis: Option<&AmbientBasis>) -> Result<SubspaceBasis> {
    if let Some(d) = s.ambient_dim {
        crate::error::check_dim(n, d)?;
    }
    match (s.vectors, s.functions) {
        (Some(v), None) => SubspaceBasis::new(n, v),
        (None, Some(fs)) => {
            let basis = basis.ok_or_else(|| Error::InvalidInput("`functions` need an ambient".into()))?;
            let coords = fs.iter().map(|f| basis.coordinates(&f.as_exp()?)).collect::<Result<Vec<_>>>()?;
            SubspaceBasis::new(n, coords)
        }
        _ => Err(Error::InvalidInput("subspace needs exactly one of `vectors` or `functions`".into())),
    }
}

fn functions_of(w: &SubspaceBasis, basis: Option<&AmbientBasis>) -> Result<Option<Value>> {
    basis
        .map(|b| w.vectors().iter().map(|v| b.function_from(v)).collect::<Result<Vec<_>>>().map(|fs| to_value(&fs)))
        .transpose()
}

fn closure(p: ClosureParams) -> Result<Response> {
    let (ops, basis) = resolve_operators(p.operators, p.steps, p.ambient)?;
    let first = ops.first().ok_or_else(|| Error::InvalidInput("no operators given".into()))?;
    let n = first.rows();
    let v = resolve_subspace(p.subspace, n, basis.as_ref())?;
    let mode = p.mode.unwrap_or(if ops.len() == 1 { ClosureMode::Box } else { ClosureMode::Diamond });
    let need_m = || p.m.ok_or_else(|| Error::InvalidInput("`m` is required for this mode".into()));

    let w = match mode {
        ClosureMode::Box => {
            if ops.len() != 1 {
                return Err(Error::InvalidInput("box mode takes exactly one operator".into()));
            }
            box_closure(first, &v, need_m()?)?
        }
        ClosureMode::Diamond => diamond_closure(&ops, &v, need_m()?)?,
        ClosureMode::Orbit => {
            if ops.len() != 1 {
                return Err(Error::InvalidInput("orbit mode takes exactly one operator".into()));
            }
            orbit_closure(first, &v)?
        }
    };

    let mut certificates = Vec::new();
    let mut ok = w.contains_subspace(&v)?;
    for (i, l) in ops.iter().enumerate() {
        let pre = p.m.map(|m| power_preserves(l, &v, m)).transpose()?;
        let inv = is_invariant(l, &w)?;
        // Invariance is only asserted when L^m(V) ⊆ V, or always for the orbit.
        if (mode == ClosureMode::Orbit || pre == Some(true)) && !inv {
            ok = false;
        }
        certificates.push(json!({"operator": i, "power_preserves_subspace": pre, "invariant": inv}));
    }
    let mut body = json!({
        "closure": to_value(&w),
        "dimension": w.dim(),
        "contains_subspace": w.contains_subspace(&v)?,
        "certificates": certificates,
        "functions": functions_of(&w, basis.as_ref())?,
    });
    if p.compare_orders && mode == ClosureMode::Diamond {
        let c = compare_orders(&ops, &v, need_m()?)?;
        body["order_comparison"] = json!({"reversed": to_value(&c.reversed), "identical": c.identical});
    }
    Ok(Response::verdict(body, ok))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InvariantParams {
    operator: ExactMatrix,
    subspace: SubspaceParams,
}

fn invariant(p: InvariantParams) -> Result<Response> {
    let w = resolve_subspace(p.subspace, p.operator.rows(), None)?;
    let inv = is_invariant(&p.operator, &w)?;
    Ok(Response::verdict(json!({"invariant": inv, "subspace": to_value(&w)}), inv))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainParams {
    matrix: ExactMatrix,
    m: u32,
}

fn chain(p: ChainParams) -> Result<Response> {
    let r = chain_check(&p.matrix, p.m)?;
    Ok(Response::verdict(to_value(&r), r.holds))
}

// ---- reconstruct family ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableParams {
    table: SampleTable,
    m: u32,
}

fn coefficient_list(c: &std::collections::BTreeMap<MultiIndex, Scalar>) -> Value {
    let mut entries: Vec<_> = c.iter().collect();
    entries.sort_by(|a, b| a.0.grlex_cmp(b.0));
    Value::Array(entries.into_iter().map(|(a, v)| json!({"alpha": a, "coeff": v})).collect())
}

fn reconstruct(p: TableParams) -> Result<Response> {
    let poly = reconstruct_polynomial(&p.table, p.m)?;
    let newton = newton_coefficients(&p.table, p.m)?;
    Ok(Response::verdict(
        json!({"polynomial": to_value(&poly), "degrees": to_value(&poly.degrees()), "newton": coefficient_list(&newton)}),
        true,
    ))
}

fn newton(p: TableParams) -> Result<Response> {
    let c = newton_coefficients(&p.table, p.m)?;
    Ok(Response::verdict(json!({"coefficients": coefficient_list(&c)}), true))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct CounterexampleParams {
    radius: u32,
    max_order: u32,
}

fn counterexample(p: CounterexampleParams) -> Result<Response> {
    let r = counterexample_case(p.radius, p.max_order)?;
    Ok(Response::verdict(to_value(&r), r.certified))
}

// ---- lattice / algebra ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StepsParams {
    steps: Vec<LatticeVector>,
}

fn lattice_check(p: StepsParams) -> Result<Response> {
    first_dim(&p.steps)?;
    let generates = generates_lattice(&p.steps)?;
    let smith = smith_normal_form(&IntMatrix::from_lattice_vectors(&p.steps)?);
    let factors: Vec<String> = smith.invariant_factors().iter().map(ToString::to_string).collect();
    let mut body = json!({"generates": generates, "smith": to_value(&smith), "invariant_factors": factors});
    if p.steps[0].dim() == 1 {
        let values: Vec<BigInt> = p.steps.iter().map(|h| BigInt::from(h.entries()[0])).collect();
        if let Ok((g, coeffs)) = bezout_coefficients(&values) {
            let coeffs: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
            body["bezout"] = json!({"gcd": g.to_string(), "coefficients": coeffs});
        }
    }
    Ok(Response::verdict(body, generates))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SmithParams {
    matrix: IntMatrix,
}

fn smith(p: SmithParams) -> Result<Response> {
    let f = smith_normal_form(&p.matrix);
    let certificate = f.u.matmul(&p.matrix)?.matmul(&f.v)? == f.s;
    let factors: Vec<String> = f.invariant_factors().iter().map(ToString::to_string).collect();
    Ok(Response::verdict(
        json!({"U": to_value(&f.u), "S": to_value(&f.s), "V": to_value(&f.v), "invariant_factors": factors, "certificate": certificate}),
        certificate,
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GcdParams {
    a: Int,
    b: Int,
}

fn gcd(p: GcdParams) -> Result<Response> {
    let (g, x, y) = extended_gcd(&p.a.0, &p.b.0)?;
    Ok(Response::verdict(json!({"g": g.to_string(), "x": x.to_string(), "y": y.to_string()}), true))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct GrlexParams {
    #[serde(default)]
    a: Option<MultiIndex>,
    #[serde(default)]
    b: Option<MultiIndex>,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    max_degree: Option<u32>,
}

fn grlex(p: GrlexParams) -> Result<Response> {
    match (p.a, p.b, p.dim, p.max_degree) {
        (Some(a), Some(b), None, None) => {
            let ordering = match grlex_compare(&a, &b)? {
                Ordering::Less => "less",
                Ordering::Equal => "equal",
                Ordering::Greater => "greater",
            };
            Ok(Response::verdict(json!({"ordering": ordering}), true))
        }
        (None, None, Some(d), Some(n)) => {
            Ok(Response::verdict(json!({"monomials": to_value(&grlex_monomials(d, n))}), true))
        }
        _ => Err(Error::InvalidInput("give either `a` and `b`, or `dim` and `maxDegree`".into())),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NullspaceParams {
    matrix: ExactMatrix,
    #[serde(default)]
    power: Option<u32>,
}

fn nullspace(p: NullspaceParams) -> Result<Response> {
    let m = match p.power {
        Some(k) => p.matrix.pow(k)?,
        None => p.matrix,
    };
    let basis = m.nullspace();
    let rank = m.rank();
    let ok =
        rank + basis.len() == m.cols() && basis.iter().all(|v| m.mul_vec(v).is_ok_and(|r| r.iter().all(Zero::is_zero)));
    Ok(Response::verdict(json!({"basis": to_value(&basis), "rank": rank, "nullity": basis.len()}), ok))
}

// ---- operators ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixParams {
    h: LatticeVector,
    #[serde(default)]
    module: Option<ExpModule>,
    #[serde(default)]
    ambient: Option<AmbientJson>,
}

fn matrix(p: MatrixParams) -> Result<Response> {
    let basis = match (p.module, p.ambient) {
        (Some(m), None) => {
            crate::error::check_dim(p.h.dim(), m.lambda.len())?;
            let b = ModuleBasis::new(m.lambda, m.max_degree)?;
            AmbientBasis::from_blocks(p.h.dim(), vec![b])
        }
        (None, Some(a)) => AmbientBasis::new(&a.resolve(p.h.dim())?)?,
        _ => return Err(Error::InvalidInput("give exactly one of `module` or `ambient`".into())),
    };
    let matrix = basis.operator_matrix(&p.h)?;
    let blocks = basis
        .blocks()
        .iter()
        .map(|b| {
            let d = diagonal_factor(b.lambda(), &p.h)?;
            Ok(json!({
                "lambda": to_value(&b.lambda()),
                "monomials": to_value(&b.monomials()),
                "diagonal_factor": d,
                "invertible": !d.is_zero(),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let ok = matrix.is_upper_triangular();
    Ok(Response::verdict(json!({"matrix": to_value(&matrix), "blocks": blocks}), ok))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagonalParams {
    lambda: Vec<Scalar>,
    h: LatticeVector,
}

fn diag_factor(p: DiagonalParams) -> Result<Response> {
    crate::error::check_dim(p.lambda.len(), p.h.dim())?;
    if p.lambda.iter().any(Zero::is_zero) {
        return Err(Error::InvalidInput("λ has a zero component".into()));
    }
    let d = diagonal_factor(&p.lambda, &p.h)?;
    Ok(Response::verdict(json!({"value": d, "invertible": !d.is_zero()}), true))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DegreeBoundParams {
    p: Polynomial,
    m: u32,
}

fn degree_bound(p: DegreeBoundParams) -> Result<Response> {
    let v = degree_bound_check(&p.p, p.m)?;
    let ok = v.status != DegreeBoundStatus::Violated;
    Ok(Response::verdict(to_value(&v), ok))
}

// ---- function model and differences ----

#[derive(Deserialize, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum DeltaOp {
    Delta,
    DeltaPower,
    DeltaMixed,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaParams {
    op: DeltaOp,
    f: Function,
    #[serde(default)]
    h: Option<LatticeVector>,
    #[serde(default)]
    m: Option<u32>,
    #[serde(default)]
    steps: Option<Vec<LatticeVector>>,
    #[serde(default)]
    at: Option<LatticeVector>,
}

fn apply_delta<F: Difference + Clone>(p: &DeltaParams, f: &F) -> Result<F> {
    let h = || p.h.as_ref().ok_or_else(|| Error::InvalidInput("`h` is required".into()));
    match p.op {
        DeltaOp::Delta => f.delta(h()?),
        DeltaOp::DeltaPower => {
            let m = p.m.ok_or_else(|| Error::InvalidInput("`m` is required".into()))?;
            f.delta_power(h()?, m)
        }
        DeltaOp::DeltaMixed => {
            let steps = p.steps.as_ref().ok_or_else(|| Error::InvalidInput("`steps` is required".into()))?;
            if steps.is_empty() {
                return Err(Error::InvalidInput("no steps given".into()));
            }
            delta_mixed(steps, f)
        }
    }
}

fn value_of(f: &Function, n: &LatticeVector) -> Result<Scalar> {
    match f {
        Function::Polynomial(p) => p.evaluate(n),
        Function::Exp(e) => e.evaluate(n),
        Function::Table(t) => {
            crate::error::check_dim(t.dim(), n.dim())?;
            t.get(n).cloned().ok_or_else(|| Error::InvalidInput(format!("{n:?} lies outside the table")))
        }
    }
}

fn delta_cmd(p: DeltaParams) -> Result<Response> {
    let result = match &p.f {
        Function::Polynomial(f) => Function::Polynomial(apply_delta(&p, f)?),
        Function::Exp(f) => Function::Exp(apply_delta(&p, f)?),
        Function::Table(f) => Function::Table(apply_delta(&p, f)?),
    };
    let mut body = json!({"result": to_value(&result)});
    if let Some(n) = &p.at {
        body["value"] = json!(value_of(&result, n)?);
    }
    Ok(Response::verdict(body, true))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EvaluateParams {
    f: Function,
    n: LatticeVector,
}

fn evaluate(p: EvaluateParams) -> Result<Response> {
    Ok(Response::verdict(json!({"value": value_of(&p.f, &p.n)?}), true))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyParams {
    p: Polynomial,
}

fn degrees(p: PolyParams) -> Result<Response> {
    Ok(Response::verdict(to_value(&p.p.degrees()), true))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NormalizeParams {
    f: ExpPolynomial,
}

fn normalize(p: NormalizeParams) -> Result<Response> {
    let g = p.f.normalize();
    Ok(Response::verdict(json!({"result": to_value(&g), "changed": g != p.f}), true))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DjokovicParams {
    steps: Vec<Vec<Scalar>>,
    p: Polynomial,
}

fn djokovic(p: DjokovicParams) -> Result<Response> {
    let steps = p
        .steps
        .iter()
        .map(|h| {
            h.iter()
                .map(|x| {
                    if x.is_real() {
                        Ok(x.re().clone())
                    } else {
                        Err(Error::InvalidInput(format!("step entry {x} is not rational")))
                    }
                })
                .collect::<Result<Vec<BigRational>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let r = djokovic_check(&steps, &p.p)?;
    Ok(Response::verdict(to_value(&r), r.holds))
}

// ---- self-test ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SelfTestParams {
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_cases")]
    cases: u32,
}

fn default_cases() -> u32 {
    20
}

/// Randomized property campaign; every failure is counted, not thrown.
fn self_test(p: SelfTestParams) -> Result<Response> {
    let mut s = Sampler::new(p.seed);
    let mut results = Vec::new();
    let mut record = |name: &str, outcomes: Vec<Result<bool>>| {
        let passed = outcomes.iter().filter(|o| matches!(o, Ok(true))).count();
        results.push(json!({"name": name, "passed": passed, "failed": outcomes.len() - passed}));
        passed == outcomes.len()
    };
    let n = p.cases as usize;
    let mut ok = true;

    let djokovic_runs = (0..n)
        .map(|_| {
            let d = s.int(1, 3) as usize;
            let k = s.int(1, 4) as usize;
            let steps = s.rational_steps(k, d, 5);
            let degree = s.int(0, 4) as u32;
            let poly = s.polynomial(d, degree, 5, false);
            Ok(djokovic_check(&steps, &poly)?.holds)
        })
        .collect();
    ok &= record("djokovic_identity", djokovic_runs);

    let kernel_runs = (0..n)
        .map(|_| {
            let h = LatticeVector::new(vec![s.nonzero_int(3)]);
            let m = s.int(1, 4) as u32;
            let big_n = s.int(i64::from(m) - 1, 8) as u32;
            let a = crate::operator::operator_matrix(&h, &ModuleBasis::polynomial(1, big_n))?;
            let ker = SubspaceBasis::new(big_n as usize + 1, a.pow(m)?.nullspace())?;
            Ok(ker == SubspaceBasis::coordinate(big_n as usize + 1, 0..m as usize))
        })
        .collect();
    ok &= record("kernel_count", kernel_runs);

    let chain_runs = (0..n)
        .map(|_| {
            let size = s.int(1, 6) as usize;
            let lambda = s.nonzero_scalar(4, false);
            let a = s.chain_matrix(size, lambda, 4);
            let m = s.int(1, 5) as u32;
            Ok(chain_check(&a, m)?.holds)
        })
        .collect();
    ok &= record("chain_shape", chain_runs);

    let closure_runs = (0..n)
        .map(|_| {
            let m = s.int(2, 4) as u32;
            let inst = s.closure_instance(8, 3, m);
            let w = diamond_closure(&inst.operators, &inst.subspace, m)?;
            let boxed = box_closure(&inst.operators[0], &inst.subspace, m)?;
            let orbit = orbit_closure(&inst.operators[0], &inst.subspace)?;
            Ok(w.contains_subspace(&inst.subspace)? && boxed == orbit)
        })
        .collect();
    ok &= record("closure_lemmas", closure_runs);

    let reconstruct_runs = (0..n)
        .map(|_| {
            let d = s.int(1, 3) as usize;
            let m = s.int(1, 3) as u32;
            let poly = s.box_polynomial(d, m - 1, 5, true);
            let corner = LatticeVector::new(vec![i64::from(m); d]);
            let t = SampleTable::sample(&poly, LatticeVector::zero(d), corner)?;
            Ok(reconstruct_polynomial(&t, m)? == poly)
        })
        .collect();
    ok &= record("reconstruct_round_trip", reconstruct_runs);

    let table_runs = (0..n)
        .map(|_| {
            let d = s.int(1, 2) as usize;
            let lambda: Vec<Scalar> = (0..d).map(|_| s.nonzero_scalar(3, true)).collect();
            let f = ExpPolynomial::exp_monomial(lambda, s.polynomial(d, 2, 3, true))?
                .add(&s.polynomial(d, 3, 3, false).into())?;
            let h = s.lattice_vector(d, 2);
            let lo = LatticeVector::new(vec![-3; d]);
            let hi = LatticeVector::new(vec![3; d]);
            let t = SampleTable::sample(&f, lo, hi)?;
            let lhs = match t.delta(&h) {
                Ok(x) => x,
                Err(Error::EmptyBox) => return Ok(true),
                Err(e) => return Err(e),
            };
            let (a, b) = (lhs.lower().clone(), lhs.upper().clone());
            Ok(lhs == SampleTable::sample(&f.delta(&h)?, a, b)?)
        })
        .collect();
    ok &= record("table_delta_consistency", table_runs);

    Ok(Response::verdict(json!({"seed": p.seed, "cases": p.cases, "results": results, "ok": ok}), ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(command: Command, params: Value) -> Response {
        dispatch(&CommandRequest::new(command, params))
    }

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
        assert_eq!(Command::LatticeCheck.name(), "lattice-check");
        assert!("frobnicate".parse::<Command>().is_err());
    }

    #[test]
    fn request_round_trip() {
        let r = CommandRequest::new(Command::Gcd, json!({"a": 4, "b": "6"}));
        assert_eq!(CommandRequest::parse(&r.render()).unwrap(), r);
        let bare = CommandRequest::parse(r#"{"command":"self-test"}"#).unwrap();
        assert_eq!(bare.params, json!({}));
    }

    #[test]
    fn lattice_check_codes() {
        let r = req(Command::LatticeCheck, json!({"steps": [[2], [3]]}));
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.body["generates"], json!(true));
        let r = req(Command::LatticeCheck, json!({"steps": [[1, 1], [1, -1]]}));
        assert_eq!(r.exit_code, 1);
        assert_eq!(r.body["invariant_factors"], json!(["1", "2"]));
    }

    #[test]
    fn verify_failure_has_witness() {
        let f = json!({"dim": 1, "terms": [{"alpha": [3], "coeff": "1"}]});
        let r = req(Command::Verify, json!({"f": f, "steps": [[1]], "m": 3}));
        assert_eq!(r.exit_code, 1);
        assert_eq!(r.body["ok"], json!(false));
        assert_eq!(r.body["witness"]["value"], json!("6"));
    }

    #[test]
    fn invalid_input_is_exit_two() {
        let r = req(Command::Gcd, json!({"a": 0, "b": 0}));
        assert_eq!(r.exit_code, 2);
        assert_eq!(r.body["error"]["kind"], json!("invalid_input"));
        let r = req(Command::Solve, json!({"steps": []}));
        assert_eq!(r.exit_code, 2);
        assert_eq!(dispatch_str("{not json").exit_code, 2);
    }

    #[test]
    fn function_shape_detection() {
        let exp = json!({"dim": 1, "terms": [{"lambda": ["2"], "alpha": [0], "coeff": "1"}]});
        assert!(matches!(serde_json::from_value::<Function>(exp).unwrap(), Function::Exp(_)));
        let table = json!({"lower": [0], "upper": [0], "values": [[[0], "1"]]});
        assert!(matches!(serde_json::from_value::<Function>(table).unwrap(), Function::Table(_)));
    }

    #[test]
    fn self_test_is_reproducible() {
        let a = req(Command::SelfTest, json!({"seed": 5, "cases": 3}));
        let b = req(Command::SelfTest, json!({"seed": 5, "cases": 3}));
        assert_eq!(a, b);
        assert_eq!(a.exit_code, 0, "{}", a.render(true));
    }
}
