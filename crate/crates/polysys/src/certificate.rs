//! Feasibility witnesses and infeasibility certificates, and their checker.
//!
//! Every infeasibility claim carries a [`Derivation`], so checking never
//! searches: a unit claim replays the derivation down to a nonzero constant,
//! a real-branch claim replays it down to the product polynomial and then
//! checks one sub-certificate per factor.

use serde_json::{json, Value};

use iwc_core::matrix::scalar_from_json;
use iwc_core::{FieldMode, Scalar};

use crate::error::PolyError;
use crate::groebner::{buchberger_traced, Derivation, GbOptions, GroebnerBasis};
use crate::ideal::{poly_from_json, poly_to_json, Ideal, TermJson};
use crate::poly::{MultiPoly, Var};

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

/// One factor of a real-branch product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    /// Vanishes exactly where `q` does.
    Plain(MultiPoly),
    /// `Σ s²`, which over ℝ vanishes exactly where every `s` does.
    SumOfSquares(Vec<MultiPoly>),
}

impl Factor {
    pub fn value(&self, mode: FieldMode, nvars: usize) -> MultiPoly {
        match self {
            Factor::Plain(q) => q.clone(),
            Factor::SumOfSquares(s) => s.iter().fold(MultiPoly::zero(mode, nvars), |acc, x| &acc + &(x * x)),
        }
    }

    /// Generators of the branch where this factor vanishes.
    pub fn zero_set(&self) -> Vec<MultiPoly> {
        match self {
            Factor::Plain(q) => vec![q.clone()],
            Factor::SumOfSquares(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Factor::Plain(q) => json!({"kind": "plain", "poly": poly_to_json(q)}),
            Factor::SumOfSquares(s) => {
                json!({"kind": "sum-of-squares", "polys": s.iter().map(poly_to_json).collect::<Vec<_>>()})
            }
        }
    }

    fn from_json(v: &Value, mode: FieldMode, nvars: usize) -> Result<Factor, PolyError> {
        let poly = |x: &Value| -> Result<MultiPoly, PolyError> {
            let terms: Vec<TermJson> = serde_json::from_value(x.clone())?;
            poly_from_json(mode, nvars, &terms)
        };
        match v["kind"].as_str() {
            Some("plain") => Ok(Factor::Plain(poly(&v["poly"])?)),
            Some("sum-of-squares") => {
                let arr = v["polys"].as_array().ok_or_else(|| PolyError::Format("factor without polys".into()))?;
                Ok(Factor::SumOfSquares(arr.iter().map(poly).collect::<Result<_, _>>()?))
            }
            other => Err(PolyError::Format(format!("unknown factor kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBranch {
    pub factors: Vec<Factor>,
    /// Replays to `Π factor values` from the ideal's generators.
    pub membership: Derivation,
    /// Certificate for `I + ⟨zero set of factor k⟩`, one per factor.
    pub branches: Vec<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// A point of the variety, one value per variable.
    FeasibleWitness { point: Vec<Scalar> },
    /// Reduced Gröbner basis containing a unit, plus a derivation of the unit.
    ComplexInfeasible { basis: GroebnerBasis, derivation: Derivation },
    RealBranch(Box<RealBranch>),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::FeasibleWitness { .. } => "feasible-witness",
            Certificate::ComplexInfeasible { .. } => "complex-infeasible",
            Certificate::RealBranch(_) => "real-branch",
        }
    }

    pub fn is_infeasibility(&self) -> bool {
        !matches!(self, Certificate::FeasibleWitness { .. })
    }

    /// Total derivation size of the certificate tree, in step terms.
    pub fn size(&self) -> usize {
        match self {
            Certificate::FeasibleWitness { point } => point.len(),
            Certificate::ComplexInfeasible { derivation, .. } => derivation.term_count(),
            Certificate::RealBranch(rb) => {
                rb.membership.term_count() + rb.branches.iter().map(Certificate::size).sum::<usize>()
            }
        }
    }

    pub fn to_json(&self, vars: &[Var]) -> Value {
        let body = match self {
            Certificate::FeasibleWitness { point } => json!({
                "assignment": vars.iter().zip(point).map(|(v, x)| json!([v, x])).collect::<Vec<_>>(),
            }),
            Certificate::ComplexInfeasible { basis, derivation } => json!({
                "basis": basis.to_json(),
                "derivation": derivation.to_json(),
            }),
            Certificate::RealBranch(rb) => json!({
                "factors": rb.factors.iter().map(Factor::to_json).collect::<Vec<_>>(),
                "membership": rb.membership.to_json(),
                "branches": rb.branches.iter().map(|b| b.to_json(vars)).collect::<Vec<_>>(),
            }),
        };
        let mut v = json!({"schema_version": CERTIFICATE_SCHEMA_VERSION, "kind": self.kind()});
        if let (Value::Object(out), Value::Object(b)) = (&mut v, body) {
            out.extend(b);
        }
        v
    }

    pub fn from_json(v: &Value, ideal: &Ideal) -> Result<Certificate, PolyError> {
        let (mode, n) = (ideal.mode, ideal.nvars());
        match v["kind"].as_str() {
            Some("feasible-witness") => {
                let arr =
                    v["assignment"].as_array().ok_or_else(|| PolyError::Format("witness without assignment".into()))?;
                let mut point = vec![None; n];
                for pair in arr {
                    let var: Var = serde_json::from_value(pair[0].clone())?;
                    let idx = ideal
                        .var_index(&var)
                        .ok_or_else(|| PolyError::VariableMismatch(format!("unknown variable {var}")))?;
                    point[idx] = Some(scalar_from_json(mode, &pair[1])?);
                }
                let point = point
                    .into_iter()
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| PolyError::Format("witness does not assign every variable".into()))?;
                Ok(Certificate::FeasibleWitness { point })
            }
            Some("complex-infeasible") => Ok(Certificate::ComplexInfeasible {
                basis: GroebnerBasis::from_json(&v["basis"])?,
                derivation: Derivation::from_json(&v["derivation"], mode)?,
            }),
            Some("real-branch") => {
                let factors = v["factors"]
                    .as_array()
                    .ok_or_else(|| PolyError::Format("real branch without factors".into()))?
                    .iter()
                    .map(|f| Factor::from_json(f, mode, n))
                    .collect::<Result<Vec<_>, _>>()?;
                let branch_vals =
                    v["branches"].as_array().ok_or_else(|| PolyError::Format("real branch without branches".into()))?;
                if branch_vals.len() != factors.len() {
                    return Err(PolyError::Format("one branch per factor expected".into()));
                }
                let mut branches = Vec::new();
                for (f, b) in factors.iter().zip(branch_vals) {
                    branches.push(Certificate::from_json(b, &ideal.extended(f.zero_set()))?);
                }
                Ok(Certificate::RealBranch(Box::new(RealBranch {
                    factors,
                    membership: Derivation::from_json(&v["membership"], mode)?,
                    branches,
                })))
            }
            other => Err(PolyError::Format(format!("unknown certificate kind {other:?}"))),
        }
    }
}

/// Re-verifies `c` against `ideal` without any search.
pub fn check_certificate(ideal: &Ideal, c: &Certificate) -> bool {
    match c {
        Certificate::FeasibleWitness { point } => ideal.vanishes_at(point),
        Certificate::ComplexInfeasible { basis, derivation } => {
            if basis.vars != ideal.vars || basis.order != ideal.order || !basis.contains_unit() {
                return false;
            }
            let one = MultiPoly::from_int(ideal.mode, ideal.nvars(), 1);
            if !basis.reduce(&one).is_zero() || !basis.is_groebner() {
                return false;
            }
            matches!(derivation.replay(&ideal.gens, ideal.order), Ok(p) if p.is_unit())
        }
        Certificate::RealBranch(rb) => {
            if rb.factors.is_empty() || rb.factors.len() != rb.branches.len() {
                return false;
            }
            // Sums of squares only separate branches over an ordered field.
            if ideal.mode != FieldMode::Rational || !ideal.is_rational() {
                return false;
            }
            for f in &rb.factors {
                let polys = f.zero_set();
                if polys.iter().any(|p| p.nvars() != ideal.nvars() || p.terms().any(|(_, c)| !c.is_real())) {
                    return false;
                }
            }
            let (mode, n) = (ideal.mode, ideal.nvars());
            let product =
                rb.factors.iter().fold(MultiPoly::from_int(mode, n, 1), |acc, f| &acc * &f.value(mode, n));
            if !matches!(rb.membership.replay(&ideal.gens, ideal.order), Ok(p) if p == product) {
                return false;
            }
            rb.factors.iter().zip(&rb.branches).all(|(f, b)| {
                b.is_infeasibility() && check_certificate(&ideal.extended(f.zero_set()), b)
            })
        }
    }
}

/// Outcome of a complex consistency check.
#[derive(Clone, Debug)]
pub enum ComplexOutcome {
    Infeasible(Certificate),
    /// Complete reduced basis without a unit: the system has complex solutions.
    Consistent(GroebnerBasis),
}

pub fn certify_complex(ideal: &Ideal, opts: &GbOptions) -> Result<ComplexOutcome, PolyError> {
    let run = buchberger_traced(ideal, opts)?;
    Ok(match run.unit_derivation() {
        Some(derivation) => ComplexOutcome::Infeasible(Certificate::ComplexInfeasible {
            basis: run.reduced_basis(),
            derivation,
        }),
        None => ComplexOutcome::Consistent(run.reduced_basis()),
    })
}

/// A derivation of `p` from the generators, or `None` if `p ∉ I`.
pub fn prove_membership(ideal: &Ideal, p: &MultiPoly, opts: &GbOptions) -> Result<Option<Derivation>, PolyError> {
    let mut o = opts.clone();
    o.stop_on_unit = true;
    let run = buchberger_traced(ideal, &o)?;
    if let Some(mut d) = run.unit_derivation() {
        // a unit u ∈ I gives p = (p/u)·u
        let u = d.replay(&ideal.gens, ideal.order)?;
        let inv = u.terms().next().map(|(_, c)| c.inv()).transpose().map_err(|e| PolyError::Core(e.into()))?;
        let inv = inv.expect("unit is a nonzero constant");
        let last = d.inputs + d.steps.len() - 1;
        let step = p
            .terms()
            .map(|(m, c)| crate::groebner::StepTerm { poly: last, monomial: m.clone(), coeff: c * &inv })
            .collect();
        d.steps.push(step);
        return Ok(Some(d));
    }
    Ok(run.membership(p))
}

/// One-level real-branch certificates of the shape `q·Σ_{r∈R} (a^r_c)²` or
/// `Σ_{r∈R} (a^r_c)²`, with `q` a non-`A` variable (virtual unknown) and `R`
/// all rows of `A` or all rows but one. Meant for complex-feasible systems
/// from sources with a compact part, where a column of `A` must vanish.
pub fn search_real_branch(ideal: &Ideal, opts: &GbOptions) -> Result<Option<Certificate>, PolyError> {
    if ideal.mode != FieldMode::Rational || !ideal.is_rational() {
        return Ok(None);
    }
    let n = (1..=8).take_while(|&k| ideal.var_index(&Var::A(k, 1)).is_some()).count();
    if n == 0 {
        return Ok(None);
    }
    let run = buchberger_traced(ideal, opts)?;
    if run.has_unit() {
        return Ok(None);
    }
    let (mode, nv) = (ideal.mode, ideal.nvars());
    let mut row_sets: Vec<Vec<usize>> = vec![(1..=n).collect()];
    if n > 2 {
        row_sets.extend((1..=n).map(|skip| (1..=n).filter(|&r| r != skip).collect()));
    }
    let qs: Vec<Option<MultiPoly>> = std::iter::once(None)
        .chain(
            ideal
                .vars
                .iter()
                .enumerate()
                .filter(|(_, v)| matches!(v, Var::X(_)))
                .map(|(k, _)| Some(MultiPoly::var(mode, nv, k))),
        )
        .collect();
    for rows in &row_sets {
        for c in 1..=n {
            let col: Vec<MultiPoly> =
                rows.iter().map(|&r| ideal.var_poly(&Var::A(r, c)).expect("A variable")).collect();
            let sos = Factor::SumOfSquares(col);
            for q in &qs {
                let factors = match q {
                    Some(q) => vec![Factor::Plain(q.clone()), sos.clone()],
                    None => vec![sos.clone()],
                };
                let product = factors.iter().fold(MultiPoly::from_int(mode, nv, 1), |acc, f| &acc * &f.value(mode, nv));
                let Some(membership) = run.membership(&product) else { continue };
                let mut branches = Vec::new();
                for f in &factors {
                    match certify_complex(&ideal.extended(f.zero_set()), opts)? {
                        ComplexOutcome::Infeasible(c) => branches.push(c),
                        ComplexOutcome::Consistent(_) => break,
                    }
                }
                if branches.len() == factors.len() {
                    return Ok(Some(Certificate::RealBranch(Box::new(RealBranch { factors, membership, branches }))));
                }
            }
        }
    }
    Ok(None)
}

/// Factors of one real-branch step, and how to treat each branch.
#[derive(Clone, Debug)]
pub struct BranchPlan {
    pub factors: Vec<Factor>,
    /// `None` certifies the branch over ℂ, `Some` splits it again.
    pub branches: Vec<Option<BranchPlan>>,
}

impl BranchPlan {
    pub fn new(factors: Vec<Factor>) -> Self {
        let branches = vec![None; factors.len()];
        BranchPlan { factors, branches }
    }

    pub fn with_branch(mut self, k: usize, plan: BranchPlan) -> Self {
        self.branches[k] = Some(plan);
        self
    }
}

/// Why a real-branch attempt did not produce a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchFailure {
    /// The product is not in the ideal (complete basis computed).
    NotMember { depth: usize },
    /// A branch ideal has complex solutions (complete basis computed).
    BranchConsistent { depth: usize, factor: usize },
}

pub fn certify_real_branch(
    ideal: &Ideal,
    plan: &BranchPlan,
    opts: &GbOptions,
) -> Result<Result<Certificate, BranchFailure>, PolyError> {
    certify_branch_at(ideal, plan, opts, 0)
}

fn certify_branch_at(
    ideal: &Ideal,
    plan: &BranchPlan,
    opts: &GbOptions,
    depth: usize,
) -> Result<Result<Certificate, BranchFailure>, PolyError> {
    let (mode, n) = (ideal.mode, ideal.nvars());
    let product = plan.factors.iter().fold(MultiPoly::from_int(mode, n, 1), |acc, f| &acc * &f.value(mode, n));
    let Some(membership) = prove_membership(ideal, &product, opts)? else {
        return Ok(Err(BranchFailure::NotMember { depth }));
    };
    let mut branches = Vec::new();
    for (k, (f, sub)) in plan.factors.iter().zip(&plan.branches).enumerate() {
        let branch_ideal = ideal.extended(f.zero_set());
        let cert = match sub {
            Some(p) => match certify_branch_at(&branch_ideal, p, opts, depth + 1)? {
                Ok(c) => c,
                Err(e) => return Ok(Err(e)),
            },
            None => match certify_complex(&branch_ideal, opts)? {
                ComplexOutcome::Infeasible(c) => c,
                ComplexOutcome::Consistent(_) => {
                    return Ok(Err(BranchFailure::BranchConsistent { depth, factor: k }))
                }
            },
        };
        branches.push(cert);
    }
    Ok(Ok(Certificate::RealBranch(Box::new(RealBranch { factors: plan.factors.clone(), membership, branches }))))
}
