//! Contraction limits: the general ε-matrix path and the diagonal IW rule.

use serde::Serialize;
use serde_json::Value;

use crate::algebra::{BracketEntry, StructureTensor};
use crate::catalog::{catalog_get_in, identify, match_catalog};
use crate::eps::{EpsMatrix, EpsRational, Order};
use crate::error::{ArithError, Error, Result};
use crate::fingerprint::{fingerprint, Fingerprint};
use crate::matrix::Matrix;
use crate::signature::Signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// The limit is abelian.
    Trivial,
    /// The limit has the source's fingerprint.
    Improper,
    ProperNontrivial,
}

#[derive(Clone, Debug)]
pub struct ContractionResult {
    pub tensor: StructureTensor,
    pub classification: Classification,
    /// Catalog name with the same fingerprint, if any.
    pub matched: Option<&'static str>,
}

/// `U_ε = A · diag(ε^α) · P`.
#[derive(Clone, Debug)]
pub struct IWSpec {
    pub a: Matrix,
    pub sig: Signature,
    pub p: Matrix,
}

impl IWSpec {
    pub fn new(a: Matrix, sig: Signature) -> Self {
        let p = Matrix::identity(a.mode(), a.rows());
        IWSpec { a, sig, p }
    }

    pub fn with_p(mut self, p: Matrix) -> Self {
        self.p = p;
        self
    }

    pub fn eps_matrix(&self) -> Result<EpsMatrix> {
        let n = self.a.rows();
        if !self.a.is_square() || !self.p.is_square() || self.p.rows() != n || self.sig.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{}, P is {}x{}, signature has {} entries",
                self.a.rows(),
                self.a.cols(),
                self.p.rows(),
                self.p.cols(),
                self.sig.len()
            )));
        }
        for m in [&self.a, &self.p] {
            if m.det()?.is_zero() {
                return Err(ArithError::Singular.into());
            }
        }
        let w = EpsMatrix::diag_powers(self.a.mode(), self.sig.exponents());
        Ok(EpsMatrix::from_constant(&self.a).mul(&w).mul(&EpsMatrix::from_constant(&self.p)))
    }
}

fn classify(source: &StructureTensor, limit: &StructureTensor) -> Classification {
    if limit.is_abelian() {
        Classification::Trivial
    } else if fingerprint(source) == fingerprint(limit) {
        Classification::Improper
    } else {
        Classification::ProperNontrivial
    }
}

fn finish(source: &StructureTensor, limit: StructureTensor) -> Result<ContractionResult> {
    let violations = limit.validate();
    if let Some(v) = violations.first() {
        return Err(Error::InvalidAlgebra(format!("contraction limit is not a Lie algebra: {v}")));
    }
    let classification = classify(source, &limit);
    let matched = identify(&limit);
    Ok(ContractionResult { tensor: limit, classification, matched })
}

/// Diagonal rule: `c₀_{ij}^k = c_{ij}^k` when `α_i + α_j = α_k`, zero when
/// the sum exceeds `α_k`, and no limit when it falls short for a nonzero constant.
pub fn iw_limit_diagonal(t: &StructureTensor, sig: &Signature) -> Result<ContractionResult> {
    let n = t.dim();
    if sig.len() != n {
        return Err(Error::DimensionMismatch(format!("signature of length {} for dimension {n}", sig.len())));
    }
    let a = sig.exponents();
    let mut out = StructureTensor::abelian(t.mode(), n);
    let mut entries: Vec<_> = t.nonzero().filter(|(i, j, _, _)| i < j).collect();
    entries.sort_by_key(|&(i, j, k, _)| (i, j, k));
    for (i, j, k, c) in entries {
        let s = a[i] + a[j] - a[k];
        if s < 0 {
            return Err(Error::NoLimit { i: i + 1, j: j + 1, k: k + 1 });
        }
        if s == 0 {
            out.set(i, j, k, c.clone());
            out.set(j, i, k, -c);
        }
    }
    finish(t, out)
}

/// Transformed constants `U⁻¹[U e_a, U e_b]` as exact ε-rational functions, for `a < b`.
pub fn transformed_constants(t: &StructureTensor, u: &EpsMatrix) -> Result<Vec<(usize, usize, Vec<EpsRational>)>> {
    let n = t.dim();
    if u.dim() != n {
        return Err(Error::DimensionMismatch(format!("{0}x{0} matrix for dimension {n}", u.dim())));
    }
    let uinv = u.inverse()?;
    let mode = t.mode();
    let consts: Vec<(usize, usize, usize, EpsRational)> =
        t.nonzero().map(|(i, j, k, c)| (i, j, k, EpsRational::constant(c.clone()))).collect();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let mut w = vec![EpsRational::zero(mode); n];
            for (i, j, k, c) in &consts {
                let (x, y) = (u.get(*i, a), u.get(*j, b));
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                w[*k] = &w[*k] + &(&(x * y) * c);
            }
            let mut cprime = Vec::with_capacity(n);
            for k in 0..n {
                let mut acc = EpsRational::zero(mode);
                for (m, wm) in w.iter().enumerate() {
                    if !wm.is_zero() && !uinv.get(k, m).is_zero() {
                        acc = &acc + &(uinv.get(k, m) * wm);
                    }
                }
                cprime.push(acc);
            }
            out.push((a, b, cprime));
        }
    }
    Ok(out)
}

/// The limit of the transformed structure constants as ε → +0.
pub fn contract_with_matrix(t: &StructureTensor, u: &EpsMatrix) -> Result<ContractionResult> {
    if u.mode() != t.mode() {
        return Err(ArithError::FieldModeMismatch.into());
    }
    let n = t.dim();
    let mut out = StructureTensor::abelian(t.mode(), n);
    for (a, b, cs) in transformed_constants(t, u)? {
        for (k, f) in cs.into_iter().enumerate() {
            let Some(v) = f.limit_at_zero() else {
                return Err(Error::NoLimit { i: a + 1, j: b + 1, k: k + 1 });
            };
            out.set(b, a, k, -&v);
            out.set(a, b, k, v);
        }
    }
    finish(t, out)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub source: String,
    pub expected: String,
    pub field: String,
    pub a: Value,
    pub p: Value,
    pub signature: Signature,
    pub normalized_signature: Signature,
    pub limit_exists: bool,
    /// 1-based `(i, j, k)` of the first divergent constant.
    pub divergent_entry: Option<(usize, usize, usize)>,
    pub limit: Option<Vec<BracketEntry>>,
    pub classification: Option<Classification>,
    pub matched: Option<String>,
    /// Whether the limit equals the catalog constants of `expected` verbatim.
    pub exact_match: bool,
    pub limit_fingerprint: Option<Fingerprint>,
    pub expected_fingerprint: Fingerprint,
    pub success: bool,
}

/// Builds `U_ε = A W_ε P`, takes the limit and compares it with the catalog
/// entry `expected` over the source's field.
pub fn verify_iw(source_name: &str, t: &StructureTensor, spec: &IWSpec, expected: &str) -> Result<VerificationReport> {
    let target = catalog_get_in(expected, t.mode())?;
    let u = spec.eps_matrix()?;
    let mut report = VerificationReport {
        schema_version: 1,
        source: source_name.to_string(),
        expected: expected.to_string(),
        field: t.mode().tag().to_string(),
        a: spec.a.to_json(),
        p: spec.p.to_json(),
        signature: spec.sig.clone(),
        normalized_signature: spec.sig.normalized(),
        limit_exists: false,
        divergent_entry: None,
        limit: None,
        classification: None,
        matched: None,
        exact_match: false,
        limit_fingerprint: None,
        expected_fingerprint: fingerprint(&target.tensor),
        success: false,
    };
    match contract_with_matrix(t, &u) {
        Ok(res) => {
            report.limit_exists = true;
            report.limit = Some(res.tensor.brackets());
            report.classification = Some(res.classification);
            report.exact_match = res.tensor == target.tensor;
            report.limit_fingerprint = Some(fingerprint(&res.tensor));
            report.matched = match match_catalog(&res.tensor, &[expected]) {
                Ok(name) => Some(name.to_string()),
                Err(Error::NoMatch) => res.matched.map(str::to_string),
                Err(e) => return Err(e),
            };
            report.success = report.matched.as_deref() == Some(expected);
        }
        Err(Error::NoLimit { i, j, k }) => report.divergent_entry = Some((i, j, k)),
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// `ord₀` of every transformed constant, for diagnostics.
pub fn order_table(t: &StructureTensor, u: &EpsMatrix) -> Result<Vec<((usize, usize, usize), Order)>> {
    let mut out = Vec::new();
    for (a, b, cs) in transformed_constants(t, u)? {
        for (k, f) in cs.iter().enumerate() {
            out.push(((a + 1, b + 1, k + 1), f.ord_at_zero()));
        }
    }
    Ok(out)
}
