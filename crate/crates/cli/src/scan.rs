//! Minimality scans: every normalized signature in a box is pruned by
//! derivations, searched for a witness, or certified infeasible per
//! admissible arrangement.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use iwc_core::{
    admissible_arrangements, catalog_tensor_in, enumerate_signatures, FieldMode, Matrix, Signature, StructureTensor,
};
use iwc_polysys::{
    certify_complex, certify_real_branch, check_certificate, generate_iw_system, load_fixture, search_real_branch,
    Certificate, ComplexOutcome, Expectation, Fixture, GbOptions, Ideal, InverseEncoding, Nonsingularity,
    PolyError, SystemOptions, FIXTURE_IDS,
};

use crate::error::CliError;
use crate::search::{find_matrix, SearchOptions, SearchOutcome, Witness};

pub const SCAN_SCHEMA_VERSION: u32 = 1;

/// A literature statement about the absence of simple IW-contractions,
/// cross-checked by the scan rather than trusted.
#[derive(Clone, Debug, Serialize)]
pub struct KnownFact {
    pub source: &'static str,
    pub target: &'static str,
    /// `None` when the statement holds over both fields.
    pub field: Option<&'static str>,
    pub statement: &'static str,
    pub citation: &'static str,
}

pub const KNOWN_FACTS: &[KnownFact] = &[
    KnownFact {
        source: "2A2.1",
        target: "A4.1",
        field: None,
        statement: "not equivalent to a simple IW-contraction",
        citation: "Huddleston (1978)",
    },
    KnownFact {
        source: "2A2.1",
        target: "A1+A3.2",
        field: None,
        statement: "not equivalent to a simple IW-contraction",
        citation: "Huddleston (1978)",
    },
    KnownFact {
        source: "so3+A1",
        target: "A4.1",
        field: Some("Q"),
        statement: "not equivalent to a simple IW-contraction over the reals",
        citation: "Huddleston (1978)",
    },
    KnownFact {
        source: "so3",
        target: "heisenberg3",
        field: Some("Q"),
        statement: "the only real three-dimensional contraction not equivalent to a simple IW-contraction",
        citation: "Weimar-Woods (1991)",
    },
];

/// The fact about `source → target` in `mode`, matched on structure constants.
pub fn known_fact(source: &StructureTensor, target: &StructureTensor, mode: FieldMode) -> Option<&'static KnownFact> {
    KNOWN_FACTS.iter().find(|f| {
        f.field.is_none_or(|m| m == mode.tag())
            && same_tensor(f.source, source)
            && same_tensor(f.target, target)
    })
}

fn same_tensor(name: &str, t: &StructureTensor) -> bool {
    let Ok(fixed) = catalog_tensor_in(name, FieldMode::Rational) else { return false };
    t.with_mode(FieldMode::Rational).is_ok_and(|r| r == fixed)
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub search: SearchOptions,
    /// Budget and deadline for each generated system.
    pub gb: GbOptions,
    /// Over `Q`, also look for real-branch certificates.
    pub real_branch: bool,
    pub parallel: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            search: SearchOptions::default(),
            gb: GbOptions::default().with_timeout(std::time::Duration::from_secs(20)),
            real_branch: true,
            parallel: true,
        }
    }
}

/// Where an infeasibility certificate came from.
#[derive(Clone, Debug)]
pub enum CertSource {
    Generated,
    /// A hand-reduced subsystem, verified to lie in the generated system.
    Fixture(&'static str),
}

#[derive(Clone, Debug)]
pub enum ArrangementStatus {
    Infeasible { from: CertSource, certificate: Box<Certificate>, ideal: Box<Ideal> },
    /// Complete basis without a unit, and no real-branch certificate.
    ComplexFeasible,
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct ArrangementResult {
    pub arrangement: Signature,
    pub status: ArrangementStatus,
    /// Outcome on the generated system when a fixture had to stand in.
    pub generated_note: Option<String>,
}

#[derive(Clone, Debug)]
pub enum SignatureStatus {
    NotDerivationAdmissible,
    Feasible(Box<Witness>),
    Infeasible(Vec<ArrangementResult>),
    Inconclusive(Vec<ArrangementResult>),
}

impl SignatureStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            SignatureStatus::NotDerivationAdmissible => "not-derivation-admissible",
            SignatureStatus::Feasible(_) => "feasible",
            SignatureStatus::Infeasible(_) => "infeasible",
            SignatureStatus::Inconclusive(_) => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanEntry {
    pub signature: Signature,
    pub status: SignatureStatus,
    pub fact: Option<&'static KnownFact>,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub source: String,
    pub target: String,
    pub mode: FieldMode,
    pub max_exp: i64,
    pub seed: u64,
    pub entries: Vec<ScanEntry>,
    pub minimal_feasible: Option<Signature>,
    /// Simple signatures found feasible although a known fact excludes them.
    pub disagreements: Vec<Signature>,
}

impl ScanReport {
    pub fn entry(&self, sig: &[i64]) -> Option<&ScanEntry> {
        self.entries.iter().find(|e| e.signature.0 == sig)
    }

    pub fn feasible(&self) -> Vec<&Signature> {
        self.entries
            .iter()
            .filter(|e| matches!(e.status, SignatureStatus::Feasible(_)))
            .map(|e| &e.signature)
            .collect()
    }

    pub fn inconclusive(&self) -> Vec<&Signature> {
        self.entries
            .iter()
            .filter(|e| matches!(e.status, SignatureStatus::Inconclusive(_)))
            .map(|e| &e.signature)
            .collect()
    }

    /// Every status line re-checked: witnesses through the contraction
    /// engine, certificates through the certificate checker.
    pub fn recheck(&self) -> bool {
        self.entries.iter().all(|e| match &e.status {
            SignatureStatus::Feasible(w) => w.report.success && w.report.exact_match,
            SignatureStatus::Infeasible(arrs) | SignatureStatus::Inconclusive(arrs) => arrs.iter().all(|a| match &a.status {
                ArrangementStatus::Infeasible { certificate, ideal, .. } => check_certificate(ideal, certificate),
                _ => true,
            }),
            SignatureStatus::NotDerivationAdmissible => true,
        })
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut v = json!({"signature": e.signature, "status": e.status.tag()});
                match &e.status {
                    SignatureStatus::Feasible(w) => v["witness"] = w.to_json(),
                    SignatureStatus::Infeasible(arrs) | SignatureStatus::Inconclusive(arrs) => {
                        v["arrangements"] = arrs.iter().map(arrangement_json).collect();
                    }
                    SignatureStatus::NotDerivationAdmissible => {}
                }
                if let Some(f) = e.fact {
                    v["known_fact"] = json!(f);
                }
                v
            })
            .collect();
        json!({
            "schema_version": SCAN_SCHEMA_VERSION,
            "source": self.source,
            "target": self.target,
            "field": self.mode.tag(),
            "max_exp": self.max_exp,
            "seed": self.seed,
            "entries": entries,
            "minimal_feasible": self.minimal_feasible,
            "disagreements": self.disagreements,
        })
    }

    pub fn format(&self) -> String {
        let mut out = format!(
            "scan {} -> {} over {} with exponents up to {}\n",
            self.source,
            self.target,
            self.mode.tag(),
            self.max_exp
        );
        if let Some(f) = self.entries.iter().find_map(|e| e.fact) {
            out.push_str(&format!("known for simple signatures: {} ({})\n", f.statement, f.citation));
        }
        for e in &self.entries {
            let sig = format_sig(&e.signature);
            let detail = match &e.status {
                SignatureStatus::NotDerivationAdmissible => String::new(),
                SignatureStatus::Feasible(w) => {
                    format!(" as {} with A = {}", format_sig(&w.signature), format_matrix(&w.matrix))
                }
                SignatureStatus::Infeasible(arrs) | SignatureStatus::Inconclusive(arrs) => {
                    let parts: Vec<String> = arrs.iter().map(format_arrangement).collect();
                    format!(": {}", parts.join("; "))
                }
            };
            out.push_str(&format!("  {sig:<14} {}{detail}\n", e.status.tag()));
        }
        match &self.minimal_feasible {
            Some(s) => out.push_str(&format!("minimal feasible signature: {}\n", format_sig(s))),
            None => out.push_str("no feasible signature in range\n"),
        }
        for d in &self.disagreements {
            out.push_str(&format!("DISAGREEMENT: {} is feasible but a known fact excludes it\n", format_sig(d)));
        }
        out
    }
}

pub fn format_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn format_sig(s: &Signature) -> String {
    let parts: Vec<String> = s.0.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn arrangement_json(a: &ArrangementResult) -> Value {
    let mut v = json!({"arrangement": a.arrangement});
    match &a.status {
        ArrangementStatus::Infeasible { from, certificate, .. } => {
            v["status"] = json!("infeasible");
            v["certificate"] = json!(certificate.kind());
            v["certificate_size"] = json!(certificate.size());
            v["from"] = match from {
                CertSource::Generated => json!("generated"),
                CertSource::Fixture(id) => json!(format!("fixture {id}")),
            };
        }
        ArrangementStatus::ComplexFeasible => v["status"] = json!("complex-feasible"),
        ArrangementStatus::Inconclusive(r) => {
            v["status"] = json!("inconclusive");
            v["reason"] = json!(r);
        }
    }
    if let Some(n) = &a.generated_note {
        v["generated"] = json!(n);
    }
    v
}

fn format_arrangement(a: &ArrangementResult) -> String {
    let s = format_sig(&a.arrangement);
    let mut out = match &a.status {
        ArrangementStatus::Infeasible { from: CertSource::Generated, certificate, .. } => {
            format!("{s} {}", certificate.kind())
        }
        ArrangementStatus::Infeasible { from: CertSource::Fixture(id), certificate, .. } => {
            format!("{s} {} via fixture {id}", certificate.kind())
        }
        ArrangementStatus::ComplexFeasible => format!("{s} has complex solutions"),
        ArrangementStatus::Inconclusive(r) => format!("{s} inconclusive ({r})"),
    };
    if let Some(n) = &a.generated_note {
        out.push_str(&format!(" [generated system: {n}]"));
    }
    out
}

/// The fixture for `source → target` at exactly this arrangement.
fn matching_fixture(source: &StructureTensor, target: &StructureTensor, arr: &Signature) -> Option<Fixture> {
    FIXTURE_IDS.iter().filter_map(|id| load_fixture(id).ok()).find(|f| {
        f.signature == *arr
            && f.expectation != Expectation::Feasible
            && same_tensor(f.source, source)
            && same_tensor(f.target, target)
    })
}

/// Certificate for a fixture, if its expectation can be certified in `mode`.
pub fn certify_fixture(f: &Fixture, mode: FieldMode, gb: &GbOptions) -> Result<Option<Certificate>, PolyError> {
    match f.expectation {
        Expectation::ComplexInfeasible => Ok(match certify_complex(&f.ideal, gb)? {
            ComplexOutcome::Infeasible(c) => Some(c),
            ComplexOutcome::Consistent(_) => None,
        }),
        Expectation::RealInfeasible if mode == FieldMode::Rational => {
            let Some(plan) = f.real_branch_plan() else { return Ok(None) };
            Ok(certify_real_branch(&f.ideal, &plan, gb)?.ok())
        }
        _ => Ok(None),
    }
}

fn certify_arrangement(
    src: &StructureTensor,
    tgt: &StructureTensor,
    arr: &Signature,
    mode: FieldMode,
    opts: &ScanOptions,
) -> Result<ArrangementResult, CliError> {
    let sys = generate_iw_system(src, tgt, arr, SystemOptions::new(InverseEncoding::Cofactor, Nonsingularity::DetSlack))?;
    let ideal = sys.ideal;
    let generated = match certify_complex(&ideal, &opts.gb) {
        Ok(ComplexOutcome::Infeasible(c)) => Ok(Some(c)),
        Ok(ComplexOutcome::Consistent(_)) if mode == FieldMode::Rational && opts.real_branch => {
            match search_real_branch(&ideal, &opts.gb) {
                Ok(Some(c)) => Ok(Some(c)),
                Ok(None) => Err("complex solutions exist and no real-branch certificate was found".to_string()),
                Err(e) if e.is_inconclusive() => Err(e.to_string()),
                Err(e) => return Err(e.into()),
            }
        }
        Ok(ComplexOutcome::Consistent(_)) => Ok(None),
        Err(e) if e.is_inconclusive() => Err(e.to_string()),
        Err(e) => return Err(e.into()),
    };
    let arrangement = arr.clone();
    match generated {
        Ok(Some(c)) => {
            if !check_certificate(&ideal, &c) {
                return Err(CliError::Input(format!("certificate for {} failed its own check", format_sig(arr))));
            }
            Ok(ArrangementResult {
                arrangement,
                status: ArrangementStatus::Infeasible {
                    from: CertSource::Generated,
                    certificate: Box::new(c),
                    ideal: Box::new(ideal),
                },
                generated_note: None,
            })
        }
        Ok(None) => Ok(ArrangementResult { arrangement, status: ArrangementStatus::ComplexFeasible, generated_note: None }),
        Err(reason) => {
            if let Some(f) = matching_fixture(src, tgt, arr) {
                if f.containment(&opts.gb).is_ok_and(|c| c.holds()) {
                    if let Some(c) = certify_fixture(&f, mode, &opts.gb)? {
                        if check_certificate(&f.ideal, &c) {
                            return Ok(ArrangementResult {
                                arrangement,
                                status: ArrangementStatus::Infeasible {
                                    from: CertSource::Fixture(f.id),
                                    certificate: Box::new(c),
                                    ideal: Box::new(f.ideal),
                                },
                                generated_note: Some(reason),
                            });
                        }
                    }
                }
            }
            Ok(ArrangementResult { arrangement, status: ArrangementStatus::Inconclusive(reason), generated_note: None })
        }
    }
}

fn scan_signature(
    source: &str,
    target: &str,
    src: &StructureTensor,
    tgt: &StructureTensor,
    sig: &Signature,
    mode: FieldMode,
    opts: &ScanOptions,
) -> Result<ScanEntry, CliError> {
    let fact = if sig.is_simple() { known_fact(src, tgt, mode) } else { None };
    let arrs = admissible_arrangements(tgt, sig);
    if arrs.is_empty() {
        return Ok(ScanEntry { signature: sig.clone(), status: SignatureStatus::NotDerivationAdmissible, fact });
    }
    // per-signature seed, so parallel and sequential scans agree
    let seed = sig.0.iter().fold(opts.search.seed, |h, &x| h.wrapping_mul(31).wrapping_add(x as u64 + 1));
    let search = SearchOptions { seed, ..opts.search };
    if let SearchOutcome::Found(w) = find_matrix(source, target, sig, mode, &search)? {
        return Ok(ScanEntry { signature: sig.clone(), status: SignatureStatus::Feasible(w), fact });
    }
    let mut results = Vec::new();
    for arr in &arrs {
        results.push(certify_arrangement(src, tgt, arr, mode, opts)?);
    }
    let all = results.iter().all(|r| matches!(r.status, ArrangementStatus::Infeasible { .. }));
    let status = if all { SignatureStatus::Infeasible(results) } else { SignatureStatus::Inconclusive(results) };
    Ok(ScanEntry { signature: sig.clone(), status, fact })
}

pub fn minimality_scan(
    source: &str,
    target: &str,
    max_exp: i64,
    mode: FieldMode,
    opts: &ScanOptions,
) -> Result<ScanReport, CliError> {
    let src = catalog_tensor_in(source, mode)?;
    let tgt = catalog_tensor_in(target, mode)?;
    if src.dim() != tgt.dim() {
        return Err(CliError::Input(format!("{source} and {target} have different dimensions")));
    }
    let sigs = enumerate_signatures(src.dim(), max_exp);
    let run = |s: &Signature| scan_signature(source, target, &src, &tgt, s, mode, opts);
    let entries: Vec<ScanEntry> = if opts.parallel {
        sigs.par_iter().map(run).collect::<Result<_, _>>()?
    } else {
        sigs.iter().map(run).collect::<Result<_, _>>()?
    };
    let minimal_feasible = entries
        .iter()
        .find(|e| matches!(e.status, SignatureStatus::Feasible(_)))
        .map(|e| e.signature.clone());
    let disagreements = entries
        .iter()
        .filter(|e| e.fact.is_some() && matches!(e.status, SignatureStatus::Feasible(_)))
        .map(|e| e.signature.clone())
        .collect();
    Ok(ScanReport {
        source: source.to_string(),
        target: target.to_string(),
        mode,
        max_exp,
        seed: opts.search.seed,
        entries,
        minimal_feasible,
        disagreements,
    })
}
