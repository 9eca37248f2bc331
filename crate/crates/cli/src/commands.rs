//! The `iwc` subcommands. Each returns its report text and exit code:
//! 0 confirmed, 1 refuted, 2 invalid input, 3 inconclusive.

use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use iwc_core::{
    admissible_signatures, catalog, catalog_get, catalog_get_in, contract_with_matrix, derivation_basis,
    fingerprint, iw_limit_diagonal, verify_iw, EpsMatrix, Error as CoreError, FieldMode, IWSpec, Matrix, Signature,
    StructureTensor,
};
use iwc_polysys::{
    certify_complex, check_certificate, fixture_witness, generate_iw_system, load_fixture, prove_membership,
    search_real_branch, Certificate, ComplexOutcome, Expectation, Factor, Fixture, GbOptions, Ideal,
    InverseEncoding, Nonsingularity, SystemOptions, DEFAULT_PAIR_BUDGET,
};

use crate::error::CliError;
use crate::scan::{certify_fixture, format_matrix, format_sig, minimality_scan, ScanOptions, ScanReport, SignatureStatus};
use crate::search::{check_witness, find_matrix_arranged, SearchOptions, SearchOutcome};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "iwc", version, about = "Exact generalized Inönü–Wigner contractions and Gröbner certificates")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Ground field, `Q` or `Q(i)`; defaults to the field of the named algebras.
    #[arg(long, global = true, value_parser = parse_field)]
    pub field: Option<FieldMode>,
    /// Pair-reduction budget per Gröbner basis run.
    #[arg(long, global = true, env = "IWC_BUDGET")]
    pub budget: Option<u64>,
    /// Seconds per Gröbner basis run.
    #[arg(long, global = true)]
    pub timeout: Option<u64>,
    /// Random restarts per arrangement in witness searches.
    #[arg(long, global = true)]
    pub restarts: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Scan signatures one at a time.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List or show catalog algebras.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Check antisymmetry and the Jacobi identity of an algebra file.
    Validate { file: PathBuf },
    /// Contraction limit by the diagonal rule, or of `A·diag(ε^α)`.
    Contract {
        /// Catalog name or algebra file.
        #[arg(long)]
        algebra: String,
        /// JSON matrix file for `A`.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, value_parser = parse_sig)]
        signature: Option<Signature>,
    },
    /// Basis of the derivation algebra.
    Derivations { name: String },
    /// Signatures admitted by the diagonal derivations of an algebra.
    Signatures {
        name: String,
        #[arg(long)]
        max: i64,
    },
    /// Check that `A·diag(ε^α)·P` contracts `source` onto `target`.
    Verify {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_parser = parse_sig)]
        signature: Signature,
        /// JSON matrix file for `P` (identity if absent).
        #[arg(long)]
        p: Option<PathBuf>,
    },
    /// Certify a shipped fixture or a generated system.
    Certify {
        #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
        fixture: Option<String>,
        /// `source,target,a1,...,an`, the signature taken as arranged.
        #[arg(long)]
        generate: Option<String>,
        /// Over Q, look for a real-branch certificate when complex solutions exist.
        #[arg(long)]
        real_branch: bool,
        #[arg(long, value_enum, default_value_t = EncodingArg::Cofactor)]
        encoding: EncodingArg,
    },
    /// Minimality scan over all signatures with entries up to `max`.
    Scan {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        max: i64,
    },
    /// Re-run the classification results at desk scale.
    Reproduce { claim: Claim },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Show { name: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EncodingArg {
    Cofactor,
    ExplicitInverse,
    Virtual,
}

impl From<EncodingArg> for InverseEncoding {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Cofactor => InverseEncoding::Cofactor,
            EncodingArg::ExplicitInverse => InverseEncoding::ExplicitInverse,
            EncodingArg::Virtual => InverseEncoding::Virtual,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    /// Over C, 2g2.1 -> g1+g3.2 has no generalized IW realization.
    Theorem1,
    /// Over R, neither 2A2.1 nor A4.10 reaches A1+A3.2 by a generalized IW-contraction.
    Corollary1,
    /// Minimal signature (3,2,1,1) for the contractions onto A4.1 and g4.1.
    Theorem3,
}

pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn new(cli: &Cli, text: String, json: Value, code: i32) -> Output {
        let text = if cli.json {
            let mut s = serde_json::to_string_pretty(&json).expect("serializable");
            s.push('\n');
            s
        } else {
            text
        };
        Output { text, code }
    }
}

fn parse_field(s: &str) -> Result<FieldMode, String> {
    match s.to_ascii_lowercase().as_str() {
        "q" | "rational" => Ok(FieldMode::Rational),
        "q(i)" | "qi" | "gaussian" => Ok(FieldMode::Gaussian),
        _ => Err(format!("unknown field {s:?}, expected Q or Q(i)")),
    }
}

fn parse_sig(s: &str) -> Result<Signature, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad exponent {x:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Signature::new)
}

impl Cli {
    fn gb(&self) -> GbOptions {
        let mut o = GbOptions::with_budget(self.budget.unwrap_or(DEFAULT_PAIR_BUDGET));
        if let Some(t) = self.timeout {
            o = o.with_timeout(Duration::from_secs(t));
        }
        o
    }

    fn search(&self) -> SearchOptions {
        let d = SearchOptions::default();
        SearchOptions { restarts: self.restarts.unwrap_or(d.restarts), seed: self.seed }
    }

    fn scan_options(&self) -> ScanOptions {
        let d = ScanOptions::default();
        ScanOptions {
            search: self.search(),
            gb: if self.budget.is_some() || self.timeout.is_some() { self.gb() } else { d.gb },
            real_branch: d.real_branch,
            parallel: !self.sequential,
        }
    }

    /// Field of a catalog name: the `--field` flag, else the first catalog
    /// holding the name.
    fn mode_of(&self, name: &str) -> Result<FieldMode, CliError> {
        match self.field {
            Some(m) => Ok(catalog_get_in(name, m)?.mode()),
            None => Ok(catalog_get(name)?.mode()),
        }
    }

    fn algebra(&self, name_or_file: &str) -> Result<(String, StructureTensor), CliError> {
        let path = Path::new(name_or_file);
        if path.is_file() {
            let (name, t) = StructureTensor::from_json_str(&std::fs::read_to_string(path)?)?;
            return Ok((name.unwrap_or_else(|| name_or_file.to_string()), t));
        }
        let mode = self.mode_of(name_or_file)?;
        Ok((name_or_file.to_string(), catalog_get_in(name_or_file, mode)?.tensor.clone()))
    }
}

fn read_matrix(path: &Path, mode: FieldMode) -> Result<Matrix, CliError> {
    Ok(Matrix::from_json(mode, &std::fs::read_to_string(path)?)?)
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Catalog { action } => catalog_cmd(cli, action),
        Command::Validate { file } => validate_cmd(cli, file),
        Command::Contract { algebra, matrix, signature } => contract_cmd(cli, algebra, matrix.as_deref(), signature.as_ref()),
        Command::Derivations { name } => derivations_cmd(cli, name),
        Command::Signatures { name, max } => signatures_cmd(cli, name, *max),
        Command::Verify { source, target, matrix, signature, p } => {
            verify_cmd(cli, source, target, matrix, signature, p.as_deref())
        }
        Command::Certify { fixture: Some(id), .. } => certify_fixture_cmd(cli, id),
        Command::Certify { generate: Some(spec), real_branch, encoding, .. } => {
            certify_generated_cmd(cli, spec, *real_branch, (*encoding).into())
        }
        Command::Certify { .. } => Err(CliError::Input("certify needs --fixture or --generate".into())),
        Command::Scan { source, target, max } => scan_cmd(cli, source, target, *max),
        Command::Reproduce { claim } => reproduce_cmd(cli, *claim),
    }
}

fn catalog_cmd(cli: &Cli, action: &CatalogAction) -> Result<Output, CliError> {
    match action {
        CatalogAction::List => {
            let mut text = String::new();
            let mut entries = Vec::new();
            for mode in [FieldMode::Rational, FieldMode::Gaussian] {
                for e in catalog(mode) {
                    let aliases =
                        if e.aliases.is_empty() { String::new() } else { format!(" (also {})", e.aliases.join(", ")) };
                    text.push_str(&format!("{:<5} {:<16} dim {}  {}{aliases}\n", mode.tag(), e.name, e.tensor.dim(), e.note));
                    entries.push(json!({"name": e.name, "aliases": e.aliases, "field": mode.tag(), "dim": e.tensor.dim()}));
                }
            }
            Ok(Output::new(cli, text, json!({"schema_version": SCHEMA_VERSION, "algebras": entries}), 0))
        }
        CatalogAction::Show { name } => {
            let mode = cli.mode_of(name)?;
            let e = catalog_get_in(name, mode)?;
            let fp = fingerprint(&e.tensor);
            let text = format!(
                "{} over {}, dimension {}\n{}\n{}\nderived series {:?}, lower central series {:?}, center {}\n",
                e.name,
                mode.tag(),
                e.tensor.dim(),
                e.note,
                e.tensor,
                fp.derived_series,
                fp.lower_central_series,
                fp.center
            );
            let mut v = e.tensor.to_json(Some(e.name));
            v["schema_version"] = json!(SCHEMA_VERSION);
            v["aliases"] = json!(e.aliases);
            v["fingerprint"] = json!(fp);
            Ok(Output::new(cli, text, v, 0))
        }
    }
}

fn validate_cmd(cli: &Cli, file: &Path) -> Result<Output, CliError> {
    let text = std::fs::read_to_string(file)?;
    match StructureTensor::from_json_str(&text) {
        Ok((name, t)) => {
            let label = name.unwrap_or_else(|| file.display().to_string());
            let v = json!({"schema_version": SCHEMA_VERSION, "name": label, "valid": true, "violations": []});
            Ok(Output::new(cli, format!("{label}: valid Lie algebra of dimension {}\n", t.dim()), v, 0))
        }
        Err(CoreError::InvalidAlgebra(msg)) => {
            let v = json!({"schema_version": SCHEMA_VERSION, "valid": false, "violations": [msg]});
            Ok(Output::new(cli, format!("invalid: {msg}\n"), v, 1))
        }
        Err(e) => Err(e.into()),
    }
}

fn contract_cmd(
    cli: &Cli,
    algebra: &str,
    matrix: Option<&Path>,
    signature: Option<&Signature>,
) -> Result<Output, CliError> {
    let (name, t) = cli.algebra(algebra)?;
    let n = t.dim();
    let result = match (matrix, signature) {
        (None, Some(sig)) => iw_limit_diagonal(&t, sig),
        (Some(path), sig) => {
            let a = read_matrix(path, t.mode())?;
            let sig = sig.cloned().unwrap_or_else(|| Signature::zero(n));
            IWSpec::new(a, sig).eps_matrix().and_then(|u: EpsMatrix| contract_with_matrix(&t, &u))
        }
        (None, None) => return Err(CliError::Input("contract needs --matrix or --signature".into())),
    };
    match result {
        Ok(res) => {
            let text = format!(
                "limit of {name}:\n{}\nclassification: {:?}\nidentified as: {}\n",
                res.tensor,
                res.classification,
                res.matched.unwrap_or("(no catalog match)")
            );
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "algebra": name,
                "limit_exists": true,
                "limit": res.tensor.brackets(),
                "classification": res.classification,
                "matched": res.matched,
            });
            Ok(Output::new(cli, text, v, 0))
        }
        Err(CoreError::NoLimit { i, j, k }) => {
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "algebra": name,
                "limit_exists": false,
                "divergent_entry": [i, j, k],
            });
            Ok(Output::new(cli, format!("no limit: constant ({i},{j},{k}) diverges\n"), v, 1))
        }
        Err(e) => Err(e.into()),
    }
}

fn derivations_cmd(cli: &Cli, name: &str) -> Result<Output, CliError> {
    let (label, t) = cli.algebra(name)?;
    let der = derivation_basis(&t);
    let mut text = format!("Der({label}) has dimension {}\n", der.dim());
    for (k, m) in der.basis.iter().enumerate() {
        text.push_str(&format!("  D{}: {}\n", k + 1, format_matrix(m)));
    }
    let v = json!({"schema_version": SCHEMA_VERSION, "algebra": label, "dim": der.dim(), "basis": der.to_json()});
    Ok(Output::new(cli, text, v, 0))
}

fn signatures_cmd(cli: &Cli, name: &str, max: i64) -> Result<Output, CliError> {
    if max < 0 {
        return Err(CliError::Input("--max must be nonnegative".into()));
    }
    let (label, t) = cli.algebra(name)?;
    let sigs = admissible_signatures(&t, max);
    let mut text = format!("{} admissible signatures of {label} with entries up to {max}:\n", sigs.len());
    for s in &sigs {
        text.push_str(&format!("  {}\n", format_sig(s)));
    }
    let v = json!({"schema_version": SCHEMA_VERSION, "algebra": label, "max_exp": max, "signatures": sigs});
    Ok(Output::new(cli, text, v, 0))
}

fn verify_cmd(
    cli: &Cli,
    source: &str,
    target: &str,
    matrix: &Path,
    signature: &Signature,
    p: Option<&Path>,
) -> Result<Output, CliError> {
    let (label, t) = cli.algebra(source)?;
    let a = read_matrix(matrix, t.mode())?;
    let mut spec = IWSpec::new(a, signature.clone());
    if let Some(p) = p {
        spec = spec.with_p(read_matrix(p, t.mode())?);
    }
    let report = verify_iw(&label, &t, &spec, target)?;
    let verdict = if report.success { "confirmed" } else { "refuted" };
    let mut text = format!("{label} -> {target} with signature {}: {verdict}\n", format_sig(signature));
    match (&report.limit, report.divergent_entry) {
        (_, Some((i, j, k))) => text.push_str(&format!("no limit: constant ({i},{j},{k}) diverges\n")),
        (Some(_), None) => text.push_str(&format!(
            "limit equals the catalog constants exactly: {}\nmatched: {}\n",
            report.exact_match,
            report.matched.as_deref().unwrap_or("(none)")
        )),
        _ => {}
    }
    let v = serde_json::to_value(&report)?;
    Ok(Output::new(cli, text, v, if report.success { 0 } else { 1 }))
}

/// Status word and exit code for a certification outcome.
fn verdict(confirmed: Option<bool>) -> (&'static str, i32) {
    match confirmed {
        Some(true) => ("confirmed", 0),
        Some(false) => ("refuted", 1),
        None => ("inconclusive", 3),
    }
}

fn fixture_witness_certificate(f: &Fixture) -> Option<Certificate> {
    let a = fixture_witness(f.id)?;
    Some(Certificate::FeasibleWitness { point: f.point_for(&a)? })
}

/// The three literal sub-claims of the real argument on `SO3-2101`.
fn real_sub_claims(f: &Fixture, gb: &GbOptions) -> Result<Value, CliError> {
    let Some((x1, col)) = f.real_branch_data() else { return Ok(Value::Null) };
    let (mode, n) = (f.ideal.mode, f.ideal.nvars());
    let p = &x1 * &Factor::SumOfSquares(col.clone()).value(mode, n);
    let member = prove_membership(&f.ideal, &p, gb)?.is_some();
    let unit = |ideal: &Ideal| -> Result<bool, CliError> {
        Ok(matches!(certify_complex(ideal, gb)?, ComplexOutcome::Infeasible(_)))
    };
    Ok(json!([
        {"claim": "(a) x1·(a13² + a23² + a33²) lies in I", "holds": member},
        {"claim": "(b) 1 lies in the Gröbner basis of I + ⟨x1⟩", "holds": unit(&f.ideal.extended([x1]))?},
        {"claim": "(c) 1 lies in the Gröbner basis of I + ⟨a13, a23, a33⟩", "holds": unit(&f.ideal.extended(col))?},
    ]))
}

fn certify_fixture_cmd(cli: &Cli, id: &str) -> Result<Output, CliError> {
    let f = load_fixture(id)?;
    let gb = cli.gb();
    let (cert, confirmed) = match f.expectation {
        Expectation::Feasible => match fixture_witness_certificate(&f) {
            Some(c) => {
                let ok = check_certificate(&f.ideal, &c);
                (Some(c), Some(ok))
            }
            None => (None, None),
        },
        Expectation::ComplexInfeasible | Expectation::RealInfeasible => {
            match certify_fixture(&f, FieldMode::Rational, &gb) {
                Ok(Some(c)) => {
                    let ok = check_certificate(&f.ideal, &c);
                    (Some(c), Some(ok))
                }
                Ok(None) => (None, Some(false)),
                Err(e) if e.is_inconclusive() => (None, None),
                Err(e) => return Err(e.into()),
            }
        }
    };
    let sub_claims = if f.expectation == Expectation::RealInfeasible { real_sub_claims(&f, &gb)? } else { Value::Null };
    let (word, code) = verdict(confirmed);
    let claim = match f.expectation {
        Expectation::Feasible => "feasible",
        Expectation::ComplexInfeasible => "no complex solutions",
        Expectation::RealInfeasible => "no real solutions",
    };
    let mut text = format!(
        "{} ({} -> {}, signature {}): {claim}: {word}\n",
        f.id,
        f.source,
        f.target,
        format_sig(&f.signature)
    );
    text.push_str(&format!("{} equations in {} variables\n", f.ideal.gens.len(), f.ideal.nvars()));
    if let Some(c) = &cert {
        text.push_str(&format!("certificate: {} (size {}), rechecked\n", c.kind(), c.size()));
    }
    if let Value::Array(claims) = &sub_claims {
        for c in claims {
            text.push_str(&format!("  {}: {}\n", c["claim"].as_str().unwrap_or_default(), c["holds"]));
        }
        if claims.iter().any(|c| c["holds"] == json!(false)) {
            text.push_str("  I + ⟨x1⟩ has complex points; the certificate splits that branch again\n");
        }
    }
    for note in &f.notes {
        text.push_str(&format!("note: {note}\n"));
    }
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "fixture": f.id,
        "source": f.source,
        "target": f.target,
        "signature": f.signature,
        "claim": claim,
        "outcome": word,
        "ideal": f.ideal.to_json(),
        "certificate": cert.as_ref().map(|c| c.to_json(&f.ideal.vars)),
        "sub_claims": sub_claims,
        "notes": f.notes,
    });
    Ok(Output::new(cli, text, v, code))
}

fn certify_generated_cmd(cli: &Cli, spec: &str, real_branch: bool, encoding: InverseEncoding) -> Result<Output, CliError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() < 3 {
        return Err(CliError::Input("--generate expects source,target,a1,...,an".into()));
    }
    let (source, target) = (parts[0], parts[1]);
    let sig = parse_sig(&parts[2..].join(",")).map_err(CliError::Input)?;
    let mode = match cli.field {
        Some(m) => m,
        None => {
            let (ms, mt) = (cli.mode_of(source)?, cli.mode_of(target)?);
            if ms == FieldMode::Gaussian || mt == FieldMode::Gaussian { FieldMode::Gaussian } else { FieldMode::Rational }
        }
    };
    let src = catalog_get_in(source, mode)?.tensor.clone();
    let tgt = catalog_get_in(target, mode)?.tensor.clone();
    let sys = generate_iw_system(&src, &tgt, &sig, SystemOptions::new(encoding, Nonsingularity::DetSlack))?;
    let gb = cli.gb();
    let mut note = String::new();
    let (cert, confirmed) = match certify_complex(&sys.ideal, &gb) {
        Ok(ComplexOutcome::Infeasible(c)) => (Some(c), Some(true)),
        Ok(ComplexOutcome::Consistent(basis)) => {
            note = format!("complete Gröbner basis with {} elements and no unit", basis.polys.len());
            let witness = match find_matrix_arranged(source, target, &sig, mode, &cli.search())? {
                SearchOutcome::Found(w) => sys.point_for(&w.matrix, &src).map(|point| Certificate::FeasibleWitness { point }),
                SearchOutcome::NotFound { .. } => None,
            };
            match witness {
                Some(c) => (Some(c), Some(false)),
                None if real_branch && mode == FieldMode::Rational => match search_real_branch(&sys.ideal, &gb) {
                    Ok(Some(c)) => (Some(c), Some(true)),
                    Ok(None) => (None, None),
                    Err(e) if e.is_inconclusive() => (None, None),
                    Err(e) => return Err(e.into()),
                },
                // complex points exist, so infeasibility over C is refuted
                None if mode == FieldMode::Gaussian || !real_branch => (None, Some(false)),
                None => (None, None),
            }
        }
        Err(e) if e.is_inconclusive() => {
            note = e.to_string();
            // a rational witness settles the question without the basis
            match find_matrix_arranged(source, target, &sig, mode, &cli.search())? {
                SearchOutcome::Found(w) => match sys.point_for(&w.matrix, &src) {
                    Some(point) => (Some(Certificate::FeasibleWitness { point }), Some(false)),
                    None => (None, None),
                },
                SearchOutcome::NotFound { .. } => (None, None),
            }
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(c) = &cert {
        if !check_certificate(&sys.ideal, c) {
            return Err(CliError::Input("emitted certificate failed its recheck".into()));
        }
    }
    let (word, code) = verdict(confirmed);
    let mut text = format!(
        "{source} -> {target} with signature {} over {}: infeasibility {word}\n{} equations in {} variables\n",
        format_sig(&sig),
        mode.tag(),
        sys.ideal.gens.len(),
        sys.ideal.nvars()
    );
    if let Some(c) = &cert {
        text.push_str(&format!("certificate: {} (size {}), rechecked\n", c.kind(), c.size()));
        if let Certificate::FeasibleWitness { point } = c {
            if let Ok(a) = sys.matrix_of(point) {
                text.push_str(&format!("A = {}\n", format_matrix(&a)));
            }
        }
    }
    if !note.is_empty() {
        text.push_str(&format!("{note}\n"));
    }
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "source": source,
        "target": target,
        "signature": sig,
        "field": mode.tag(),
        "encoding": encoding,
        "claim": "infeasible",
        "outcome": word,
        "ideal": sys.ideal.to_json(),
        "certificate": cert.as_ref().map(|c| c.to_json(&sys.ideal.vars)),
        "note": note,
    });
    Ok(Output::new(cli, text, v, code))
}

fn scan_exit(r: &ScanReport) -> i32 {
    if !r.disagreements.is_empty() || !r.recheck() {
        1
    } else if !r.inconclusive().is_empty() {
        3
    } else {
        0
    }
}

fn scan_cmd(cli: &Cli, source: &str, target: &str, max: i64) -> Result<Output, CliError> {
    if max < 0 {
        return Err(CliError::Input("--max must be nonnegative".into()));
    }
    let mode = match cli.field {
        Some(m) => m,
        None => cli.mode_of(source)?,
    };
    let r = minimality_scan(source, target, max, mode, &cli.scan_options())?;
    let text = scan_text(&r);
    Ok(Output::new(cli, text, r.to_json(), scan_exit(&r)))
}

fn scan_text(r: &ScanReport) -> String {
    let mut text = String::new();
    for line in r.format().lines() {
        // gaussian matrices read better with scalar display
        text.push_str(line);
        text.push('\n');
    }
    text
}

/// Result of one claim check inside `reproduce`.
struct Check {
    label: String,
    confirmed: Option<bool>,
    detail: String,
}

fn scan_check_no_feasible(r: &ScanReport) -> Check {
    let confirmed = if !r.feasible().is_empty() || !r.recheck() {
        Some(false)
    } else if r.inconclusive().is_empty() {
        Some(true)
    } else {
        None
    };
    Check {
        label: format!("{} -> {} over {}: no feasible signature up to {}", r.source, r.target, r.mode.tag(), r.max_exp),
        confirmed,
        detail: r.format(),
    }
}

fn scan_check_minimal(r: &ScanReport, expected: &[i64]) -> Check {
    let expected = Signature::new(expected.to_vec());
    let below_settled = r
        .entries
        .iter()
        .take_while(|e| e.signature != expected)
        .all(|e| !matches!(e.status, SignatureStatus::Inconclusive(_)));
    let confirmed = match &r.minimal_feasible {
        _ if !r.recheck() || !r.disagreements.is_empty() => Some(false),
        Some(m) if *m == expected && below_settled => Some(true),
        Some(m) if iwc_core::signature_cmp(m, &expected).is_lt() => Some(false),
        Some(m) if *m == expected => None,
        _ => None,
    };
    Check {
        label: format!(
            "{} -> {} over {}: minimal signature {}",
            r.source,
            r.target,
            r.mode.tag(),
            format_sig(&expected)
        ),
        confirmed,
        detail: r.format(),
    }
}

fn fixture_check(id: &str, gb: &GbOptions) -> Result<Check, CliError> {
    let f = load_fixture(id)?;
    let confirmed = match certify_fixture(&f, FieldMode::Rational, gb) {
        Ok(Some(c)) => Some(check_certificate(&f.ideal, &c) && f.containment(gb).is_ok_and(|c| c.holds())),
        Ok(None) => Some(false),
        Err(e) if e.is_inconclusive() => None,
        Err(e) => return Err(e.into()),
    };
    Ok(Check { label: format!("fixture {id} certified and contained in its generated system"), confirmed, detail: String::new() })
}

fn witness_check(source: &str, target: &str, a: &Matrix, sig: &[i64]) -> Result<Check, CliError> {
    let sig = Signature::new(sig.to_vec());
    let t = catalog_get_in(source, a.mode())?.tensor.clone();
    let ok = check_witness(source, &t, a, &sig, target)?.is_some();
    Ok(Check {
        label: format!("{source} -> {target}: A = {} realizes signature {}", format_matrix(a), format_sig(&sig)),
        confirmed: Some(ok),
        detail: String::new(),
    })
}

fn reproduce_cmd(cli: &Cli, claim: Claim) -> Result<Output, CliError> {
    let opts = cli.scan_options();
    let gb = cli.gb();
    let q = FieldMode::Rational;
    let qi = FieldMode::Gaussian;
    let mut checks = Vec::new();
    let mut scans = Vec::new();
    match claim {
        Claim::Theorem1 => {
            let r = minimality_scan("2g2.1", "g1+g3.2", 3, qi, &opts)?;
            checks.push(scan_check_no_feasible(&r));
            scans.push(r);
            for id in ["G32-regime1", "G32-regime2"] {
                checks.push(fixture_check(id, &gb)?);
            }
        }
        Claim::Corollary1 => {
            for source in ["2A2.1", "A4.10"] {
                let r = minimality_scan(source, "A1+A3.2", 3, q, &opts)?;
                checks.push(scan_check_no_feasible(&r));
                scans.push(r);
            }
        }
        Claim::Theorem3 => {
            for (source, target, mode) in
                [("2A2.1", "A4.1", q), ("A4.10", "A4.1", q), ("so3+A1", "A4.1", q), ("2g2.1", "g4.1", qi)]
            {
                let r = minimality_scan(source, target, 3, mode, &opts)?;
                checks.push(scan_check_minimal(&r, &[3, 2, 1, 1]));
                scans.push(r);
            }
            let a = fixture_witness("G41-3211").expect("shipped witness");
            checks.push(witness_check("2A2.1", "A4.1", &a, &[3, 2, 1, 1])?);
            checks.push(witness_check("2A2.1", "A4.1", &a, &[4, 3, 2, 1])?);
            for id in ["G41-2101", "SO3-2101"] {
                checks.push(fixture_check(id, &gb)?);
            }
        }
    }
    let overall = if checks.iter().any(|c| c.confirmed == Some(false)) {
        Some(false)
    } else if checks.iter().all(|c| c.confirmed == Some(true)) {
        Some(true)
    } else {
        None
    };
    let (word, code) = verdict(overall);
    let name = match claim {
        Claim::Theorem1 => "theorem1",
        Claim::Corollary1 => "corollary1",
        Claim::Theorem3 => "theorem3",
    };
    let mut text = String::new();
    for c in &checks {
        if !c.detail.is_empty() {
            text.push_str(&c.detail);
        }
        text.push_str(&format!("[{}] {}\n", verdict(c.confirmed).0, c.label));
    }
    text.push_str(&format!("{name}: {word}\n"));
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "claim": name,
        "outcome": word,
        "checks": checks.iter().map(|c| json!({"check": c.label, "outcome": verdict(c.confirmed).0})).collect::<Vec<_>>(),
        "scans": scans.iter().map(ScanReport::to_json).collect::<Vec<_>>(),
    });
    Ok(Output::new(cli, text, v, code))
}
