//! Randomized exact search for contraction matrices.
//!
//! One restart walks the variables of the virtual-encoded system: whenever
//! some equations have become linear (or univariate quadratic with a rational
//! root) they are solved exactly, otherwise a random unassigned entry of `A`
//! gets a small rational. Whatever comes out is re-verified with `verify_iw`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use iwc_core::{
    admissible_arrangements, catalog_tensor_in, verify_iw, FieldMode, IWSpec, Matrix, Scalar, Signature,
    StructureTensor, VerificationReport,
};
use iwc_polysys::{generate_iw_system, InverseEncoding, IwSystem, MultiPoly, Nonsingularity, SystemOptions, Var};

use crate::error::CliError;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Random restarts per admissible arrangement.
    pub restarts: u64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { restarts: 2000, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    /// The arrangement of the signature the matrix realizes with `P = I`.
    pub signature: Signature,
    pub matrix: Matrix,
    pub report: VerificationReport,
    /// Restarts used before the hit, counted over all arrangements.
    pub restarts: u64,
}

impl Witness {
    pub fn to_json(&self) -> Value {
        json!({
            "signature": self.signature,
            "matrix": self.matrix.to_json(),
            "restarts": self.restarts,
            "report": self.report,
        })
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(Box<Witness>),
    /// Inconclusive: nothing found within the budget.
    NotFound { restarts: u64 },
}

/// Re-verifies a candidate through the contraction engine.
pub fn check_witness(
    source: &str,
    t: &StructureTensor,
    a: &Matrix,
    sig: &Signature,
    target: &str,
) -> Result<Option<VerificationReport>, CliError> {
    if a.det().map(|d| d.is_zero()).unwrap_or(true) {
        return Ok(None);
    }
    let report = verify_iw(source, t, &IWSpec::new(a.clone(), sig.clone()), target)?;
    Ok(if report.success && report.exact_match { Some(report) } else { None })
}

pub fn find_matrix(
    source: &str,
    target: &str,
    sig: &Signature,
    mode: FieldMode,
    opts: &SearchOptions,
) -> Result<SearchOutcome, CliError> {
    let src = catalog_tensor_in(source, mode)?;
    let tgt = catalog_tensor_in(target, mode)?;
    if src.dim() != sig.len() || tgt.dim() != sig.len() {
        return Err(CliError::Input(format!(
            "dimensions differ: {source} {}, {target} {}, signature {}",
            src.dim(),
            tgt.dim(),
            sig.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut used = 0;
    for arr in admissible_arrangements(&tgt, sig) {
        if let Some(w) = search_arrangement(source, target, &src, &tgt, &arr, opts.restarts, &mut rng, &mut used)? {
            return Ok(SearchOutcome::Found(Box::new(w)));
        }
    }
    Ok(SearchOutcome::NotFound { restarts: used })
}

/// Search for one arrangement of the signature, taken as given.
pub fn find_matrix_arranged(
    source: &str,
    target: &str,
    arr: &Signature,
    mode: FieldMode,
    opts: &SearchOptions,
) -> Result<SearchOutcome, CliError> {
    let src = catalog_tensor_in(source, mode)?;
    let tgt = catalog_tensor_in(target, mode)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut used = 0;
    Ok(match search_arrangement(source, target, &src, &tgt, arr, opts.restarts, &mut rng, &mut used)? {
        Some(w) => SearchOutcome::Found(Box::new(w)),
        None => SearchOutcome::NotFound { restarts: used },
    })
}

#[allow(clippy::too_many_arguments)]
fn search_arrangement(
    source: &str,
    target: &str,
    src: &StructureTensor,
    tgt: &StructureTensor,
    arr: &Signature,
    restarts: u64,
    rng: &mut ChaCha8Rng,
    used: &mut u64,
) -> Result<Option<Witness>, CliError> {
    if src.dim() != arr.len() || tgt.dim() != arr.len() {
        return Err(CliError::Input(format!(
            "dimensions differ: {source} {}, {target} {}, signature {}",
            src.dim(),
            tgt.dim(),
            arr.len()
        )));
    }
    let sys = generate_iw_system(src, tgt, arr, SystemOptions::new(InverseEncoding::Virtual, Nonsingularity::DetSlack))?;
    // the diagonal rule first
    let mut candidates = vec![Matrix::identity(src.mode(), arr.len())];
    for _ in 0..restarts {
        *used += 1;
        if let Some(a) = candidates.pop().or_else(|| restart(&sys, rng)) {
            if let Some(report) = check_witness(source, src, &a, arr, target)? {
                return Ok(Some(Witness { signature: arr.clone(), matrix: a, report, restarts: *used }));
            }
        }
    }
    Ok(None)
}

fn small_rational(mode: FieldMode, rng: &mut ChaCha8Rng) -> Scalar {
    if rng.gen_bool(0.5) {
        return Scalar::zero(mode);
    }
    let num = *[-2i64, -1, 1, 2].choose(rng).expect("nonempty");
    let den = if rng.gen_bool(0.75) { 1 } else { 2 };
    Scalar::from_ratio(mode, num, den)
}

/// One randomized completion attempt; `Some(A)` if every equation vanishes.
fn restart(sys: &IwSystem, rng: &mut ChaCha8Rng) -> Option<Matrix> {
    let ideal = &sys.ideal;
    let mode = ideal.mode;
    let nv = ideal.nvars();
    let mut values: Vec<Option<Scalar>> = vec![None; nv];
    loop {
        let mut eqs: Vec<MultiPoly> = Vec::new();
        for g in &ideal.gens {
            let r = g.partial_eval(&values);
            if r.is_zero() {
                continue;
            }
            if r.total_degree() == 0 {
                return None;
            }
            eqs.push(r);
        }
        if eqs.is_empty() {
            break;
        }
        if propagate_linear(&eqs, &mut values, mode)? {
            continue;
        }
        match quadratic_root(&eqs, rng) {
            Quadratic::Root(v, x) => {
                values[v] = Some(x);
                continue;
            }
            Quadratic::Irrational => return None,
            Quadratic::Absent => {}
        }
        let open: Vec<usize> = (0..nv)
            .filter(|&v| values[v].is_none() && matches!(ideal.vars[v], Var::A(..)))
            .collect();
        let pool: Vec<usize> =
            if open.is_empty() { (0..nv).filter(|&v| values[v].is_none()).collect() } else { open };
        let &v = pool.choose(rng)?;
        values[v] = Some(small_rational(mode, rng));
    }
    // variables untouched by any remaining equation are free
    for (v, x) in values.iter_mut().enumerate() {
        if x.is_none() {
            if !matches!(ideal.vars[v], Var::A(..)) {
                return None;
            }
            *x = Some(small_rational(mode, rng));
        }
    }
    let point: Vec<Scalar> = values.into_iter().map(|x| x.expect("assigned")).collect();
    if !ideal.vanishes_at(&point) {
        return None;
    }
    sys.matrix_of(&point).ok()
}

/// Solves the linear equations among `eqs` and assigns every variable they
/// determine. `None` on inconsistency, `Some(false)` if nothing was fixed.
fn propagate_linear(eqs: &[MultiPoly], values: &mut [Option<Scalar>], mode: FieldMode) -> Option<bool> {
    let linear: Vec<&MultiPoly> = eqs.iter().filter(|e| e.total_degree() == 1).collect();
    if linear.is_empty() {
        return Some(false);
    }
    let mut cols: Vec<usize> = linear.iter().flat_map(|e| e.support()).collect();
    cols.sort_unstable();
    cols.dedup();
    let width = cols.len() + 1;
    let mut rows = Vec::with_capacity(linear.len());
    for e in &linear {
        let mut row = vec![Scalar::zero(mode); width];
        for (m, c) in e.terms() {
            match m.exps().iter().position(|&x| x > 0) {
                Some(v) => row[cols.binary_search(&v).expect("in support")] = c.clone(),
                None => row[width - 1] = -c,
            }
        }
        rows.push(row);
    }
    let rref = Matrix::from_rows(mode, rows).ok()?.rref();
    if rref.pivots.contains(&(width - 1)) {
        return None;
    }
    let mut fixed = false;
    for (r, &p) in rref.pivots.iter().enumerate() {
        let determined = (0..width - 1).all(|c| c == p || rref.matrix.get(r, c).is_zero());
        if determined {
            values[cols[p]] = Some(rref.matrix.get(r, width - 1).clone());
            fixed = true;
        }
    }
    Some(fixed)
}

enum Quadratic {
    Root(usize, Scalar),
    /// Some univariate quadratic has no rational root.
    Irrational,
    Absent,
}

/// A rational root of some univariate quadratic among `eqs`.
fn quadratic_root(eqs: &[MultiPoly], rng: &mut ChaCha8Rng) -> Quadratic {
    for e in eqs {
        let support = e.support();
        if support.len() != 1 || e.total_degree() != 2 {
            continue;
        }
        let v = support[0];
        let mode = e.mode();
        let mut coef = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
        for (m, c) in e.terms() {
            let Some(c) = c.as_rational() else { return Quadratic::Absent };
            coef[m.exps()[v] as usize] = c.clone();
        }
        let [c0, c1, c2] = coef;
        let disc = &c1 * &c1 - BigRational::from_integer(4.into()) * &c2 * &c0;
        let Some(root) = rational_sqrt(&disc) else { return Quadratic::Irrational };
        let sign = if rng.gen_bool(0.5) { root.clone() } else { -root };
        let x = (-c1 + sign) / (BigRational::from_integer(2.into()) * c2);
        return Quadratic::Root(v, Scalar::from_rational(mode, x));
    }
    Quadratic::Absent
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let isqrt = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(BigRational::new(isqrt(q.numer())?, isqrt(q.denom())?))
}
