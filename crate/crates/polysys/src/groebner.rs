//! Buchberger's algorithm with normal pair selection (sugar tie-break),
//! Gebauer–Möller pair pruning and optional derivation tracing.
//!
//! Tracing records every new basis element as an explicit combination
//! `Σ c·m·f_k` of earlier polynomials, so a claim such as `1 ∈ I` can be
//! re-checked by replaying the combination without any search.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use iwc_core::matrix::scalar_from_json;
use iwc_core::{FieldMode, Scalar};

use crate::coeff::Coeff;
use crate::error::PolyError;
use crate::ideal::{poly_to_json, Ideal};
use crate::poly::{Monomial, MonomialOrder, MultiPoly, Var};

pub const DEFAULT_PAIR_BUDGET: u64 = 200_000;

#[derive(Clone, Debug)]
pub struct GbOptions {
    /// Maximum number of S-polynomial reductions.
    pub max_pairs: u64,
    /// Wall-clock limit per run, counted from the start of the run.
    pub timeout: Option<Duration>,
    /// Return `{1}` as soon as a constant appears.
    pub stop_on_unit: bool,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions { max_pairs: DEFAULT_PAIR_BUDGET, timeout: None, stop_on_unit: true }
    }
}

impl GbOptions {
    pub fn with_budget(max_pairs: u64) -> Self {
        GbOptions { max_pairs, ..Default::default() }
    }

    pub fn with_timeout(mut self, d: Duration) -> Self {
        self.timeout = Some(d);
        self
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GbStats {
    pub pairs_reduced: u64,
    pub zero_reductions: u64,
    pub max_basis: usize,
    pub elapsed_ms: u128,
}

/// A reduced Gröbner basis: monic, inter-reduced, sorted by descending
/// leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub vars: Vec<Var>,
    pub order: MonomialOrder,
    pub mode: FieldMode,
    pub polys: Vec<MultiPoly>,
}

impl GroebnerBasis {
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_unit()
    }

    pub fn contains_unit(&self) -> bool {
        self.polys.iter().any(MultiPoly::is_unit)
    }

    /// Normal form of `p` modulo the basis.
    pub fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        let basis: Vec<Terms<Scalar>> = self.polys.iter().map(|g| to_terms(g, self.order)).collect();
        let r = reduce_full(&to_terms(p, self.order), &basis, self.order, None);
        from_terms(self.mode, p.nvars(), r)
    }

    /// Checks the Buchberger criterion: every S-polynomial reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let basis: Vec<Terms<Scalar>> = self.polys.iter().map(|g| to_terms(g, self.order)).collect();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let (a, b) = (&basis[i], &basis[j]);
                let (la, lb) = (&a.last().unwrap().0, &b.last().unwrap().0);
                if la.coprime(lb) {
                    continue;
                }
                let s = spoly(a, b, self.order);
                if !reduce_full(&s, &basis, self.order, None).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "variables": self.vars,
            "order": self.order,
            "field": self.mode.tag(),
            "polynomials": self.polys.iter().map(poly_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<GroebnerBasis, PolyError> {
        let ideal = Ideal::from_json(v)?;
        Ok(GroebnerBasis { vars: ideal.vars, order: ideal.order, mode: ideal.mode, polys: ideal.gens })
    }

    pub fn format(&self) -> Vec<String> {
        self.polys.iter().map(|g| g.format(&self.vars, self.order)).collect()
    }
}

/// Normal form of `p` modulo `gb`, requiring the caller's order to match.
pub fn reduce(p: &MultiPoly, gb: &GroebnerBasis, order: MonomialOrder) -> Result<MultiPoly, PolyError> {
    if order != gb.order {
        return Err(PolyError::OrderMismatch(order.tag().into(), gb.order.tag().into()));
    }
    if p.nvars() != gb.vars.len() {
        return Err(PolyError::VariableMismatch(format!("{} vs {} variables", p.nvars(), gb.vars.len())));
    }
    Ok(gb.reduce(p))
}

/// One term `c·m·f_k` of a derivation step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTerm {
    pub poly: usize,
    pub monomial: Monomial,
    pub coeff: Scalar,
}

/// Straight-line derivation: polynomial `k < inputs` is the `k`-th input
/// generator, polynomial `inputs + s` is `Σ coeff·monomial·f_poly` over the
/// terms of step `s`, each referring to earlier polynomials only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub inputs: usize,
    pub steps: Vec<Vec<StepTerm>>,
}

#[derive(Serialize, Deserialize)]
struct StepTermJson {
    poly: usize,
    exponents: Vec<u16>,
    coeff: Value,
}

impl Derivation {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.steps.iter().map(Vec::len).sum()
    }

    /// Replays the derivation from `gens` and returns the last polynomial.
    pub fn replay(&self, gens: &[MultiPoly], order: MonomialOrder) -> Result<MultiPoly, PolyError> {
        if gens.len() != self.inputs {
            return Err(PolyError::StructureMismatch(format!(
                "derivation expects {} inputs, ideal has {}",
                self.inputs,
                gens.len()
            )));
        }
        let Some(first) = gens.first() else {
            return Err(PolyError::StructureMismatch("empty ideal".into()));
        };
        let (mode, nvars) = (first.mode(), first.nvars());
        if gens.iter().all(|g| g.terms().all(|(_, c)| c.is_real())) && mode == FieldMode::Rational {
            self.replay_in::<BigRational>(gens, order, mode, nvars)
        } else {
            self.replay_in::<Scalar>(gens, order, mode, nvars)
        }
    }

    fn replay_in<C: Coeff>(
        &self,
        gens: &[MultiPoly],
        order: MonomialOrder,
        mode: FieldMode,
        nvars: usize,
    ) -> Result<MultiPoly, PolyError> {
        let mut polys: Vec<Terms<C>> = gens.iter().map(|g| to_terms(g, order)).collect();
        for (s, step) in self.steps.iter().enumerate() {
            let here = self.inputs + s;
            let mut acc: Terms<C> = Vec::new();
            for t in step {
                if t.poly >= here {
                    return Err(PolyError::StructureMismatch(format!("step {s} refers forward to polynomial {}", t.poly)));
                }
                if t.monomial.nvars() != nvars {
                    return Err(PolyError::StructureMismatch(format!("step {s} has a malformed monomial")));
                }
                let c = C::from_scalar(&t.coeff.with_mode(mode).map_err(|e| PolyError::Format(e.to_string()))?);
                acc = add_scaled(&acc, &polys[t.poly], &c, &t.monomial, order);
            }
            polys.push(acc);
        }
        let last = polys.pop().unwrap_or_default();
        Ok(from_terms(mode, nvars, last))
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Vec<StepTermJson>> = self
            .steps
            .iter()
            .map(|s| {
                s.iter()
                    .map(|t| StepTermJson {
                        poly: t.poly,
                        exponents: t.monomial.exps().to_vec(),
                        coeff: serde_json::to_value(&t.coeff).expect("scalar"),
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({"inputs": self.inputs, "steps": steps})
    }

    pub fn from_json(v: &Value, mode: FieldMode) -> Result<Derivation, PolyError> {
        let inputs = v["inputs"].as_u64().ok_or_else(|| PolyError::Format("derivation without inputs".into()))? as usize;
        let steps: Vec<Vec<StepTermJson>> = serde_json::from_value(v["steps"].clone())?;
        let steps = steps
            .into_iter()
            .map(|s| {
                s.into_iter()
                    .map(|t| {
                        Ok(StepTerm {
                            poly: t.poly,
                            monomial: Monomial::new(t.exponents),
                            coeff: scalar_from_json(mode, &t.coeff)?,
                        })
                    })
                    .collect::<Result<Vec<_>, PolyError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Derivation { inputs, steps })
    }
}

// ---------------------------------------------------------------------------
// Sorted term lists, ascending in the monomial order (leading term last).

type Terms<C> = Vec<(Monomial, C)>;

fn to_terms<C: Coeff>(p: &MultiPoly, order: MonomialOrder) -> Terms<C> {
    let mut v: Terms<C> = p.terms().map(|(m, c)| (m.clone(), C::from_scalar(c))).collect();
    v.sort_by(|a, b| order.cmp(&a.0, &b.0));
    v
}

fn from_terms<C: Coeff>(mode: FieldMode, nvars: usize, t: Terms<C>) -> MultiPoly {
    MultiPoly::from_terms(mode, nvars, t.into_iter().map(|(m, c)| (m, c.to_scalar(mode))))
}

/// `h + c·q·g`.
fn add_scaled<C: Coeff>(h: &[(Monomial, C)], g: &[(Monomial, C)], c: &C, q: &Monomial, order: MonomialOrder) -> Terms<C> {
    let mut out = Vec::with_capacity(h.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut gm: Option<Monomial> = None;
    while j < g.len() {
        let m = gm.get_or_insert_with(|| g[j].0.mul(q));
        if i < h.len() {
            match order.cmp(&h[i].0, m) {
                Ordering::Less => {
                    out.push(h[i].clone());
                    i += 1;
                    continue;
                }
                Ordering::Equal => {
                    let v = h[i].1.add(&c.mul(&g[j].1));
                    if !v.is_zero() {
                        out.push((gm.take().unwrap(), v));
                    } else {
                        gm = None;
                    }
                    i += 1;
                    j += 1;
                    continue;
                }
                Ordering::Greater => {}
            }
        }
        out.push((gm.take().unwrap(), c.mul(&g[j].1)));
        j += 1;
    }
    out.extend_from_slice(&h[i..]);
    out
}

fn mul_term<C: Coeff>(g: &[(Monomial, C)], c: &C, q: &Monomial) -> Terms<C> {
    g.iter().map(|(m, x)| (m.mul(q), x.mul(c))).collect()
}

fn spoly<C: Coeff>(a: &[(Monomial, C)], b: &[(Monomial, C)], order: MonomialOrder) -> Terms<C> {
    let (la, ca) = a.last().unwrap();
    let (lb, cb) = b.last().unwrap();
    let l = la.lcm(lb);
    let ma = la.quotient_of(&l);
    let mb = lb.quotient_of(&l);
    let sa = mul_term(&a[..a.len() - 1], &ca.inv(), &ma);
    add_scaled(&sa, &b[..b.len() - 1], &cb.inv().neg(), &mb, order)
}

fn find_reducer<C, T: AsRef<[(Monomial, C)]>>(m: &Monomial, basis: &[T]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, g) in basis.iter().enumerate() {
        let g = g.as_ref();
        if g.last().unwrap().0.divides(m) && best.is_none_or(|b| basis[b].as_ref().len() > g.len()) {
            best = Some(k);
        }
    }
    best
}

/// Full reduction of `p` by `basis`. With `trace`, each step `h ← h − c·q·g_k`
/// is recorded as `(k, q, c)`.
fn reduce_full<C: Coeff, T: AsRef<[(Monomial, C)]>>(
    p: &[(Monomial, C)],
    basis: &[T],
    order: MonomialOrder,
    mut trace: Option<&mut Vec<(usize, Monomial, C)>>,
) -> Terms<C> {
    let mut h: Terms<C> = p.to_vec();
    let mut rem_desc: Terms<C> = Vec::new();
    while let Some((lm, lc)) = h.last().cloned() {
        match find_reducer(&lm, basis) {
            Some(k) => {
                let g = basis[k].as_ref();
                let (gl, gc) = g.last().unwrap();
                let q = gl.quotient_of(&lm);
                let c = lc.mul(&gc.inv());
                h.pop();
                h = add_scaled(&h, &g[..g.len() - 1], &c.neg(), &q, order);
                if let Some(t) = trace.as_deref_mut() {
                    t.push((k, q, c));
                }
            }
            None => {
                h.pop();
                rem_desc.push((lm, lc));
            }
        }
    }
    rem_desc.reverse();
    rem_desc
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Raw step coefficients over the engine field.
type RawStep<C> = Vec<(usize, Monomial, C)>;

struct Engine<C: Coeff> {
    order: MonomialOrder,
    opts: GbOptions,
    tracing: bool,
    /// All polynomials ever produced; the first `inputs` are the generators.
    polys: Vec<Terms<C>>,
    sugar: Vec<u32>,
    steps: Vec<RawStep<C>>,
    inputs: usize,
    /// Indices (into `polys`) of the current basis.
    basis: Vec<usize>,
    pairs: Vec<Pair>,
    stats: GbStats,
}

impl<C: Coeff> Engine<C> {
    fn new(ideal: &Ideal, opts: GbOptions, tracing: bool) -> Self {
        let polys: Vec<Terms<C>> = ideal.gens.iter().map(|g| to_terms(g, ideal.order)).collect();
        let sugar = ideal.gens.iter().map(MultiPoly::total_degree).collect();
        Engine {
            order: ideal.order,
            opts,
            tracing,
            inputs: polys.len(),
            polys,
            sugar,
            steps: Vec::new(),
            basis: Vec::new(),
            pairs: Vec::new(),
            stats: GbStats::default(),
        }
    }

    fn basis_terms(&self) -> Vec<&Terms<C>> {
        self.basis.iter().map(|&k| &self.polys[k]).collect()
    }

    fn lm(&self, k: usize) -> &Monomial {
        &self.polys[k].last().unwrap().0
    }

    /// Reduces `h` (whose provenance is `prov`) by the basis, makes it monic and
    /// stores it. Returns `None` when it reduces to zero.
    fn reduce_and_store(&mut self, h: Terms<C>, mut prov: RawStep<C>, sugar: u32) -> Option<usize> {
        let basis = self.basis_terms();
        let mut tr = Vec::new();
        let r = reduce_full(&h, &basis, self.order, self.tracing.then_some(&mut tr));
        if r.is_empty() {
            return None;
        }
        let lc_inv = r.last().unwrap().1.inv();
        let r: Terms<C> = r.into_iter().map(|(m, c)| (m, c.mul(&lc_inv))).collect();
        if self.tracing {
            for (k, q, c) in tr {
                prov.push((self.basis[k], q, c.neg()));
            }
            for t in &mut prov {
                t.2 = t.2.mul(&lc_inv);
            }
        }
        let idx = self.polys.len();
        self.polys.push(r);
        self.sugar.push(sugar);
        self.steps.push(if self.tracing { prov } else { Vec::new() });
        Some(idx)
    }

    fn update(&mut self, h: usize) {
        let lh = self.lm(h).clone();
        // New pairs (h, g), by increasing lcm degree with coprime pairs first
        // so that among equal lcms the coprime one survives and is dropped.
        let mut cands: Vec<(usize, Monomial, bool)> = self
            .basis
            .iter()
            .map(|&g| (g, lh.lcm(self.lm(g)), lh.coprime(self.lm(g))))
            .collect();
        cands.sort_by_key(|(_, l, c)| (l.degree(), !c));
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::with_capacity(cands.len());
        for c in cands {
            if !kept.iter().any(|(_, l2, _)| l2.divides(&c.1)) {
                kept.push(c);
            }
        }
        // Old pairs (g1, g2) made redundant by h.
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !lh.divides(&p.lcm)
                || lh.lcm_equals(&polys[p.i].last().unwrap().0, &p.lcm)
                || lh.lcm_equals(&polys[p.j].last().unwrap().0, &p.lcm)
        });
        for (g, l, coprime) in kept {
            if !coprime {
                let sugar = self.pair_sugar(h, g, &l);
                self.pairs.push(Pair { i: g, j: h, lcm: l, sugar });
            }
        }
        let polys = &self.polys;
        self.basis.retain(|&g| !lh.divides(&polys[g].last().unwrap().0));
        self.basis.push(h);
        self.stats.max_basis = self.stats.max_basis.max(self.basis.len());
    }

    fn pair_sugar(&self, a: usize, b: usize, l: &Monomial) -> u32 {
        let sa = self.sugar[a] + l.degree() - self.lm(a).degree();
        let sb = self.sugar[b] + l.degree() - self.lm(b).degree();
        sa.max(sb)
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (p, q) = (&self.pairs[k], &self.pairs[best]);
            let c = order
                .cmp(&p.lcm, &q.lcm)
                .then(p.sugar.cmp(&q.sugar))
                .then((p.i, p.j).cmp(&(q.i, q.j)));
            if c == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn is_unit(&self, k: usize) -> bool {
        self.polys[k].len() == 1 && self.lm(k).is_one()
    }

    /// Runs to completion; returns the index of a unit if one was derived.
    fn run(&mut self) -> Result<Option<usize>, PolyError> {
        let start = Instant::now();
        let deadline = self.opts.timeout.map(|d| start + d);
        for i in 0..self.inputs {
            let h = self.polys[i].clone();
            if h.is_empty() {
                continue;
            }
            let prov = vec![(i, Monomial::one(h[0].0.nvars()), h[0].1.one_like())];
            if let Some(k) = self.reduce_and_store(h, prov, self.sugar[i]) {
                if self.is_unit(k) && self.opts.stop_on_unit {
                    self.basis = vec![k];
                    self.stats.elapsed_ms = start.elapsed().as_millis();
                    return Ok(Some(k));
                }
                self.update(k);
            }
        }
        while let Some(p) = self.select() {
            if self.stats.pairs_reduced >= self.opts.max_pairs {
                return Err(PolyError::BudgetExceeded(self.stats.pairs_reduced));
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(PolyError::Timeout(self.stats.pairs_reduced));
            }
            self.stats.pairs_reduced += 1;
            let (a, b) = (&self.polys[p.i], &self.polys[p.j]);
            let s = spoly(a, b, self.order);
            let prov = if self.tracing {
                let (la, lb) = (self.lm(p.i), self.lm(p.j));
                let one = a.last().unwrap().1.one_like();
                vec![(p.i, la.quotient_of(&p.lcm), one.clone()), (p.j, lb.quotient_of(&p.lcm), one.neg())]
            } else {
                Vec::new()
            };
            match self.reduce_and_store(s, prov, p.sugar) {
                None => self.stats.zero_reductions += 1,
                Some(k) => {
                    if self.is_unit(k) && self.opts.stop_on_unit {
                        self.basis = vec![k];
                        self.stats.elapsed_ms = start.elapsed().as_millis();
                        return Ok(Some(k));
                    }
                    self.update(k);
                }
            }
        }
        self.stats.elapsed_ms = start.elapsed().as_millis();
        Ok(self.basis.iter().copied().find(|&k| self.is_unit(k)))
    }

    fn reduced_basis(&self) -> Vec<Terms<C>> {
        let mut basis: Vec<Terms<C>> = self.basis_terms().into_iter().cloned().collect();
        basis.sort_by(|a, b| self.order.cmp(&b.last().unwrap().0, &a.last().unwrap().0));
        let mut out = Vec::with_capacity(basis.len());
        for k in 0..basis.len() {
            let others: Vec<&Terms<C>> = basis.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, g)| g).collect();
            let g = &basis[k];
            // The leading term is irreducible by minimality; reduce the tail only.
            let mut tail = reduce_full(&g[..g.len() - 1], &others, self.order, None);
            tail.push(g.last().unwrap().clone());
            out.push(tail);
        }
        out
    }

    /// Derivation of polynomial `target`, pruned to its ancestors.
    fn derivation_of(&self, extra: Option<RawStep<C>>, target: usize, mode: FieldMode) -> Derivation {
        let n = self.inputs;
        let total = self.polys.len() + usize::from(extra.is_some());
        let step_of = |k: usize| -> &RawStep<C> {
            if k == self.polys.len() {
                extra.as_ref().unwrap()
            } else {
                &self.steps[k - n]
            }
        };
        let mut needed = vec![false; total];
        needed[target] = true;
        for k in (n..=target).rev() {
            if !needed[k] {
                continue;
            }
            for (src, _, _) in step_of(k) {
                needed[*src] = true;
            }
        }
        let mut renumber = vec![usize::MAX; total];
        for (k, r) in renumber.iter_mut().enumerate().take(n) {
            *r = k;
        }
        let mut steps = Vec::new();
        for k in n..=target {
            if !needed[k] {
                continue;
            }
            renumber[k] = n + steps.len();
            let terms = step_of(k)
                .iter()
                .map(|(src, m, c)| StepTerm { poly: renumber[*src], monomial: m.clone(), coeff: c.to_scalar(mode) })
                .collect();
            steps.push(terms);
        }
        Derivation { inputs: n, steps }
    }
}

/// Result of a traced Buchberger run.
pub struct TracedRun {
    inner: TracedInner,
    pub vars: Vec<Var>,
    pub mode: FieldMode,
    pub stats: GbStats,
}

enum TracedInner {
    Rational(Engine<BigRational>, Option<usize>),
    Gaussian(Engine<Scalar>, Option<usize>),
}

fn use_rational(ideal: &Ideal) -> bool {
    ideal.mode == FieldMode::Rational || ideal.is_rational()
}

/// Reduced Gröbner basis of `ideal`.
pub fn buchberger(ideal: &Ideal, opts: &GbOptions) -> Result<GroebnerBasis, PolyError> {
    Ok(buchberger_with_stats(ideal, opts)?.0)
}

pub fn buchberger_with_stats(ideal: &Ideal, opts: &GbOptions) -> Result<(GroebnerBasis, GbStats), PolyError> {
    fn go<C: Coeff>(ideal: &Ideal, opts: &GbOptions) -> Result<(GroebnerBasis, GbStats), PolyError> {
        let mut e = Engine::<C>::new(ideal, opts.clone(), false);
        let unit = e.run()?;
        let polys = match unit {
            Some(_) => vec![MultiPoly::from_int(ideal.mode, ideal.nvars(), 1)],
            None => e.reduced_basis().into_iter().map(|t| from_terms(ideal.mode, ideal.nvars(), t)).collect(),
        };
        Ok((GroebnerBasis { vars: ideal.vars.clone(), order: ideal.order, mode: ideal.mode, polys }, e.stats))
    }
    if use_rational(ideal) {
        go::<BigRational>(ideal, opts)
    } else {
        go::<Scalar>(ideal, opts)
    }
}

/// Buchberger run that keeps derivations for every basis element.
pub fn buchberger_traced(ideal: &Ideal, opts: &GbOptions) -> Result<TracedRun, PolyError> {
    let inner = if use_rational(ideal) {
        let mut e = Engine::<BigRational>::new(ideal, opts.clone(), true);
        let u = e.run()?;
        TracedInner::Rational(e, u)
    } else {
        let mut e = Engine::<Scalar>::new(ideal, opts.clone(), true);
        let u = e.run()?;
        TracedInner::Gaussian(e, u)
    };
    let stats = match &inner {
        TracedInner::Rational(e, _) => e.stats.clone(),
        TracedInner::Gaussian(e, _) => e.stats.clone(),
    };
    Ok(TracedRun { inner, vars: ideal.vars.clone(), mode: ideal.mode, stats })
}

impl TracedRun {
    pub fn has_unit(&self) -> bool {
        match &self.inner {
            TracedInner::Rational(_, u) => u.is_some(),
            TracedInner::Gaussian(_, u) => u.is_some(),
        }
    }

    /// Derivation ending in the unit (a monic constant, i.e. 1).
    pub fn unit_derivation(&self) -> Option<Derivation> {
        match &self.inner {
            TracedInner::Rational(e, u) => u.map(|k| e.derivation_of(None, k, self.mode)),
            TracedInner::Gaussian(e, u) => u.map(|k| e.derivation_of(None, k, self.mode)),
        }
    }

    pub fn reduced_basis(&self) -> GroebnerBasis {
        fn go<C: Coeff>(e: &Engine<C>, unit: Option<usize>, mode: FieldMode, vars: &[Var]) -> GroebnerBasis {
            let n = vars.len();
            let polys = match unit {
                Some(_) => vec![MultiPoly::from_int(mode, n, 1)],
                None => e.reduced_basis().into_iter().map(|t| from_terms(mode, n, t)).collect(),
            };
            GroebnerBasis { vars: vars.to_vec(), order: e.order, mode, polys }
        }
        match &self.inner {
            TracedInner::Rational(e, u) => go(e, *u, self.mode, &self.vars),
            TracedInner::Gaussian(e, u) => go(e, *u, self.mode, &self.vars),
        }
    }

    /// If `p` reduces to zero, a derivation whose last polynomial is `p`.
    pub fn membership(&self, p: &MultiPoly) -> Option<Derivation> {
        fn go<C: Coeff>(e: &Engine<C>, p: &MultiPoly, mode: FieldMode) -> Option<Derivation> {
            let basis = e.basis_terms();
            let mut tr = Vec::new();
            let r = reduce_full(&to_terms::<C>(p, e.order), &basis, e.order, Some(&mut tr));
            if !r.is_empty() {
                return None;
            }
            let step: RawStep<C> = tr.into_iter().map(|(k, q, c)| (e.basis[k], q, c)).collect();
            let target = e.polys.len();
            Some(e.derivation_of(Some(step), target, mode))
        }
        match &self.inner {
            TracedInner::Rational(e, _) => go(e, p, self.mode),
            TracedInner::Gaussian(e, _) => go(e, p, self.mode),
        }
    }
}

impl StepTerm {
    pub fn to_json(&self) -> Value {
        serde_json::json!({"poly": self.poly, "exponents": self.monomial.exps(), "coeff": self.coeff})
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn xy_ideal(gens: impl Fn(&MultiPoly, &MultiPoly) -> Vec<MultiPoly>) -> Ideal {
        let x = MultiPoly::var(FieldMode::Rational, 2, 0);
        let y = MultiPoly::var(FieldMode::Rational, 2, 1);
        Ideal::new(vec![Var::Named("x".into()), Var::Named("y".into())], FieldMode::Rational, gens(&x, &y))
    }

    fn one() -> MultiPoly {
        MultiPoly::from_int(FieldMode::Rational, 2, 1)
    }

    #[test]
    fn forced_inconsistency() {
        let ideal = xy_ideal(|x, y| vec![x * x, &(x * y) - &one()]);
        let gb = buchberger(&ideal, &GbOptions::default()).unwrap();
        assert!(gb.is_unit());
        let run = buchberger_traced(&ideal, &GbOptions::default()).unwrap();
        let d = run.unit_derivation().unwrap();
        assert_eq!(d.replay(&ideal.gens, ideal.order).unwrap(), one());
    }

    #[test]
    fn linear_generator_is_its_own_basis() {
        let ideal = xy_ideal(|x, _| vec![x - &one()]);
        let gb = buchberger(&ideal, &GbOptions::default()).unwrap();
        assert_eq!(gb.polys, ideal.gens);
    }

    #[test]
    fn reductions() {
        let ideal = xy_ideal(|x, _| vec![x.clone()]);
        let gb = buchberger(&ideal, &GbOptions::default()).unwrap();
        let x = MultiPoly::var(FieldMode::Rational, 2, 0);
        let y = MultiPoly::var(FieldMode::Rational, 2, 1);
        assert!(gb.reduce(&(&x * &x)).is_zero());
        assert_eq!(gb.reduce(&(&x + &y)), y);
        assert!(matches!(reduce(&x, &gb, MonomialOrder::Lex), Err(PolyError::OrderMismatch(..))));
    }

    #[test]
    fn circle_and_line() {
        // x² + y² − 1, x − y  →  {x − y, y² − 1/2}
        let ideal = xy_ideal(|x, y| vec![&(&(x * x) + &(y * y)) - &one(), x - y]);
        let gb = buchberger(&ideal, &GbOptions::default()).unwrap();
        assert_eq!(gb.format(), vec!["y^2 - 1/2".to_string(), "x - y".to_string()]);
        assert!(gb.is_groebner());
    }

    #[test]
    fn membership_trace_replays() {
        let ideal = xy_ideal(|x, y| vec![&(x * x) - y, &(x * y) - &one()]);
        let run = buchberger_traced(&ideal, &GbOptions::default()).unwrap();
        let x = MultiPoly::var(FieldMode::Rational, 2, 0);
        let y = MultiPoly::var(FieldMode::Rational, 2, 1);
        // x³ − 1 = x·(x² − y) + (x·y − 1)
        let p = &(&(&x * &x) * &x) - &one();
        let d = run.membership(&p).unwrap();
        assert_eq!(d.replay(&ideal.gens, ideal.order).unwrap(), p);
        assert!(run.membership(&y).is_none());
        let back = Derivation::from_json(&d.to_json(), FieldMode::Rational).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn budget_is_reported() {
        let ideal = xy_ideal(|x, y| vec![&(&(x * x) * y) - &one(), &(x * &(y * y)) - x]);
        let err = buchberger(&ideal, &GbOptions::with_budget(0)).unwrap_err();
        assert!(err.is_inconclusive());
    }
}
