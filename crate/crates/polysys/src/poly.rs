//! Variables, monomials, monomial orders and sparse multivariate polynomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use iwc_core::{FieldMode, Scalar};

use crate::error::PolyError;

/// An unknown of an IW system. Indices are 1-based; `A(i, j)` is the entry
/// of `A` in row `i`, column `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    A(usize, usize),
    B(usize, usize),
    /// Determinant slack, `t·det(A) = 1`.
    T,
    /// Auxiliary unknown introduced by a hand reduction.
    X(usize),
    Named(String),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::A(i, j) => write!(f, "a{i}_{j}"),
            Var::B(i, j) => write!(f, "b{i}_{j}"),
            Var::T => f.write_str("t"),
            Var::X(m) => write!(f, "x{m}"),
            Var::Named(s) => f.write_str(s),
        }
    }
}

impl FromStr for Var {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let index_pair = |rest: &str| -> Option<(usize, usize)> {
            let (i, j) = rest.split_once('_')?;
            Some((i.parse().ok()?, j.parse().ok()?))
        };
        if s == "t" {
            return Ok(Var::T);
        }
        if let Some(rest) = s.strip_prefix('a') {
            if let Some((i, j)) = index_pair(rest) {
                return Ok(Var::A(i, j));
            }
        }
        if let Some(rest) = s.strip_prefix('b') {
            if let Some((i, j)) = index_pair(rest) {
                return Ok(Var::B(i, j));
            }
        }
        if let Some(rest) = s.strip_prefix('x') {
            if let Ok(m) = rest.parse() {
                return Ok(Var::X(m));
            }
        }
        if s.is_empty() {
            return Err(PolyError::Format("empty variable name".into()));
        }
        Ok(Var::Named(s.to_string()))
    }
}

impl Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::DegRevLex => a.deg.cmp(&b.deg).then_with(|| {
                for (x, y) in a.exps.iter().zip(b.exps.iter()).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            MonomialOrder::DegRevLex => "degrevlex",
            MonomialOrder::Lex => "lex",
        }
    }
}

impl FromStr for MonomialOrder {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        match s {
            "degrevlex" | "grevlex" => Ok(MonomialOrder::DegRevLex),
            "lex" => Ok(MonomialOrder::Lex),
            _ => Err(PolyError::Format(format!("unknown monomial order {s:?}"))),
        }
    }
}

/// Exponent vector with its total degree and a divisibility filter
/// (bit `v mod 64` set when variable `v` occurs).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Box<[u16]>,
    deg: u32,
    mask: u64,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars].into_boxed_slice(), deg: 0, mask: 0 }
    }

    pub fn new(exps: Vec<u16>) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        let mask = exps.iter().enumerate().filter(|(_, &e)| e > 0).fold(0u64, |m, (i, _)| m | (1 << (i % 64)));
        Monomial { exps: exps.into_boxed_slice(), deg, mask }
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        Monomial::new(e)
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u16> = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Monomial { exps: exps.into_boxed_slice(), deg: self.deg + other.deg, mask: self.mask | other.mask }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.mask & !other.mask == 0
            && self.deg <= other.deg
            && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial::new(other.exps.iter().zip(self.exps.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    /// Whether `lcm(self, other) == l`.
    pub fn lcm_equals(&self, other: &Monomial, l: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).zip(l.exps.iter()).all(|((a, b), c)| *a.max(b) == *c)
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.mask & other.mask == 0 || self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mode = point.first().map_or(FieldMode::Rational, Scalar::mode);
        let mut acc = Scalar::one(mode);
        for (x, &e) in point.iter().zip(self.exps.iter()) {
            if e > 0 {
                acc = &acc * &x.pow(e as u32);
            }
        }
        acc
    }

    pub fn format(&self, vars: &[Var]) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { vars[i].to_string() } else { format!("{}^{e}", vars[i]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Sparse polynomial in `nvars` variables with coefficients in a fixed field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    mode: FieldMode,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(mode: FieldMode, nvars: usize) -> Self {
        MultiPoly { nvars, mode, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        let mut p = MultiPoly::zero(c.mode(), nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn from_int(mode: FieldMode, nvars: usize, c: i64) -> Self {
        MultiPoly::constant(Scalar::from_int(mode, c), nvars)
    }

    pub fn var(mode: FieldMode, nvars: usize, v: usize) -> Self {
        let mut p = MultiPoly::zero(mode, nvars);
        p.add_term(Monomial::var(nvars, v), Scalar::one(mode));
        p
    }

    pub fn from_terms(mode: FieldMode, nvars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = MultiPoly::zero(mode, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().is_some_and(Monomial::is_one)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let v = &*existing + &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = v;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(self.mode))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero(self.mode, self.nvars);
        }
        MultiPoly { nvars: self.nvars, mode: self.mode, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.mode, self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            mode: self.mode,
            terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::from_int(self.mode, self.nvars, 1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        self.terms.iter().fold(Scalar::zero(self.mode), |acc, (m, c)| acc + c * &m.eval(point))
    }

    /// Variables that occur with a positive exponent.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    seen[i] = true;
                }
            }
        }
        (0..self.nvars).filter(|&i| seen[i]).collect()
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|m| m.exps()[v]).max().unwrap_or(0)
    }

    /// Replaces variable `v` by the polynomial `q`.
    pub fn substitute(&self, v: usize, q: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.mode, self.nvars);
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::from_int(self.mode, self.nvars, 1)];
        for (m, c) in &self.terms {
            let e = m.exps()[v] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * q;
                powers.push(next);
            }
            let mut rest = m.exps().to_vec();
            rest[v] = 0;
            let term = powers[e].mul_monomial(&Monomial::new(rest), c);
            out = &out + &term;
        }
        out
    }

    /// Substitutes fixed values for some variables (`None` keeps the variable).
    pub fn partial_eval(&self, values: &[Option<Scalar>]) -> MultiPoly {
        let mut out = MultiPoly::zero(self.mode, self.nvars);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = m.exps().to_vec();
            for (i, e) in rest.iter_mut().enumerate() {
                if *e > 0 {
                    if let Some(Some(x)) = values.get(i) {
                        coeff = &coeff * &x.pow(*e as u32);
                        *e = 0;
                    }
                }
            }
            out.add_term(Monomial::new(rest), coeff);
        }
        out
    }

    /// Multiplies by the inverse of the leading coefficient.
    pub fn monic(&self, order: MonomialOrder) -> MultiPoly {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Same polynomial over a different field; fails on non-real
    /// coefficients when narrowing.
    pub fn with_mode(&self, mode: FieldMode) -> Result<MultiPoly, PolyError> {
        let mut out = MultiPoly::zero(mode, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.with_mode(mode).map_err(|e| PolyError::Format(e.to_string()))?);
        }
        Ok(out)
    }

    pub fn format(&self, vars: &[Var], order: MonomialOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.cmp(b.0, a.0));
        let mut s = String::new();
        for (m, c) in terms {
            let neg = c.signum() == Some(-1);
            let mag = if neg { -c } else { c.clone() };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coeff = if mag.is_real() { mag.to_string() } else { format!("({mag})") };
            if m.is_one() {
                s.push_str(&coeff);
            } else if mag.is_one() {
                s.push_str(&m.format(vars));
            } else {
                s.push_str(&format!("{coeff}*{}", m.format(vars)));
            }
        }
        s
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.mode, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { nvars: self.nvars, mode: self.mode, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}
