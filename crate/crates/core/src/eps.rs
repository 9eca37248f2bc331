//! Exact functions of the contraction parameter ε.
//!
//! [`EpsPoly`] is a Laurent polynomial in ε, [`EpsRational`] a quotient of two
//! of them kept in a normal form, and [`EpsMatrix`] a square matrix of such
//! quotients. Limits as ε → +0 are decided exactly from orders at zero.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::ArithError;
use crate::matrix::Matrix;
use crate::scalar::{FieldMode, Scalar};

/// Order of vanishing at ε = 0; the zero function has infinite order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<i64> {
        match self {
            Order::Finite(v) => Some(v),
            Order::Infinite => None,
        }
    }
}

impl PartialOrd for Order {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Order {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => a.cmp(b),
            (Order::Finite(_), Order::Infinite) => Ordering::Less,
            (Order::Infinite, Order::Finite(_)) => Ordering::Greater,
            (Order::Infinite, Order::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for Order {
    type Output = Order;
    fn add(self, rhs: Order) -> Order {
        match (self, rhs) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => f.write_str("+inf"),
        }
    }
}

/// Laurent polynomial `Σ c_e ε^e` with only nonzero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsPoly {
    mode: FieldMode,
    terms: BTreeMap<i64, Scalar>,
}

impl EpsPoly {
    pub fn zero(mode: FieldMode) -> Self {
        EpsPoly { mode, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        EpsPoly::monomial(c, 0)
    }

    pub fn monomial(c: Scalar, exp: i64) -> Self {
        let mode = c.mode();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        EpsPoly { mode, terms }
    }

    pub fn from_terms(mode: FieldMode, terms: impl IntoIterator<Item = (i64, Scalar)>) -> Self {
        let mut p = EpsPoly::zero(mode);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> Scalar {
        self.terms.get(&exp).cloned().unwrap_or_else(|| Scalar::zero(self.mode))
    }

    pub fn order(&self) -> Order {
        self.terms.keys().next().map_or(Order::Infinite, |&e| Order::Finite(e))
    }

    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn lowest_coeff(&self) -> Option<&Scalar> {
        self.terms.values().next()
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.values().next_back()
    }

    fn add_term(&mut self, e: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let v = &*existing + &c;
                if v.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = v;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn shift(&self, k: i64) -> EpsPoly {
        EpsPoly { mode: self.mode, terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> EpsPoly {
        if s.is_zero() {
            return EpsPoly::zero(self.mode);
        }
        EpsPoly { mode: self.mode, terms: self.terms.iter().map(|(&e, c)| (e, c * s)).collect() }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Dense coefficient vector (ascending powers) of a polynomial with
    /// nonnegative exponents.
    fn to_dense(&self) -> Vec<Scalar> {
        let deg = self.degree().unwrap_or(0);
        debug_assert!(self.order().finite().map_or(true, |o| o >= 0));
        let mut v = vec![Scalar::zero(self.mode); (deg + 1) as usize];
        for (&e, c) in &self.terms {
            v[e as usize] = c.clone();
        }
        v
    }

    fn from_dense(mode: FieldMode, v: Vec<Scalar>) -> EpsPoly {
        EpsPoly::from_terms(mode, v.into_iter().enumerate().map(|(e, c)| (e as i64, c)))
    }
}

impl Add for &EpsPoly {
    type Output = EpsPoly;
    fn add(self, rhs: &EpsPoly) -> EpsPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &EpsPoly {
    type Output = EpsPoly;
    fn sub(self, rhs: &EpsPoly) -> EpsPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &EpsPoly {
    type Output = EpsPoly;
    fn mul(self, rhs: &EpsPoly) -> EpsPoly {
        let mut out = EpsPoly::zero(self.mode);
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        EpsPoly { mode: self.mode, terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }
}

impl Serialize for EpsPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, c)| match e {
                0 => format!("({c})"),
                1 => format!("({c})·ε"),
                _ => format!("({c})·ε^{e}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

// Dense univariate helpers over the scalar field.

fn trim(v: &mut Vec<Scalar>) {
    while v.len() > 1 && v.last().is_some_and(Scalar::is_zero) {
        v.pop();
    }
}

fn dense_rem(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    dense_divrem(a, b).1
}

fn dense_divrem(a: &[Scalar], b: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let mode = b[0].mode();
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb_inv = b[db].inv().expect("nonzero leading coefficient");
    if r.len() < b.len() {
        return (vec![Scalar::zero(mode)], r);
    }
    let mut q = vec![Scalar::zero(mode); r.len() - db];
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() * &lb_inv;
        for (k, bc) in b.iter().enumerate() {
            let v = &r[shift + k] - &(&f * bc);
            r[shift + k] = v;
        }
        q[shift] = f;
        r.pop();
        trim(&mut r);
        if r.len() < b.len() {
            break;
        }
    }
    (q, r)
}

fn dense_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

fn dense_gcd(a: Vec<Scalar>, b: Vec<Scalar>) -> Vec<Scalar> {
    let (mut a, mut b) = (a, b);
    trim(&mut a);
    trim(&mut b);
    while !dense_is_zero(&b) {
        let r = dense_rem(&a, &b);
        a = b;
        b = r;
        trim(&mut b);
    }
    let lc_inv = a.last().unwrap().inv().expect("nonzero gcd");
    a.iter().map(|c| c * &lc_inv).collect()
}

/// A quotient `num / den` of Laurent polynomials in normal form: the
/// denominator has a nonzero constant term, is coprime to the numerator and
/// has leading coefficient 1. The zero function is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsRational {
    num: EpsPoly,
    den: EpsPoly,
}

impl EpsRational {
    pub fn new(num: EpsPoly, den: EpsPoly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if num.mode() != den.mode() {
            return Err(ArithError::FieldModeMismatch);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn zero(mode: FieldMode) -> Self {
        EpsRational { num: EpsPoly::zero(mode), den: EpsPoly::constant(Scalar::one(mode)) }
    }

    pub fn one(mode: FieldMode) -> Self {
        EpsRational::constant(Scalar::one(mode))
    }

    pub fn constant(c: Scalar) -> Self {
        let mode = c.mode();
        EpsRational { num: EpsPoly::constant(c), den: EpsPoly::constant(Scalar::one(mode)) }
    }

    /// `c · ε^exp`.
    pub fn monomial(c: Scalar, exp: i64) -> Self {
        let mode = c.mode();
        EpsRational { num: EpsPoly::monomial(c, exp), den: EpsPoly::constant(Scalar::one(mode)) }
    }

    pub fn from_poly(p: EpsPoly) -> Self {
        let mode = p.mode();
        Self::normalize(p, EpsPoly::constant(Scalar::one(mode)))
    }

    pub fn mode(&self) -> FieldMode {
        self.num.mode()
    }

    pub fn num(&self) -> &EpsPoly {
        &self.num
    }

    pub fn den(&self) -> &EpsPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn den_is_one(&self) -> bool {
        self.den.terms.len() == 1 && self.den.terms.get(&0).is_some_and(Scalar::is_one)
    }

    fn normalize(num: EpsPoly, den: EpsPoly) -> Self {
        let mode = num.mode();
        if num.is_zero() {
            return EpsRational::zero(mode);
        }
        let dk = den.order().finite().expect("nonzero denominator");
        let mut num = num.shift(-dk);
        let mut den = den.shift(-dk);
        if den.degree() != Some(0) {
            let nk = num.order().finite().unwrap();
            let g = dense_gcd(num.shift(-nk).to_dense(), den.to_dense());
            if g.len() > 1 {
                let (qn, _) = dense_divrem(&num.shift(-nk).to_dense(), &g);
                let (qd, _) = dense_divrem(&den.to_dense(), &g);
                num = EpsPoly::from_dense(mode, qn).shift(nk);
                den = EpsPoly::from_dense(mode, qd);
            }
        }
        let lc = den.leading_coeff().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.inv().unwrap();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        EpsRational { num, den }
    }

    /// `ord₀(f) = order(num) − order(den)`; infinite for the zero function.
    pub fn ord_at_zero(&self) -> Order {
        match (self.num.order(), self.den.order()) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a - b),
            _ => Order::Infinite,
        }
    }

    /// The limit as ε → +0, or `None` when the function diverges.
    pub fn limit_at_zero(&self) -> Option<Scalar> {
        match self.ord_at_zero() {
            Order::Infinite => Some(Scalar::zero(self.mode())),
            Order::Finite(o) if o > 0 => Some(Scalar::zero(self.mode())),
            Order::Finite(0) => {
                Some(self.num.lowest_coeff().unwrap() / self.den.lowest_coeff().unwrap())
            }
            Order::Finite(_) => None,
        }
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    /// Equality by cross-multiplication, valid for unnormalized inputs too.
    pub fn cross_eq(&self, other: &EpsRational) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Evaluates at a nonzero rational point.
    pub fn eval(&self, eps: &Scalar) -> Option<Scalar> {
        let ev = |p: &EpsPoly| {
            p.terms().fold(Scalar::zero(p.mode()), |acc, (e, c)| {
                let pw = if e >= 0 { eps.pow(e as u32) } else { eps.inv().unwrap().pow((-e) as u32) };
                acc + c * &pw
            })
        };
        let d = ev(&self.den);
        if d.is_zero() {
            return None;
        }
        Some(ev(&self.num) / d)
    }
}

impl Add for &EpsRational {
    type Output = EpsRational;
    fn add(self, rhs: &EpsRational) -> EpsRational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den_is_one() && rhs.den_is_one() {
            return EpsRational { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        if self.den == rhs.den {
            return EpsRational::normalize(&self.num + &rhs.num, self.den.clone());
        }
        EpsRational::normalize(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &EpsRational {
    type Output = EpsRational;
    fn sub(self, rhs: &EpsRational) -> EpsRational {
        self + &(-rhs)
    }
}

impl Mul for &EpsRational {
    type Output = EpsRational;
    fn mul(self, rhs: &EpsRational) -> EpsRational {
        if self.is_zero() || rhs.is_zero() {
            return EpsRational::zero(self.mode());
        }
        if self.den_is_one() && rhs.den_is_one() {
            return EpsRational { num: &self.num * &rhs.num, den: self.den.clone() };
        }
        EpsRational::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &EpsRational {
    type Output = EpsRational;
    fn neg(self) -> EpsRational {
        EpsRational { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for EpsRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den_is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

/// Square matrix of ε-rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsMatrix {
    n: usize,
    mode: FieldMode,
    entries: Vec<EpsRational>,
}

impl EpsMatrix {
    pub fn zeros(mode: FieldMode, n: usize) -> Self {
        EpsMatrix { n, mode, entries: vec![EpsRational::zero(mode); n * n] }
    }

    pub fn identity(mode: FieldMode, n: usize) -> Self {
        let mut m = EpsMatrix::zeros(mode, n);
        for i in 0..n {
            m.set(i, i, EpsRational::one(mode));
        }
        m
    }

    /// `diag(ε^{α₁}, …, ε^{αₙ})`.
    pub fn diag_powers(mode: FieldMode, exponents: &[i64]) -> Self {
        let n = exponents.len();
        let mut m = EpsMatrix::zeros(mode, n);
        for (i, &a) in exponents.iter().enumerate() {
            m.set(i, i, EpsRational::monomial(Scalar::one(mode), a));
        }
        m
    }

    pub fn from_constant(a: &Matrix) -> Self {
        assert!(a.is_square());
        let n = a.rows();
        EpsMatrix {
            n,
            mode: a.mode(),
            entries: a.entries().iter().map(|c| EpsRational::constant(c.clone())).collect(),
        }
    }

    pub fn from_entries(mode: FieldMode, n: usize, entries: Vec<EpsRational>) -> Result<Self, ArithError> {
        if entries.len() != n * n {
            return Err(ArithError::DimensionMismatch(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        if entries.iter().any(|e| e.mode() != mode) {
            return Err(ArithError::FieldModeMismatch);
        }
        Ok(EpsMatrix { n, mode, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    pub fn get(&self, r: usize, c: usize) -> &EpsRational {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: EpsRational) {
        self.entries[r * self.n + c] = v;
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|c| {
                let e = self.get(r, c);
                if r == c {
                    *e == EpsRational::one(self.mode)
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn mul(&self, other: &EpsMatrix) -> EpsMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = EpsMatrix::zeros(self.mode, n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = EpsRational::zero(self.mode);
                for k in 0..n {
                    let a = self.get(r, k);
                    let b = other.get(k, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.n {
            self.entries.swap(a * self.n + c, b * self.n + c);
        }
    }

    pub fn det(&self) -> EpsRational {
        let n = self.n;
        let mut m = self.clone();
        let mut det = EpsRational::one(self.mode);
        for c in 0..n {
            let Some(p) = pick_pivot(&m, c) else {
                return EpsRational::zero(self.mode);
            };
            if p != c {
                m.swap_rows(p, c);
                det = -&det;
            }
            let pivot = m.get(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv().unwrap();
            for r in c + 1..n {
                if m.get(r, c).is_zero() {
                    continue;
                }
                let f = m.get(r, c) * &inv;
                for cc in c..n {
                    let v = m.get(r, cc) - &(&f * m.get(c, cc));
                    m.set(r, cc, v);
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss–Jordan elimination over the field of
    /// ε-rational functions.
    pub fn inverse(&self) -> Result<EpsMatrix, ArithError> {
        let n = self.n;
        let mut m = self.clone();
        let mut inv = EpsMatrix::identity(self.mode, n);
        for c in 0..n {
            let p = pick_pivot(&m, c).ok_or(ArithError::Singular)?;
            if p != c {
                m.swap_rows(p, c);
                inv.swap_rows(p, c);
            }
            let pinv = m.get(c, c).inv()?;
            for cc in 0..n {
                let v = m.get(c, cc) * &pinv;
                m.set(c, cc, v);
                let w = inv.get(c, cc) * &pinv;
                inv.set(c, cc, w);
            }
            for r in 0..n {
                if r == c || m.get(r, c).is_zero() {
                    continue;
                }
                let f = m.get(r, c).clone();
                for cc in 0..n {
                    let v = m.get(r, cc) - &(&f * m.get(c, cc));
                    m.set(r, cc, v);
                    let w = inv.get(r, cc) - &(&f * inv.get(c, cc));
                    inv.set(r, cc, w);
                }
            }
        }
        Ok(inv)
    }
}

/// Pivot choice: a nonzero entry of lowest order in column `c` at or below row `c`.
fn pick_pivot(m: &EpsMatrix, c: usize) -> Option<usize> {
    (c..m.n).filter(|&r| !m.get(r, c).is_zero()).min_by_key(|&r| (m.get(r, c).ord_at_zero(), r))
}

impl fmt::Display for EpsMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FieldMode::Rational;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(Rational, v)
    }

    fn poly(terms: &[(i64, i64)]) -> EpsPoly {
        EpsPoly::from_terms(Rational, terms.iter().map(|&(e, c)| (e, s(c))))
    }

    fn rat(num: &[(i64, i64)], den: &[(i64, i64)]) -> EpsRational {
        EpsRational::new(poly(num), poly(den)).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(rat(&[(3, 1)], &[(1, 1)]).ord_at_zero(), Order::Finite(2));
        assert_eq!(rat(&[(0, 1), (1, 1)], &[(2, 1)]).ord_at_zero(), Order::Finite(-2));
        assert_eq!(EpsRational::zero(Rational).ord_at_zero(), Order::Infinite);
    }

    #[test]
    fn limits() {
        assert_eq!(rat(&[(2, 1)], &[(0, 1), (1, 1)]).limit_at_zero(), Some(s(0)));
        assert_eq!(rat(&[(0, 2), (1, 1)], &[(0, 1), (1, 3)]).limit_at_zero(), Some(s(2)));
        assert_eq!(rat(&[(0, 1)], &[(1, 1)]).limit_at_zero(), None);
    }

    #[test]
    fn normal_form_cancels_common_factor() {
        // (ε² − 1)/(ε − 1) = ε + 1
        let f = rat(&[(2, 1), (0, -1)], &[(1, 1), (0, -1)]);
        assert_eq!(f, EpsRational::from_poly(poly(&[(1, 1), (0, 1)])));
        // ε³/(2ε) = ε²/2
        let g = rat(&[(3, 1)], &[(1, 2)]);
        assert_eq!(g, EpsRational::monomial(Scalar::from_ratio(Rational, 1, 2), 2));
    }

    #[test]
    fn zero_denominator() {
        assert_eq!(EpsRational::new(poly(&[(0, 1)]), EpsPoly::zero(Rational)), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn diagonal_inverse() {
        let w = EpsMatrix::diag_powers(Rational, &[3, 2, 1, 1]);
        assert_eq!(w.inverse().unwrap(), EpsMatrix::diag_powers(Rational, &[-3, -2, -1, -1]));
    }

    #[test]
    fn singular_zero_row() {
        let mut m = EpsMatrix::identity(Rational, 3);
        m.set(1, 1, EpsRational::zero(Rational));
        assert_eq!(m.inverse(), Err(ArithError::Singular));
        assert!(m.det().is_zero());
    }

    #[test]
    fn product_of_constant_and_diagonal_inverts() {
        let a = Matrix::from_ints(Rational, &[&[1, 0, 0, 1], &[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 1, 1, 1]]);
        let aw = EpsMatrix::from_constant(&a).mul(&EpsMatrix::diag_powers(Rational, &[3, 2, 1, 1]));
        let inv = aw.inverse().unwrap();
        assert!(aw.mul(&inv).is_identity());
        let expected = EpsMatrix::diag_powers(Rational, &[-3, -2, -1, -1])
            .mul(&EpsMatrix::from_constant(&a.inverse().unwrap()));
        assert_eq!(inv, expected);
    }

    #[test]
    fn serializes_exponent_map() {
        let p = poly(&[(-1, 2), (3, -1)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"-1":"2","3":"-1"}"#);
    }
}
