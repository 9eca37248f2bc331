//! Lie algebras given by structure constants in a fixed basis.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{ArithError, Error, Result};
use crate::matrix::{scalar_from_json, Matrix};
use crate::scalar::{FieldMode, Scalar};

/// Structure constants `c[i][j][k]`, the coefficient of `e_k` in `[e_i, e_j]`.
///
/// Indices are 0-based in the API; every textual form uses 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructureTensor {
    n: usize,
    mode: FieldMode,
    c: Vec<Scalar>,
}

/// A failed axiom, reported with 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// `c_{ij}^k + c_{ji}^k ≠ 0`.
    Antisymmetry { i: usize, j: usize, k: usize },
    /// The Jacobi sum for `(e_i, e_j, e_k)` has a nonzero `e_l` component.
    Jacobi { i: usize, j: usize, k: usize, l: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { i, j, k } => write!(f, "antisymmetry fails at ({i},{j},{k})"),
            Violation::Jacobi { i, j, k, l } => write!(f, "Jacobi identity fails for ({i},{j},{k}) in component {l}"),
        }
    }
}

/// One `i<j` entry of the bracket table, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: Scalar,
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    #[serde(default)]
    name: Option<String>,
    dim: usize,
    #[serde(default = "default_field")]
    field: String,
    brackets: Vec<RawBracket>,
}

#[derive(Serialize, Deserialize)]
struct RawBracket {
    i: usize,
    j: usize,
    k: usize,
    c: Value,
}

fn default_field() -> String {
    FieldMode::Rational.tag().to_string()
}

impl StructureTensor {
    pub fn abelian(mode: FieldMode, n: usize) -> Self {
        StructureTensor { n, mode, c: vec![Scalar::zero(mode); n * n * n] }
    }

    /// Builds a tensor from 1-based `(i, j, k, c)` entries with `[e_i, e_j] ∋ c·e_k`.
    /// The antisymmetric partner `c_{ji}^k = −c` is filled in; `i = j` is rejected.
    pub fn from_brackets(mode: FieldMode, n: usize, entries: &[(usize, usize, usize, Scalar)]) -> Result<Self> {
        let mut t = StructureTensor::abelian(mode, n);
        for (i, j, k, c) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i == 0 || j == 0 || k == 0 || i > n || j > n || k > n {
                return Err(Error::Format(format!("bracket index ({i},{j},{k}) out of range 1..={n}")));
            }
            if i == j {
                return Err(Error::Format(format!("bracket [e{i},e{i}] must vanish")));
            }
            let c = c.with_mode(mode)?;
            let cur = t.get(i - 1, j - 1, k - 1).clone();
            t.set(i - 1, j - 1, k - 1, &cur + &c);
            t.set(j - 1, i - 1, k - 1, -(&cur + &c));
        }
        Ok(t)
    }

    /// Integer-constant convenience constructor, 1-based.
    pub fn from_int_brackets(mode: FieldMode, n: usize, entries: &[(usize, usize, usize, i64)]) -> Self {
        let entries: Vec<_> = entries.iter().map(|&(i, j, k, c)| (i, j, k, Scalar::from_int(mode, c))).collect();
        StructureTensor::from_brackets(mode, n, &entries).expect("valid bracket table")
    }

    /// Wraps raw constants without completing or checking them.
    pub fn from_raw(mode: FieldMode, n: usize, c: Vec<Scalar>) -> Result<Self> {
        if c.len() != n * n * n {
            return Err(Error::DimensionMismatch(format!("{} constants for dimension {n}", c.len())));
        }
        if c.iter().any(|x| x.mode() != mode) {
            return Err(ArithError::FieldModeMismatch.into());
        }
        Ok(StructureTensor { n, mode, c })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let idx = self.idx(i, j, k);
        self.c[idx] = v;
    }

    pub fn constants(&self) -> &[Scalar] {
        &self.c
    }

    pub fn with_mode(&self, mode: FieldMode) -> Result<Self> {
        let c = self.c.iter().map(|x| x.with_mode(mode)).collect::<Result<Vec<_>, _>>()?;
        Ok(StructureTensor { n: self.n, mode, c })
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    /// Nonzero constants as 0-based `(i, j, k, c)`, both orders of `i, j`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> + '_ {
        let n = self.n;
        self.c.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(idx, c)| {
            (idx / (n * n), (idx / n) % n, idx % n, c)
        })
    }

    /// The `i<j` bracket table, 1-based.
    pub fn brackets(&self) -> Vec<BracketEntry> {
        self.nonzero()
            .filter(|(i, j, _, _)| i < j)
            .map(|(i, j, k, c)| BracketEntry { i: i + 1, j: j + 1, k: k + 1, c: c.clone() })
            .collect()
    }

    /// `[x, y]` for coordinate vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(self.mode); self.n];
        for (i, j, k, c) in self.nonzero() {
            if x[i].is_zero() || y[j].is_zero() {
                continue;
            }
            out[k] = &out[k] + &(&(&x[i] * &y[j]) * c);
        }
        out
    }

    /// Matrix of `ad e_i`: column `j` holds the coordinates of `[e_i, e_j]`.
    pub fn ad(&self, i: usize) -> Matrix {
        let mut m = Matrix::zeros(self.mode, self.n, self.n);
        for j in 0..self.n {
            for k in 0..self.n {
                m.set(k, j, self.get(i, j, k).clone());
            }
        }
        m
    }

    pub fn validate(&self) -> Vec<Violation> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if !(self.get(i, j, k) + self.get(j, i, k)).is_zero() {
                        out.push(Violation::Antisymmetry { i: i + 1, j: j + 1, k: k + 1 });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = Scalar::zero(self.mode);
                        for m in 0..n {
                            for (a, b, c) in [(i, j, k), (k, i, j), (j, k, i)] {
                                let x = self.get(a, b, m);
                                if x.is_zero() {
                                    continue;
                                }
                                s = &s + &(x * self.get(m, c, l));
                            }
                        }
                        if !s.is_zero() {
                            out.push(Violation::Jacobi { i: i + 1, j: j + 1, k: k + 1, l: l + 1 });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_lie_algebra(&self) -> bool {
        self.validate().is_empty()
    }

    /// Constants in the basis `e'_{i'} = Σ_i u^i_{i'} e_i` given by the columns of `u`.
    pub fn change_basis(&self, u: &Matrix) -> Result<Self> {
        if !u.is_square() || u.rows() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} basis change for dimension {}",
                u.rows(),
                u.cols(),
                self.n
            )));
        }
        if u.mode() != self.mode {
            return Err(ArithError::FieldModeMismatch.into());
        }
        let uinv = u.inverse()?;
        let cols: Vec<Vec<Scalar>> = (0..self.n).map(|c| u.column(c)).collect();
        let mut out = StructureTensor::abelian(self.mode, self.n);
        for a in 0..self.n {
            for b in a + 1..self.n {
                let w = uinv.mul_vec(&self.bracket(&cols[a], &cols[b]));
                for (k, v) in w.into_iter().enumerate() {
                    out.set(b, a, k, -&v);
                    out.set(a, b, k, v);
                }
            }
        }
        Ok(out)
    }

    pub fn from_json_str(text: &str) -> Result<(Option<String>, Self)> {
        let file: AlgebraFile = serde_json::from_str(text)?;
        let mode = FieldMode::from_tag(&file.field)
            .ok_or_else(|| Error::Format(format!("unknown field {:?}, expected \"Q\" or \"Q(i)\"", file.field)))?;
        let entries = file
            .brackets
            .iter()
            .map(|b| {
                if b.i >= b.j {
                    return Err(Error::Format(format!("bracket entries need i<j, got ({},{})", b.i, b.j)));
                }
                Ok((b.i, b.j, b.k, scalar_from_json(mode, &b.c)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let t = StructureTensor::from_brackets(mode, file.dim, &entries)?;
        let violations = t.validate();
        if let Some(v) = violations.first() {
            return Err(Error::InvalidAlgebra(format!("{v} ({} violations)", violations.len())));
        }
        Ok((file.name, t))
    }

    pub fn to_json(&self, name: Option<&str>) -> Value {
        let brackets: Vec<Value> = self
            .brackets()
            .into_iter()
            .map(|b| serde_json::json!({"i": b.i, "j": b.j, "k": b.k, "c": b.c.to_string()}))
            .collect();
        let mut v = serde_json::json!({
            "dim": self.n,
            "field": self.mode.tag(),
            "brackets": brackets,
        });
        if let Some(name) = name {
            v["name"] = Value::String(name.to_string());
        }
        v
    }
}

fn basis_combination(terms: &[(usize, Scalar)]) -> String {
    let mut s = String::new();
    for (k, c) in terms {
        let neg = c.signum() == Some(-1);
        let mag = if neg { -c } else { c.clone() };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            s.push_str(&format!("e{}", k + 1));
        } else if mag.is_real() {
            s.push_str(&format!("{mag}*e{}", k + 1));
        } else {
            s.push_str(&format!("({mag})*e{}", k + 1));
        }
    }
    s
}

impl fmt::Display for StructureTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lines = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let terms: Vec<(usize, Scalar)> = (0..self.n)
                    .filter(|&k| !self.get(i, j, k).is_zero())
                    .map(|k| (k, self.get(i, j, k).clone()))
                    .collect();
                if !terms.is_empty() {
                    lines.push(format!("[e{},e{}] = {}", i + 1, j + 1, basis_combination(&terms)));
                }
            }
        }
        if lines.is_empty() {
            write!(f, "abelian (dim {})", self.n)
        } else {
            f.write_str(&lines.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FieldMode::Rational;

    fn two_g21() -> StructureTensor {
        StructureTensor::from_int_brackets(Rational, 4, &[(1, 2, 1, 1), (3, 4, 3, 1)])
    }

    #[test]
    fn catalog_style_tables_validate() {
        assert!(two_g21().validate().is_empty());
        assert!(StructureTensor::abelian(Rational, 4).validate().is_empty());
    }

    #[test]
    fn antisymmetry_violation_reported() {
        let mut t = StructureTensor::abelian(Rational, 2);
        t.set(0, 1, 0, Scalar::one(Rational));
        t.set(1, 0, 0, Scalar::one(Rational));
        assert!(t.validate().contains(&Violation::Antisymmetry { i: 1, j: 2, k: 1 }));
    }

    #[test]
    fn jacobi_violation_reported() {
        // [e1,e2]=e3, [e1,e3]=e1 with everything else zero breaks Jacobi.
        let t = StructureTensor::from_int_brackets(Rational, 3, &[(1, 2, 3, 1), (1, 3, 1, 1)]);
        assert!(t.validate().iter().any(|v| matches!(v, Violation::Jacobi { .. })));
    }

    #[test]
    fn heisenberg_rescaling() {
        let h = StructureTensor::from_int_brackets(Rational, 3, &[(1, 2, 3, 1)]);
        let lambda = Scalar::from_int(Rational, 5);
        let u = Matrix::diagonal(Rational, &[Scalar::one(Rational), Scalar::one(Rational), lambda.clone()]);
        let h2 = h.change_basis(&u).unwrap();
        assert_eq!(h2.get(0, 1, 2), &lambda.inv().unwrap());
        assert_eq!(h2.get(1, 0, 2), &-lambda.inv().unwrap());
    }

    #[test]
    fn identity_change_is_noop() {
        let t = two_g21();
        assert_eq!(t.change_basis(&Matrix::identity(Rational, 4)).unwrap(), t);
    }

    #[test]
    fn singular_change_rejected() {
        let t = two_g21();
        let err = t.change_basis(&Matrix::zeros(Rational, 4, 4)).unwrap_err();
        assert!(matches!(err, Error::Arith(ArithError::Singular)));
    }

    #[test]
    fn json_round_trip() {
        let t = two_g21();
        let text = t.to_json(Some("2A2.1")).to_string();
        let (name, back) = StructureTensor::from_json_str(&text).unwrap();
        assert_eq!(name.as_deref(), Some("2A2.1"));
        assert_eq!(back, t);
    }

    #[test]
    fn json_rejects_invalid_algebra() {
        let text = r#"{"dim":3,"field":"Q","brackets":[{"i":1,"j":2,"k":3,"c":"1"},{"i":1,"j":3,"k":1,"c":"1"}]}"#;
        assert!(matches!(StructureTensor::from_json_str(text), Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn display_lists_brackets() {
        let t = StructureTensor::from_int_brackets(Rational, 4, &[(3, 4, 2, 1), (3, 4, 3, 1)]);
        assert_eq!(t.to_string(), "[e3,e4] = e2 + e3");
    }
}
