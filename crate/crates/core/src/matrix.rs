//! Dense matrices over [`Scalar`] with exact Gauss–Jordan elimination.

use std::fmt;
use std::ops::Mul;

use crate::error::ArithError;
use crate::scalar::{FieldMode, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    mode: FieldMode,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(mode: FieldMode, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, mode, data: vec![Scalar::zero(mode); rows * cols] }
    }

    pub fn identity(mode: FieldMode, n: usize) -> Self {
        let mut m = Matrix::zeros(mode, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(mode));
        }
        m
    }

    pub fn diagonal(mode: FieldMode, entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(mode, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_rows(mode: FieldMode, rows: Vec<Vec<Scalar>>) -> Result<Self, ArithError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ArithError::DimensionMismatch("ragged matrix rows".into()));
        }
        if rows.iter().flatten().any(|x| x.mode() != mode) {
            return Err(ArithError::FieldModeMismatch);
        }
        Ok(Matrix { rows: r, cols: c, mode, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(mode: FieldMode, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|&v| Scalar::from_int(mode, v)).collect())
            .collect();
        Matrix::from_rows(mode, rows).expect("rectangular integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.mode(), self.mode);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.mode, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix, ArithError> {
        if self.cols != other.rows {
            return Err(ArithError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.mode != other.mode {
            return Err(ArithError::FieldModeMismatch);
        }
        let mut out = Matrix::zeros(self.mode, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + &(a * b);
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(self.mode), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, mode: self.mode, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            mode: self.mode,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(p) = (pr..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(pr, p);
            let inv = m.get(pr, c).inv().expect("nonzero pivot");
            for cc in c..m.cols {
                let v = m.get(pr, cc) * &inv;
                m.set(pr, cc, v);
            }
            for r in 0..m.rows {
                if r == pr {
                    continue;
                }
                let f = m.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for cc in c..m.cols {
                    let sub = &f * m.get(pr, cc);
                    if !sub.is_zero() {
                        let v = m.get(r, cc) - &sub;
                        m.set(r, cc, v);
                    }
                }
            }
            pivots.push(c);
            pr += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space `{x : M x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(self.mode); self.cols];
                v[f] = Scalar::one(self.mode);
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -matrix.get(r, f);
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> Result<Scalar, ArithError> {
        if !self.is_square() {
            return Err(ArithError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one(self.mode);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return Ok(Scalar::zero(self.mode));
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv()?;
            for r in c + 1..n {
                let f = m.get(r, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for cc in c..n {
                    let v = m.get(r, cc) - &(&f * m.get(c, cc));
                    m.set(r, cc, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix, ArithError> {
        if !self.is_square() {
            return Err(ArithError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.mode, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one(self.mode));
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(ArithError::Singular);
        }
        let mut inv = Matrix::zeros(self.mode, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, matrix.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }

    /// Parses a JSON array of rows of scalar strings.
    pub fn from_json(mode: FieldMode, text: &str) -> Result<Matrix, crate::Error> {
        let raw: Vec<Vec<serde_json::Value>> = serde_json::from_str(text)?;
        let rows = raw
            .into_iter()
            .map(|row| row.into_iter().map(|v| scalar_from_json(mode, &v)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_rows(mode, rows)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|r| serde_json::Value::Array(self.row(r).iter().map(|x| serde_json::to_value(x).unwrap()).collect()))
                .collect(),
        )
    }
}

/// Reads a scalar from a JSON string, number or `{"re","im"}` object,
/// coercing it into `mode`.
pub fn scalar_from_json(mode: FieldMode, v: &serde_json::Value) -> Result<Scalar, crate::Error> {
    match v {
        serde_json::Value::String(s) => Ok(Scalar::parse(mode, s)?),
        serde_json::Value::Number(n) => Ok(Scalar::parse(mode, &n.to_string())?),
        serde_json::Value::Object(_) => {
            let s: Scalar = serde_json::from_value(v.clone())?;
            Ok(s.with_mode(mode)?)
        }
        other => Err(crate::Error::Format(format!("expected a scalar, found {other}"))),
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FieldMode::Rational;

    #[test]
    fn det_and_inverse() {
        let a = Matrix::from_ints(Rational, &[&[1, 0, 0, 1], &[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 1, 1, 1]]);
        assert!(a.det().unwrap().is_one());
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(Rational, 4));
    }

    #[test]
    fn singular_inverse() {
        let a = Matrix::from_ints(Rational, &[&[1, 2], &[2, 4]]);
        assert_eq!(a.inverse(), Err(ArithError::Singular));
        assert!(a.det().unwrap().is_zero());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = Matrix::from_ints(Rational, &[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn json_round_trip() {
        let a = Matrix::from_ints(Rational, &[&[1, -2], &[0, 3]]);
        let text = a.to_json().to_string();
        assert_eq!(text, r#"[["1","-2"],["0","3"]]"#);
        assert_eq!(Matrix::from_json(Rational, &text).unwrap(), a);
    }
}
