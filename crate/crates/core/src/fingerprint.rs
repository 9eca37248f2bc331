//! Basis-independent invariants used to recognize algebras.

use serde::Serialize;

use crate::algebra::StructureTensor;
use crate::matrix::Matrix;
use crate::scalar::{FieldMode, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Fingerprint {
    /// `dim g, dim g', dim g'', …` until the dimension stabilizes or hits zero.
    pub derived_series: Vec<usize>,
    /// `dim g, dim [g,g], dim [g,[g,g]], …` with the same stopping rule.
    pub lower_central_series: Vec<usize>,
    pub center: usize,
    pub killing_rank: usize,
    /// `(positive, negative)` eigenvalue counts of the Killing form; only
    /// meaningful over the rationals, so absent in gaussian mode.
    pub killing_inertia: Option<(usize, usize)>,
    pub unimodular: bool,
}

/// Row-reduced basis of the span of `vectors`.
fn span_basis(mode: FieldMode, n: usize, vectors: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(mode, vectors).expect("uniform vectors");
    let rref = m.rref();
    (0..rref.pivots.len()).map(|r| rref.matrix.row(r)[..n].to_vec()).collect()
}

fn bracket_span(t: &StructureTensor, xs: &[Vec<Scalar>], ys: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    for x in xs {
        for y in ys {
            let v = t.bracket(x, y);
            if v.iter().any(|c| !c.is_zero()) {
                out.push(v);
            }
        }
    }
    span_basis(t.mode(), t.dim(), out)
}

fn series(t: &StructureTensor, derived: bool) -> Vec<usize> {
    let n = t.dim();
    let full: Vec<Vec<Scalar>> = (0..n).map(|i| unit(t.mode(), n, i)).collect();
    let mut dims = vec![n];
    let mut cur = full.clone();
    loop {
        let next = if derived { bracket_span(t, &cur, &cur) } else { bracket_span(t, &full, &cur) };
        let d = next.len();
        let prev = *dims.last().unwrap();
        dims.push(d);
        if d == 0 || d == prev {
            break;
        }
        cur = next;
    }
    dims
}

fn unit(mode: FieldMode, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(mode); n];
    v[i] = Scalar::one(mode);
    v
}

pub fn derived_series(t: &StructureTensor) -> Vec<usize> {
    series(t, true)
}

pub fn lower_central_series(t: &StructureTensor) -> Vec<usize> {
    series(t, false)
}

pub fn center_dim(t: &StructureTensor) -> usize {
    // x is central iff Σ_i x^i c_{ij}^k = 0 for all j, k.
    let n = t.dim();
    let mut m = Matrix::zeros(t.mode(), n * n, n);
    for j in 0..n {
        for k in 0..n {
            for i in 0..n {
                m.set(j * n + k, i, t.get(i, j, k).clone());
            }
        }
    }
    n - m.rank()
}

/// Killing form `K_{ij} = tr(ad e_i ∘ ad e_j)`.
pub fn killing_form(t: &StructureTensor) -> Matrix {
    let n = t.dim();
    let ads: Vec<Matrix> = (0..n).map(|i| t.ad(i)).collect();
    let mut k = Matrix::zeros(t.mode(), n, n);
    for i in 0..n {
        for j in i..n {
            let p = &ads[i] * &ads[j];
            let tr = (0..n).fold(Scalar::zero(t.mode()), |acc, d| acc + p.get(d, d).clone());
            k.set(i, j, tr.clone());
            k.set(j, i, tr);
        }
    }
    k
}

/// Sylvester inertia of a symmetric rational matrix by congruence diagonalization.
pub fn inertia(sym: &Matrix) -> (usize, usize) {
    let n = sym.rows();
    let mut m = sym.clone();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !m.get(i, i).is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // All remaining diagonal entries vanish: if some off-diagonal
                // m[i][j] ≠ 0, replacing e_i by e_i + e_j creates 2·m[i][j] on the diagonal.
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !m.get(i, j).is_zero());
                let Some((i, j)) = pair else { break };
                // row_i += row_j, col_i += col_j
                for c in 0..n {
                    let v = m.get(i, c) + m.get(j, c);
                    m.set(i, c, v);
                }
                for r in 0..n {
                    let v = m.get(r, i) + m.get(r, j);
                    m.set(r, i, v);
                }
                i
            }
        };
        let d = m.get(p, p).clone();
        match d.signum() {
            Some(1) => pos += 1,
            Some(-1) => neg += 1,
            _ => {}
        }
        let dinv = d.inv().expect("nonzero pivot");
        active.retain(|&i| i != p);
        for &r in &active {
            let f = m.get(r, p) * &dinv;
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = m.get(r, c) - &(&f * m.get(p, c));
                m.set(r, c, v);
            }
            for rr in 0..n {
                let v = m.get(rr, r) - &(&f * m.get(rr, p));
                m.set(rr, r, v);
            }
        }
    }
    (pos, neg)
}

pub fn is_unimodular(t: &StructureTensor) -> bool {
    let n = t.dim();
    (0..n).all(|i| (0..n).fold(Scalar::zero(t.mode()), |acc, k| acc + t.get(i, k, k).clone()).is_zero())
}

pub fn fingerprint(t: &StructureTensor) -> Fingerprint {
    let killing = killing_form(t);
    Fingerprint {
        derived_series: derived_series(t),
        lower_central_series: lower_central_series(t),
        center: center_dim(t),
        killing_rank: killing.rank(),
        killing_inertia: match t.mode() {
            FieldMode::Rational => Some(inertia(&killing)),
            FieldMode::Gaussian => None,
        },
        unimodular: is_unimodular(t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FieldMode::Rational;

    #[test]
    fn abelian() {
        let f = fingerprint(&StructureTensor::abelian(Rational, 4));
        assert_eq!(f.derived_series, vec![4, 0]);
        assert_eq!(f.center, 4);
        assert_eq!(f.killing_rank, 0);
        assert!(f.unimodular);
    }

    #[test]
    fn g41_is_filiform() {
        let t = StructureTensor::from_int_brackets(Rational, 4, &[(2, 4, 1, 1), (3, 4, 2, 1)]);
        let f = fingerprint(&t);
        assert_eq!(f.derived_series, vec![4, 2, 0]);
        assert_eq!(f.lower_central_series, vec![4, 2, 1, 0]);
        assert_eq!(f.center, 1);
        assert_eq!(f.killing_rank, 0);
    }

    #[test]
    fn two_g21() {
        let t = StructureTensor::from_int_brackets(Rational, 4, &[(1, 2, 1, 1), (3, 4, 3, 1)]);
        let f = fingerprint(&t);
        assert_eq!(f.derived_series, vec![4, 2, 0]);
        assert_eq!(f.lower_central_series, vec![4, 2, 2]);
        assert_eq!(f.center, 0);
        assert_eq!(f.killing_inertia, Some((2, 0)));
        assert!(!f.unimodular);
    }

    #[test]
    fn so3_is_definite() {
        let t = StructureTensor::from_int_brackets(Rational, 3, &[(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)]);
        assert_eq!(fingerprint(&t).killing_inertia, Some((0, 3)));
    }

    #[test]
    fn inertia_with_zero_diagonal() {
        let m = Matrix::from_ints(Rational, &[&[0, 1], &[1, 0]]);
        assert_eq!(inertia(&m), (1, 1));
    }
}
