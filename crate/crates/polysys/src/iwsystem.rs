//! Polynomial systems whose solutions are the matrices `A` realizing a
//! generalized IW contraction `source → target` with `U_ε = A·W_ε`.
//!
//! With `B = A⁻¹` and `L_ijk = Σ a^{i'}_i a^{j'}_j b^k_{k'} c^{k'}_{i'j'}`, the
//! transformed constant in front of `ε^{α_i+α_j−α_k}` is `L_ijk`, so each
//! triple gives `L = 0` (negative exponent), `L = c₀` (zero exponent) or,
//! for a positive exponent, the requirement `c₀ = 0`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use iwc_core::{FieldMode, Matrix, Scalar, Signature, StructureTensor};

use crate::error::PolyError;
use crate::ideal::Ideal;
use crate::poly::{MonomialOrder, MultiPoly, Var};

/// How `B = A⁻¹` enters the system.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InverseEncoding {
    /// `B` replaced by the adjugate (times `t` under a det slack).
    #[default]
    Cofactor,
    /// `B` kept as unknowns with all `A·B = I` equations.
    ExplicitInverse,
    /// No inverse at all: `[A e_i, A e_j] = A·X` where the unconstrained
    /// entries of `X` are fresh unknowns `x_m`.
    Virtual,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Nonsingularity {
    /// `t·det(A) − 1`.
    #[default]
    DetSlack,
    /// `det(A) − 1`.
    UnitDeterminant,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SystemOptions {
    pub encoding: InverseEncoding,
    pub nonsingularity: Nonsingularity,
    pub order: MonomialOrder,
}

impl SystemOptions {
    pub fn new(encoding: InverseEncoding, nonsingularity: Nonsingularity) -> Self {
        SystemOptions { encoding, nonsingularity, order: MonomialOrder::default() }
    }
}

/// Generated system plus the bookkeeping needed to map a matrix to a point.
#[derive(Clone, Debug)]
pub struct IwSystem {
    pub ideal: Ideal,
    pub n: usize,
    pub sig: Signature,
    pub options: SystemOptions,
    /// `(i, j, k)` (0-based) of each virtual unknown `x_{m+1}`.
    pub virtual_slots: Vec<(usize, usize, usize)>,
}

/// Exponent class of a triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Vanish,
    Target,
    Free,
}

pub fn slot(sig: &Signature, i: usize, j: usize, k: usize) -> Slot {
    let a = sig.exponents();
    match (a[i] + a[j] - a[k]).signum() {
        -1 => Slot::Vanish,
        0 => Slot::Target,
        _ => Slot::Free,
    }
}

/// Determinant of a square matrix of polynomials by Laplace expansion along
/// rows, memoized on column subsets.
pub fn poly_det(m: &[Vec<MultiPoly>], mode: FieldMode, nvars: usize) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::from_int(mode, nvars, 1);
    }
    // minors[mask] = det of rows (n - |mask|).. with columns in mask
    let mut memo: HashMap<u32, MultiPoly> = HashMap::new();
    memo.insert(0, MultiPoly::from_int(mode, nvars, 1));
    fn go(m: &[Vec<MultiPoly>], mask: u32, memo: &mut HashMap<u32, MultiPoly>) -> MultiPoly {
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let n = m.len();
        let row = n - mask.count_ones() as usize;
        let mut acc: Option<MultiPoly> = None;
        let mut sign_pos = true;
        for c in 0..n {
            if mask & (1 << c) == 0 {
                continue;
            }
            let e = &m[row][c];
            if !e.is_zero() {
                let sub = go(m, mask & !(1 << c), memo);
                let t = e * &sub;
                let t = if sign_pos { t } else { -&t };
                acc = Some(match acc {
                    None => t,
                    Some(a) => &a + &t,
                });
            }
            sign_pos = !sign_pos;
        }
        let r = acc.unwrap_or_else(|| MultiPoly::zero(m[0][0].mode(), m[0][0].nvars()));
        memo.insert(mask, r.clone());
        r
    }
    go(m, (1u32 << n) - 1, &mut memo)
}

/// Adjugate: `adj(M)[r][c] = (−1)^{r+c} det(M without row c, column r)`.
pub fn poly_adjugate(m: &[Vec<MultiPoly>], mode: FieldMode, nvars: usize) -> Vec<Vec<MultiPoly>> {
    let n = m.len();
    let mut adj = vec![vec![MultiPoly::zero(mode, nvars); n]; n];
    for (r, row) in adj.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            let minor: Vec<Vec<MultiPoly>> = (0..n)
                .filter(|&i| i != c)
                .map(|i| (0..n).filter(|&j| j != r).map(|j| m[i][j].clone()).collect())
                .collect();
            let d = poly_det(&minor, mode, nvars);
            *entry = if (r + c) % 2 == 0 { d } else { -&d };
        }
    }
    adj
}

/// The `A` matrix of variables `a{i}_{j}`, assuming they occupy indices
/// `0..n²` row-major.
fn a_matrix(n: usize, mode: FieldMode, nvars: usize) -> Vec<Vec<MultiPoly>> {
    (0..n).map(|i| (0..n).map(|j| MultiPoly::var(mode, nvars, i * n + j)).collect()).collect()
}

/// `w^{k'} = Σ a^{i'}_i a^{j'}_j c^{k'}_{i'j'}`, the bracket `[A e_i, A e_j]`.
fn bracket_column(
    src: &StructureTensor,
    a: &[Vec<MultiPoly>],
    i: usize,
    j: usize,
    mode: FieldMode,
    nvars: usize,
) -> Vec<MultiPoly> {
    let n = src.dim();
    let mut w = vec![MultiPoly::zero(mode, nvars); n];
    for (ip, jp, kp, c) in src.nonzero() {
        let c = c.with_mode(mode).expect("rational constants embed");
        let term = (&a[ip][i] * &a[jp][j]).scale(&c);
        w[kp] = &w[kp] + &term;
    }
    w
}

pub fn generate_iw_system(
    source: &StructureTensor,
    target: &StructureTensor,
    sig: &Signature,
    opts: SystemOptions,
) -> Result<IwSystem, PolyError> {
    let n = source.dim();
    if target.dim() != n || sig.len() != n {
        return Err(PolyError::DimensionMismatch(format!(
            "source {n}, target {}, signature {}",
            target.dim(),
            sig.len()
        )));
    }
    let mode = if source.mode() == FieldMode::Gaussian || target.mode() == FieldMode::Gaussian {
        FieldMode::Gaussian
    } else {
        FieldMode::Rational
    };
    let target = target.with_mode(mode)?;

    let mut vars: Vec<Var> = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            vars.push(Var::A(i, j));
        }
    }
    if opts.encoding == InverseEncoding::ExplicitInverse {
        for i in 1..=n {
            for j in 1..=n {
                vars.push(Var::B(i, j));
            }
        }
    }
    let mut virtual_slots = Vec::new();
    if opts.encoding == InverseEncoding::Virtual {
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    if slot(sig, i, j, k) == Slot::Free {
                        virtual_slots.push((i, j, k));
                        vars.push(Var::X(virtual_slots.len()));
                    }
                }
            }
        }
    }
    let slack = opts.nonsingularity == Nonsingularity::DetSlack;
    if slack {
        vars.push(Var::T);
    }
    let nv = vars.len();
    let a = a_matrix(n, mode, nv);
    let det = poly_det(&a, mode, nv);
    let one = MultiPoly::from_int(mode, nv, 1);
    let mut gens = Vec::new();

    let mut x_index = 0;
    for i in 0..n {
        for j in i + 1..n {
            // A positive exponent sends the constant to zero, so a nonzero
            // target constant there is unreachable.
            for k in 0..n {
                if slot(sig, i, j, k) == Slot::Free && !target.get(i, j, k).is_zero() {
                    gens.push(MultiPoly::constant(target.get(i, j, k).clone(), nv));
                }
            }
            let w = bracket_column(source, &a, i, j, mode, nv);
            match opts.encoding {
                InverseEncoding::Virtual => {
                    // w = A·X
                    let mut xcol = Vec::with_capacity(n);
                    for k in 0..n {
                        xcol.push(match slot(sig, i, j, k) {
                            Slot::Vanish => MultiPoly::zero(mode, nv),
                            Slot::Target => MultiPoly::constant(target.get(i, j, k).clone(), nv),
                            Slot::Free => {
                                let p = MultiPoly::var(mode, nv, n * n + x_index);
                                x_index += 1;
                                p
                            }
                        });
                    }
                    for (r, wr) in w.iter().enumerate() {
                        let mut rhs = MultiPoly::zero(mode, nv);
                        for (k, xk) in xcol.iter().enumerate() {
                            rhs = &rhs + &(&a[r][k] * xk);
                        }
                        gens.push(wr - &rhs);
                    }
                }
                InverseEncoding::ExplicitInverse => {
                    for k in 0..n {
                        let s = slot(sig, i, j, k);
                        if s == Slot::Free {
                            continue;
                        }
                        let mut l = MultiPoly::zero(mode, nv);
                        for (kp, wk) in w.iter().enumerate() {
                            l = &l + &(&MultiPoly::var(mode, nv, n * n + k * n + kp) * wk);
                        }
                        if s == Slot::Target {
                            l = &l - &MultiPoly::constant(target.get(i, j, k).clone(), nv);
                        }
                        gens.push(l);
                    }
                }
                InverseEncoding::Cofactor => {
                    let adj = adjugate_cached(&a, mode, nv);
                    for k in 0..n {
                        let s = slot(sig, i, j, k);
                        if s == Slot::Free {
                            continue;
                        }
                        // (adj·w)_k = det·L_k; under t·det = 1 this is
                        // equivalent to t·(adj·w)_k = L_k.
                        let mut l = MultiPoly::zero(mode, nv);
                        for (kp, wk) in w.iter().enumerate() {
                            l = &l + &(&adj[k][kp] * wk);
                        }
                        if s == Slot::Target {
                            l = &l - &det.scale(target.get(i, j, k));
                        }
                        gens.push(l);
                    }
                }
            }
        }
    }
    if opts.encoding == InverseEncoding::ExplicitInverse {
        for r in 0..n {
            for c in 0..n {
                let mut e = MultiPoly::zero(mode, nv);
                for k in 0..n {
                    e = &e + &(&a[r][k] * &MultiPoly::var(mode, nv, n * n + k * n + c));
                }
                if r == c {
                    e = &e - &one;
                }
                gens.push(e);
            }
        }
    }
    gens.push(if slack { &(&MultiPoly::var(mode, nv, nv - 1) * &det) - &one } else { &det - &one });

    let mut ideal = Ideal::new(vars, mode, dedup_up_to_sign(gens)).with_order(opts.order);
    ideal.gens.retain(|g| !g.is_zero());
    Ok(IwSystem { ideal, n, sig: sig.clone(), options: opts, virtual_slots })
}

fn adjugate_cached(a: &[Vec<MultiPoly>], mode: FieldMode, nv: usize) -> Vec<Vec<MultiPoly>> {
    thread_local! {
        static CACHE: std::cell::RefCell<Option<(usize, usize, FieldMode, Vec<Vec<MultiPoly>>)>> =
            const { std::cell::RefCell::new(None) };
    }
    CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if let Some((n0, nv0, m0, adj)) = c.as_ref() {
            if *n0 == a.len() && *nv0 == nv && *m0 == mode {
                return adj.clone();
            }
        }
        let adj = poly_adjugate(a, mode, nv);
        *c = Some((a.len(), nv, mode, adj.clone()));
        adj
    })
}

/// Removes generators equal to an earlier one or its negative.
pub fn dedup_up_to_sign(gens: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = Vec::with_capacity(gens.len());
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let neg = -&g;
        if !out.iter().any(|h| *h == g || *h == neg) {
            out.push(g);
        }
    }
    out
}

impl IwSystem {
    /// The point of the system corresponding to matrix `A`, or `None` if `A`
    /// is singular or does not fit the nonsingularity encoding.
    pub fn point_for(&self, a: &Matrix, source: &StructureTensor) -> Option<Vec<Scalar>> {
        let n = self.n;
        let mode = self.ideal.mode;
        if a.rows() != n || a.cols() != n {
            return None;
        }
        let a = lift(a, mode)?;
        let det = a.det().ok()?;
        if det.is_zero() {
            return None;
        }
        if self.options.nonsingularity == Nonsingularity::UnitDeterminant && !det.is_one() {
            return None;
        }
        let inv = a.inverse().ok()?;
        let mut point: Vec<Scalar> = a.entries().to_vec();
        match self.options.encoding {
            InverseEncoding::ExplicitInverse => point.extend(inv.entries().iter().cloned()),
            InverseEncoding::Virtual => {
                let src = source.with_mode(mode).ok()?;
                for &(i, j, k) in &self.virtual_slots {
                    let ai = a.column(i);
                    let aj = a.column(j);
                    let w = src.bracket(&ai, &aj);
                    let x = inv.mul_vec(&w);
                    point.push(x[k].clone());
                }
            }
            InverseEncoding::Cofactor => {}
        }
        if self.options.nonsingularity == Nonsingularity::DetSlack {
            point.push(det.inv().ok()?);
        }
        Some(point)
    }

    pub fn is_satisfied_by(&self, a: &Matrix, source: &StructureTensor) -> bool {
        self.point_for(a, source).is_some_and(|p| self.ideal.vanishes_at(&p))
    }

    /// Reads `A` back out of a point of the system.
    pub fn matrix_of(&self, point: &[Scalar]) -> Result<Matrix, PolyError> {
        let n = self.n;
        if point.len() != self.ideal.nvars() {
            return Err(PolyError::DimensionMismatch(format!(
                "point has {} coordinates, system has {} variables",
                point.len(),
                self.ideal.nvars()
            )));
        }
        let rows: Vec<Vec<Scalar>> = (0..n).map(|i| point[i * n..(i + 1) * n].to_vec()).collect();
        Matrix::from_rows(self.ideal.mode, rows).map_err(|e| PolyError::Core(e.into()))
    }
}

pub(crate) fn lift(a: &Matrix, mode: FieldMode) -> Option<Matrix> {
    if a.mode() == mode {
        return Some(a.clone());
    }
    let rows: Option<Vec<Vec<Scalar>>> =
        a.to_rows().into_iter().map(|r| r.into_iter().map(|x| x.with_mode(mode).ok()).collect()).collect();
    Matrix::from_rows(mode, rows?).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use iwc_core::{catalog_tensor_in, verify_iw, IWSpec};

    fn section4_a() -> Matrix {
        Matrix::from_ints(FieldMode::Rational, &[&[1, 0, 0, 1], &[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 1, 1, 1]])
    }

    #[test]
    fn det_and_adjugate() {
        let mode = FieldMode::Rational;
        let a = a_matrix(3, mode, 9);
        let det = poly_det(&a, mode, 9);
        assert_eq!(det.len(), 6);
        let adj = poly_adjugate(&a, mode, 9);
        // A·adj(A) = det·I
        for r in 0..3 {
            for c in 0..3 {
                let mut s = MultiPoly::zero(mode, 9);
                for k in 0..3 {
                    s = &s + &(&a[r][k] * &adj[k][c]);
                }
                if r == c {
                    assert_eq!(s, det);
                } else {
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn witness_satisfies_every_encoding() {
        let src = catalog_tensor_in("2A2.1", FieldMode::Rational).unwrap();
        let tgt = catalog_tensor_in("A4.1", FieldMode::Rational).unwrap();
        let a = section4_a();
        for sig in [Signature::new(vec![3, 2, 1, 1]), Signature::new(vec![4, 3, 2, 1])] {
            for enc in [InverseEncoding::Cofactor, InverseEncoding::ExplicitInverse, InverseEncoding::Virtual] {
                let sys = generate_iw_system(&src, &tgt, &sig, SystemOptions::new(enc, Nonsingularity::DetSlack)).unwrap();
                assert!(sys.is_satisfied_by(&a, &src), "{enc:?} {sig}");
                assert_eq!(sys.matrix_of(&sys.point_for(&a, &src).unwrap()).unwrap(), a);
            }
        }
        let sys = generate_iw_system(&src, &tgt, &Signature::new(vec![3, 2, 1, 1]), SystemOptions::default()).unwrap();
        assert!(!sys.is_satisfied_by(&Matrix::identity(FieldMode::Rational, 4), &src));
    }

    #[test]
    fn identity_matches_diagonal_limit() {
        let so3 = catalog_tensor_in("so3", FieldMode::Rational).unwrap();
        let h = catalog_tensor_in("heisenberg3", FieldMode::Rational).unwrap();
        let id = Matrix::identity(FieldMode::Rational, 3);
        // (2,1,1) lands on [e2,e3] = e1: isomorphic, not verbatim
        for (sig, ok) in [(vec![1, 1, 2], true), (vec![2, 1, 1], true), (vec![1, 1, 1], false)] {
            let sig = Signature::new(sig);
            let sys = generate_iw_system(&so3, &h, &sig, SystemOptions::default()).unwrap();
            let report = verify_iw("so3", &so3, &IWSpec::new(id.clone(), sig.clone()), "heisenberg3").unwrap();
            assert_eq!(sys.is_satisfied_by(&id, &so3), report.exact_match, "{sig}");
            assert_eq!(report.success, ok, "{sig}");
        }
    }

    #[test]
    fn dimension_mismatch() {
        let so3 = catalog_tensor_in("so3", FieldMode::Rational).unwrap();
        let g = catalog_tensor_in("A4.1", FieldMode::Rational).unwrap();
        let r = generate_iw_system(&so3, &g, &Signature::new(vec![1, 1, 1]), SystemOptions::default());
        assert!(matches!(r, Err(PolyError::DimensionMismatch(_))));
    }
}
