//! Derivation algebras and the diagonal gradings they admit.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::StructureTensor;
use crate::matrix::Matrix;
use crate::scalar::{FieldMode, Scalar};
use crate::signature::Signature;

/// A basis of `Der(g)`; matrices act on coordinate columns, so
/// `Γ e_i = Σ_r Γ[r][i] e_r`.
#[derive(Clone, Debug)]
pub struct DerivationBasis {
    pub basis: Vec<Matrix>,
}

impl DerivationBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis matrices flattened row-major, one row each.
    pub fn as_rows(&self) -> Matrix {
        let rows: Vec<Vec<Scalar>> = self.basis.iter().map(|m| m.entries().to_vec()).collect();
        let mode = self.basis.first().map_or(FieldMode::Rational, Matrix::mode);
        if rows.is_empty() {
            return Matrix::zeros(mode, 0, 0);
        }
        Matrix::from_rows(mode, rows).expect("uniform basis")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.basis.iter().map(Matrix::to_json).collect())
    }
}

/// Coefficient matrix of the linear system `Γ[e_i,e_j] = [Γe_i,e_j] + [e_i,Γe_j]`
/// in the unknowns `Γ[r][c]` (column index `r·n + c`).
fn derivation_system(t: &StructureTensor) -> Matrix {
    let n = t.dim();
    let mode = t.mode();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for m in 0..n {
                let mut row = vec![Scalar::zero(mode); n * n];
                // Σ_k c_{ij}^k Γ[m][k]
                for k in 0..n {
                    let c = t.get(i, j, k);
                    if !c.is_zero() {
                        row[m * n + k] = &row[m * n + k] + c;
                    }
                }
                // − Σ_r Γ[r][i] c_{rj}^m − Σ_r Γ[r][j] c_{ir}^m
                for r in 0..n {
                    let a = t.get(r, j, m);
                    if !a.is_zero() {
                        row[r * n + i] = &row[r * n + i] - a;
                    }
                    let b = t.get(i, r, m);
                    if !b.is_zero() {
                        row[r * n + j] = &row[r * n + j] - b;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return Matrix::zeros(mode, 0, n * n);
    }
    Matrix::from_rows(mode, rows).expect("uniform rows")
}

pub fn derivation_basis(t: &StructureTensor) -> DerivationBasis {
    let n = t.dim();
    let sys = derivation_system(t);
    let null = if sys.rows() == 0 {
        (0..n * n)
            .map(|idx| {
                let mut v = vec![Scalar::zero(t.mode()); n * n];
                v[idx] = Scalar::one(t.mode());
                v
            })
            .collect()
    } else {
        sys.nullspace()
    };
    let basis = null
        .into_iter()
        .map(|v| {
            let rows = v.chunks(n).map(<[Scalar]>::to_vec).collect();
            Matrix::from_rows(t.mode(), rows).expect("square")
        })
        .collect();
    DerivationBasis { basis }
}

pub fn is_derivation(t: &StructureTensor, gamma: &Matrix) -> bool {
    let n = t.dim();
    if gamma.rows() != n || gamma.cols() != n {
        return false;
    }
    let unit = |i: usize| {
        let mut v = vec![Scalar::zero(t.mode()); n];
        v[i] = Scalar::one(t.mode());
        v
    };
    for i in 0..n {
        for j in i + 1..n {
            let (ei, ej) = (unit(i), unit(j));
            let lhs = gamma.mul_vec(&t.bracket(&ei, &ej));
            let a = t.bracket(&gamma.mul_vec(&ei), &ej);
            let b = t.bracket(&ei, &gamma.mul_vec(&ej));
            if lhs.iter().zip(a.iter().zip(&b)).any(|(l, (x, y))| *l != x + y) {
                return false;
            }
        }
    }
    true
}

/// Integer tuples α with `diag(α) ∈ Der(g)`: the solutions of
/// `α_i + α_j = α_k` over all nonzero `c_{ij}^k`.
#[derive(Clone, Debug, Serialize)]
pub struct DiagonalLattice {
    n: usize,
    /// Distinct constraint rows, one per `(i, j, k)` pattern.
    constraints: Vec<Vec<i64>>,
    /// Integer spanning vectors of the solution space, one per free coordinate.
    pub generators: Vec<Vec<i64>>,
    #[serde(skip)]
    rref: Matrix,
    #[serde(skip)]
    pivots: Vec<usize>,
}

impl DiagonalLattice {
    pub fn new(t: &StructureTensor) -> Self {
        let n = t.dim();
        let mut set = BTreeSet::new();
        for (i, j, k, _) in t.nonzero() {
            if i < j {
                let mut row = vec![0i64; n];
                row[i] += 1;
                row[j] += 1;
                row[k] -= 1;
                set.insert(row);
            }
        }
        let constraints: Vec<Vec<i64>> = set.into_iter().collect();
        let mode = FieldMode::Rational;
        let sys = if constraints.is_empty() {
            Matrix::zeros(mode, 0, n)
        } else {
            Matrix::from_rows(
                mode,
                constraints.iter().map(|r| r.iter().map(|&v| Scalar::from_int(mode, v)).collect()).collect(),
            )
            .expect("uniform rows")
        };
        let (rref, pivots) = if sys.rows() == 0 {
            (sys.clone(), Vec::new())
        } else {
            let r = sys.rref();
            (r.matrix, r.pivots)
        };
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let generators = free
            .iter()
            .map(|&f| {
                let mut v: Vec<Scalar> = vec![Scalar::zero(mode); n];
                v[f] = Scalar::one(mode);
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -rref.get(r, f);
                }
                integer_multiple(&v)
            })
            .collect();
        DiagonalLattice { n, constraints, generators, rref, pivots }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn contains(&self, alpha: &[i64]) -> bool {
        alpha.len() == self.n
            && self.constraints.iter().all(|row| row.iter().zip(alpha).map(|(a, b)| a * b).sum::<i64>() == 0)
    }

    /// Every member with all entries in `[0, max_exp]`, before any dedup.
    pub fn points_in_box(&self, max_exp: i64) -> Vec<Vec<i64>> {
        let free: Vec<usize> = (0..self.n).filter(|c| !self.pivots.contains(c)).collect();
        let mut out = Vec::new();
        let mut assign = vec![0i64; free.len()];
        if max_exp < 0 {
            return out;
        }
        loop {
            let mut alpha = vec![0i64; self.n];
            for (&f, &v) in free.iter().zip(&assign) {
                alpha[f] = v;
            }
            let mut ok = true;
            for (r, &p) in self.pivots.iter().enumerate() {
                // α_p = − Σ_f rref[r][f] α_f; rref entries are rational.
                let mut acc = Scalar::zero(FieldMode::Rational);
                for (&f, &v) in free.iter().zip(&assign) {
                    if v != 0 {
                        acc = acc - self.rref.get(r, f) * &Scalar::from_int(FieldMode::Rational, v);
                    }
                }
                match acc.as_rational().filter(|q| q.is_integer()).and_then(|q| q.to_integer().to_i64()) {
                    Some(x) if (0..=max_exp).contains(&x) => alpha[p] = x,
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                debug_assert!(self.contains(&alpha));
                out.push(alpha);
            }
            // odometer over the free coordinates
            let mut idx = 0;
            loop {
                if idx == assign.len() {
                    return out;
                }
                if assign[idx] < max_exp {
                    assign[idx] += 1;
                    break;
                }
                assign[idx] = 0;
                idx += 1;
            }
        }
    }
}

fn integer_multiple(v: &[Scalar]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.re().denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x.re() * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| if g.is_zero() { x.clone() } else { x / &g })
        .map(|x| x.to_i64().unwrap_or_else(|| panic!("lattice generator entry {x} overflows")))
        .collect()
}

/// Box points of the diagonal lattice, deduplicated up to permutation and
/// positive rescaling; ascending in the minimality order.
pub fn admissible_signatures(t: &StructureTensor, max_exp: i64) -> Vec<Signature> {
    let set: BTreeSet<Vec<i64>> =
        DiagonalLattice::new(t).points_in_box(max_exp).into_iter().map(|a| Signature(a).normalized().0).collect();
    set.into_iter().map(Signature).collect()
}

/// Orderings of `sig` whose diagonal matrix is a derivation of `t`; these are
/// the candidate gradings to try for a normalized signature.
pub fn admissible_arrangements(t: &StructureTensor, sig: &Signature) -> Vec<Signature> {
    let lattice = DiagonalLattice::new(t);
    sig.permutations().into_iter().filter(|p| lattice.contains(&p.0)).collect()
}

/// Whether two matrices have the same row space.
pub fn same_row_space(a: &Matrix, b: &Matrix) -> bool {
    if a.cols() != b.cols() {
        return false;
    }
    let ra = a.rref();
    let rb = b.rref();
    let k = ra.pivots.len();
    k == rb.pivots.len() && (0..k).all(|r| ra.matrix.row(r) == rb.matrix.row(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use FieldMode::Rational;

    fn g41() -> StructureTensor {
        StructureTensor::from_int_brackets(Rational, 4, &[(2, 4, 1, 1), (3, 4, 2, 1)])
    }

    #[test]
    fn abelian_derivations_are_everything() {
        assert_eq!(derivation_basis(&StructureTensor::abelian(Rational, 3)).dim(), 9);
    }

    #[test]
    fn g41_has_seven() {
        let b = derivation_basis(&g41());
        assert_eq!(b.dim(), 7);
        assert!(b.basis.iter().all(|m| is_derivation(&g41(), m)));
    }

    #[test]
    fn diagonal_checks() {
        let d = Matrix::diagonal(Rational, &[2, 1, 0, 1].map(|v| Scalar::from_int(Rational, v)));
        assert!(is_derivation(&g41(), &d));
        let two_g21 = StructureTensor::from_int_brackets(Rational, 4, &[(1, 2, 1, 1), (3, 4, 3, 1)]);
        assert!(!is_derivation(&two_g21, &Matrix::identity(Rational, 4)));
        assert!(is_derivation(&two_g21, &Matrix::zeros(Rational, 4, 4)));
    }

    #[test]
    fn lattice_membership_matches_direct_check() {
        let t = g41();
        let lattice = DiagonalLattice::new(&t);
        assert_eq!(lattice.rank(), 2);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let alpha = [a, b, c, d];
                        let m = Matrix::diagonal(Rational, &alpha.map(|v| Scalar::from_int(Rational, v)));
                        assert_eq!(lattice.contains(&alpha), is_derivation(&t, &m), "{alpha:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn abelian_binary_box() {
        let sigs = admissible_signatures(&StructureTensor::abelian(Rational, 4), 1);
        assert_eq!(sigs.len(), 5);
        assert_eq!(DiagonalLattice::new(&StructureTensor::abelian(Rational, 4)).points_in_box(1).len(), 16);
    }
}
