//! Hand-reduced IW systems transcribed term by term, with the matrix `B`
//! closed by `A·B = I` and nonsingularity by `t·det(A) − 1`.

use iwc_core::{catalog_tensor_in, FieldMode, Matrix, Scalar, Signature, StructureTensor};

use crate::certificate::{BranchPlan, Factor};
use crate::error::PolyError;
use crate::ideal::Ideal;
use crate::groebner::{buchberger, GbOptions};
use crate::iwsystem::{
    dedup_up_to_sign, generate_iw_system, lift, poly_det, InverseEncoding, IwSystem, Nonsingularity, SystemOptions,
};
use crate::poly::{Monomial, MultiPoly, Var};

/// What the fixture is expected to certify.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    ComplexInfeasible,
    Feasible,
    /// Feasible over ℂ but not over ℝ.
    RealInfeasible,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub id: &'static str,
    pub source: &'static str,
    pub target: &'static str,
    pub signature: Signature,
    pub expectation: Expectation,
    /// Encoding of the generated system this fixture is a subsystem of.
    pub encoding: InverseEncoding,
    pub ideal: Ideal,
    /// Transcription remarks.
    pub notes: Vec<&'static str>,
    /// `(x index, 0-based slot (i, j, k))` for each virtual unknown.
    pub virtual_slots: Vec<(usize, (usize, usize, usize))>,
}

pub const FIXTURE_IDS: &[&str] = &["G32-regime1", "G32-regime2", "G41-4321", "G41-3211", "G41-2101", "SO3-2101"];

/// Polynomial builder over a fixed variable list with 1-based accessors.
struct Ring {
    vars: Vec<Var>,
}

impl Ring {
    fn new(with_b: bool, xs: usize) -> Ring {
        let mut vars = Vec::new();
        for i in 1..=4 {
            for j in 1..=4 {
                vars.push(Var::A(i, j));
            }
        }
        if with_b {
            for i in 1..=4 {
                for j in 1..=4 {
                    vars.push(Var::B(i, j));
                }
            }
        }
        vars.extend((1..=xs).map(Var::X));
        vars.push(Var::T);
        Ring { vars }
    }

    fn v(&self, var: Var) -> MultiPoly {
        let i = self.vars.iter().position(|w| *w == var).expect("variable in ring");
        MultiPoly::var(FieldMode::Rational, self.vars.len(), i)
    }

    fn a(&self, i: usize, j: usize) -> MultiPoly {
        self.v(Var::A(i, j))
    }

    fn b(&self, i: usize, j: usize) -> MultiPoly {
        self.v(Var::B(i, j))
    }

    fn x(&self, m: usize) -> MultiPoly {
        self.v(Var::X(m))
    }

    fn c(&self, k: i64) -> MultiPoly {
        MultiPoly::from_int(FieldMode::Rational, self.vars.len(), k)
    }

    /// `a^p_r a^q_s − a^q_r a^p_s`.
    fn minor(&self, p: usize, q: usize, r: usize, s: usize) -> MultiPoly {
        &(&self.a(p, r) * &self.a(q, s)) - &(&self.a(q, r) * &self.a(p, s))
    }

    fn closure(&self) -> Vec<MultiPoly> {
        let mut out = Vec::new();
        if self.vars.contains(&Var::B(1, 1)) {
            for r in 1..=4 {
                for c in 1..=4 {
                    let mut e = self.c(if r == c { -1 } else { 0 });
                    for k in 1..=4 {
                        e = &e + &(&self.a(r, k) * &self.b(k, c));
                    }
                    out.push(e);
                }
            }
        }
        let rows: Vec<Vec<MultiPoly>> = (1..=4).map(|i| (1..=4).map(|j| self.a(i, j)).collect()).collect();
        let det = poly_det(&rows, FieldMode::Rational, self.vars.len());
        out.push(&(&self.v(Var::T) * &det) - &self.c(1));
        out
    }

    fn ideal(&self, mut gens: Vec<MultiPoly>) -> Ideal {
        gens.extend(self.closure());
        Ideal::new(self.vars.clone(), FieldMode::Rational, dedup_up_to_sign(gens))
    }

    /// Row `(p, q)` of `B` times `Y` minus `rhs`, for a 2-column `Y` given as
    /// `[[y11, y12], [y21, y22]]` acting on `b^row_1, b^row_3`.
    fn by(&self, row: usize, y: &[[MultiPoly; 2]; 2], rhs: [i64; 2]) -> Vec<MultiPoly> {
        (0..2)
            .map(|col| &(&(&self.b(row, 1) * &y[0][col]) + &(&self.b(row, 3) * &y[1][col])) - &self.c(rhs[col]))
            .collect()
    }
}

fn g32_common(r: &Ring) -> Vec<MultiPoly> {
    let y = [[r.minor(1, 2, 2, 4), r.minor(1, 2, 3, 4)], [r.minor(3, 4, 2, 4), r.minor(3, 4, 3, 4)]];
    let mut out = r.by(2, &y, [1, 1]);
    out.extend(r.by(3, &y, [0, 1]));
    out
}

fn g41_eq5_eq6(r: &Ring) -> Vec<MultiPoly> {
    let (y1, y2) = (r.minor(1, 2, 3, 4), r.minor(3, 4, 3, 4));
    let mut out = Vec::new();
    for (row, rhs) in [(1, 0), (2, 1)] {
        out.push(&(&(&r.b(row, 1) * &y1) + &(&r.b(row, 3) * &y2)) - &r.c(rhs));
    }
    out.push(g41_eq6(r));
    out
}

fn g41_eq6(r: &Ring) -> MultiPoly {
    &(&(&r.minor(1, 2, 2, 4) * &r.b(1, 1)) + &(&r.minor(3, 4, 2, 4) * &r.b(1, 3))) - &r.c(1)
}

pub fn load_fixture(id: &str) -> Result<Fixture, PolyError> {
    let sig = |v: &[i64]| Signature::new(v.to_vec());
    let base = |id, source, target, signature, expectation, ideal, notes| Fixture {
        id,
        source,
        target,
        signature,
        expectation,
        encoding: InverseEncoding::ExplicitInverse,
        ideal,
        notes,
        virtual_slots: Vec::new(),
    };
    Ok(match id {
        "G32-regime1" => {
            let r = Ring::new(true, 0);
            let (m1, m2) = (r.minor(1, 2, 1, 4), r.minor(3, 4, 1, 4));
            let mut gens: Vec<MultiPoly> =
                (1..=3).map(|i| &(&r.b(i, 1) * &m1) + &(&r.b(i, 3) * &m2)).collect();
            gens.extend(g32_common(&r));
            base(
                "G32-regime1",
                "2A2.1",
                "A1+A3.2",
                sig(&[1, 2, 2, 0]),
                Expectation::ComplexInfeasible,
                r.ideal(gens),
                vec![
                    "exponents (β, α, α, 0) with α = 2, β = 1",
                    "the reduced list repeats one minor equation; the repeat is read as a31*a44 - a41*a34 = 0, the column actually multiplying b^i_3",
                    "the factor (ν − μ) uses a ν that is never introduced; read as the second proportionality factor, which affects the elimination argument but not these equations",
                ],
            )
        }
        "G32-regime2" => {
            let r = Ring::new(true, 0);
            let mut gens: Vec<MultiPoly> = (1..=3)
                .map(|j| &(&r.b(1, 1) * &r.minor(1, 2, j, 4)) + &(&r.b(1, 3) * &r.minor(3, 4, j, 4)))
                .collect();
            gens.extend(g32_common(&r));
            base(
                "G32-regime2",
                "2A2.1",
                "A1+A3.2",
                sig(&[3, 2, 2, 0]),
                Expectation::ComplexInfeasible,
                r.ideal(gens),
                vec!["exponents (β, α, α, 0) with α = 2, β = 3"],
            )
        }
        "G41-4321" => {
            let r = Ring::new(true, 0);
            base(
                "G41-4321",
                "2A2.1",
                "A4.1",
                sig(&[4, 3, 2, 1]),
                Expectation::Feasible,
                r.ideal(g41_eq5_eq6(&r)),
                vec!["the reduced system normalizes det A = 1; here t·det(A) − 1 with t = 1 at the shipped witness"],
            )
        }
        "G41-3211" => {
            let r = Ring::new(true, 0);
            let mut gens = g41_eq5_eq6(&r);
            gens.push(&(&r.minor(1, 2, 2, 3) * &r.b(1, 1)) + &(&r.minor(3, 4, 2, 3) * &r.b(1, 3)));
            base(
                "G41-3211",
                "2A2.1",
                "A4.1",
                sig(&[3, 2, 1, 1]),
                Expectation::Feasible,
                r.ideal(gens),
                vec!["the (4,3,2,1) system plus one equation"],
            )
        }
        "G41-2101" => {
            let r = Ring::new(true, 0);
            let mut gens = Vec::new();
            for j in [1, 2, 4] {
                let e = &(&(&(&r.a(2, 3) * &r.b(1, 1)) * &r.a(1, j)) - &(&(&r.a(1, 3) * &r.b(1, 1)) * &r.a(2, j)))
                    + &(&(&(&r.a(4, 3) * &r.b(1, 3)) * &r.a(3, j)) - &(&(&r.a(3, 3) * &r.b(1, 3)) * &r.a(4, j)));
                gens.push(e);
            }
            let y = [[r.minor(1, 2, 2, 3), r.minor(1, 2, 3, 4)], [r.minor(3, 4, 2, 3), r.minor(3, 4, 3, 4)]];
            for (row, rhs) in [(1, [0, 0]), (2, [0, 1]), (4, [0, 0])] {
                gens.extend(r.by(row, &y, rhs));
            }
            gens.push(g41_eq6(&r));
            base(
                "G41-2101",
                "2A2.1",
                "A4.1",
                sig(&[2, 1, 0, 1]),
                Expectation::ComplexInfeasible,
                r.ideal(gens),
                vec!["ten transcribed rows; two coincide up to sign, leaving eight distinct equations"],
            )
        }
        "SO3-2101" => {
            let r = Ring::new(false, 2);
            let ycol1 = [r.minor(2, 3, 2, 3), r.minor(3, 1, 2, 3), r.minor(1, 2, 2, 3)];
            let ycol2 = [r.minor(2, 3, 3, 4), r.minor(3, 1, 3, 4), r.minor(1, 2, 3, 4)];
            let mut gens = Vec::new();
            // Y = A·X with X columns (0, 0, x1, 0) and (0, 1, x2, 0).
            for i in 1..=4 {
                let y1 = if i <= 3 { ycol1[i - 1].clone() } else { r.c(0) };
                gens.push(&y1 - &(&r.a(i, 3) * &r.x(1)));
            }
            for i in 1..=4 {
                let y2 = if i <= 3 { ycol2[i - 1].clone() } else { r.c(0) };
                gens.push(&y2 - &(&r.a(i, 2) + &(&r.a(i, 3) * &r.x(2))));
            }
            let mut f = base(
                "SO3-2101",
                "so3+A1",
                "A4.1",
                sig(&[2, 1, 0, 1]),
                Expectation::RealInfeasible,
                r.ideal(gens),
                vec![
                    "built from the matrix equation Y = A·X rather than a per-column expansion",
                    "x1 = L(2,3,3) and x2 = L(3,4,3), the two unconstrained transformed constants",
                ],
            );
            f.encoding = InverseEncoding::Virtual;
            f.virtual_slots = vec![(1, (1, 2, 2)), (2, (2, 3, 2))];
            f
        }
        _ => return Err(PolyError::UnknownFixture(id.to_string())),
    })
}

impl Fixture {
    /// The polynomial `x1·(a1_3² + a2_3² + a3_3²)` of the real-branch argument.
    pub fn real_branch_data(&self) -> Option<(MultiPoly, Vec<MultiPoly>)> {
        if self.expectation != Expectation::RealInfeasible {
            return None;
        }
        let q = self.ideal.var_poly(&Var::X(1))?;
        let squares = (1..=3).map(|i| self.ideal.var_poly(&Var::A(i, 3))).collect::<Option<Vec<_>>>()?;
        Some((q, squares))
    }
}

impl Fixture {
    /// Branching for the real argument. The branch `x1 = 0` still has complex
    /// points, so it splits again on `r_i = a_i2 + x2·a_i3` against the same
    /// column: `|r|²·(a1_3² + a2_3² + a3_3²)` lies in `I + ⟨x1⟩` by Lagrange's
    /// identity, and each sub-branch makes two columns of `A` dependent.
    pub fn real_branch_plan(&self) -> Option<BranchPlan> {
        let (x1, col3) = self.real_branch_data()?;
        let x2 = self.ideal.var_poly(&Var::X(2))?;
        let r = (1..=3)
            .map(|i| Some(&self.ideal.var_poly(&Var::A(i, 2))? + &(&x2 * &self.ideal.var_poly(&Var::A(i, 3))?)))
            .collect::<Option<Vec<_>>>()?;
        let inner = BranchPlan::new(vec![Factor::SumOfSquares(r), Factor::SumOfSquares(col3.clone())]);
        Some(BranchPlan::new(vec![Factor::Plain(x1), Factor::SumOfSquares(col3)]).with_branch(0, inner))
    }
}

impl Fixture {
    pub fn source_tensor(&self) -> Result<StructureTensor, PolyError> {
        Ok(catalog_tensor_in(self.source, FieldMode::Rational)?)
    }

    pub fn target_tensor(&self) -> Result<StructureTensor, PolyError> {
        Ok(catalog_tensor_in(self.target, FieldMode::Rational)?)
    }

    /// The point of the fixture ring determined by `A`: `B = A⁻¹`, the virtual
    /// unknowns read off `A⁻¹·[Ae_i, Ae_j]`, and `t = 1/det A`.
    pub fn point_for(&self, a: &Matrix) -> Option<Vec<Scalar>> {
        let a = lift(a, FieldMode::Rational)?;
        if a.rows() != 4 || a.cols() != 4 {
            return None;
        }
        let det = a.det().ok()?;
        if det.is_zero() {
            return None;
        }
        let inv = a.inverse().ok()?;
        let src = self.source_tensor().ok()?;
        let mut point = Vec::with_capacity(self.ideal.nvars());
        for v in &self.ideal.vars {
            point.push(match *v {
                Var::A(i, j) => a.get(i - 1, j - 1).clone(),
                Var::B(i, j) => inv.get(i - 1, j - 1).clone(),
                Var::X(m) => {
                    let &(_, (i, j, k)) = self.virtual_slots.iter().find(|(x, _)| *x == m)?;
                    inv.mul_vec(&src.bracket(&a.column(i), &a.column(j)))[k].clone()
                }
                Var::T => det.inv().ok()?,
                _ => return None,
            });
        }
        Some(point)
    }

    pub fn generated_system(&self) -> Result<IwSystem, PolyError> {
        let opts = SystemOptions::new(self.encoding, Nonsingularity::DetSlack);
        generate_iw_system(&self.source_tensor()?, &self.target_tensor()?, &self.signature, opts)
    }

    /// Checks that every fixture equation lies in the generated system: first
    /// literally (up to sign), then by reduction against a Gröbner basis.
    pub fn containment(&self, opts: &GbOptions) -> Result<Containment, PolyError> {
        let sys = self.generated_system()?;
        let target = &sys.ideal;
        let mut index = Vec::with_capacity(self.ideal.nvars());
        for v in &self.ideal.vars {
            let mapped = match *v {
                Var::X(m) => {
                    let slot = self.virtual_slots.iter().find(|(x, _)| *x == m).map(|(_, s)| *s);
                    let pos = slot.and_then(|s| sys.virtual_slots.iter().position(|t| *t == s));
                    pos.map(|p| Var::X(p + 1))
                }
                ref other => Some(other.clone()),
            };
            let idx = mapped.and_then(|m| target.var_index(&m));
            index.push(idx.ok_or_else(|| PolyError::VariableMismatch(format!("{v} has no counterpart")))?);
        }
        let mapped: Vec<MultiPoly> = self.ideal.gens.iter().map(|g| remap(g, &index, target.nvars())).collect();
        let mut report = Containment::default();
        let mut pending = Vec::new();
        for (k, g) in mapped.iter().enumerate() {
            let neg = -g;
            if target.gens.iter().any(|h| h == g || *h == neg) {
                report.literal.push(k);
            } else {
                pending.push(k);
            }
        }
        if !pending.is_empty() {
            let gb = buchberger(target, opts)?;
            for k in pending {
                if gb.reduce(&mapped[k]).is_zero() {
                    report.by_reduction.push(k);
                } else {
                    report.outside.push(k);
                }
            }
        }
        Ok(report)
    }
}

/// Indices of fixture generators by how they were found in the generated system.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Containment {
    pub literal: Vec<usize>,
    pub by_reduction: Vec<usize>,
    pub outside: Vec<usize>,
}

impl Containment {
    pub fn holds(&self) -> bool {
        self.outside.is_empty()
    }
}

fn remap(p: &MultiPoly, index: &[usize], nvars: usize) -> MultiPoly {
    MultiPoly::from_terms(
        p.mode(),
        nvars,
        p.terms().map(|(m, c)| {
            let mut e = vec![0u16; nvars];
            for (v, &x) in m.exps().iter().enumerate() {
                e[index[v]] += x;
            }
            (Monomial::new(e), c.clone())
        }),
    )
}

/// Literature witness matrices for feasible fixtures.
pub fn fixture_witness(id: &str) -> Option<Matrix> {
    match id {
        "G41-4321" | "G41-3211" => Some(Matrix::from_ints(
            FieldMode::Rational,
            &[&[1, 0, 0, 1], &[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 1, 1, 1]],
        )),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        for id in FIXTURE_IDS {
            let f = load_fixture(id).unwrap();
            assert!(f.ideal.gens.iter().all(|g| !g.is_zero()));
        }
        // 8 distinct hand equations + 16 closure + slack
        assert_eq!(load_fixture("G41-2101").unwrap().ideal.gens.len(), 8 + 16 + 1);
        // 3 + 4 hand equations
        assert_eq!(load_fixture("G32-regime1").unwrap().ideal.gens.len(), 7 + 17);
        // 8 column equations + slack
        assert_eq!(load_fixture("SO3-2101").unwrap().ideal.gens.len(), 9);
        assert!(matches!(load_fixture("nope"), Err(PolyError::UnknownFixture(_))));
    }

    #[test]
    fn real_branch_polynomial_is_a_combination() {
        // x1·Σ(a^i_3)² = −Σ a^i_3·f_i over the first-column equations
        let f = load_fixture("SO3-2101").unwrap();
        let (q, s) = f.real_branch_data().unwrap();
        let p = &q * &s.iter().fold(MultiPoly::zero(FieldMode::Rational, 19), |acc, x| &acc + &(x * x));
        let mut comb = MultiPoly::zero(FieldMode::Rational, 19);
        for i in 0..3 {
            comb = &comb - &(&s[i] * &f.ideal.gens[i]);
        }
        assert_eq!(comb, p);
    }
}
