//! Ideals with a fixed variable list and monomial order, and their JSON form.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use iwc_core::matrix::scalar_from_json;
use iwc_core::{FieldMode, Scalar};

use crate::error::PolyError;
use crate::poly::{Monomial, MonomialOrder, MultiPoly, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub vars: Vec<Var>,
    pub order: MonomialOrder,
    pub mode: FieldMode,
    pub gens: Vec<MultiPoly>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct TermJson {
    pub exponents: Vec<u16>,
    pub coeff: Value,
}

#[derive(Serialize, Deserialize)]
struct IdealJson {
    variables: Vec<Var>,
    #[serde(default)]
    order: MonomialOrder,
    #[serde(default = "rational_tag")]
    field: String,
    polynomials: Vec<Vec<TermJson>>,
}

fn rational_tag() -> String {
    FieldMode::Rational.tag().into()
}

pub(crate) fn poly_to_json(p: &MultiPoly) -> Vec<TermJson> {
    p.terms()
        .map(|(m, c)| TermJson { exponents: m.exps().to_vec(), coeff: serde_json::to_value(c).expect("scalar") })
        .collect()
}

pub(crate) fn poly_from_json(mode: FieldMode, nvars: usize, terms: &[TermJson]) -> Result<MultiPoly, PolyError> {
    let mut p = MultiPoly::zero(mode, nvars);
    for t in terms {
        if t.exponents.len() != nvars {
            return Err(PolyError::Format(format!("exponent vector of length {} for {nvars} variables", t.exponents.len())));
        }
        p.add_term(Monomial::new(t.exponents.clone()), scalar_from_json(mode, &t.coeff)?);
    }
    Ok(p)
}

impl Ideal {
    pub fn new(vars: Vec<Var>, mode: FieldMode, gens: Vec<MultiPoly>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { vars, order: MonomialOrder::DegRevLex, mode, gens }
    }

    pub fn with_order(mut self, order: MonomialOrder) -> Self {
        self.order = order;
        self
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, v: &Var) -> Option<usize> {
        self.vars.iter().position(|w| w == v)
    }

    pub fn var_poly(&self, v: &Var) -> Option<MultiPoly> {
        self.var_index(v).map(|i| MultiPoly::var(self.mode, self.nvars(), i))
    }

    /// `I + ⟨extra⟩`.
    pub fn extended(&self, extra: impl IntoIterator<Item = MultiPoly>) -> Ideal {
        let mut out = self.clone();
        out.gens.extend(extra.into_iter().filter(|g| !g.is_zero()));
        out
    }

    /// Whether every generator vanishes at `point` (one value per variable).
    pub fn vanishes_at(&self, point: &[Scalar]) -> bool {
        point.len() == self.nvars() && self.gens.iter().all(|g| g.eval(point).is_zero())
    }

    /// Whether all coefficients are rational.
    pub fn is_rational(&self) -> bool {
        self.gens.iter().all(|g| g.terms().all(|(_, c)| c.is_real()))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(IdealJson {
            variables: self.vars.clone(),
            order: self.order,
            field: self.mode.tag().into(),
            polynomials: self.gens.iter().map(poly_to_json).collect(),
        })
        .expect("ideal json")
    }

    pub fn from_json(v: &Value) -> Result<Ideal, PolyError> {
        let raw: IdealJson = serde_json::from_value(v.clone())?;
        let mode =
            FieldMode::from_tag(&raw.field).ok_or_else(|| PolyError::Format(format!("unknown field {:?}", raw.field)))?;
        let n = raw.variables.len();
        let gens = raw.polynomials.iter().map(|p| poly_from_json(mode, n, p)).collect::<Result<Vec<_>, _>>()?;
        Ok(Ideal { vars: raw.variables, order: raw.order, mode, gens })
    }

    /// The same ideal over the variable list `vars`, which must be a
    /// permutation of the current one.
    pub fn reordered(&self, vars: Vec<Var>) -> Result<Ideal, PolyError> {
        let n = self.nvars();
        let pos: Option<Vec<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let pos = match pos {
            Some(p) if vars.len() == n => p,
            _ => return Err(PolyError::VariableMismatch("not a permutation of the variables".into())),
        };
        let gens = self
            .gens
            .iter()
            .map(|g| {
                MultiPoly::from_terms(
                    self.mode,
                    n,
                    g.terms().map(|(m, c)| {
                        let mut e = vec![0u16; n];
                        for (i, &x) in m.exps().iter().enumerate() {
                            e[pos[i]] = x;
                        }
                        (Monomial::new(e), c.clone())
                    }),
                )
            })
            .collect();
        Ok(Ideal { vars, order: self.order, mode: self.mode, gens })
    }

    pub fn format_gens(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.format(&self.vars, self.order)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let vars = vec![Var::Named("x".into()), Var::Named("y".into())];
        let x = MultiPoly::var(FieldMode::Rational, 2, 0);
        let y = MultiPoly::var(FieldMode::Rational, 2, 1);
        let g = &(&x * &y) - &MultiPoly::constant(Scalar::from_ratio(FieldMode::Rational, 1, 2), 2);
        let ideal = Ideal::new(vars, FieldMode::Rational, vec![g, x]);
        let back = Ideal::from_json(&ideal.to_json()).unwrap();
        assert_eq!(back, ideal);
        assert_eq!(ideal.format_gens()[0], "x*y - 1/2");
    }
}
