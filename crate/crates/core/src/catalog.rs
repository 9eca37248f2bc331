//! Named low-dimensional Lie algebras in their canonical bases.
//!
//! The rational catalog uses Mubarakzyanov-style names (`A4.1`, `2A2.1`, …),
//! the gaussian one the complex names (`g4.1`, `2g2.1`, …). Complexification
//! merges `2A2.1` and `A4.10`, so the complex catalog has a single entry
//! `2g2.1` carrying the alias `g4.10`.

use std::sync::OnceLock;

use crate::algebra::StructureTensor;
use crate::error::{Error, Result};
use crate::fingerprint::{fingerprint, Fingerprint};
use crate::scalar::FieldMode;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub tensor: StructureTensor,
    pub note: &'static str,
}

impl CatalogEntry {
    pub fn mode(&self) -> FieldMode {
        self.tensor.mode()
    }

    pub fn answers_to(&self, name: &str) -> bool {
        self.name == name || self.aliases.contains(&name)
    }
}

type Table = &'static [(usize, usize, usize, i64)];

const TWO_G21: Table = &[(1, 2, 1, 1), (3, 4, 3, 1)];
const G1_G32: Table = &[(2, 4, 2, 1), (3, 4, 2, 1), (3, 4, 3, 1)];
const G41: Table = &[(2, 4, 1, 1), (3, 4, 2, 1)];
const A410: Table = &[(1, 3, 1, 1), (2, 3, 2, 1), (1, 4, 2, -1), (2, 4, 1, 1)];
const SO3: Table = &[(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)];
const SL2: Table = &[(1, 2, 2, 2), (1, 3, 3, -2), (2, 3, 1, 1)];
const HEIS: Table = &[(1, 2, 3, 1)];
const NONE: Table = &[];

struct Def {
    name: &'static str,
    aliases: &'static [&'static str],
    dim: usize,
    table: Table,
    note: &'static str,
}

const RATIONAL: &[Def] = &[
    Def { name: "2A2.1", aliases: &[], dim: 4, table: TWO_G21, note: "[e1,e2]=e1, [e3,e4]=e3" },
    Def { name: "A1+A3.2", aliases: &[], dim: 4, table: G1_G32, note: "[e2,e4]=e2, [e3,e4]=e2+e3" },
    Def { name: "A4.1", aliases: &[], dim: 4, table: G41, note: "[e2,e4]=e1, [e3,e4]=e2" },
    Def {
        name: "A4.10",
        aliases: &[],
        dim: 4,
        table: A410,
        note: "[e1,e3]=e1, [e2,e3]=e2, [e1,e4]=-e2, [e2,e4]=e1",
    },
    Def {
        name: "so3+A1",
        aliases: &[],
        dim: 4,
        table: SO3,
        note: "so(3) with [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2, plus a central e4",
    },
    Def { name: "heisenberg3+A1", aliases: &[], dim: 4, table: HEIS, note: "[e1,e2]=e3, e4 central" },
    Def { name: "abelian4", aliases: &[], dim: 4, table: NONE, note: "all brackets zero" },
    Def { name: "so3", aliases: &[], dim: 3, table: SO3, note: "[e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2" },
    Def { name: "sl2", aliases: &[], dim: 3, table: SL2, note: "[h,e]=2e, [h,f]=-2f, [e,f]=h" },
    Def { name: "heisenberg3", aliases: &[], dim: 3, table: HEIS, note: "[e1,e2]=e3" },
    Def { name: "abelian3", aliases: &[], dim: 3, table: NONE, note: "all brackets zero" },
];

const GAUSSIAN: &[Def] = &[
    Def {
        name: "2g2.1",
        aliases: &["g4.10"],
        dim: 4,
        table: TWO_G21,
        note: "[e1,e2]=e1, [e3,e4]=e3; also the complexification of A4.10",
    },
    Def { name: "g1+g3.2", aliases: &[], dim: 4, table: G1_G32, note: "[e2,e4]=e2, [e3,e4]=e2+e3" },
    Def { name: "g4.1", aliases: &[], dim: 4, table: G41, note: "[e2,e4]=e1, [e3,e4]=e2" },
    Def {
        name: "so3+g1",
        aliases: &["sl2+g1"],
        dim: 4,
        table: SO3,
        note: "complexified so(3) (isomorphic to sl(2)) plus a central e4",
    },
    Def { name: "heisenberg3+g1", aliases: &[], dim: 4, table: HEIS, note: "[e1,e2]=e3, e4 central" },
    Def { name: "abelian4", aliases: &[], dim: 4, table: NONE, note: "all brackets zero" },
    Def {
        name: "so3",
        aliases: &["sl2"],
        dim: 3,
        table: SO3,
        note: "complexified so(3), isomorphic to sl(2)",
    },
    Def { name: "heisenberg3", aliases: &[], dim: 3, table: HEIS, note: "[e1,e2]=e3" },
    Def { name: "abelian3", aliases: &[], dim: 3, table: NONE, note: "all brackets zero" },
];

fn build(mode: FieldMode, specs: &[Def]) -> Vec<CatalogEntry> {
    specs
        .iter()
        .map(|s| CatalogEntry {
            name: s.name,
            aliases: s.aliases,
            tensor: StructureTensor::from_int_brackets(mode, s.dim, s.table),
            note: s.note,
        })
        .collect()
}

pub fn catalog(mode: FieldMode) -> &'static [CatalogEntry] {
    static RAT: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    static GAU: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    match mode {
        FieldMode::Rational => RAT.get_or_init(|| build(mode, RATIONAL)),
        FieldMode::Gaussian => GAU.get_or_init(|| build(mode, GAUSSIAN)),
    }
}

/// Looks a name up in the rational catalog first, then the gaussian one.
pub fn catalog_get(name: &str) -> Result<&'static CatalogEntry> {
    [FieldMode::Rational, FieldMode::Gaussian]
        .into_iter()
        .find_map(|m| catalog(m).iter().find(|e| e.answers_to(name)))
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

/// The tensor of `name` over the requested field. A name from the other
/// catalog is accepted and its (integer) constants are reinterpreted.
pub fn catalog_tensor_in(name: &str, mode: FieldMode) -> Result<StructureTensor> {
    if let Some(e) = catalog(mode).iter().find(|e| e.answers_to(name)) {
        return Ok(e.tensor.clone());
    }
    catalog_get(name)?.tensor.with_mode(mode)
}

/// The catalog entry over `mode` whose tensor equals the one `name` denotes.
pub fn catalog_get_in(name: &str, mode: FieldMode) -> Result<&'static CatalogEntry> {
    if let Some(e) = catalog(mode).iter().find(|e| e.answers_to(name)) {
        return Ok(e);
    }
    let t = catalog_tensor_in(name, mode)?;
    if let Some(e) = catalog(mode).iter().find(|e| e.tensor == t) {
        return Ok(e);
    }
    // Merged complexifications, e.g. A4.10 over Q(i) is 2g2.1.
    let fp = fingerprint(&t);
    catalog(mode)
        .iter()
        .find(|e| e.tensor.dim() == t.dim() && fingerprint(&e.tensor) == fp)
        .ok_or_else(|| Error::UnknownName(format!("{name} (no {} counterpart)", mode.tag())))
}

/// Returns the unique candidate whose fingerprint equals that of `t`.
/// Candidates are resolved over `t`'s field; several names for one catalog
/// entry count once.
pub fn match_catalog<'a>(t: &StructureTensor, candidates: &[&'a str]) -> Result<&'a str> {
    let fp = fingerprint(t);
    let mut hit: Option<(&'a str, &'static str)> = None;
    for &name in candidates {
        let entry = catalog_get_in(name, t.mode())?;
        if entry.tensor.dim() != t.dim() || fingerprint(&entry.tensor) != fp {
            continue;
        }
        match hit {
            Some((_, canon)) if canon == entry.name => {}
            Some((prev, _)) => return Err(Error::Ambiguous(prev.to_string(), name.to_string())),
            None => hit = Some((name, entry.name)),
        }
    }
    hit.map(|(n, _)| n).ok_or(Error::NoMatch)
}

/// Fingerprint-based identification against the whole catalog over `t`'s field.
pub fn identify(t: &StructureTensor) -> Option<&'static str> {
    let names: Vec<&'static str> =
        catalog(t.mode()).iter().filter(|e| e.tensor.dim() == t.dim()).map(|e| e.name).collect();
    match_catalog(t, &names).ok()
}

pub fn catalog_fingerprint(name: &str, mode: FieldMode) -> Result<Fingerprint> {
    Ok(fingerprint(&catalog_tensor_in(name, mode)?))
}
