//! Polynomial systems over Q and Q(i), Gröbner bases with replayable
//! derivations, and existence certificates for generalized IW contractions.

mod coeff;
pub mod certificate;
pub mod error;
pub mod fixtures;
pub mod groebner;
pub mod ideal;
pub mod iwsystem;
pub mod poly;

pub use certificate::{
    certify_complex, certify_real_branch, check_certificate, prove_membership, search_real_branch, BranchFailure, BranchPlan, Certificate,
    ComplexOutcome, Factor, RealBranch,
};
pub use error::PolyError;
pub use groebner::{
    buchberger, buchberger_traced, buchberger_with_stats, reduce, Derivation, GbOptions, GbStats, GroebnerBasis,
    StepTerm, TracedRun, DEFAULT_PAIR_BUDGET,
};
pub use fixtures::{fixture_witness, load_fixture, Expectation, Fixture, FIXTURE_IDS};
pub use ideal::Ideal;
pub use iwsystem::{generate_iw_system, InverseEncoding, IwSystem, Nonsingularity, SystemOptions};
pub use poly::{Monomial, MonomialOrder, MultiPoly, Var};
