//! Exact arithmetic, Lie algebra structure constants, derivations and
//! contraction limits.

pub mod algebra;
pub mod catalog;
pub mod contraction;
pub mod derivations;
pub mod eps;
pub mod error;
pub mod fingerprint;
pub mod matrix;
pub mod scalar;
pub mod signature;

pub use algebra::{BracketEntry, StructureTensor, Violation};
pub use catalog::{catalog, catalog_get, catalog_get_in, catalog_tensor_in, identify, match_catalog, CatalogEntry};
pub use contraction::{
    contract_with_matrix, iw_limit_diagonal, verify_iw, Classification, ContractionResult, IWSpec, VerificationReport,
};
pub use derivations::{admissible_arrangements, admissible_signatures, derivation_basis, is_derivation, DerivationBasis, DiagonalLattice};
pub use eps::{EpsMatrix, EpsPoly, EpsRational, Order};
pub use error::{ArithError, Error, Result};
pub use fingerprint::{fingerprint, Fingerprint};
pub use matrix::Matrix;
pub use scalar::{FieldMode, Scalar};
pub use signature::{enumerate_signatures, signature_cmp, Signature};
