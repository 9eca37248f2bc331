//! Signature enumeration, randomized witness search, minimality scans and the
//! `iwc` command line.

pub mod commands;
pub mod error;
pub mod scan;
pub mod search;

pub use error::CliError;
pub use scan::{minimality_scan, ScanEntry, ScanOptions, ScanReport, SignatureStatus, KNOWN_FACTS};
pub use search::{check_witness, find_matrix, find_matrix_arranged, SearchOptions, SearchOutcome, Witness};
