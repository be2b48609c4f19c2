//! Enumeration of the two-variable systems of each symbol family that hold
//! in the majority algebra, their classification against the semilattice and
//! the affine reducts, and the search for minimal candidates.

mod classifier;
mod family;
mod manifest;
mod minimal;
mod report;

use thiserror::Error;

pub use classifier::{classify_system, Classification, Classifier, DEFAULT_A_SIZES};
pub use family::{
    enumerate_family, master_partitions, type_assignments, Enumeration, MasterFamily, TypeAssignment, WitnessType,
};
pub use manifest::{verify_paper, EntryOutcome, Expectation, Manifest, ManifestEntry, ManifestWitness, ManifestReport};
pub use minimal::{minimal_candidates, minimality, CandidateEntry, CandidateReport, Minimality};
pub use report::{candidate_markdown, manifest_markdown, verdict_json, VerdictJson};

use crate::algebra::AlgebraError;
use crate::reducts::ReductError;
use crate::terms::{ParseError, TermError};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Reduct(#[from] ReductError),
    #[error("'{0}' is not a two-variable system of a family that holds in the majority algebra")]
    NoMaster(String),
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
}
