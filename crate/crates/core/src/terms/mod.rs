//! Linear identities of height at most one: syntax, normal forms, term
//! universes, equivalence closures and the symmetry group acting on them.

mod parse;
mod symmetry;
mod syntax;
mod system;
mod unionfind;
mod universe;
mod weaken;

use thiserror::Error;

pub use parse::{format_system, parse_system, parse_system_in, ParseError, ParseWarning, Parsed};
pub use symmetry::{apply_symmetry, canonicalize, compose, Canonicalizer, SymmetryElement};
pub use syntax::{Identity, Signature, Symbol, TermKind, TermRef, Var};
pub use system::System;
pub use unionfind::UnionFind;
pub use universe::{mirror, partition_closure, renaming_closure, Partition, TermUniverse};
pub use weaken::{bell, set_partitions, weakenings, SetPartitions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("'{symbol}' takes {expected} arguments, got {found}")]
    ArityMismatch { symbol: char, expected: usize, found: usize },
    #[error("symbol '{0}' is not in the signature")]
    UndeclaredSymbol(char),
    #[error("variable '{0}' is not declared")]
    UndeclaredVariable(char),
    #[error("unsupported variable count {0} (expected 1 to 3)")]
    VariableCount(usize),
    #[error("target signature or variable count is smaller than the source")]
    Narrowing,
    #[error("term {0} lies outside the universe")]
    OutsideUniverse(String),
}
