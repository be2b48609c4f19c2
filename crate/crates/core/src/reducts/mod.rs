//! Full idempotent reducts of modules: affine terms, the integer constraints
//! an identity system imposes on their coefficients, and solvers for those
//! constraints over `ℤₙ` and over all finite rings at once.

mod affine;
mod lemma;
mod linear;
mod slice;
mod snf;
mod solve;

use thiserror::Error;

pub use affine::{affine_terms, inventory_diff, listed_z5_terms, AffineTerm, InventoryDiff};
pub use lemma::{lemma_shapes, substitution_lemma_check, LemmaCounterexample, LemmaReport};
pub use linear::{coefficient_system, verify_witness, LinearSystem, ReductWitness, Unknowns};
pub use slice::{affine_slice, reduct_model};
pub use snf::{smith_normal_form, SmithForm};
pub use solve::{
    big_to_json, solve_mod, solve_mod_exhaustive, solve_some_finite_ring, PrimeExclusion, RingVerdict,
    UnsatCertificate,
};

/// Largest modulus accepted by the modular solvers.
pub const MAX_MODULUS: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductError {
    #[error("modulus must be between 2 and {MAX_MODULUS}, got {0}")]
    Modulus(u64),
    #[error("unsupported arity {0}")]
    Arity(usize),
    #[error("cannot read affine term '{text}': {reason}")]
    AffineSyntax { text: String, reason: String },
    #[error("coefficients {coeffs:?} do not sum to 1 mod {modulus}")]
    NotIdempotent { modulus: u64, coeffs: Vec<i64> },
    #[error("integer too large for prime factorisation")]
    Overflow,
    #[error("solver produced a witness that fails substitution mod {modulus}")]
    WitnessRejected { modulus: u64 },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
