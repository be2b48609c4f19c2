//! Linear identity systems on idempotent terms of arity at most three,
//! checked against a two-element semilattice, a majority algebra, and the
//! full idempotent reducts of modules over finite rings.

pub mod terms;
pub mod algebra;
pub mod reducts;
pub mod classify;
