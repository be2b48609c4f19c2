use super::{affine_terms, ReductError};
use crate::algebra::{reduct_algebra, CloneSlice, Model, OperationTable};

/// The `k`-ary term operations of the `ℤₙ` reduct, written down directly as
/// the tables of all idempotent affine operations.
pub fn affine_slice(n: u64, arity: usize) -> Result<CloneSlice, ReductError> {
    let m = n as usize;
    let members = affine_terms(n, arity)?
        .iter()
        .map(|t| {
            let c = t.coeffs();
            OperationTable::from_fn(m, arity, |a| {
                (a.iter().zip(c).map(|(x, k)| *x as i64 * k).sum::<i64>() % n as i64) as usize
            })
        })
        .collect();
    Ok(CloneSlice::from_members(arity, members))
}

/// The `ℤₙ` reduct as a table algebra, with its slices taken from
/// [`affine_slice`] instead of closure generation.
pub fn reduct_model(n: u64) -> Result<Model, ReductError> {
    let algebra = reduct_algebra(n as usize).map_err(|e| ReductError::Inconsistent(e.to_string()))?;
    Ok(Model::with_slices(algebra, affine_slice(n, 2)?, affine_slice(n, 3)?))
}
