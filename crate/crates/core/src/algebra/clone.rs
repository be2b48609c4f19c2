use std::collections::HashSet;

use super::{AlgebraError, FiniteAlgebra, OperationTable};

/// Default bound on slice sizes; far above anything the built-in algebras
/// generate.
pub const DEFAULT_CAP: usize = 100_000;

/// The `k`-ary term operations of an algebra. Projections come first, in
/// argument order, followed by the rest in table order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CloneSlice {
    arity: usize,
    members: Vec<OperationTable>,
}

impl CloneSlice {
    /// Wraps an externally produced member list, imposing slice order.
    pub fn from_members(arity: usize, mut members: Vec<OperationTable>) -> Self {
        members.sort_by(|a, b| {
            let key = |t: &OperationTable| t.projection_index().unwrap_or(usize::MAX);
            key(a).cmp(&key(b)).then_with(|| a.values().cmp(b.values()))
        });
        members.dedup();
        CloneSlice { arity, members }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn members(&self) -> &[OperationTable] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, op: &OperationTable) -> bool {
        self.members.contains(op)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, OperationTable> {
        self.members.iter()
    }
}

/// Least set of `k`-ary operations containing the projections and closed
/// under applying any basic operation to members.
///
/// Each round only composes tuples that use at least one member found in the
/// previous round.
pub fn clone_slice(algebra: &FiniteAlgebra, arity: usize, cap: usize) -> Result<CloneSlice, AlgebraError> {
    let m = algebra.size();
    let mut members: Vec<OperationTable> = (0..arity).map(|i| OperationTable::projection(m, arity, i)).collect();
    let mut seen: HashSet<OperationTable> = members.iter().cloned().collect();
    let mut frontier_start = 0;
    while frontier_start < members.len() {
        let round_end = members.len();
        let mut fresh = Vec::new();
        for op in algebra.ops() {
            let r = op.table.arity();
            let mut idx = vec![0usize; r];
            loop {
                if idx.iter().any(|i| *i >= frontier_start) {
                    let inner: Vec<&OperationTable> = idx.iter().map(|i| &members[*i]).collect();
                    let composed = op.table.compose(&inner);
                    if seen.insert(composed.clone()) {
                        fresh.push(composed);
                        if seen.len() > cap {
                            return Err(AlgebraError::CapExceeded { arity, cap });
                        }
                    }
                }
                if !advance(&mut idx, round_end) {
                    break;
                }
            }
        }
        frontier_start = round_end;
        members.extend(fresh);
    }
    Ok(CloneSlice::from_members(arity, members))
}

/// Steps an odometer over `0..bound` per slot; false once it wraps.
fn advance(idx: &mut [usize], bound: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < bound {
            return true;
        }
        *slot = 0;
    }
    false
}
