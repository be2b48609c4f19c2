//! Finite idempotent algebras given by operation tables, their clone slices,
//! and satisfaction of identity systems by search over those slices.

mod clone;
mod sat;
mod table;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use clone::{clone_slice, CloneSlice, DEFAULT_CAP};
pub use sat::{holds_in, induced_partition, Model, SatVerdict, Witness};
pub use table::OperationTable;

/// Largest table (in entries) an algebra may carry.
pub const MAX_TABLE_ENTRIES: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("algebra size must be at least 2, got {0}")]
    SizeTooSmall(usize),
    #[error("size {size} is too large for arity {arity}")]
    TooLarge { size: usize, arity: usize },
    #[error("operation '{name}' has {found} table entries, expected {expected}")]
    TableLength { name: String, expected: usize, found: usize },
    #[error("operation '{name}' has value {value} outside 0..{size}")]
    ValueOutOfRange { name: String, value: usize, size: usize },
    #[error("operation '{name}' is not idempotent at {element}")]
    NotIdempotent { name: String, element: usize },
    #[error("operation '{name}' has unsupported arity {arity}")]
    UnsupportedArity { name: String, arity: usize },
    #[error("clone slice of arity {arity} exceeded {cap} members")]
    CapExceeded { arity: usize, cap: usize },
    #[error("invalid algebra JSON: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedOp {
    pub name: String,
    pub table: OperationTable,
}

/// A finite universe `{0,…,m-1}` with named idempotent basic operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    size: usize,
    ops: Vec<NamedOp>,
}

impl FiniteAlgebra {
    pub fn new(size: usize, ops: Vec<NamedOp>) -> Result<Self, AlgebraError> {
        if size < 2 {
            return Err(AlgebraError::SizeTooSmall(size));
        }
        for op in &ops {
            let t = &op.table;
            if !(1..=4).contains(&t.arity()) {
                return Err(AlgebraError::UnsupportedArity {
                    name: op.name.clone(),
                    arity: t.arity(),
                });
            }
            if t.size() != size {
                return Err(AlgebraError::TableLength {
                    name: op.name.clone(),
                    expected: size.pow(t.arity() as u32),
                    found: t.len(),
                });
            }
            if let Some(element) = t.idempotence_failure() {
                return Err(AlgebraError::NotIdempotent {
                    name: op.name.clone(),
                    element,
                });
            }
        }
        Ok(FiniteAlgebra { size, ops })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ops(&self) -> &[NamedOp] {
        &self.ops
    }

    pub fn op(&self, name: &str) -> Option<&OperationTable> {
        self.ops.iter().find(|o| o.name == name).map(|o| &o.table)
    }

    /// Compact JSON text `{"size":…,"ops":[{"name":…,"arity":…,"table":[…]}]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&AlgebraJson {
            size: self.size,
            ops: self
                .ops
                .iter()
                .map(|o| OpJson {
                    name: o.name.clone(),
                    arity: o.table.arity(),
                    table: o.table.values().iter().map(|v| *v as usize).collect(),
                })
                .collect(),
        })
        .expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        let raw: AlgebraJson = serde_json::from_str(text).map_err(|e| AlgebraError::Json(e.to_string()))?;
        if raw.size < 2 {
            return Err(AlgebraError::SizeTooSmall(raw.size));
        }
        let ops = raw
            .ops
            .into_iter()
            .map(|o| {
                let table = OperationTable::new(raw.size, o.arity, o.table).map_err(|e| match e {
                    AlgebraError::TableLength { expected, found, .. } => AlgebraError::TableLength {
                        name: o.name.clone(),
                        expected,
                        found,
                    },
                    AlgebraError::ValueOutOfRange { value, size, .. } => AlgebraError::ValueOutOfRange {
                        name: o.name.clone(),
                        value,
                        size,
                    },
                    AlgebraError::UnsupportedArity { arity, .. } => AlgebraError::UnsupportedArity {
                        name: o.name.clone(),
                        arity,
                    },
                    other => other,
                })?;
                Ok(NamedOp { name: o.name, table })
            })
            .collect::<Result<Vec<_>, _>>()?;
        FiniteAlgebra::new(raw.size, ops)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraJson {
    size: usize,
    ops: Vec<OpJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpJson {
    name: String,
    arity: usize,
    table: Vec<usize>,
}

/// The two-element meet semilattice on `{0, 1}`; `0` is the bottom, so it
/// absorbs.
pub fn semilattice_b() -> FiniteAlgebra {
    let meet = OperationTable::from_fn(2, 2, |a| a[0].min(a[1]));
    FiniteAlgebra::new(
        2,
        vec![NamedOp {
            name: "meet".into(),
            table: meet,
        }],
    )
    .expect("meet is idempotent")
}

/// The majority value when two arguments agree, otherwise the first argument.
pub fn majority_value(a: usize, b: usize, c: usize) -> usize {
    if b == c {
        b
    } else {
        a
    }
}

/// One ternary operation `f` on `m` elements: majority when two arguments
/// agree, first argument when all three differ.
pub fn majority_a(m: usize) -> Result<FiniteAlgebra, AlgebraError> {
    if m < 2 {
        return Err(AlgebraError::SizeTooSmall(m));
    }
    let f = OperationTable::from_fn(m, 3, |a| majority_value(a[0], a[1], a[2]));
    FiniteAlgebra::new(m, vec![NamedOp { name: "f".into(), table: f }])
}

/// `ℤₙ` with every ternary idempotent affine operation `αx+βy+γz`,
/// `α+β+γ ≡ 1 (mod n)`, listed by `(α, β)` with `γ` determined.
pub fn reduct_algebra(n: usize) -> Result<FiniteAlgebra, AlgebraError> {
    if n < 2 {
        return Err(AlgebraError::SizeTooSmall(n));
    }
    if n.checked_pow(5).map_or(true, |c| c > MAX_TABLE_ENTRIES) {
        return Err(AlgebraError::TooLarge { size: n, arity: 3 });
    }
    let mut ops = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let c = (1 + 2 * n - a - b) % n;
            let table = OperationTable::from_fn(n, 3, |v| (a * v[0] + b * v[1] + c * v[2]) % n);
            ops.push(NamedOp {
                name: format!("aff({a},{b},{c})"),
                table,
            });
        }
    }
    FiniteAlgebra::new(n, ops)
}

/// Builds `g(x,y,w,z) = f(x,y,f(x,w,z))` from the first ternary operation and
/// checks that `g` is a weak near-unanimity operation with
/// `g(y,x,x,x) = f(y,x,x)`.
pub fn check_wnu_bridge(algebra: &FiniteAlgebra) -> bool {
    let Some(f) = algebra.ops().iter().map(|o| &o.table).find(|t| t.arity() == 3) else {
        return false;
    };
    let m = algebra.size();
    let g = |x: usize, y: usize, w: usize, z: usize| f.eval(&[x, y, f.eval(&[x, w, z])]);
    (0..m).all(|x| {
        g(x, x, x, x) == x
            && (0..m).all(|y| {
                let first = g(y, x, x, x);
                first == g(x, y, x, x) && first == g(x, x, y, x) && first == g(x, x, x, y) && first == f.eval(&[y, x, x])
            })
    })
}
