use std::fmt;

use super::{AlgebraError, MAX_TABLE_ENTRIES};

/// A `k`-ary operation on `{0,…,m-1}` as a flat table in row-major order:
/// the last argument varies fastest.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperationTable {
    size: usize,
    arity: usize,
    values: Vec<u16>,
}

impl OperationTable {
    pub fn new(size: usize, arity: usize, values: Vec<usize>) -> Result<Self, AlgebraError> {
        if size < 2 {
            return Err(AlgebraError::SizeTooSmall(size));
        }
        if size > u16::MAX as usize || !(1..=4).contains(&arity) {
            return Err(AlgebraError::UnsupportedArity {
                name: String::new(),
                arity,
            });
        }
        let expected = size
            .checked_pow(arity as u32)
            .filter(|n| *n <= MAX_TABLE_ENTRIES)
            .ok_or(AlgebraError::TooLarge { size, arity })?;
        if values.len() != expected {
            return Err(AlgebraError::TableLength {
                name: String::new(),
                expected,
                found: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| **v >= size) {
            return Err(AlgebraError::ValueOutOfRange {
                name: String::new(),
                value: *v,
                size,
            });
        }
        Ok(OperationTable {
            size,
            arity,
            values: values.into_iter().map(|v| v as u16).collect(),
        })
    }

    pub fn from_fn(size: usize, arity: usize, f: impl Fn(&[usize]) -> usize) -> Self {
        let total = size.pow(arity as u32);
        let mut args = vec![0; arity];
        let mut values = Vec::with_capacity(total);
        for _ in 0..total {
            let v = f(&args);
            assert!(v < size, "value {v} out of range");
            values.push(v as u16);
            for slot in (0..arity).rev() {
                args[slot] += 1;
                if args[slot] < size {
                    break;
                }
                args[slot] = 0;
            }
        }
        OperationTable { size, arity, values }
    }

    pub fn projection(size: usize, arity: usize, i: usize) -> Self {
        assert!(i < arity);
        Self::from_fn(size, arity, |a| a[i])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u16] {
        &self.values
    }

    pub fn index(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        args.iter().fold(0, |acc, a| acc * self.size + a)
    }

    pub fn eval(&self, args: &[usize]) -> usize {
        self.values[self.index(args)] as usize
    }

    /// Which argument this operation projects onto, if any.
    pub fn projection_index(&self) -> Option<usize> {
        (0..self.arity).find(|i| *self == Self::projection(self.size, self.arity, *i))
    }

    /// Least element where `f(a,…,a) ≠ a`.
    pub fn idempotence_failure(&self) -> Option<usize> {
        (0..self.size).find(|a| self.eval(&vec![*a; self.arity]) != *a)
    }

    pub fn is_idempotent(&self) -> bool {
        self.idempotence_failure().is_none()
    }

    /// `self(h₁,…,h_r)` for operations `hᵢ` of a common arity.
    pub fn compose(&self, inner: &[&OperationTable]) -> OperationTable {
        assert_eq!(inner.len(), self.arity);
        let k = inner[0].arity;
        let n = inner[0].values.len();
        let mut values = Vec::with_capacity(n);
        for idx in 0..n {
            let mut code = 0usize;
            for h in inner {
                code = code * self.size + h.values[idx] as usize;
            }
            values.push(self.values[code]);
        }
        OperationTable {
            size: self.size,
            arity: k,
            values,
        }
    }
}

impl fmt::Debug for OperationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Op{}[{}]{:?}", self.arity, self.size, self.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_layout() {
        let t = OperationTable::from_fn(3, 2, |a| (a[0] + 2 * a[1]) % 3);
        assert_eq!(t.values(), &[0, 2, 1, 1, 0, 2, 2, 1, 0]);
        assert_eq!(t.eval(&[1, 2]), 2);
        assert_eq!(t.index(&[2, 0]), 6);
    }

    #[test]
    fn projections_and_composition() {
        let p0 = OperationTable::projection(2, 2, 0);
        let p1 = OperationTable::projection(2, 2, 1);
        let meet = OperationTable::from_fn(2, 2, |a| a[0].min(a[1]));
        assert_eq!(meet.compose(&[&p1, &p0]), meet);
        assert_eq!(meet.compose(&[&p0, &p0]), p0);
        assert_eq!(p1.projection_index(), Some(1));
        assert_eq!(meet.projection_index(), None);
        assert!(meet.is_idempotent());
    }

    #[test]
    fn validation() {
        assert!(OperationTable::new(2, 1, vec![0, 1]).is_ok());
        assert!(matches!(
            OperationTable::new(2, 1, vec![0]),
            Err(AlgebraError::TableLength { expected: 2, found: 1, .. })
        ));
        assert!(matches!(
            OperationTable::new(2, 5, vec![]),
            Err(AlgebraError::UnsupportedArity { arity: 5, .. })
        ));
        assert!(matches!(
            OperationTable::new(1 << 14, 4, vec![]),
            Err(AlgebraError::TooLarge { .. })
        ));
    }
}
