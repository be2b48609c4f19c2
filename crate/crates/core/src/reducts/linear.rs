use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::AffineTerm;
use crate::terms::{Symbol, System, TermKind, TermRef};

/// Affine interpretation of each symbol.
pub type ReductWitness = BTreeMap<Symbol, AffineTerm>;

/// Where a symbol's coefficients sit in the unknown vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unknowns {
    pub symbol: Symbol,
    pub offset: usize,
    pub arity: usize,
}

/// Integer constraints `A·c = b` on the coefficients of affine
/// interpretations: one row per identity and variable, and one row per
/// symbol requiring its coefficients to sum to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    rows: Vec<Vec<i64>>,
    rhs: Vec<i64>,
    layout: Vec<Unknowns>,
    source: Option<System>,
}

impl LinearSystem {
    pub fn new(rows: Vec<Vec<i64>>, rhs: Vec<i64>, layout: Vec<Unknowns>) -> Self {
        let width: usize = layout.iter().map(|u| u.arity).sum();
        assert_eq!(rows.len(), rhs.len());
        assert!(rows.iter().all(|r| r.len() == width));
        LinearSystem {
            rows,
            rhs,
            layout,
            source: None,
        }
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[i64] {
        &self.rhs
    }

    pub fn layout(&self) -> &[Unknowns] {
        &self.layout
    }

    /// The identity system the constraints were extracted from, if any.
    pub fn source(&self) -> Option<&System> {
        self.source.as_ref()
    }

    pub fn num_unknowns(&self) -> usize {
        self.layout.iter().map(|u| u.arity).sum()
    }

    pub fn big_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows.iter().map(|r| r.iter().map(|x| BigInt::from(*x)).collect()).collect()
    }

    pub fn big_rhs(&self) -> Vec<BigInt> {
        self.rhs.iter().map(|x| BigInt::from(*x)).collect()
    }

    /// True when `A·c ≡ b (mod n)`.
    pub fn satisfied_mod(&self, c: &[i64], n: u64) -> bool {
        let n = n as i128;
        self.rows.iter().zip(&self.rhs).all(|(row, b)| {
            let lhs: i128 = row.iter().zip(c).map(|(a, x)| *a as i128 * *x as i128).sum();
            (lhs - *b as i128).rem_euclid(n) == 0
        })
    }

    /// Concatenated coefficient vector of a witness, in layout order.
    pub fn flatten(&self, witness: &ReductWitness) -> Option<Vec<i64>> {
        let mut out = Vec::with_capacity(self.num_unknowns());
        for u in &self.layout {
            let t = witness.get(&u.symbol)?;
            if t.arity() != u.arity {
                return None;
            }
            out.extend_from_slice(t.coeffs());
        }
        Some(out)
    }
}

impl fmt::Display for LinearSystem {
    /// One constraint per line, unknowns named `p0, p1, p2, q0, …`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self
            .layout
            .iter()
            .flat_map(|u| (0..u.arity).map(move |i| format!("{}{i}", u.symbol)))
            .collect();
        for (row, b) in self.rows.iter().zip(&self.rhs) {
            let mut first = true;
            for (c, name) in row.iter().zip(&names) {
                if *c == 0 {
                    continue;
                }
                let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
                let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
                write!(f, "{sign}{mag}{name}")?;
                first = false;
            }
            if first {
                f.write_str("0")?;
            }
            writeln!(f, " = {b}")?;
        }
        Ok(())
    }
}

/// Coefficient constraints for interpreting every symbol of `system` as an
/// idempotent affine operation of a module.
///
/// Two affine expressions agree on every module exactly when their
/// coefficients at each variable agree, which is what evaluating both sides at
/// the unit vectors of the free module reads off. Rows that are identically
/// `0 = 0` are omitted.
pub fn coefficient_system(system: &System) -> LinearSystem {
    let mut layout = Vec::new();
    let mut offset = 0;
    for s in system.signature().iter() {
        layout.push(Unknowns {
            symbol: s,
            offset,
            arity: s.arity(),
        });
        offset += s.arity();
    }
    let width = offset;
    let position = |s: Symbol| layout.iter().find(|u| u.symbol == s).expect("declared").offset;

    // Contribution of one side: coefficient row and constant at variable v.
    let side = |t: &TermRef, v: usize, row: &mut [i64], sign: i64| -> i64 {
        match t.kind() {
            TermKind::Var(w) => sign * (w.index() == v) as i64,
            TermKind::App(s, args) => {
                let base = position(s);
                for (i, a) in args.iter().enumerate() {
                    if a.index() == v {
                        row[base + i] += sign;
                    }
                }
                0
            }
        }
    };

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for id in system.identities() {
        for v in 0..system.num_vars() {
            let mut row = vec![0i64; width];
            let left_const = side(&id.left(), v, &mut row, 1);
            let right_const = side(&id.right(), v, &mut row, -1);
            let b = -(left_const + right_const);
            if row.iter().any(|x| *x != 0) || b != 0 {
                rows.push(row);
                rhs.push(b);
            }
        }
    }
    for u in &layout {
        let mut row = vec![0i64; width];
        for x in &mut row[u.offset..u.offset + u.arity] {
            *x = 1;
        }
        rows.push(row);
        rhs.push(1);
    }
    LinearSystem {
        rows,
        rhs,
        layout,
        source: Some(system.clone()),
    }
}

/// Checks a witness by evaluating both sides of every identity at every point
/// of `ℤₙ^k`.
pub fn verify_witness(system: &System, witness: &ReductWitness, n: u64) -> bool {
    let k = system.num_vars();
    let n_i = n as i64;
    let points: Vec<Vec<i64>> = (0..(n as usize).pow(k as u32))
        .map(|mut code| {
            let mut p = vec![0i64; k];
            for slot in (0..k).rev() {
                p[slot] = (code % n as usize) as i64;
                code /= n as usize;
            }
            p
        })
        .collect();
    let eval = |t: &TermRef, point: &[i64]| -> Option<i64> {
        match t.kind() {
            TermKind::Var(v) => Some(point[v.index()]),
            TermKind::App(s, args) => {
                let term = witness.get(&s)?;
                if term.arity() != args.len() {
                    return None;
                }
                let vals: Vec<i64> = args.iter().map(|a| point[a.index()]).collect();
                Some(term.coeffs().iter().zip(&vals).map(|(c, x)| c * x).sum::<i64>().rem_euclid(n_i))
            }
        }
    };
    let idempotent = witness.values().all(|t| t.coeffs().iter().sum::<i64>().rem_euclid(n_i) == 1 % n_i);
    idempotent
        && system.identities().iter().all(|id| {
            points.iter().all(|pt| match (eval(&id.left(), pt), eval(&id.right(), pt)) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            })
        })
}
