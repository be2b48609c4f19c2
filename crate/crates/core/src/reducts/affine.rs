use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ReductError;

const VAR_NAMES: [char; 3] = ['x', 'y', 'z'];

/// An affine combination `Σ cᵢ·xᵢ` of the arguments of a term. With a modulus
/// the coefficients live in `ℤₙ` and sum to 1 there; without one they are
/// plain integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineTerm {
    modulus: Option<u64>,
    coeffs: Vec<i64>,
}

impl AffineTerm {
    /// Reduces coefficients into `0..n` and checks that they sum to 1.
    pub fn new(modulus: u64, coeffs: Vec<i64>) -> Result<Self, ReductError> {
        if !(2..=super::MAX_MODULUS).contains(&modulus) {
            return Err(ReductError::Modulus(modulus));
        }
        let n = modulus as i64;
        let coeffs: Vec<i64> = coeffs.iter().map(|c| c.rem_euclid(n)).collect();
        let sum = coeffs.iter().fold(0i64, |s, c| (s + c) % n);
        if sum != 1 % n {
            return Err(ReductError::NotIdempotent {
                modulus,
                coeffs: coeffs.clone(),
            });
        }
        Ok(AffineTerm {
            modulus: Some(modulus),
            coeffs,
        })
    }

    pub fn integer(coeffs: Vec<i64>) -> Self {
        AffineTerm { modulus: None, coeffs }
    }

    pub fn projection(modulus: u64, arity: usize, i: usize) -> Self {
        let mut coeffs = vec![0; arity];
        coeffs[i] = 1;
        AffineTerm::new(modulus, coeffs).expect("projection is idempotent")
    }

    /// Parses text such as `3x+3z`, `x+2y+3z`, `-y+2x` or `pi1` (also `π1`).
    /// Coefficients are reduced modulo `modulus` and must then sum to 1.
    pub fn parse(text: &str, arity: usize, modulus: u64) -> Result<Self, ReductError> {
        let coeffs = parse_coefficients(text, arity)?;
        AffineTerm::new(modulus, coeffs)
    }

    /// Integer-mode parse: coefficients are kept as written.
    pub fn parse_integer(text: &str, arity: usize) -> Result<Self, ReductError> {
        parse_coefficients(text, arity).map(AffineTerm::integer)
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn projection_index(&self) -> Option<usize> {
        let ones: Vec<usize> = (0..self.arity()).filter(|i| self.coeffs[*i] == 1).collect();
        let zeros = self.coeffs.iter().filter(|c| **c == 0).count();
        (ones.len() == 1 && zeros + 1 == self.arity()).then(|| ones[0])
    }

    /// Value at a point of `ℤₙ^k`.
    pub fn eval(&self, args: &[i64]) -> i64 {
        let raw: i64 = self.coeffs.iter().zip(args).map(|(c, a)| c * a).sum();
        match self.modulus {
            Some(n) => raw.rem_euclid(n as i64),
            None => raw,
        }
    }

    /// Position in the listing order of [`affine_terms`]: projections first,
    /// then lexicographic coefficient order.
    pub fn rank_key(&self) -> (usize, Vec<i64>) {
        (self.projection_index().unwrap_or(usize::MAX), self.coeffs.clone())
    }
}

impl fmt::Display for AffineTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.coeffs.iter().zip(VAR_NAMES) {
            if *c == 0 {
                continue;
            }
            if *c < 0 {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "{name}")?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl FromStr for AffineTerm {
    type Err = ReductError;

    /// Integer-mode parse of a ternary term.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_coefficients(s, 3).map(AffineTerm::integer)
    }
}

fn parse_coefficients(text: &str, arity: usize) -> Result<Vec<i64>, ReductError> {
    let bad = |why: &str| ReductError::AffineSyntax {
        text: text.to_string(),
        reason: why.to_string(),
    };
    if !(1..=3).contains(&arity) {
        return Err(bad("arity must be 1 to 3"));
    }
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let projection = compact
        .strip_prefix("pi")
        .or_else(|| compact.strip_prefix('π'));
    if let Some(rest) = projection {
        let i: usize = rest.parse().map_err(|_| bad("expected a projection index"))?;
        if i == 0 || i > arity {
            return Err(bad("projection index out of range"));
        }
        let mut coeffs = vec![0; arity];
        coeffs[i - 1] = 1;
        return Ok(coeffs);
    }
    if compact.is_empty() {
        return Err(bad("empty term"));
    }
    let mut coeffs = vec![0i64; arity];
    let chars: Vec<char> = compact.chars().collect();
    let mut i = 0;
    let mut first = true;
    while i < chars.len() {
        let mut sign = 1i64;
        match chars[i] {
            '+' => i += 1,
            '-' => {
                sign = -1;
                i += 1;
            }
            _ if first => {}
            _ => return Err(bad("expected '+' or '-' between summands")),
        }
        first = false;
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let digits: String = chars[start..i].iter().collect();
        let magnitude: i64 = if digits.is_empty() {
            1
        } else {
            digits.parse().map_err(|_| bad("coefficient too large"))?
        };
        let var = chars.get(i).ok_or_else(|| bad("summand without a variable"))?;
        let slot = VAR_NAMES[..arity]
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| bad("unknown variable"))?;
        i += 1;
        coeffs[slot] = coeffs[slot]
            .checked_add(sign * magnitude)
            .ok_or_else(|| bad("coefficient too large"))?;
    }
    Ok(coeffs)
}

/// All idempotent affine `k`-ary terms over `ℤₙ` (`n^(k-1)` of them),
/// projections first and the rest in lexicographic coefficient order.
pub fn affine_terms(n: u64, arity: usize) -> Result<Vec<AffineTerm>, ReductError> {
    if !(2..=super::MAX_MODULUS).contains(&n) {
        return Err(ReductError::Modulus(n));
    }
    if !(1..=3).contains(&arity) {
        return Err(ReductError::Arity(arity));
    }
    let mut out: Vec<AffineTerm> = Vec::with_capacity((n as usize).pow(arity as u32 - 1));
    let mut free = vec![0i64; arity - 1];
    loop {
        let partial: i64 = free.iter().sum();
        let mut coeffs = free.clone();
        coeffs.push((1 - partial).rem_euclid(n as i64));
        out.push(AffineTerm::new(n, coeffs).expect("sum is one"));
        let mut slot = free.len();
        loop {
            if slot == 0 {
                out.sort_by_key(AffineTerm::rank_key);
                return Ok(out);
            }
            slot -= 1;
            free[slot] += 1;
            if free[slot] < n as i64 {
                break;
            }
            free[slot] = 0;
        }
    }
}

/// Comparison of a hand-written list of terms with the true inventory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InventoryDiff {
    pub expected_count: usize,
    pub listed_count: usize,
    pub distinct_listed: usize,
    /// Listed more than once, with multiplicity.
    pub duplicates: Vec<(AffineTerm, usize)>,
    /// Present in the inventory but absent from the list.
    pub missing: Vec<AffineTerm>,
    /// Listed but not idempotent affine terms of the right arity.
    pub invalid: Vec<String>,
}

/// Checks `listed` (one term per entry) against `affine_terms(n, arity)`.
pub fn inventory_diff(n: u64, arity: usize, listed: &[&str]) -> Result<InventoryDiff, ReductError> {
    let all = affine_terms(n, arity)?;
    let mut counts: Vec<usize> = vec![0; all.len()];
    let mut invalid = Vec::new();
    for text in listed {
        match AffineTerm::parse(text, arity, n) {
            Ok(t) => {
                let i = all.iter().position(|a| *a == t).expect("inventory is complete");
                counts[i] += 1;
            }
            Err(_) => invalid.push(text.to_string()),
        }
    }
    Ok(InventoryDiff {
        expected_count: all.len(),
        listed_count: listed.len(),
        distinct_listed: counts.iter().filter(|c| **c > 0).count(),
        duplicates: all
            .iter()
            .zip(&counts)
            .filter(|(_, c)| **c > 1)
            .map(|(t, c)| (t.clone(), *c))
            .collect(),
        missing: all.iter().zip(&counts).filter(|(_, c)| **c == 0).map(|(t, _)| t.clone()).collect(),
        invalid,
    })
}

/// The commonly printed ℤ₅ table of ternary terms, one entry per line.
pub fn listed_z5_terms() -> Vec<&'static str> {
    include_str!("../../data/z5_listed_terms.txt")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}
