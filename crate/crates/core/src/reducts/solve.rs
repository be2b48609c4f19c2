use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::snf::{mat_vec, smith_normal_form};
use super::{affine_terms, verify_witness, AffineTerm, LinearSystem, ReductError, ReductWitness};

/// Feasibility test for `A'·y ≡ c (mod n)` with `A'` fixed and `c` varying.
struct Feasibility {
    u_mod: Vec<Vec<i64>>,
    gcds: Vec<i64>,
    n: i64,
}

impl Feasibility {
    fn new(rows: &[Vec<BigInt>], cols: usize, n: u64) -> Self {
        let form = smith_normal_form(rows, cols);
        let nb = BigInt::from(n);
        let u_mod = form
            .u
            .iter()
            .map(|r| r.iter().map(|x| x.mod_floor(&nb).to_i64().expect("reduced")).collect())
            .collect();
        let gcds = form.diag[..form.rank]
            .iter()
            .map(|d| d.gcd(&nb).to_i64().expect("divides n"))
            .collect();
        Feasibility {
            u_mod,
            gcds,
            n: n as i64,
        }
    }

    /// `c` given modulo `n`.
    fn admits(&self, c: &[i64]) -> bool {
        let n = self.n as i128;
        self.u_mod.iter().enumerate().all(|(i, row)| {
            let t: i128 = row.iter().zip(c).map(|(a, b)| *a as i128 * *b as i128).sum::<i128>().rem_euclid(n);
            match self.gcds.get(i) {
                Some(g) => t % *g as i128 == 0,
                None => t == 0,
            }
        })
    }
}

fn check_modulus(n: u64) -> Result<(), ReductError> {
    if n < 2 || n > super::MAX_MODULUS {
        return Err(ReductError::Modulus(n));
    }
    Ok(())
}

/// Least affine interpretation satisfying the constraints over `ℤₙ`, or
/// `None`.
///
/// "Least" compares symbols in layout order, each by its position in
/// [`affine_terms`] (projections first). Symbols are fixed one at a time,
/// keeping a choice only if the remaining unknowns can still be solved; that
/// test runs on the Smith form of the remaining columns. A witness is returned
/// only after it has been checked by direct evaluation.
pub fn solve_mod(linsys: &LinearSystem, n: u64) -> Result<Option<ReductWitness>, ReductError> {
    check_modulus(n)?;
    let big = linsys.big_rows();
    let ni = n as i64;
    let rhs: Vec<i64> = linsys.rhs().iter().map(|b| b.rem_euclid(ni)).collect();
    let width = linsys.num_unknowns();
    if !Feasibility::new(&big, width, n).admits(&rhs) {
        return Ok(None);
    }

    let layout = linsys.layout();
    let mut chosen: Vec<i64> = Vec::with_capacity(width);
    let mut witness = ReductWitness::new();
    for (level, unk) in layout.iter().enumerate() {
        let rest_start = unk.offset + unk.arity;
        let rest: Vec<Vec<BigInt>> = big.iter().map(|r| r[rest_start..].to_vec()).collect();
        let feas = Feasibility::new(&rest, width - rest_start, n);
        let mut picked = None;
        for term in affine_terms(n, unk.arity)? {
            let mut fixed = chosen.clone();
            fixed.extend_from_slice(term.coeffs());
            let residual: Vec<i64> = linsys
                .rows()
                .iter()
                .zip(&rhs)
                .map(|(row, b)| {
                    let lhs: i128 = row[..rest_start].iter().zip(&fixed).map(|(a, x)| *a as i128 * *x as i128).sum();
                    (*b as i128 - lhs).rem_euclid(ni as i128) as i64
                })
                .collect();
            if feas.admits(&residual) {
                picked = Some(term);
                break;
            }
        }
        let term = picked.ok_or_else(|| ReductError::Inconsistent(format!("no extension at symbol {level} mod {n}")))?;
        chosen.extend_from_slice(term.coeffs());
        witness.insert(unk.symbol, term);
    }

    let sound = linsys.satisfied_mod(&chosen, n) && linsys.source().map_or(true, |s| verify_witness(s, &witness, n));
    if !sound {
        return Err(ReductError::WitnessRejected { modulus: n });
    }
    Ok(Some(witness))
}

/// Why a given prime admits no solution: a diagonal entry it divides whose
/// transformed right-hand side it does not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeExclusion {
    pub prime: u64,
    pub row: usize,
}

/// Evidence that no finite ring admits a solution.
///
/// With `D = U·A·V` and `c = U·b`, a solution over `ℤ_p` needs `p | cᵢ` on
/// every zero row of `D`, so only prime factors of `residual_gcd` (the gcd of
/// those `cᵢ`) are possible; each of them is ruled out by an exclusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnsatCertificate {
    #[serde(serialize_with = "big_seq")]
    pub diag: Vec<BigInt>,
    #[serde(serialize_with = "big_seq")]
    pub transformed_rhs: Vec<BigInt>,
    pub rank: usize,
    #[serde(serialize_with = "big_one")]
    pub residual_gcd: BigInt,
    pub exclusions: Vec<PrimeExclusion>,
}

impl UnsatCertificate {
    /// Recomputes the Smith form and checks that every prime is ruled out.
    pub fn recheck(&self, linsys: &LinearSystem) -> bool {
        let form = smith_normal_form(&linsys.big_rows(), linsys.num_unknowns());
        let c = mat_vec(&form.u, &linsys.big_rhs());
        if form.diag != self.diag || c != self.transformed_rhs || form.rank != self.rank {
            return false;
        }
        let g = c[form.rank..].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g != self.residual_gcd || g.is_zero() {
            return false;
        }
        let Some(factors) = prime_factors(&g) else {
            return false;
        };
        factors.iter().all(|p| {
            self.exclusions.iter().any(|e| {
                let pb = BigInt::from(e.prime);
                e.prime == *p
                    && e.row < form.rank
                    && form.diag[e.row].is_multiple_of(&pb)
                    && !c[e.row].is_multiple_of(&pb)
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingVerdict {
    SatisfiableIn { prime: u64, witness: ReductWitness },
    UnsatisfiableAllFiniteRings(UnsatCertificate),
}

impl RingVerdict {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, RingVerdict::SatisfiableIn { .. })
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            RingVerdict::SatisfiableIn { prime, .. } => Some(*prime),
            RingVerdict::UnsatisfiableAllFiniteRings(_) => None,
        }
    }
}

/// Decides whether the constraints are solvable over some finite ring.
///
/// A finite ring maps onto a simple one, a matrix ring over a finite field
/// `F_q`; an integer system solvable there is solvable entrywise over `F_q`,
/// and solvability over `F_q` of a system defined over its prime field
/// matches solvability over `ℤ_p`. Conversely `ℤ_p` is itself a finite ring.
/// So it suffices to find a prime `p` with a solution mod `p`, which the
/// Smith form reduces to divisibility conditions.
pub fn solve_some_finite_ring(linsys: &LinearSystem) -> Result<RingVerdict, ReductError> {
    let form = smith_normal_form(&linsys.big_rows(), linsys.num_unknowns());
    let c = mat_vec(&form.u, &linsys.big_rhs());
    let rank = form.rank;
    let g = c[rank..].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let excludes = |p: u64| -> Option<usize> {
        let pb = BigInt::from(p);
        (0..rank).find(|i| form.diag[*i].is_multiple_of(&pb) && !c[*i].is_multiple_of(&pb))
    };

    let prime = if g.is_zero() {
        // Only primes dividing some diagonal entry can be excluded.
        let mut p = 2u64;
        loop {
            if excludes(p).is_none() {
                break Some(p);
            }
            p = next_prime(p);
        }
    } else {
        let factors = prime_factors(&g).ok_or(ReductError::Overflow)?;
        factors.into_iter().find(|p| excludes(*p).is_none())
    };

    match prime {
        Some(p) => {
            let witness = solve_mod(linsys, p)?
                .ok_or_else(|| ReductError::Inconsistent(format!("Smith form admits {p} but no solution found")))?;
            Ok(RingVerdict::SatisfiableIn { prime: p, witness })
        }
        None => {
            let exclusions = prime_factors(&g)
                .ok_or(ReductError::Overflow)?
                .into_iter()
                .map(|p| PrimeExclusion {
                    prime: p,
                    row: excludes(p).expect("every factor is excluded"),
                })
                .collect();
            Ok(RingVerdict::UnsatisfiableAllFiniteRings(UnsatCertificate {
                diag: form.diag,
                transformed_rhs: c,
                rank,
                residual_gcd: g,
                exclusions,
            }))
        }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn next_prime(p: u64) -> u64 {
    (p + 1..).find(|q| is_prime(*q)).expect("primes are unbounded")
}

/// Distinct prime factors in increasing order; `None` if `|g|` exceeds 64 bits.
fn prime_factors(g: &BigInt) -> Option<Vec<u64>> {
    let mut n = g.abs().to_u64()?;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    Some(out)
}

/// Integers as JSON numbers when they fit in 64 bits, as strings otherwise.
pub fn big_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

fn big_seq<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    xs.iter().map(big_to_json).collect::<Vec<_>>().serialize(s)
}

fn big_one<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    big_to_json(x).serialize(s)
}

/// Same as [`solve_mod`] but by exhaustive search over all interpretations;
/// exponential in the number of symbols.
pub fn solve_mod_exhaustive(linsys: &LinearSystem, n: u64) -> Result<Option<ReductWitness>, ReductError> {
    check_modulus(n)?;
    let options: Vec<Vec<AffineTerm>> = linsys
        .layout()
        .iter()
        .map(|u| affine_terms(n, u.arity))
        .collect::<Result<_, _>>()?;
    let mut idx = vec![0usize; options.len()];
    loop {
        let coeffs: Vec<i64> = idx.iter().zip(&options).flat_map(|(i, o)| o[*i].coeffs().to_vec()).collect();
        if linsys.satisfied_mod(&coeffs, n) {
            return Ok(Some(
                linsys.layout().iter().zip(idx.iter().zip(&options)).map(|(u, (i, o))| (u.symbol, o[*i].clone())).collect(),
            ));
        }
        let mut slot = idx.len();
        loop {
            if slot == 0 {
                return Ok(None);
            }
            slot -= 1;
            idx[slot] += 1;
            if idx[slot] < options[slot].len() {
                break;
            }
            idx[slot] = 0;
        }
    }
}
