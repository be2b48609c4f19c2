use serde::Serialize;

use super::{affine_terms, coefficient_system, AffineTerm, ReductError, ReductWitness};
use crate::terms::{Identity, Signature, Symbol, System, TermRef, Var};

/// Outcome of checking that, for single-symbol three-variable identities,
/// the two substitution instances `z→x` and `z→y` force the original.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub primes: Vec<u64>,
    pub shapes: usize,
    pub permutation_shapes: usize,
    pub split_shapes: usize,
    /// Interpretations satisfying both instances, summed over shapes and
    /// primes; each one was checked against the original identity.
    pub witnesses_checked: usize,
    pub counterexamples: Vec<LemmaCounterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCounterexample {
    pub identity: String,
    pub prime: u64,
    pub term: AffineTerm,
}

/// Identity shapes on `p` over `{x, y, z}`: every pair of argument
/// permutations of `(x,y,z)` (identical sides included, as trivial shapes),
/// and every pair of a non-constant `{x,y}` pattern with a non-constant
/// `{x,z}` pattern.
pub fn lemma_shapes() -> (Vec<(TermRef, TermRef)>, Vec<(TermRef, TermRef)>) {
    use Var::*;
    let perms = [[X, Y, Z], [X, Z, Y], [Y, X, Z], [Y, Z, X], [Z, X, Y], [Z, Y, X]];
    let p = |a: [Var; 3]| TermRef::app(Symbol::P, &a).expect("ternary");
    let mut permutation = Vec::new();
    for i in 0..perms.len() {
        for j in i..perms.len() {
            permutation.push((p(perms[i]), p(perms[j])));
        }
    }
    let patterns = |b: Var| -> Vec<[Var; 3]> {
        let mut out = Vec::new();
        for code in 0..8 {
            let pick = |bit: usize| if code >> (2 - bit) & 1 == 1 { b } else { X };
            let pat = [pick(0), pick(1), pick(2)];
            if pat.contains(&X) && pat.contains(&b) {
                out.push(pat);
            }
        }
        out
    };
    let mut split = Vec::new();
    for l in patterns(Y) {
        for r in patterns(Z) {
            split.push((p(l), p(r)));
        }
    }
    (permutation, split)
}

fn as_system(pair: &[(TermRef, TermRef)]) -> System {
    let ids = pair.iter().filter_map(|(a, b)| Identity::new(*a, *b));
    System::new(Signature::of(&[Symbol::P]), 3, ids).expect("declared")
}

/// Runs the check over every shape, prime and affine interpretation of `p`.
pub fn substitution_lemma_check(primes: &[u64]) -> Result<LemmaReport, ReductError> {
    let (permutation, split) = lemma_shapes();
    let mut report = LemmaReport {
        primes: primes.to_vec(),
        shapes: permutation.len() + split.len(),
        permutation_shapes: permutation.len(),
        split_shapes: split.len(),
        ..LemmaReport::default()
    };
    for shape in permutation.iter().chain(&split) {
        let original = as_system(&[*shape]);
        let to_x = original.substitute_variable(Var::Z, Var::X);
        let to_y = original.substitute_variable(Var::Z, Var::Y);
        let (lo, lx, ly) = (coefficient_system(&original), coefficient_system(&to_x), coefficient_system(&to_y));
        for &prime in primes {
            for term in affine_terms(prime, 3)? {
                let w: ReductWitness = [(Symbol::P, term.clone())].into();
                let c = lx.flatten(&w).expect("layout has p");
                if !(lx.satisfied_mod(&c, prime) && ly.satisfied_mod(&c, prime)) {
                    continue;
                }
                report.witnesses_checked += 1;
                if !lo.satisfied_mod(&c, prime) {
                    report.counterexamples.push(LemmaCounterexample {
                        identity: format!("{}={}", shape.0, shape.1),
                        prime,
                        term,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reducts::solve_mod;
    use crate::terms::parse_system;

    #[test]
    fn shape_counts() {
        let (perm, split) = lemma_shapes();
        assert_eq!(perm.len(), 21);
        assert_eq!(split.len(), 36);
    }

    #[test]
    fn swap_of_last_two_places() {
        let s = parse_system("p(x,y,z)=p(x,z,y)").unwrap().system;
        assert_eq!(s.substitute_variable(Var::Z, Var::X).to_string(), "p(x,x,y)=p(x,y,x)");
        assert!(s.substitute_variable(Var::Z, Var::Y).is_empty());
        let l = coefficient_system(&s);
        for t in ["x", "4x+y+z", "2x+2y+2z"] {
            let w: ReductWitness = [(Symbol::P, AffineTerm::parse(t, 3, 5).unwrap())].into();
            assert!(l.satisfied_mod(&l.flatten(&w).unwrap(), 5), "{t}");
        }
    }

    #[test]
    fn incompatible_instances() {
        let s = parse_system("p(x,y,x)=p(z,x,z)").unwrap().system;
        let a = s.substitute_variable(Var::Z, Var::X);
        let b = s.substitute_variable(Var::Z, Var::Y);
        for prime in [2, 3, 5, 7, 11] {
            assert_eq!(solve_mod(&coefficient_system(&a.join(&b)), prime).unwrap(), None);
        }
    }

    #[test]
    fn no_counterexamples_for_small_primes() {
        let r = substitution_lemma_check(&[2, 3, 5]).unwrap();
        assert_eq!(r.shapes, 57);
        assert!(r.witnesses_checked > 0);
        assert!(r.counterexamples.is_empty(), "{:?}", r.counterexamples);
    }
}
