use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{clone_slice, AlgebraError, CloneSlice, FiniteAlgebra, OperationTable, DEFAULT_CAP};
use crate::terms::{Partition, Symbol, System, TermKind, TermRef, TermUniverse};

/// An interpretation of operation symbols as term operations.
pub type Witness = BTreeMap<Symbol, OperationTable>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatVerdict {
    pub satisfiable: bool,
    pub witness: Option<Witness>,
}

impl SatVerdict {
    fn unsat() -> Self {
        SatVerdict {
            satisfiable: false,
            witness: None,
        }
    }
}

/// An algebra with its binary and ternary clone slices, reusable across many
/// satisfaction queries.
#[derive(Clone, Debug)]
pub struct Model {
    algebra: Arc<FiniteAlgebra>,
    binary: CloneSlice,
    ternary: CloneSlice,
}

impl Model {
    pub fn new(algebra: FiniteAlgebra) -> Result<Self, AlgebraError> {
        let binary = clone_slice(&algebra, 2, DEFAULT_CAP)?;
        let ternary = clone_slice(&algebra, 3, DEFAULT_CAP)?;
        Ok(Model {
            algebra: Arc::new(algebra),
            binary,
            ternary,
        })
    }

    /// Uses slices computed elsewhere (they must be the algebra's term
    /// operations of arity 2 and 3).
    pub fn with_slices(algebra: FiniteAlgebra, binary: CloneSlice, ternary: CloneSlice) -> Self {
        assert_eq!((binary.arity(), ternary.arity()), (2, 3));
        Model {
            algebra: Arc::new(algebra),
            binary,
            ternary,
        }
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn slice(&self, arity: usize) -> &CloneSlice {
        match arity {
            2 => &self.binary,
            3 => &self.ternary,
            _ => panic!("no slice of arity {arity}"),
        }
    }

    /// First witness in slice order (symbols in p, q, t, s order, each
    /// ranging over its slice with projections first), or unsatisfiable.
    pub fn holds(&self, system: &System) -> SatVerdict {
        let m = self.algebra.size();
        let assignments = assignments(m, system.num_vars());
        let terms = system.terms();
        let term_index: HashMap<TermRef, usize> = terms.iter().enumerate().map(|(i, t)| (*t, i)).collect();

        let mentioned: Vec<Symbol> = system.signature().iter().filter(|s| terms.iter().any(|t| t.symbol() == Some(*s))).collect();
        let level = |t: &TermRef| t.symbol().map(|s| mentioned.iter().position(|x| *x == s).expect("mentioned"));

        // For every term and every candidate of its symbol, the value vector
        // over all assignments.
        let tables: Vec<Vec<Vec<u16>>> = terms
            .iter()
            .map(|t| match t.kind() {
                TermKind::Var(v) => vec![assignments.iter().map(|a| a[v.index()] as u16).collect()],
                TermKind::App(s, args) => self
                    .slice(s.arity())
                    .iter()
                    .map(|op| values(op, args, &assignments))
                    .collect(),
            })
            .collect();

        let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); mentioned.len()];
        for id in system.identities() {
            let [l, r] = id.sides();
            let lv = level(&l).into_iter().chain(level(&r)).max();
            match lv {
                None => return SatVerdict::unsat(),
                Some(k) => checks[k].push((term_index[&l], term_index[&r])),
            }
        }

        let slices: Vec<&CloneSlice> = mentioned.iter().map(|s| self.slice(s.arity())).collect();
        let mut choice = vec![0usize; mentioned.len()];
        let pick = |t: usize, choice: &[usize]| -> usize {
            match terms[t].symbol() {
                None => 0,
                Some(s) => choice[mentioned.iter().position(|x| *x == s).expect("mentioned")],
            }
        };
        let ok_at = |depth: usize, choice: &[usize]| {
            checks[depth]
                .iter()
                .all(|(a, b)| tables[*a][pick(*a, choice)] == tables[*b][pick(*b, choice)])
        };

        let found = search(0, &mut choice, &slices, &ok_at);
        if !found {
            return SatVerdict::unsat();
        }
        let mut witness = Witness::new();
        for s in system.signature().iter() {
            let op = match mentioned.iter().position(|x| *x == s) {
                Some(k) => slices[k].members()[choice[k]].clone(),
                None => self.slice(s.arity()).members()[0].clone(),
            };
            witness.insert(s, op);
        }
        SatVerdict {
            satisfiable: true,
            witness: Some(witness),
        }
    }

    /// Checks a given interpretation against every identity pointwise.
    pub fn verifies(&self, system: &System, witness: &Witness) -> bool {
        let assignments = assignments(self.algebra.size(), system.num_vars());
        system.identities().iter().all(|id| {
            let [l, r] = id.sides();
            match (eval_term(&l, witness, &assignments), eval_term(&r, witness, &assignments)) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            }
        })
    }
}

fn search(depth: usize, choice: &mut [usize], slices: &[&CloneSlice], ok_at: &impl Fn(usize, &[usize]) -> bool) -> bool {
    if depth == choice.len() {
        return true;
    }
    for j in 0..slices[depth].len() {
        choice[depth] = j;
        if ok_at(depth, choice) && search(depth + 1, choice, slices, ok_at) {
            return true;
        }
    }
    false
}

/// All `m^k` argument tuples in row-major order.
fn assignments(m: usize, k: usize) -> Vec<Vec<usize>> {
    let total = m.pow(k as u32);
    (0..total)
        .map(|mut code| {
            let mut a = vec![0; k];
            for slot in (0..k).rev() {
                a[slot] = code % m;
                code /= m;
            }
            a
        })
        .collect()
}

fn values(op: &OperationTable, args: &[crate::terms::Var], assignments: &[Vec<usize>]) -> Vec<u16> {
    let mut buf = [0usize; 3];
    assignments
        .iter()
        .map(|a| {
            for (slot, v) in args.iter().enumerate() {
                buf[slot] = a[v.index()];
            }
            op.eval(&buf[..args.len()]) as u16
        })
        .collect()
}

fn eval_term(t: &TermRef, witness: &Witness, assignments: &[Vec<usize>]) -> Option<Vec<u16>> {
    match t.kind() {
        TermKind::Var(v) => Some(assignments.iter().map(|a| a[v.index()] as u16).collect()),
        TermKind::App(s, args) => witness.get(&s).map(|op| values(op, args, assignments)),
    }
}

/// Searches the algebra's clone slices for an interpretation satisfying
/// `system`.
pub fn holds_in(system: &System, algebra: &FiniteAlgebra) -> Result<SatVerdict, AlgebraError> {
    Ok(Model::new(algebra.clone())?.holds(system))
}

/// Groups universe terms by the operation they denote under `witness`.
///
/// Panics if a symbol of the universe has no interpretation.
pub fn induced_partition(witness: &Witness, universe: &Arc<TermUniverse>, algebra: &FiniteAlgebra) -> Partition {
    let assignments = assignments(algebra.size(), universe.num_vars());
    let mut classes: HashMap<Vec<u16>, u32> = HashMap::new();
    let labels: Vec<u32> = universe
        .terms()
        .iter()
        .map(|t| {
            let v = eval_term(t, witness, &assignments).unwrap_or_else(|| panic!("no interpretation for {t}"));
            let n = classes.len() as u32;
            *classes.entry(v).or_insert(n)
        })
        .collect();
    Partition::from_labels(universe.clone(), &labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{majority_a, semilattice_b};
    use crate::terms::{parse_system, Signature};

    fn sys(text: &str) -> System {
        parse_system(text).unwrap().system
    }

    const FOUR: &str = "p(x,x,y)=p(x,y,y); p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)";
    const MASTER: &str = "x=p(x,x,y)=p(x,y,y)=p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)";

    #[test]
    fn candidate_four_in_majority_algebra() {
        let v = holds_in(&sys(FOUR), &majority_a(3).unwrap()).unwrap();
        assert!(v.satisfiable);
        let w = v.witness.unwrap();
        assert_eq!(w[&Symbol::P].projection_index(), Some(0));
        assert_eq!(w[&Symbol::Q].projection_index(), None);
    }

    #[test]
    fn candidate_four_in_semilattice() {
        let b = semilattice_b();
        let v = holds_in(&sys(FOUR), &b).unwrap();
        let w = v.witness.unwrap();
        let full_meet = OperationTable::from_fn(2, 3, |a| a[0].min(a[1]).min(a[2]));
        assert_eq!(w[&Symbol::P], full_meet);
        assert_eq!(w[&Symbol::Q], full_meet);
        let model = Model::new(b).unwrap();
        assert!(model.verifies(&sys(FOUR), &w));
    }

    #[test]
    fn master_system_fails_in_semilattice() {
        assert!(!holds_in(&sys(MASTER), &semilattice_b()).unwrap().satisfiable);
        assert!(holds_in(&sys(MASTER), &majority_a(3).unwrap()).unwrap().satisfiable);
    }

    #[test]
    fn trivial_and_contradictory_systems() {
        let a = majority_a(3).unwrap();
        assert!(holds_in(&System::empty(Signature::of(&[Symbol::P]), 2), &a).unwrap().satisfiable);
        assert!(!holds_in(&sys("x=y"), &a).unwrap().satisfiable);
        assert!(holds_in(&sys("t(x,y)=x"), &a).unwrap().satisfiable);
        assert!(!holds_in(&sys("t(x,y)=t(y,x)"), &a).unwrap().satisfiable);
        assert!(holds_in(&sys("t(x,y)=t(y,x)"), &semilattice_b()).unwrap().satisfiable);
    }

    #[test]
    fn induced_partitions_of_witness_types() {
        let a = majority_a(3).unwrap();
        let model = Model::new(a.clone()).unwrap();
        let slice = model.slice(3);
        let maj = slice.members()[3].clone();
        let pi1 = slice.members()[0].clone();
        let u = TermUniverse::new(Signature::of(&[Symbol::P, Symbol::Q]), 2);

        let w: Witness = [(Symbol::P, pi1.clone()), (Symbol::Q, maj.clone())].into();
        let part = induced_partition(&w, &u, &a);
        assert_eq!(part.num_blocks(), 2);
        assert_eq!(part.to_system(), sys(MASTER).join(&sys("y=p(y,y,x)=p(y,x,x)=p(y,x,y)=q(y,y,x)=q(y,x,y)=q(x,y,y)")));

        let w: Witness = [(Symbol::P, maj.clone()), (Symbol::Q, maj)].into();
        let part = induced_partition(&w, &u, &a);
        let x_block = part.term_blocks()[0].iter().map(|t| t.to_string()).collect::<Vec<_>>();
        assert_eq!(x_block, ["x", "p(x,x,y)", "p(x,y,x)", "p(y,x,x)", "q(x,x,y)", "q(x,y,x)", "q(y,x,x)"]);

        let w: Witness = [(Symbol::P, pi1.clone()), (Symbol::Q, pi1)].into();
        let part = induced_partition(&w, &u, &a);
        let x_block = part.term_blocks()[0].iter().map(|t| t.to_string()).collect::<Vec<_>>();
        assert_eq!(x_block, ["x", "p(x,x,y)", "p(x,y,x)", "p(x,y,y)", "q(x,x,y)", "q(x,y,x)", "q(x,y,y)"]);
    }
}
