use std::sync::Arc;

use super::unionfind::UnionFind;
use super::{Signature, System, TermError, TermRef, Var};

/// Every legal term over a signature and variable count, sorted by the term
/// order. For `{p, q}` over `{x, y}` that is 2 variables and 6 patterns per
/// symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermUniverse {
    signature: Signature,
    num_vars: usize,
    terms: Vec<TermRef>,
}

impl TermUniverse {
    pub fn new(signature: Signature, num_vars: usize) -> Arc<Self> {
        let vars: Vec<Var> = Var::ALL[..num_vars].to_vec();
        let mut terms: Vec<TermRef> = vars.iter().map(|v| TermRef::var(*v)).collect();
        for s in signature.iter() {
            let k = s.arity();
            let total = num_vars.pow(k as u32);
            for code in 0..total {
                let mut args = vec![Var::X; k];
                let mut c = code;
                for slot in (0..k).rev() {
                    args[slot] = vars[c % num_vars];
                    c /= num_vars;
                }
                let t = TermRef::app(s, &args).expect("arity");
                if !t.is_var() {
                    terms.push(t);
                }
            }
        }
        terms.sort();
        Arc::new(TermUniverse {
            signature,
            num_vars,
            terms,
        })
    }

    pub fn for_system(system: &System) -> Arc<Self> {
        Self::new(system.signature(), system.num_vars())
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[TermRef] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, t: &TermRef) -> Option<usize> {
        self.terms.binary_search(t).ok()
    }

    pub fn term(&self, i: usize) -> TermRef {
        self.terms[i]
    }

    /// Index permutation induced by a term map that preserves the universe.
    pub fn permutation(&self, f: impl Fn(&TermRef) -> TermRef) -> Vec<usize> {
        self.terms
            .iter()
            .map(|t| self.index_of(&f(t)).expect("map preserves the universe"))
            .collect()
    }
}

/// An equivalence relation on a term universe, stored as a restricted growth
/// string: block labels numbered by least member.
#[derive(Clone, Debug)]
pub struct Partition {
    universe: Arc<TermUniverse>,
    labels: Vec<u32>,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.universe == other.universe
    }
}

impl Eq for Partition {}

impl std::hash::Hash for Partition {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.labels.hash(state);
    }
}

impl Partition {
    pub fn singletons(universe: Arc<TermUniverse>) -> Self {
        let labels = (0..universe.len() as u32).collect();
        Partition { universe, labels }
    }

    /// Normalises arbitrary labels into canonical form.
    pub fn from_labels(universe: Arc<TermUniverse>, raw: &[u32]) -> Self {
        assert_eq!(raw.len(), universe.len(), "one label per universe term");
        Partition {
            labels: canonical_labels(raw),
            universe,
        }
    }

    pub fn universe(&self) -> &Arc<TermUniverse> {
        &self.universe
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| *m as usize + 1)
    }

    /// Blocks as sorted index lists, ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, l) in self.labels.iter().enumerate() {
            blocks[*l as usize].push(i);
        }
        blocks
    }

    pub fn term_blocks(&self) -> Vec<Vec<TermRef>> {
        self.blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|i| self.universe.term(i)).collect())
            .collect()
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn block_of_term(&self, t: &TermRef) -> Option<Vec<TermRef>> {
        let i = self.universe.index_of(t)?;
        let l = self.labels[i];
        Some(
            self.labels
                .iter()
                .enumerate()
                .filter(|(_, m)| **m == l)
                .map(|(j, _)| self.universe.term(j))
                .collect(),
        )
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        assert_eq!(self.universe.len(), other.universe.len());
        let mut image = vec![u32::MAX; self.num_blocks()];
        for (a, b) in self.labels.iter().zip(&other.labels) {
            let slot = &mut image[*a as usize];
            if *slot == u32::MAX {
                *slot = *b;
            } else if *slot != *b {
                return false;
            }
        }
        true
    }

    pub fn strictly_refines(&self, other: &Partition) -> bool {
        self.refines(other) && self.labels != other.labels
    }

    /// Image under an index permutation `perm` (term `i` moves to `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Partition {
        let mut raw = vec![0; self.labels.len()];
        for (i, l) in self.labels.iter().enumerate() {
            raw[perm[i]] = *l;
        }
        Partition::from_labels(self.universe.clone(), &raw)
    }

    /// Smallest partition refined by both.
    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.labels.len();
        let mut uf = UnionFind::new(n);
        for labels in [&self.labels, &other.labels] {
            let mut first = vec![usize::MAX; n];
            for (i, l) in labels.iter().enumerate() {
                let f = &mut first[*l as usize];
                if *f == usize::MAX {
                    *f = i;
                } else {
                    uf.union(*f, i);
                }
            }
        }
        Partition {
            universe: self.universe.clone(),
            labels: uf.labels(),
        }
    }

    /// The system whose classes are the non-singleton blocks.
    pub fn to_system(&self) -> System {
        let blocks = self.term_blocks().into_iter().filter(|b| b.len() > 1);
        System::from_blocks(self.universe.signature(), self.universe.num_vars(), blocks)
            .expect("universe terms are declared")
    }
}

fn canonical_labels(raw: &[u32]) -> Vec<u32> {
    let mut map = std::collections::HashMap::new();
    raw.iter()
        .map(|l| {
            let n = map.len() as u32;
            *map.entry(*l).or_insert(n)
        })
        .collect()
}

/// Smallest equivalence on `universe` containing every identity of `system`.
pub fn partition_closure(system: &System, universe: &Arc<TermUniverse>) -> Result<Partition, TermError> {
    let mut uf = UnionFind::new(universe.len());
    for id in system.identities() {
        let [a, b] = id.sides().map(|t| universe.index_of(&t).ok_or(TermError::OutsideUniverse(t.to_string())));
        uf.union(a?, b?);
    }
    Ok(Partition {
        universe: universe.clone(),
        labels: uf.labels(),
    })
}

/// Variable permutations of the first `num_vars` variables (undeclared ones
/// fixed), identity first.
pub(crate) fn var_permutations(num_vars: usize) -> Vec<[Var; 3]> {
    const ALL: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    ALL.iter()
        .filter(|p| (num_vars..3).all(|i| p[i] == i))
        .map(|p| p.map(|i| Var::ALL[i]))
        .collect()
}

/// Closure of a system together with all its variable-renamed copies.
///
/// Identities are universally quantified, so renaming variables inside a
/// system never changes what it says; this partition is the semantic content
/// of the system on its universe.
pub fn renaming_closure(system: &System, universe: &Arc<TermUniverse>) -> Result<Partition, TermError> {
    let base = partition_closure(system, universe)?;
    let mut acc = base.clone();
    for perm in var_permutations(universe.num_vars()).into_iter().skip(1) {
        let idx = universe.permutation(|t| t.map_vars(|v| perm[v.index()]));
        acc = acc.join(&base.permuted(&idx));
    }
    Ok(acc)
}

/// The x↔y mirror of a term.
pub fn mirror(t: &TermRef) -> TermRef {
    t.map_vars(|v| match v {
        Var::X => Var::Y,
        Var::Y => Var::X,
        other => other,
    })
}
