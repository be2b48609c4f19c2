use std::collections::BTreeMap;
use std::fmt;

use super::unionfind::UnionFind;
use super::{Identity, Signature, TermError, TermKind, TermRef, Var};

/// A set of linear identities over a declared signature and variable count.
///
/// Systems are stored in a normal form: the equivalence generated by the
/// identities is computed, each non-singleton class is sorted, and consecutive
/// members are paired. Two systems generating the same equalities on their
/// terms are therefore equal as values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct System {
    signature: Signature,
    num_vars: usize,
    identities: Vec<Identity>,
}

impl System {
    pub fn empty(signature: Signature, num_vars: usize) -> Self {
        System {
            signature,
            num_vars,
            identities: Vec::new(),
        }
    }

    pub fn new(
        signature: Signature,
        num_vars: usize,
        identities: impl IntoIterator<Item = Identity>,
    ) -> Result<Self, TermError> {
        if !(1..=3).contains(&num_vars) {
            return Err(TermError::VariableCount(num_vars));
        }
        let identities: Vec<Identity> = identities.into_iter().collect();
        for id in &identities {
            for t in id.sides() {
                check_term(&t, signature, num_vars)?;
            }
        }
        let blocks = closure_blocks(identities.iter().map(|id| id.sides()));
        Ok(Self::from_sorted_blocks(signature, num_vars, blocks))
    }

    /// Builds a system whose classes are exactly the given blocks (merged if
    /// they overlap).
    pub fn from_blocks(
        signature: Signature,
        num_vars: usize,
        blocks: impl IntoIterator<Item = Vec<TermRef>>,
    ) -> Result<Self, TermError> {
        let mut ids = Vec::new();
        for block in blocks {
            for pair in block.windows(2) {
                ids.extend(Identity::new(pair[0], pair[1]));
            }
        }
        System::new(signature, num_vars, ids)
    }

    fn from_sorted_blocks(signature: Signature, num_vars: usize, blocks: Vec<Vec<TermRef>>) -> Self {
        let identities = blocks
            .iter()
            .flat_map(|b| b.windows(2).map(|w| Identity::new(w[0], w[1]).expect("distinct")))
            .collect();
        System {
            signature,
            num_vars,
            identities,
        }
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    pub fn len(&self) -> usize {
        self.identities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.identities.is_empty()
    }

    /// Non-singleton classes of the generated equivalence, each sorted, in
    /// order of least element.
    pub fn blocks(&self) -> Vec<Vec<TermRef>> {
        closure_blocks(self.identities.iter().map(|id| id.sides()))
    }

    /// All distinct terms mentioned by the identities, sorted.
    pub fn terms(&self) -> Vec<TermRef> {
        let mut ts: Vec<TermRef> = self.identities.iter().flat_map(|id| id.sides()).collect();
        ts.sort();
        ts.dedup();
        ts
    }

    /// Same identities under a larger signature or variable count.
    pub fn widen(&self, signature: Signature, num_vars: usize) -> Result<Self, TermError> {
        if !self.signature.is_subset(signature) || num_vars < self.num_vars {
            return Err(TermError::Narrowing);
        }
        System::new(signature, num_vars, self.identities.iter().copied())
    }

    /// The union of two systems over the joined signature.
    pub fn join(&self, other: &System) -> System {
        let sig = self.signature.union(other.signature);
        let nv = self.num_vars.max(other.num_vars);
        System::new(sig, nv, self.identities.iter().chain(other.identities.iter()).copied())
            .expect("terms of both operands are declared in the join")
    }

    /// Rewrites every term through `f`, dropping identities that become trivial.
    pub fn map_terms(&self, f: impl Fn(&TermRef) -> TermRef) -> Result<Self, TermError> {
        let ids = self
            .identities
            .iter()
            .filter_map(|id| Identity::new(f(&id.left()), f(&id.right())));
        System::new(self.signature, self.num_vars, ids)
    }

    /// Replaces every occurrence of `from` with `to`.
    pub fn substitute_variable(&self, from: Var, to: Var) -> System {
        self.map_terms(|t| t.map_vars(|v| if v == from { to } else { v }))
            .expect("substitution stays within declared variables")
    }

    /// True when every identity of `other` follows from the equalities of `self`.
    pub fn implies(&self, other: &System) -> bool {
        let joined = self.join(other);
        let lhs = self.widen(joined.signature, joined.num_vars).expect("subset");
        lhs == joined
    }
}

fn check_term(t: &TermRef, signature: Signature, num_vars: usize) -> Result<(), TermError> {
    if let TermKind::App(s, _) = t.kind() {
        if !signature.contains(s) {
            return Err(TermError::UndeclaredSymbol(s.name()));
        }
    }
    for v in t.vars() {
        if v.index() >= num_vars {
            return Err(TermError::UndeclaredVariable(v.name()));
        }
    }
    Ok(())
}

/// Union-find closure over the terms named by `pairs`.
fn closure_blocks(pairs: impl Iterator<Item = [TermRef; 2]>) -> Vec<Vec<TermRef>> {
    let pairs: Vec<[TermRef; 2]> = pairs.collect();
    let mut index: BTreeMap<TermRef, usize> = BTreeMap::new();
    for p in &pairs {
        for t in p {
            let n = index.len();
            index.entry(*t).or_insert(n);
        }
    }
    let mut uf = UnionFind::new(index.len());
    for [a, b] in &pairs {
        uf.union(index[a], index[b]);
    }
    let mut classes: BTreeMap<usize, Vec<TermRef>> = BTreeMap::new();
    for (t, i) in &index {
        classes.entry(uf.find(*i)).or_default().push(*t);
    }
    let mut blocks: Vec<Vec<TermRef>> = classes.into_values().filter(|b| b.len() > 1).collect();
    for b in &mut blocks {
        b.sort();
    }
    blocks.sort();
    blocks
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::format_system(self))
    }
}
