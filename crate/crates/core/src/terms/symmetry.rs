use std::fmt;
use std::sync::Arc;

use super::universe::{renaming_closure, var_permutations};
use super::{Partition, Signature, Symbol, System, TermKind, TermRef, TermUniverse, Var};

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
const PERMS2: [[usize; 3]; 2] = [[0, 1, 2], [1, 0, 2]];

/// A renaming of variables, a reordering of the argument places of every
/// symbol, and optional exchanges `p↔q` and `t↔s` of same-arity symbols.
///
/// Acting on `s(a₁,…,aₖ)` it yields `σ(s)(v(a_{π(1)}),…,v(a_{π(k)}))`
/// where `π` is the argument permutation attached to `s`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymmetryElement {
    var_perm: [Var; 3],
    arg_perms: [[usize; 3]; 4],
    swap_pq: bool,
    swap_ts: bool,
}

impl Default for SymmetryElement {
    fn default() -> Self {
        Self::identity()
    }
}

impl SymmetryElement {
    pub fn identity() -> Self {
        SymmetryElement {
            var_perm: Var::ALL,
            arg_perms: [[0, 1, 2]; 4],
            swap_pq: false,
            swap_ts: false,
        }
    }

    /// The x↔y exchange.
    pub fn mirror() -> Self {
        Self::identity().with_var_perm([Var::Y, Var::X, Var::Z])
    }

    pub fn with_var_perm(mut self, perm: [Var; 3]) -> Self {
        self.var_perm = perm;
        self
    }

    /// Sets the argument reordering of `symbol`: place `i` of the image reads
    /// place `perm[i]` of the source. Binary symbols use the first two entries.
    pub fn with_arg_perm(mut self, symbol: Symbol, perm: [usize; 3]) -> Self {
        self.arg_perms[symbol as usize] = perm;
        self
    }

    pub fn with_swap_pq(mut self, swap: bool) -> Self {
        self.swap_pq = swap;
        self
    }

    pub fn with_swap_ts(mut self, swap: bool) -> Self {
        self.swap_ts = swap;
        self
    }

    pub fn var_perm(&self) -> [Var; 3] {
        self.var_perm
    }

    pub fn arg_perm(&self, symbol: Symbol) -> [usize; 3] {
        self.arg_perms[symbol as usize]
    }

    pub fn p_arg_perm(&self) -> [usize; 3] {
        self.arg_perm(Symbol::P)
    }

    pub fn q_arg_perm(&self) -> [usize; 3] {
        self.arg_perm(Symbol::Q)
    }

    pub fn swap_pq(&self) -> bool {
        self.swap_pq
    }

    pub fn swap_ts(&self) -> bool {
        self.swap_ts
    }

    pub fn map_symbol(&self, s: Symbol) -> Symbol {
        match (s, self.swap_pq, self.swap_ts) {
            (Symbol::P, true, _) => Symbol::Q,
            (Symbol::Q, true, _) => Symbol::P,
            (Symbol::T, _, true) => Symbol::S,
            (Symbol::S, _, true) => Symbol::T,
            (s, _, _) => s,
        }
    }

    pub fn apply_term(&self, t: &TermRef) -> TermRef {
        match t.kind() {
            TermKind::Var(v) => TermRef::var(self.var_perm[v.index()]),
            TermKind::App(s, args) => {
                let pi = self.arg_perm(s);
                let image: Vec<Var> = (0..args.len()).map(|i| self.var_perm[args[pi[i]].index()]).collect();
                TermRef::app(self.map_symbol(s), &image).expect("arity preserved")
            }
        }
    }

    /// The element acting as `self` first and then `after`.
    pub fn then(&self, after: &SymmetryElement) -> SymmetryElement {
        compose(after, self)
    }

    pub fn inverse(&self) -> SymmetryElement {
        let mut var_perm = Var::ALL;
        for (i, v) in self.var_perm.iter().enumerate() {
            var_perm[v.index()] = Var::ALL[i];
        }
        let mut arg_perms = [[0, 1, 2]; 4];
        for s in Symbol::ALL {
            let pi = self.arg_perm(s);
            let target = self.map_symbol(s);
            let mut inv = [0, 1, 2];
            for i in 0..s.arity() {
                inv[pi[i]] = i;
            }
            arg_perms[target as usize] = inv;
        }
        SymmetryElement {
            var_perm,
            arg_perms,
            swap_pq: self.swap_pq,
            swap_ts: self.swap_ts,
        }
    }

    /// Every element acting on the given signature and variable count.
    /// Argument reorderings are enumerated only for symbols in the signature,
    /// and symbol exchanges only when both partners are present.
    pub fn group(signature: Signature, num_vars: usize) -> Vec<SymmetryElement> {
        let mut out: Vec<SymmetryElement> = var_permutations(num_vars)
            .into_iter()
            .map(|vp| SymmetryElement::identity().with_var_perm(vp))
            .collect();
        for s in signature.iter() {
            let perms: &[[usize; 3]] = if s.arity() == 3 { &PERMS3 } else { &PERMS2 };
            out = out
                .iter()
                .flat_map(|g| perms.iter().map(move |p| g.with_arg_perm(s, *p)))
                .collect();
        }
        if signature.contains(Symbol::P) && signature.contains(Symbol::Q) {
            out = out.iter().flat_map(|g| [*g, g.with_swap_pq(true)]).collect();
        }
        if signature.contains(Symbol::T) && signature.contains(Symbol::S) {
            out = out.iter().flat_map(|g| [*g, g.with_swap_ts(true)]).collect();
        }
        out
    }
}

/// `h ∘ g`: act by `g`, then by `h`.
pub fn compose(h: &SymmetryElement, g: &SymmetryElement) -> SymmetryElement {
    let mut var_perm = Var::ALL;
    for (i, v) in g.var_perm.iter().enumerate() {
        var_perm[i] = h.var_perm[v.index()];
    }
    let mut arg_perms = [[0, 1, 2]; 4];
    for s in Symbol::ALL {
        let pg = g.arg_perm(s);
        let ph = h.arg_perm(g.map_symbol(s));
        for i in 0..3 {
            arg_perms[s as usize][i] = pg[ph[i]];
        }
    }
    SymmetryElement {
        var_perm,
        arg_perms,
        swap_pq: g.swap_pq ^ h.swap_pq,
        swap_ts: g.swap_ts ^ h.swap_ts,
    }
}

impl fmt::Debug for SymmetryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SymmetryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: String = self.var_perm.iter().map(|v| v.name()).collect();
        write!(f, "xyz->{vars}")?;
        for s in Symbol::ALL {
            let pi = self.arg_perm(s);
            if pi[..s.arity()].iter().enumerate().any(|(i, j)| i != *j) {
                let places: Vec<String> = pi[..s.arity()].iter().map(|j| (j + 1).to_string()).collect();
                write!(f, " {s}[{}]", places.join(""))?;
            }
        }
        if self.swap_pq {
            write!(f, " p<->q")?;
        }
        if self.swap_ts {
            write!(f, " t<->s")?;
        }
        Ok(())
    }
}

/// Image of a system under a group element. The signature follows the symbol
/// exchanges.
pub fn apply_symmetry(system: &System, g: &SymmetryElement) -> System {
    let mut signature = Signature::EMPTY;
    for s in system.signature().iter() {
        signature.insert(g.map_symbol(s));
    }
    let blocks = system
        .blocks()
        .into_iter()
        .map(|b| b.iter().map(|t| g.apply_term(t)).collect::<Vec<_>>());
    System::from_blocks(signature, system.num_vars(), blocks).expect("group preserves declarations")
}

/// Orbit canonicalization for one signature and variable count.
///
/// Systems are compared by the closure of all their variable-renamed copies,
/// so a system and its mirror image are the same point. The canonical form is
/// the orbit member whose closure labels are lexicographically least; it is
/// written with one representative class per renaming orbit of classes.
#[derive(Clone, Debug)]
pub struct Canonicalizer {
    universe: Arc<TermUniverse>,
    elements: Vec<SymmetryElement>,
    index_perms: Vec<Vec<usize>>,
    renamings: Vec<Vec<usize>>,
}

impl Canonicalizer {
    pub fn new(signature: Signature, num_vars: usize) -> Self {
        let universe = TermUniverse::new(signature, num_vars);
        let elements = SymmetryElement::group(signature, num_vars);
        let index_perms = elements.iter().map(|g| universe.permutation(|t| g.apply_term(t))).collect();
        let renamings = var_permutations(num_vars)
            .into_iter()
            .skip(1)
            .map(|vp| universe.permutation(|t| t.map_vars(|v| vp[v.index()])))
            .collect();
        Canonicalizer {
            universe,
            elements,
            index_perms,
            renamings,
        }
    }

    pub fn universe(&self) -> &Arc<TermUniverse> {
        &self.universe
    }

    pub fn group(&self) -> &[SymmetryElement] {
        &self.elements
    }

    /// Permutations of universe indices, one per group element.
    pub fn index_permutations(&self) -> &[Vec<usize>] {
        &self.index_perms
    }

    /// Join of a partition with all its variable-renamed images.
    pub fn close_renamings(&self, p: &Partition) -> Partition {
        self.renamings.iter().fold(p.clone(), |acc, perm| acc.join(&p.permuted(perm)))
    }

    /// Least renaming-closed image of a partition over the group, with the
    /// element achieving it.
    pub fn canonical_partition(&self, partition: &Partition) -> (Partition, SymmetryElement) {
        let closed = self.close_renamings(partition);
        let mut best: Option<(Partition, usize)> = None;
        for (k, perm) in self.index_perms.iter().enumerate() {
            let image = closed.permuted(perm);
            if best.as_ref().map_or(true, |(b, _)| image.labels() < b.labels()) {
                best = Some((image, k));
            }
        }
        let (p, k) = best.expect("group is non-empty");
        (p, self.elements[k])
    }

    /// System written from a renaming-closed partition: the least class of
    /// each renaming orbit of classes.
    pub fn representative(&self, closed: &Partition) -> System {
        let blocks = closed.blocks();
        let mut seen = vec![false; closed.num_blocks()];
        let mut chosen = Vec::new();
        for (label, block) in blocks.iter().enumerate() {
            if seen[label] || block.len() < 2 {
                continue;
            }
            seen[label] = true;
            for perm in &self.renamings {
                seen[closed.labels()[perm[block[0]]] as usize] = true;
            }
            chosen.push(block.iter().map(|i| self.universe.term(*i)).collect::<Vec<_>>());
        }
        System::from_blocks(self.universe.signature(), self.universe.num_vars(), chosen)
            .expect("universe terms are declared")
    }

    pub fn canonicalize_partition(&self, partition: &Partition) -> (System, SymmetryElement) {
        let (p, g) = self.canonical_partition(partition);
        (self.representative(&p), g)
    }

    /// Canonical form of `system` and an element carrying it onto that form
    /// (up to variable renaming).
    pub fn canonicalize(&self, system: &System) -> (System, SymmetryElement) {
        let widened = system
            .widen(self.universe.signature(), self.universe.num_vars())
            .expect("system fits the canonicalizer");
        let closure = renaming_closure(&widened, &self.universe).expect("universe covers declared terms");
        self.canonicalize_partition(&closure)
    }
}

/// Canonical form under the full group of the system's own signature.
pub fn canonicalize(system: &System) -> (System, SymmetryElement) {
    Canonicalizer::new(system.signature(), system.num_vars()).canonicalize(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_system;

    fn sys(text: &str) -> System {
        parse_system(text).unwrap().system
    }

    #[test]
    fn group_orders() {
        let pq = Signature::of(&[Symbol::P, Symbol::Q]);
        assert_eq!(SymmetryElement::group(pq, 2).len(), 144);
        assert_eq!(SymmetryElement::group(pq, 3).len(), 432);
        assert_eq!(SymmetryElement::group(Signature::of(&[Symbol::T]), 2).len(), 4);
        assert_eq!(SymmetryElement::group(Signature::of(&[Symbol::T, Symbol::S]), 2).len(), 16);
        assert_eq!(SymmetryElement::group(Signature::of(&[Symbol::P, Symbol::T]), 2).len(), 24);
    }

    #[test]
    fn q_rotation_of_candidate_four() {
        let s = sys("p(x,x,y)=p(x,y,y); p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)");
        let g = SymmetryElement::identity().with_arg_perm(Symbol::Q, [2, 0, 1]);
        let image = apply_symmetry(&s, &g);
        assert_eq!(image, s);
        let g = SymmetryElement::identity().with_arg_perm(Symbol::P, [0, 2, 1]);
        let image = apply_symmetry(&s, &g);
        assert_eq!(image.to_string(), "p(x,x,y)=q(x,x,y)=q(x,y,x)=q(y,x,x); p(x,y,x)=p(x,y,y)");
        assert_eq!(canonicalize(&image).0, canonicalize(&s).0);
    }

    #[test]
    fn mirror_is_an_involution() {
        let s = sys("x=p(x,x,y); p(x,y,x)=p(y,x,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)");
        let m = SymmetryElement::mirror();
        assert_ne!(apply_symmetry(&s, &m), s);
        assert_eq!(apply_symmetry(&apply_symmetry(&s, &m), &m), s);
        assert_eq!(apply_symmetry(&s, &SymmetryElement::identity()), s);
    }

    #[test]
    fn action_is_compatible_with_composition() {
        let s = sys("x=p(x,y,z); q(x,x,y)=p(y,z,x); q(z,y,x)=p(y,y,x)");
        let group = SymmetryElement::group(s.signature(), 3);
        for (i, g) in group.iter().enumerate().step_by(7) {
            let h = group[(i * 31 + 5) % group.len()];
            let lhs = apply_symmetry(&apply_symmetry(&s, g), &h);
            assert_eq!(lhs, apply_symmetry(&s, &compose(&h, g)), "{g} then {h}");
            assert_eq!(apply_symmetry(&apply_symmetry(&s, g), &g.inverse()), s);
            assert_eq!(compose(&g.inverse(), g), SymmetryElement::identity());
        }
    }

    #[test]
    fn canonicalization_is_idempotent_and_orbit_constant() {
        let s = sys("x=q(x,y,x); p(x,y,y)=p(x,y,x); p(x,x,y)=q(x,x,y)=q(y,x,x)");
        let (c, g) = canonicalize(&s);
        assert_eq!(canonicalize(&c).0, c);
        let image = apply_symmetry(&s, &g);
        assert_eq!(canonicalize(&image).0, c);
        for h in SymmetryElement::group(s.signature(), 2) {
            assert_eq!(canonicalize(&apply_symmetry(&s, &h)).0, c);
        }
    }

    #[test]
    fn returned_element_reaches_the_canonical_closure() {
        let s = sys("p(x,x,y)=q(y,x,x); x=q(x,y,y)");
        let canon = Canonicalizer::new(s.signature(), 2);
        let (c, g) = canon.canonicalize(&s);
        let u = canon.universe();
        assert_eq!(
            renaming_closure(&apply_symmetry(&s, &g), u).unwrap(),
            renaming_closure(&c, u).unwrap()
        );
    }

    #[test]
    fn display_names_nontrivial_parts() {
        let g = SymmetryElement::mirror()
            .with_arg_perm(Symbol::Q, [2, 0, 1])
            .with_swap_pq(true);
        assert_eq!(g.to_string(), "xyz->yxz q[312] p<->q");
    }
}
