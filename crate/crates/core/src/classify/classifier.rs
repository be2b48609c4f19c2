use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::ClassifyError;
use crate::algebra::{majority_a, semilattice_b, Model, SatVerdict};
use crate::reducts::{coefficient_system, solve_some_finite_ring, RingVerdict};
use crate::terms::{Canonicalizer, Signature, System};

pub const DEFAULT_A_SIZES: [usize; 3] = [2, 3, 4];

/// Everything known about one system.
#[derive(Clone, Debug)]
pub struct Classification {
    pub system: System,
    pub canonical: System,
    pub ring: RingVerdict,
    pub holds_in_b: SatVerdict,
    /// Verdict in the majority algebra of the first configured size.
    pub holds_in_a: SatVerdict,
    /// Verdict at every configured size.
    pub a_by_size: Vec<(usize, bool)>,
    pub is_candidate: bool,
}

impl Classification {
    pub fn a_sizes_agree(&self) -> bool {
        self.a_by_size.iter().all(|(_, h)| *h == self.holds_in_a.satisfiable)
    }
}

/// Models and canonicalizers shared across many classifications.
pub struct Classifier {
    b: Model,
    a: Vec<(usize, Model)>,
    canon: Mutex<HashMap<(Signature, usize), Arc<Canonicalizer>>>,
}

impl Classifier {
    /// `a_sizes` lists the majority algebras consulted; the first decides.
    pub fn new(a_sizes: &[usize]) -> Result<Self, ClassifyError> {
        if a_sizes.is_empty() {
            return Err(ClassifyError::Algebra(crate::algebra::AlgebraError::SizeTooSmall(0)));
        }
        let b = Model::new(semilattice_b())?;
        let a = a_sizes
            .iter()
            .map(|m| Ok((*m, Model::new(majority_a(*m)?)?)))
            .collect::<Result<Vec<_>, ClassifyError>>()?;
        Ok(Classifier {
            b,
            a,
            canon: Mutex::new(HashMap::new()),
        })
    }

    pub fn a_sizes(&self) -> Vec<usize> {
        self.a.iter().map(|(m, _)| *m).collect()
    }

    pub fn canonicalizer(&self, signature: Signature, num_vars: usize) -> Arc<Canonicalizer> {
        let mut cache = self.canon.lock().expect("canonicalizer cache");
        cache
            .entry((signature, num_vars))
            .or_insert_with(|| Arc::new(Canonicalizer::new(signature, num_vars)))
            .clone()
    }

    pub fn ring_verdict(&self, system: &System) -> Result<RingVerdict, ClassifyError> {
        Ok(solve_some_finite_ring(&coefficient_system(system))?)
    }

    pub fn classify(&self, system: &System) -> Result<Classification, ClassifyError> {
        let canonical = self.canonicalizer(system.signature(), system.num_vars()).canonicalize(system).0;
        let ring = self.ring_verdict(system)?;
        let holds_in_b = self.b.holds(system);
        let mut holds_in_a = None;
        let mut a_by_size = Vec::with_capacity(self.a.len());
        for (m, model) in &self.a {
            let v = model.holds(system);
            a_by_size.push((*m, v.satisfiable));
            holds_in_a.get_or_insert(v);
        }
        let holds_in_a = holds_in_a.expect("at least one size");
        let is_candidate = !ring.is_satisfiable() && holds_in_b.satisfiable && holds_in_a.satisfiable;
        Ok(Classification {
            system: system.clone(),
            canonical,
            ring,
            holds_in_b,
            holds_in_a,
            a_by_size,
            is_candidate,
        })
    }
}

/// Classifies with the default majority sizes.
pub fn classify_system(system: &System) -> Result<Classification, ClassifyError> {
    Classifier::new(&DEFAULT_A_SIZES)?.classify(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_system;

    fn classify(text: &str) -> Classification {
        classify_system(&parse_system(text).unwrap().system).unwrap()
    }

    #[test]
    fn candidates_and_non_candidates() {
        let c = classify("p(x,x,y)=p(x,y,y); p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)");
        assert!(c.is_candidate);
        assert!(c.a_sizes_agree());

        let c = classify("x=p(x,x,y)=p(x,y,y)=p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)");
        assert!(!c.ring.is_satisfiable());
        assert!(!c.holds_in_b.satisfiable);
        assert!(c.holds_in_a.satisfiable);
        assert!(!c.is_candidate);

        let c = classify("p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)");
        assert_eq!(c.ring.prime(), Some(2));
        assert!(!c.is_candidate);
    }

    #[test]
    fn canonical_form_is_shared_by_mirror_images() {
        let a = classify("x=q(x,y,x); p(x,y,y)=p(x,y,x); p(x,x,y)=q(x,x,y)=q(y,x,x)");
        let b = classify("y=q(y,x,y); p(y,x,x)=p(y,x,y); p(y,y,x)=q(y,y,x)=q(x,y,y)");
        assert_eq!(a.canonical, b.canonical);
        assert_eq!(a.is_candidate, b.is_candidate);
    }
}
