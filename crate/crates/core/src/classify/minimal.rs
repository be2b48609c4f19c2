use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{enumerate_family, master_partitions, Classification, Classifier, ClassifyError, MasterFamily};
use crate::terms::{bell, partition_closure, weakenings, Partition, System};

/// The strictly weaker systems of one system, checked over all finite rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimality {
    /// Sizes of the non-trivial classes of `x`-terms being split.
    pub class_sizes: Vec<usize>,
    pub weakenings: usize,
    /// How many weakenings each least prime solves.
    pub by_prime: BTreeMap<u64, usize>,
    /// A strictly weaker system with no solution over any finite ring.
    pub unsat_weakening: Option<System>,
}

impl Minimality {
    pub fn is_minimal(&self) -> bool {
        self.unsat_weakening.is_none()
    }

    /// `∏ Bell(size) − 1` over the split classes.
    pub fn bound(&self) -> u64 {
        self.class_sizes.iter().map(|s| bell(*s)).product::<u64>() - 1
    }
}

/// Every strictly weaker system, up to renaming, of a system that holds in
/// the majority algebra, and its ring verdict.
///
/// The renaming closure of such a system splits the terms into those equal to
/// `x` under some witness-type assignment and their mirror images, and is
/// determined by its restriction to the first half. The strictly weaker
/// renaming-closed systems are then exactly the strict refinements of that
/// restriction.
pub fn minimality(classifier: &Classifier, system: &System) -> Result<Minimality, ClassifyError> {
    let family = MasterFamily::of_signature(system.signature())
        .filter(|_| system.num_vars() == 2)
        .ok_or_else(|| ClassifyError::NoMaster(system.to_string()))?;
    let canon = classifier.canonicalizer(system.signature(), 2);
    let universe = canon.universe().clone();
    let closed = canon.close_renamings(&partition_closure(system, &universe)?);
    let master = master_partitions(family)
        .into_iter()
        .map(|(_, p)| p)
        .find(|m| closed.refines(m))
        .ok_or_else(|| ClassifyError::NoMaster(system.to_string()))?;
    let x_class: Vec<usize> = master.blocks().into_iter().find(|b| b.contains(&0)).expect("x has a class");

    let n = universe.len() as u32;
    let mut labels: Vec<u32> = (0..n).map(|i| i + n).collect();
    for i in &x_class {
        labels[*i] = closed.labels()[*i];
    }
    let half = Partition::from_labels(universe.clone(), &labels);
    let class_sizes: Vec<usize> = half.blocks().into_iter().map(|b| b.len()).filter(|s| *s > 1).collect();

    let weaker: Vec<System> = weakenings(&half).map(|w| w.to_system()).collect();
    let verdicts: Vec<Option<u64>> = weaker
        .par_iter()
        .map(|s| classifier.ring_verdict(s).map(|v| v.prime()))
        .collect::<Result<_, _>>()?;
    let mut by_prime = BTreeMap::new();
    let mut unsat_weakening = None;
    for (s, v) in weaker.iter().zip(&verdicts) {
        match v {
            Some(p) => *by_prime.entry(*p).or_insert(0) += 1,
            None if unsat_weakening.is_none() => unsat_weakening = Some(canon.canonicalize(s).0),
            None => {}
        }
    }
    Ok(Minimality {
        class_sizes,
        weakenings: weaker.len(),
        by_prime,
        unsat_weakening,
    })
}

#[derive(Clone, Debug)]
pub struct CandidateEntry {
    pub classification: Classification,
    pub minimality: Minimality,
    /// For a non-minimal candidate, a minimal one it implies.
    pub contains: Option<System>,
}

/// Classification of every enumerated system of a family, reduced to the
/// candidates.
#[derive(Clone, Debug)]
pub struct CandidateReport {
    pub family: MasterFamily,
    pub raw_count: usize,
    pub systems: usize,
    pub ring_unsat: usize,
    pub holds_in_b: usize,
    /// Systems on which the configured majority sizes disagree.
    pub a_disagreements: Vec<System>,
    pub candidates: Vec<CandidateEntry>,
}

impl CandidateReport {
    pub fn minimal(&self) -> Vec<&System> {
        self.candidates
            .iter()
            .filter(|c| c.minimality.is_minimal())
            .map(|c| &c.classification.canonical)
            .collect()
    }
}

/// Enumerates and classifies a family, then decides minimality of each
/// candidate.
pub fn minimal_candidates(family: MasterFamily, classifier: &Classifier) -> Result<CandidateReport, ClassifyError> {
    let enumeration = enumerate_family(family);
    let classified: Vec<Classification> = enumeration
        .systems
        .par_iter()
        .map(|s| classifier.classify(s))
        .collect::<Result<_, _>>()?;

    let mut candidates: Vec<CandidateEntry> = classified
        .iter()
        .filter(|c| c.is_candidate)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|c| {
            Ok(CandidateEntry {
                classification: (*c).clone(),
                minimality: minimality(classifier, &c.canonical)?,
                contains: None,
            })
        })
        .collect::<Result<_, ClassifyError>>()?;

    let canon = classifier.canonicalizer(family.signature(), 2);
    let universe = canon.universe().clone();
    let closure = |s: &System| -> Result<Partition, ClassifyError> {
        Ok(canon.close_renamings(&partition_closure(s, &universe)?))
    };
    let minimal: Vec<(System, Partition)> = candidates
        .iter()
        .filter(|c| c.minimality.is_minimal())
        .map(|c| Ok((c.classification.canonical.clone(), closure(&c.classification.canonical)?)))
        .collect::<Result<_, ClassifyError>>()?;
    for entry in candidates.iter_mut().filter(|c| !c.minimality.is_minimal()) {
        let strong = closure(&entry.classification.canonical)?;
        entry.contains = minimal
            .iter()
            .find(|(_, weak)| canon.index_permutations().iter().any(|g| weak.permuted(g).refines(&strong)))
            .map(|(s, _)| s.clone());
    }

    Ok(CandidateReport {
        family,
        raw_count: enumeration.raw_count,
        systems: classified.len(),
        ring_unsat: classified.iter().filter(|c| !c.ring.is_satisfiable()).count(),
        holds_in_b: classified.iter().filter(|c| c.holds_in_b.satisfiable).count(),
        a_disagreements: classified
            .iter()
            .filter(|c| !c.a_sizes_agree())
            .map(|c| c.canonical.clone())
            .collect(),
        candidates,
    })
}
