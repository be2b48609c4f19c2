use std::collections::BTreeSet;

use linid::algebra::{majority_a, semilattice_b, Model};
use linid::classify::{enumerate_family, minimal_candidates, Classifier, MasterFamily, DEFAULT_A_SIZES};
use linid::reducts::{coefficient_system, solve_some_finite_ring};
use linid::terms::{partition_closure, set_partitions, weakenings, Canonicalizer, Partition, System};
use rayon::prelude::*;

/// Every partition of the whole universe that the majority algebra realizes,
/// up to symmetry.
fn brute_force(family: MasterFamily) -> BTreeSet<System> {
    let a = Model::new(majority_a(3).unwrap()).unwrap();
    let canon = Canonicalizer::new(family.signature(), 2);
    let universe = canon.universe().clone();
    let all: Vec<Vec<u32>> = set_partitions(universe.len()).collect();
    all.par_iter()
        .filter_map(|labels| {
            let s = Partition::from_labels(universe.clone(), labels).to_system();
            a.holds(&s).satisfiable.then(|| canon.canonicalize(&s).0)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn brute_candidates(systems: &BTreeSet<System>) -> Vec<System> {
    let b = Model::new(semilattice_b()).unwrap();
    systems
        .iter()
        .filter(|s| !solve_some_finite_ring(&coefficient_system(s)).unwrap().is_satisfiable())
        .filter(|s| b.holds(s).satisfiable)
        .cloned()
        .collect()
}

fn check(family: MasterFamily) {
    let oracle = brute_force(family);
    let enumerated = enumerate_family(family);
    let listed: BTreeSet<System> = enumerated.systems.iter().cloned().collect();
    assert_eq!(listed.len(), enumerated.systems.len(), "{family:?} duplicates");
    assert_eq!(listed, oracle, "{family:?}");

    let classifier = Classifier::new(&DEFAULT_A_SIZES).unwrap();
    let report = minimal_candidates(family, &classifier).unwrap();
    let found: Vec<System> = report.candidates.iter().map(|c| c.classification.canonical.clone()).collect();
    assert_eq!(found, brute_candidates(&oracle), "{family:?}");
}

#[test]
fn single_binary_is_complete() {
    check(MasterFamily::SingleBinary);
}

#[test]
fn two_binary_is_complete() {
    check(MasterFamily::TwoBinary);
}

#[test]
fn single_ternary_is_complete() {
    check(MasterFamily::SingleTernary);
}

#[test]
fn binary_plus_ternary_is_complete() {
    check(MasterFamily::BinaryPlusTernary);
}

#[test]
fn two_ternary_systems_hold_in_majority() {
    let a = Model::new(majority_a(3).unwrap()).unwrap();
    let e = enumerate_family(MasterFamily::TwoTernary);
    assert_eq!(e.systems.len(), 294);
    for s in &e.systems {
        assert!(a.holds(s).satisfiable, "{s}");
    }
}

#[test]
fn weaker_candidates_are_reported() {
    let classifier = Classifier::new(&DEFAULT_A_SIZES).unwrap();
    let report = minimal_candidates(MasterFamily::TwoTernary, &classifier).unwrap();
    let reported: BTreeSet<System> = report.candidates.iter().map(|c| c.classification.canonical.clone()).collect();
    let canon = Canonicalizer::new(MasterFamily::TwoTernary.signature(), 2);
    for c in &report.candidates {
        let closed = canon.close_renamings(&partition_closure(&c.classification.canonical, canon.universe()).unwrap());
        for w in weakenings(&closed) {
            let w = w.to_system();
            if classifier.classify(&w).unwrap().is_candidate {
                assert!(reported.contains(&canon.canonicalize(&w).0), "{w}");
            }
        }
    }
}
