#![allow(dead_code)]

use linid::classify::MasterFamily;
use linid::terms::{Partition, SymmetryElement, System, TermUniverse};
use proptest::prelude::*;
use proptest::sample::Index;

pub fn family_strategy() -> impl Strategy<Value = MasterFamily> {
    proptest::sample::select(MasterFamily::ALL.to_vec())
}

/// A system on a family's two-variable universe: each term gets a label in
/// `0..k`, so small `k` merges many terms and large `k` few.
pub fn system_in(family: MasterFamily) -> impl Strategy<Value = System> {
    let len = family.universe().len();
    (2..=2 * len as u32)
        .prop_flat_map(move |k| proptest::collection::vec(0..k, len))
        .prop_map(move |labels| Partition::from_labels(family.universe(), &labels).to_system())
}

pub fn any_system() -> impl Strategy<Value = System> {
    family_strategy().prop_flat_map(system_in)
}

/// A system together with an element of its family's symmetry group.
pub fn system_and_element() -> impl Strategy<Value = (System, SymmetryElement)> {
    family_strategy().prop_flat_map(|f| {
        (system_in(f), any::<Index>()).prop_map(move |(s, i)| {
            let group = SymmetryElement::group(f.signature(), 2);
            (s, *i.get(&group))
        })
    })
}

/// A system and a coarser one on the same universe.
pub fn refinement_pair() -> impl Strategy<Value = (System, System)> {
    family_strategy().prop_flat_map(|f| {
        let len = f.universe().len();
        (
            proptest::collection::vec(0..2 * len as u32, len),
            proptest::collection::vec((0..len, 0..len), 1..4),
        )
            .prop_map(move |(fine, pairs)| {
                let u = f.universe();
                let a = Partition::from_labels(u.clone(), &fine);
                let mut merge: Vec<u32> = (0..len as u32).collect();
                for (i, j) in pairs {
                    merge[j] = merge[i];
                }
                let b = a.join(&Partition::from_labels(u, &merge));
                (a.to_system(), b.to_system())
            })
    })
}

pub fn universe_of(family: MasterFamily) -> std::sync::Arc<TermUniverse> {
    family.universe()
}
