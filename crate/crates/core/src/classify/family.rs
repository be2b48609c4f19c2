use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::ClassifyError;
use crate::algebra::{induced_partition, majority_a, OperationTable, Witness};
use crate::terms::{set_partitions, Canonicalizer, Partition, Signature, Symbol, System, TermUniverse};

/// The symbol sets whose two-variable systems are classified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MasterFamily {
    SingleBinary,
    TwoBinary,
    SingleTernary,
    BinaryPlusTernary,
    TwoTernary,
}

impl MasterFamily {
    pub const ALL: [MasterFamily; 5] = [
        MasterFamily::SingleBinary,
        MasterFamily::TwoBinary,
        MasterFamily::SingleTernary,
        MasterFamily::BinaryPlusTernary,
        MasterFamily::TwoTernary,
    ];

    pub fn signature(self) -> Signature {
        use Symbol::*;
        match self {
            MasterFamily::SingleBinary => Signature::of(&[T]),
            MasterFamily::TwoBinary => Signature::of(&[T, S]),
            MasterFamily::SingleTernary => Signature::of(&[P]),
            MasterFamily::BinaryPlusTernary => Signature::of(&[P, T]),
            MasterFamily::TwoTernary => Signature::of(&[P, Q]),
        }
    }

    pub fn universe(self) -> Arc<TermUniverse> {
        TermUniverse::new(self.signature(), 2)
    }

    pub fn name(self) -> &'static str {
        match self {
            MasterFamily::SingleBinary => "SingleBinary",
            MasterFamily::TwoBinary => "TwoBinary",
            MasterFamily::SingleTernary => "SingleTernary",
            MasterFamily::BinaryPlusTernary => "BinaryPlusTernary",
            MasterFamily::TwoTernary => "TwoTernary",
        }
    }

    /// Human heading for reports.
    pub fn title(self) -> &'static str {
        match self {
            MasterFamily::SingleBinary => "A single binary term",
            MasterFamily::TwoBinary => "Two binary terms",
            MasterFamily::SingleTernary => "A single ternary term",
            MasterFamily::BinaryPlusTernary => "A binary and a ternary term",
            MasterFamily::TwoTernary => "Two ternary terms",
        }
    }

    /// The family whose signature is exactly `signature`.
    pub fn of_signature(signature: Signature) -> Option<MasterFamily> {
        Self::ALL.into_iter().find(|f| f.signature() == signature)
    }
}

impl fmt::Display for MasterFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for MasterFamily {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for MasterFamily {
    type Err = ClassifyError;

    /// Accepts the tag in any case, with or without `-`/`_` separators.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| *c != '-' && *c != '_').collect::<String>().to_lowercase();
        Self::ALL
            .into_iter()
            .find(|f| f.name().to_lowercase() == key)
            .ok_or_else(|| ClassifyError::UnknownFamily(s.to_string()))
    }
}

/// How a symbol behaves in the majority algebra: a projection or a majority
/// operation. On arguments drawn from two values every majority operation
/// agrees, so one majority type suffices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WitnessType {
    Proj(u8),
    Majority,
}

impl fmt::Display for WitnessType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessType::Proj(i) => write!(f, "pi{}", i + 1),
            WitnessType::Majority => f.write_str("maj"),
        }
    }
}

impl Serialize for WitnessType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub type TypeAssignment = Vec<(Symbol, WitnessType)>;

fn types_for(symbol: Symbol) -> Vec<WitnessType> {
    let mut out: Vec<WitnessType> = (0..symbol.arity() as u8).map(WitnessType::Proj).collect();
    if symbol.arity() == 3 {
        out.push(WitnessType::Majority);
    }
    out
}

/// Every assignment of witness types to the family's symbols, in symbol order
/// with projections before majority.
pub fn type_assignments(family: MasterFamily) -> Vec<TypeAssignment> {
    let mut out: Vec<TypeAssignment> = vec![Vec::new()];
    for s in family.signature().iter() {
        out = out
            .into_iter()
            .flat_map(|a| {
                types_for(s).into_iter().map(move |t| {
                    let mut next = a.clone();
                    next.push((s, t));
                    next
                })
            })
            .collect();
    }
    out
}

fn realise(symbol: Symbol, ty: WitnessType, f: &OperationTable) -> OperationTable {
    match ty {
        WitnessType::Proj(i) => OperationTable::projection(f.size(), symbol.arity(), i as usize),
        WitnessType::Majority => f.clone(),
    }
}

/// The partition of the family's universe induced by each witness-type
/// assignment in the three-element majority algebra.
pub fn master_partitions(family: MasterFamily) -> Vec<(TypeAssignment, Partition)> {
    let algebra = majority_a(3).expect("size 3 is valid");
    let f = algebra.op("f").expect("majority algebra has f").clone();
    let universe = family.universe();
    type_assignments(family)
        .into_iter()
        .map(|assignment| {
            let witness: Witness = assignment.iter().map(|(s, t)| (*s, realise(*s, *t, &f))).collect();
            let p = induced_partition(&witness, &universe, &algebra);
            (assignment, p)
        })
        .collect()
}

/// Result of enumerating a family.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub family: MasterFamily,
    /// Partitions of x-blocks visited, summed over witness types.
    pub raw_count: usize,
    /// Distinct canonical systems, sorted.
    pub systems: Vec<System>,
}

/// Every system that holds in the majority algebra, up to symmetry.
///
/// Such a system refines the partition induced by some witness-type
/// assignment. That partition has two classes, the terms equal to `x` and
/// their mirror images, so it is enough to partition the `x`-class in every
/// way and let canonicalization supply the mirrored half.
pub fn enumerate_family(family: MasterFamily) -> Enumeration {
    let canon = Canonicalizer::new(family.signature(), 2);
    let universe = canon.universe().clone();
    let x_index = 0;
    let masters = master_partitions(family);
    let mut raw_count = 0;
    let mut found: BTreeSet<System> = BTreeSet::new();
    for (_, master) in &masters {
        let block: Vec<usize> = master.blocks().into_iter().find(|b| b.contains(&x_index)).expect("x has a class");
        let parts: Vec<Vec<u32>> = set_partitions(block.len()).collect();
        raw_count += parts.len();
        let systems: Vec<System> = parts
            .par_iter()
            .map(|rgs| {
                let offset = universe.len() as u32;
                let mut labels: Vec<u32> = (0..offset).map(|i| i + offset).collect();
                for (member, l) in block.iter().zip(rgs) {
                    labels[*member] = *l;
                }
                let p = Partition::from_labels(universe.clone(), &labels);
                canon.canonicalize_partition(&p).0
            })
            .collect();
        found.extend(systems);
    }
    Enumeration {
        family,
        raw_count,
        systems: found.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{canonicalize, parse_system_in};

    fn sys(family: MasterFamily, text: &str) -> System {
        parse_system_in(text, family.signature(), 2).unwrap().system
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("TwoTernary".parse::<MasterFamily>().unwrap(), MasterFamily::TwoTernary);
        assert_eq!("two-ternary".parse::<MasterFamily>().unwrap(), MasterFamily::TwoTernary);
        assert_eq!("single_binary".parse::<MasterFamily>().unwrap(), MasterFamily::SingleBinary);
        assert!("Three".parse::<MasterFamily>().is_err());
        assert_eq!(MasterFamily::TwoTernary.universe().len(), 14);
        assert_eq!(MasterFamily::SingleBinary.universe().len(), 4);
    }

    #[test]
    fn witness_type_counts() {
        assert_eq!(type_assignments(MasterFamily::TwoTernary).len(), 16);
        assert_eq!(type_assignments(MasterFamily::BinaryPlusTernary).len(), 8);
        assert_eq!(type_assignments(MasterFamily::TwoBinary).len(), 4);
    }

    #[test]
    fn master_systems() {
        let f = MasterFamily::TwoTernary;
        let masters = master_partitions(f);
        let x_class = |a: &TypeAssignment| {
            let p = &masters.iter().find(|(b, _)| b == a).unwrap().1;
            p.term_blocks()[0].iter().map(|t| t.to_string()).collect::<Vec<_>>().join("=")
        };
        use WitnessType::*;
        assert_eq!(
            x_class(&vec![(Symbol::P, Proj(0)), (Symbol::Q, Majority)]),
            "x=p(x,x,y)=p(x,y,x)=p(x,y,y)=q(x,x,y)=q(x,y,x)=q(y,x,x)"
        );
        assert_eq!(
            x_class(&vec![(Symbol::P, Majority), (Symbol::Q, Majority)]),
            "x=p(x,x,y)=p(x,y,x)=p(y,x,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)"
        );
        for (_, p) in &masters {
            assert_eq!(p.num_blocks(), 2);
            assert_eq!(p.blocks()[0].len(), 7);
        }
    }

    #[test]
    fn two_ternary_contains_the_candidates() {
        let f = MasterFamily::TwoTernary;
        let e = enumerate_family(f);
        assert_eq!(e.raw_count, 16 * 877);
        for text in [
            "p(x,x,y)=p(x,y,y); p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)",
            "x=q(x,y,x); p(x,y,y)=p(x,y,x); p(x,x,y)=q(x,x,y)=q(y,x,x)",
            "x=p(x,x,y); p(x,y,x)=p(y,x,x)=q(y,x,x)=q(x,y,x)=q(x,x,y)",
        ] {
            let c = canonicalize(&sys(f, text)).0;
            assert!(e.systems.binary_search(&c).is_ok(), "{text}");
        }
        assert_eq!(e.systems.iter().filter(|s| s.is_empty()).count(), 1);
        let mut sorted = e.systems.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, e.systems);
    }

    #[test]
    fn single_binary_systems() {
        // Binary term operations of a majority algebra are projections.
        let e = enumerate_family(MasterFamily::SingleBinary);
        let shown: Vec<String> = e.systems.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["", "x=t(x,y)"]);
    }
}
