use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::{minimal_candidates, minimality, CandidateReport, Classifier, ClassifyError, MasterFamily};
use crate::reducts::{verify_witness, AffineTerm, ReductWitness};
use crate::terms::{parse_system, System};

/// Largest modulus a manifest witness may use; witnesses are checked at
/// every point of `ℤₙ²`.
pub const MANIFEST_MAX_MODULUS: u64 = 1024;

const BUILTIN: &str = include_str!("../../data/manifest.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expectation {
    MinimalCandidate,
    NoCandidates,
    Candidate,
    RingUnsat,
    NotInB,
    Minimal,
    HoldsMod,
    Erratum,
}

impl Expectation {
    const ALL: [Expectation; 8] = [
        Expectation::MinimalCandidate,
        Expectation::NoCandidates,
        Expectation::Candidate,
        Expectation::RingUnsat,
        Expectation::NotInB,
        Expectation::Minimal,
        Expectation::HoldsMod,
        Expectation::Erratum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Expectation::MinimalCandidate => "minimal-candidate",
            Expectation::NoCandidates => "no-candidates",
            Expectation::Candidate => "candidate",
            Expectation::RingUnsat => "ring-unsat",
            Expectation::NotInB => "not-in-b",
            Expectation::Minimal => "minimal",
            Expectation::HoldsMod => "holds-mod",
            Expectation::Erratum => "erratum",
        }
    }

    fn takes_witness(self) -> bool {
        matches!(self, Expectation::HoldsMod | Expectation::Erratum)
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Expectation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for Expectation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown expectation '{s}'"))
    }
}

/// Coefficients as written, reduced into `0..modulus`, one term per symbol
/// of the family. Idempotence is part of what gets checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestWitness {
    pub modulus: u64,
    pub terms: Vec<AffineTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub line: usize,
    pub family: MasterFamily,
    pub system: Option<System>,
    pub expectation: Expectation,
    pub witness: Option<ManifestWitness>,
}

impl ManifestEntry {
    pub fn reduct_witness(&self) -> Option<ReductWitness> {
        let w = self.witness.as_ref()?;
        Some(self.family.signature().iter().zip(w.terms.iter().cloned()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn builtin_text() -> &'static str {
        BUILTIN
    }

    pub fn builtin() -> Manifest {
        Manifest::parse(BUILTIN).expect("built-in manifest parses")
    }

    /// One entry per non-blank line not starting with `#`:
    /// `family | system | expectation | [modulus, term, ...]`.
    pub fn parse(text: &str) -> Result<Manifest, ClassifyError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            entries.push(parse_entry(line, trimmed).map_err(|message| ClassifyError::Manifest { line, message })?);
        }
        Ok(Manifest { entries })
    }
}

fn parse_entry(line: usize, text: &str) -> Result<ManifestEntry, String> {
    let fields: Vec<&str> = text.split('|').map(str::trim).collect();
    if !(3..=4).contains(&fields.len()) {
        return Err(format!("expected 3 or 4 '|'-separated fields, found {}", fields.len()));
    }
    let family: MasterFamily = fields[0].parse().map_err(|e: ClassifyError| e.to_string())?;
    let expectation: Expectation = fields[2].parse()?;
    let system = match fields[1] {
        "-" => None,
        dsl => {
            let parsed = parse_system(dsl).map_err(|e| e.to_string())?.system;
            Some(parsed.widen(family.signature(), 2).map_err(|e| e.to_string())?)
        }
    };
    if (expectation == Expectation::NoCandidates) != system.is_none() {
        return Err(format!("'{expectation}' {} a system", if system.is_none() { "needs" } else { "takes no" }));
    }
    let witness = fields.get(3).map(|w| parse_witness(family, w)).transpose()?;
    if expectation.takes_witness() != witness.is_some() {
        return Err(format!("'{expectation}' {} a witness", if witness.is_none() { "needs" } else { "takes no" }));
    }
    Ok(ManifestEntry {
        line,
        family,
        system,
        expectation,
        witness,
    })
}

fn parse_witness(family: MasterFamily, text: &str) -> Result<ManifestWitness, String> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or("witness must be written [modulus, term, ...]")?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    let modulus: u64 = parts[0].parse().map_err(|_| format!("bad modulus '{}'", parts[0]))?;
    if !(2..=MANIFEST_MAX_MODULUS).contains(&modulus) {
        return Err(format!("modulus must be between 2 and {MANIFEST_MAX_MODULUS}"));
    }
    let symbols: Vec<_> = family.signature().iter().collect();
    if parts.len() - 1 != symbols.len() {
        return Err(format!("{family} needs {} terms, found {}", symbols.len(), parts.len() - 1));
    }
    let terms = symbols
        .iter()
        .zip(&parts[1..])
        .map(|(s, t)| {
            let raw = AffineTerm::parse_integer(t, s.arity()).map_err(|e| e.to_string())?;
            Ok(AffineTerm::integer(raw.coeffs().iter().map(|c| c.rem_euclid(modulus as i64)).collect()))
        })
        .collect::<Result<_, String>>()?;
    Ok(ManifestWitness { modulus, terms })
}

/// Result of checking one expectation.
#[derive(Clone, Debug, Serialize)]
pub struct EntryOutcome {
    /// Manifest line, or 0 for a check spanning a whole family.
    pub line: usize,
    pub family: MasterFamily,
    pub system: String,
    pub expectation: Expectation,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ManifestReport {
    pub outcomes: Vec<EntryOutcome>,
    pub families: Vec<CandidateReport>,
}

impl ManifestReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> Vec<&EntryOutcome> {
        self.outcomes.iter().filter(|o| !o.passed).collect()
    }

    /// Witnesses confirmed by substitution.
    pub fn witnesses_verified(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| o.expectation == Expectation::HoldsMod && o.passed)
            .count()
    }
}

fn show_witness(w: &ManifestWitness) -> String {
    let terms: Vec<String> = w.terms.iter().map(|t| t.to_string()).collect();
    format!("mod {}: {}", w.modulus, terms.join(", "))
}

/// Checks every manifest entry, computing the candidate lists of the
/// families that need them.
pub fn verify_paper(manifest: &Manifest, classifier: &Classifier) -> Result<ManifestReport, ClassifyError> {
    let mut needed: Vec<MasterFamily> = manifest
        .entries
        .iter()
        .filter(|e| matches!(e.expectation, Expectation::MinimalCandidate | Expectation::NoCandidates))
        .map(|e| e.family)
        .collect();
    needed.sort();
    needed.dedup();
    let families: Vec<CandidateReport> = needed
        .iter()
        .map(|f| minimal_candidates(*f, classifier))
        .collect::<Result<_, _>>()?;
    let report_of = |f: MasterFamily| families.iter().find(|r| r.family == f).expect("computed");

    let mut outcomes = Vec::with_capacity(manifest.entries.len());
    let mut listed: BTreeMap<MasterFamily, Vec<System>> = BTreeMap::new();
    for e in &manifest.entries {
        let shown = e.system.as_ref().map_or_else(|| "-".to_string(), |s| s.to_string());
        let (passed, detail) = match (e.expectation, &e.system) {
            (Expectation::NoCandidates, _) => {
                let r = report_of(e.family);
                (r.candidates.is_empty(), format!("{} systems, {} candidates", r.systems, r.candidates.len()))
            }
            (_, None) => unreachable!("parser requires a system"),
            (Expectation::MinimalCandidate, Some(s)) => {
                let canonical = classifier.canonicalizer(s.signature(), 2).canonicalize(s).0;
                let found = report_of(e.family).minimal().contains(&&canonical);
                listed.entry(e.family).or_default().push(canonical.clone());
                (found, format!("canonical form {canonical}"))
            }
            (Expectation::Candidate, Some(s)) => {
                let c = classifier.classify(s)?;
                let detail = format!(
                    "ring {}, B {}, A {}",
                    if c.ring.is_satisfiable() { "sat" } else { "unsat" },
                    c.holds_in_b.satisfiable,
                    c.holds_in_a.satisfiable
                );
                (c.is_candidate, detail)
            }
            (Expectation::RingUnsat, Some(s)) => {
                let v = classifier.ring_verdict(s)?;
                let detail = match v.prime() {
                    Some(p) => format!("solvable mod {p}"),
                    None => "no finite ring".to_string(),
                };
                (!v.is_satisfiable(), detail)
            }
            (Expectation::NotInB, Some(s)) => {
                let c = classifier.classify(s)?;
                (!c.holds_in_b.satisfiable, format!("holds in B: {}", c.holds_in_b.satisfiable))
            }
            (Expectation::Minimal, Some(s)) => match minimality(classifier, s) {
                Ok(m) => {
                    let primes: Vec<String> = m.by_prime.iter().map(|(p, k)| format!("{k} mod {p}")).collect();
                    let mut detail = format!("{} weakenings: {}", m.weakenings, primes.join(", "));
                    if let Some(w) = &m.unsat_weakening {
                        detail = format!("weaker ring-unsat system {w}");
                    }
                    (m.is_minimal(), detail)
                }
                Err(err) => (false, err.to_string()),
            },
            (Expectation::HoldsMod | Expectation::Erratum, Some(s)) => {
                let w = e.witness.as_ref().expect("parser requires a witness");
                let ok = verify_witness(s, &e.reduct_witness().expect("witness"), w.modulus);
                let verdict = if ok { "satisfies" } else { "fails" };
                let passed = ok == (e.expectation == Expectation::HoldsMod);
                (passed, format!("{} {verdict}", show_witness(w)))
            }
        };
        outcomes.push(EntryOutcome {
            line: e.line,
            family: e.family,
            system: shown,
            expectation: e.expectation,
            passed,
            detail,
        });
    }

    for (family, mut expected) in listed {
        expected.sort();
        expected.dedup();
        let found: Vec<System> = report_of(family).minimal().into_iter().cloned().collect();
        let extra: Vec<String> = found.iter().filter(|s| !expected.contains(s)).map(|s| s.to_string()).collect();
        outcomes.push(EntryOutcome {
            line: 0,
            family,
            system: "*".to_string(),
            expectation: Expectation::MinimalCandidate,
            passed: found == expected,
            detail: if extra.is_empty() {
                format!("{} minimal candidates, as listed", found.len())
            } else {
                format!("unlisted minimal candidates: {}", extra.join(" | "))
            },
        });
    }
    Ok(ManifestReport { outcomes, families })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_manifest_parses() {
        let m = Manifest::builtin();
        let count = |x: Expectation| m.entries.iter().filter(|e| e.expectation == x).count();
        assert_eq!(count(Expectation::MinimalCandidate), 3);
        assert_eq!(count(Expectation::NoCandidates), 4);
        assert_eq!(count(Expectation::Erratum), 2);
        assert!(count(Expectation::HoldsMod) >= 60);
    }

    #[test]
    fn malformed_lines_are_reported_with_their_number() {
        let bad = [
            "TwoTernary | p(x,x,y)=p(x,y,y)",
            "Three | - | no-candidates",
            "TwoTernary | - | candidate",
            "TwoTernary | p(x,x,y)=p(x,y,y) | holds-mod",
            "TwoTernary | p(x,x,y)=p(x,y,y) | holds-mod | [5, x]",
            "TwoTernary | p(x,x,y)=p(x,y,y) | holds-mod | [1, x, x]",
            "TwoTernary | p(x,x,y)=p(x,y,y) | ring-unsat | [5, x, x]",
            "TwoTernary | t(x,y)=x | ring-unsat",
            "TwoTernary | p(x,x,z)=x | ring-unsat",
            "SingleBinary | x=t(x,y) | weird",
        ];
        for b in bad {
            let text = format!("# header\n\n{b}\n");
            match Manifest::parse(&text) {
                Err(ClassifyError::Manifest { line, .. }) => assert_eq!(line, 3, "{b}"),
                other => panic!("{b}: {other:?}"),
            }
        }
    }

    #[test]
    fn witness_checks() {
        let m = Manifest::parse(
            "TwoTernary | p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x) | holds-mod | [5, 2x+2y+2z, 2x+2y+2z]\n\
             TwoTernary | p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x) | erratum | [5, x, 2x+2y+3z]\n\
             SingleBinary | t(x,y)=t(y,x) | holds-mod | [3, 2x+2y]",
        )
        .unwrap();
        let c = Classifier::new(&[3]).unwrap();
        let r = verify_paper(&m, &c).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert_eq!(r.witnesses_verified(), 2);
    }
}
