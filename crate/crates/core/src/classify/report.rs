use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use super::{CandidateEntry, CandidateReport, Classification, Expectation, MasterFamily, ManifestReport};
use crate::algebra::Witness;
use crate::reducts::{RingVerdict, UnsatCertificate};

/// The JSON shape of one classified system.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictJson {
    pub system: String,
    pub canonical_system: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snf: Option<UnsatCertificate>,
    pub holds_in_b: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_witness: Option<BTreeMap<String, Vec<u16>>>,
    pub holds_in_a: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_witness: Option<BTreeMap<String, Vec<u16>>>,
    pub holds_in_a_by_size: BTreeMap<usize, bool>,
    pub is_candidate: bool,
}

fn tables(w: &Option<Witness>) -> Option<BTreeMap<String, Vec<u16>>> {
    w.as_ref()
        .map(|w| w.iter().map(|(s, t)| (s.to_string(), t.values().to_vec())).collect())
}

pub fn verdict_json(c: &Classification) -> VerdictJson {
    let (status, prime, witness, snf) = match &c.ring {
        RingVerdict::SatisfiableIn { prime, witness } => (
            "SatisfiableIn",
            Some(*prime),
            Some(witness.iter().map(|(s, t)| (s.to_string(), t.coeffs().to_vec())).collect()),
            None,
        ),
        RingVerdict::UnsatisfiableAllFiniteRings(cert) => ("UnsatisfiableAllFiniteRings", None, None, Some(cert.clone())),
    };
    VerdictJson {
        system: c.system.to_string(),
        canonical_system: c.canonical.to_string(),
        status,
        prime,
        witness,
        snf,
        holds_in_b: c.holds_in_b.satisfiable,
        b_witness: tables(&c.holds_in_b.witness),
        holds_in_a: c.holds_in_a.satisfiable,
        a_witness: tables(&c.holds_in_a.witness),
        holds_in_a_by_size: c.a_by_size.iter().copied().collect(),
        is_candidate: c.is_candidate,
    }
}

#[derive(Serialize)]
struct CandidateJson {
    verdict: VerdictJson,
    minimal: bool,
    weakenings: usize,
    weakening_bound: u64,
    least_primes: BTreeMap<u64, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unsat_weakening: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    contains: Option<String>,
}

impl From<&CandidateEntry> for CandidateJson {
    fn from(c: &CandidateEntry) -> Self {
        CandidateJson {
            verdict: verdict_json(&c.classification),
            minimal: c.minimality.is_minimal(),
            weakenings: c.minimality.weakenings,
            weakening_bound: c.minimality.bound(),
            least_primes: c.minimality.by_prime.clone(),
            unsat_weakening: c.minimality.unsat_weakening.as_ref().map(|s| s.to_string()),
            contains: c.contains.as_ref().map(|s| s.to_string()),
        }
    }
}

#[derive(Serialize)]
struct CandidateReportJson {
    family: MasterFamily,
    raw_count: usize,
    systems: usize,
    ring_unsat: usize,
    holds_in_b: usize,
    a_disagreements: Vec<String>,
    candidates: Vec<CandidateJson>,
    minimal: Vec<String>,
}

impl Serialize for CandidateReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CandidateReportJson {
            family: self.family,
            raw_count: self.raw_count,
            systems: self.systems,
            ring_unsat: self.ring_unsat,
            holds_in_b: self.holds_in_b,
            a_disagreements: self.a_disagreements.iter().map(|s| s.to_string()).collect(),
            candidates: self.candidates.iter().map(CandidateJson::from).collect(),
            minimal: self.minimal().iter().map(|s| s.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl Serialize for ManifestReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Shape<'a> {
            passed: bool,
            witnesses_verified: usize,
            failures: usize,
            outcomes: &'a [super::EntryOutcome],
            families: &'a [CandidateReport],
        }
        Shape {
            passed: self.passed(),
            witnesses_verified: self.witnesses_verified(),
            failures: self.failures().len(),
            outcomes: &self.outcomes,
            families: &self.families,
        }
        .serialize(s)
    }
}

fn primes_cell(by_prime: &BTreeMap<u64, usize>) -> String {
    let parts: Vec<String> = by_prime.iter().map(|(p, k)| format!("{k}×ℤ{p}")).collect();
    if parts.is_empty() {
        "-".to_string()
    } else {
        parts.join(", ")
    }
}

fn family_section(out: &mut String, r: &CandidateReport) {
    let _ = writeln!(out, "## {}\n", r.family.title());
    let _ = writeln!(
        out,
        "{} systems hold in the majority algebra up to symmetry ({} partitions visited); \
         {} have no solution over any finite ring, {} hold in the semilattice, {} are candidates.\n",
        r.systems,
        r.raw_count,
        r.ring_unsat,
        r.holds_in_b,
        r.candidates.len()
    );
    if r.candidates.is_empty() {
        return;
    }
    let _ = writeln!(out, "| Candidate | Minimal | Weakenings | Least primes | Note |");
    let _ = writeln!(out, "|---|---|---|---|---|");
    for c in &r.candidates {
        let note = match &c.contains {
            Some(m) => format!("implies `{m}`"),
            None => String::new(),
        };
        let _ = writeln!(
            out,
            "| `{}` | {} | {} / {} | {} | {} |",
            c.classification.canonical,
            if c.minimality.is_minimal() { "yes" } else { "no" },
            c.minimality.weakenings,
            c.minimality.bound(),
            primes_cell(&c.minimality.by_prime),
            note
        );
    }
    let _ = writeln!(out);
}

pub fn candidate_markdown(r: &CandidateReport) -> String {
    let mut out = String::new();
    family_section(&mut out, r);
    out
}

/// Markdown with one section per family, in increasing order of strength of
/// the symbol set, followed by the witness ledger.
pub fn manifest_markdown(r: &ManifestReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Verification of recorded facts\n");
    let _ = writeln!(
        out,
        "{} checks, {} failed; {} witnesses confirmed by substitution.\n",
        r.outcomes.len(),
        r.failures().len(),
        r.witnesses_verified()
    );
    let ledger = |o: &&super::EntryOutcome| matches!(o.expectation, Expectation::HoldsMod | Expectation::Erratum);
    for family in MasterFamily::ALL {
        let rows: Vec<_> = r.outcomes.iter().filter(|o| o.family == family && !ledger(o)).collect();
        let report = r.families.iter().find(|f| f.family == family);
        if rows.is_empty() && report.is_none() {
            continue;
        }
        match report {
            Some(rep) => family_section(&mut out, rep),
            None => {
                let _ = writeln!(out, "## {}\n", family.title());
            }
        }
        outcome_table(&mut out, &rows);
    }
    let rows: Vec<_> = r.outcomes.iter().filter(ledger).collect();
    if !rows.is_empty() {
        let _ = writeln!(out, "## Witness ledger\n");
        outcome_table(&mut out, &rows);
    }
    out
}

fn outcome_table(out: &mut String, rows: &[&super::EntryOutcome]) {
    if rows.is_empty() {
        return;
    }
    let _ = writeln!(out, "| Line | System | Expectation | Result | Detail |");
    let _ = writeln!(out, "|---|---|---|---|---|");
    for o in rows {
        let line = if o.line == 0 { "-".to_string() } else { o.line.to_string() };
        let _ = writeln!(
            out,
            "| {line} | `{}` | {} | {} | {} |",
            o.system,
            o.expectation,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let _ = writeln!(out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify_system;
    use crate::terms::parse_system;

    #[test]
    fn verdict_json_shapes() {
        let c = classify_system(&parse_system("p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)").unwrap().system).unwrap();
        let v = serde_json::to_value(verdict_json(&c)).unwrap();
        assert_eq!(v["status"], "SatisfiableIn");
        assert_eq!(v["prime"], 2);
        assert!(v["witness"]["p"].is_array());
        assert!(v.get("snf").is_none());

        let c = classify_system(&parse_system("p(x,x,y)=p(x,y,y); p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)").unwrap().system)
            .unwrap();
        let v = serde_json::to_value(verdict_json(&c)).unwrap();
        assert_eq!(v["status"], "UnsatisfiableAllFiniteRings");
        assert!(v["snf"]["diag"].is_array());
        assert!(v["snf"]["transformed_rhs"].is_array());
        assert_eq!(v["is_candidate"], true);
        let text = serde_json::to_string(&verdict_json(&c)).unwrap();
        assert!(text.starts_with("{\"system\":"));
    }
}
