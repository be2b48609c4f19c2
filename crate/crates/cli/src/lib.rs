//! The `linid` command line: argument handling, report output and
//! certificate persistence.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use linid::algebra::{check_wnu_bridge, clone_slice, majority_a, reduct_algebra, semilattice_b, FiniteAlgebra, DEFAULT_CAP};
use linid::classify::{
    candidate_markdown, enumerate_family, minimal_candidates, manifest_markdown, verdict_json, Classification, Classifier,
    ClassifyError, Manifest, MasterFamily,
};
use linid::reducts::{
    affine_terms, coefficient_system, inventory_diff, listed_z5_terms, solve_mod, verify_witness, AffineTerm,
    ReductWitness, MAX_MODULUS,
};
use linid::terms::{parse_system, ParseWarning, Symbol, System};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "linid", version, about = "Classify linear identity systems on idempotent terms")]
pub struct Cli {
    /// Largest modulus scanned by `check`.
    #[arg(long, global = true, default_value_t = 64)]
    pub bound: u64,
    /// Sizes of the majority algebra consulted; the first one decides.
    #[arg(long, global = true, value_delimiter = ',', default_value = "2,3,4")]
    pub a_sizes: Vec<usize>,
    /// Directory for reports and certificates.
    #[arg(long, global = true, env = "LINID_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Reload every certificate written and check it again.
    #[arg(long, global = true)]
    pub recheck: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one system, given inline or as a file.
    Check { input: String },
    /// Term operations of an algebra: b, a, a:<m> or reduct:<n>.
    Clone { algebra: String, arity: usize },
    /// Idempotent affine ternary terms over Z_n.
    ReductTerms { modulus: u64 },
    /// Every system of a family that holds in the majority algebra.
    Enumerate { family: String },
    /// Candidates of a family and their minimality.
    Minimal { family: String },
    /// Check the built-in (or given) manifest of expected facts.
    VerifyPaper {
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Runs the command line, writing results to `out` and diagnostics to `err`,
/// and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Mismatch(msg)) => {
            let _ = writeln!(err, "mismatch: {msg}");
            EXIT_MISMATCH
        }
    }
}

struct Output<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

impl Output<'_> {
    /// Prints the report in the chosen formats and saves it under
    /// `out_dir/<name>.{json,md}`.
    fn emit(&mut self, name: &str, value: &impl Serialize, markdown: impl FnOnce() -> String) -> Result<(), Failure> {
        let json = format!("{}\n", serde_json::to_string_pretty(value).map_err(usage)?);
        let md = match self.cli.format {
            Format::Json => None,
            _ => Some(markdown()),
        };
        if self.cli.format != Format::Markdown {
            self.out.write_all(json.as_bytes()).map_err(usage)?;
        }
        if let Some(md) = &md {
            if self.cli.format == Format::Both {
                self.out.write_all(b"\n").map_err(usage)?;
            }
            self.out.write_all(md.as_bytes()).map_err(usage)?;
        }
        if let Some(dir) = &self.cli.out_dir {
            fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
            if self.cli.format != Format::Markdown {
                write_file(&dir.join(format!("{name}.json")), &json)?;
            }
            if let Some(md) = &md {
                write_file(&dir.join(format!("{name}.md")), md)?;
            }
        }
        Ok(())
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    if !(2..=MAX_MODULUS).contains(&cli.bound) {
        return Err(usage(format!("--bound must be between 2 and {MAX_MODULUS}")));
    }
    if cli.a_sizes.is_empty() || cli.a_sizes.iter().any(|m| !(2..=16).contains(m)) {
        return Err(usage("--a-sizes entries must be between 2 and 16"));
    }
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        // A pool may already exist when run is called repeatedly in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let mut output = Output { cli, out };
    match &cli.command {
        Command::Check { input } => check(cli, &mut output, err, input),
        Command::Clone { algebra, arity } => clone(&mut output, algebra, *arity),
        Command::ReductTerms { modulus } => reduct_terms(&mut output, *modulus),
        Command::Enumerate { family } => enumerate(cli, &mut output, family),
        Command::Minimal { family } => minimal(cli, &mut output, family),
        Command::VerifyPaper { manifest } => verify(cli, &mut output, err, manifest.as_deref()),
    }
}

fn classifier(cli: &Cli) -> Result<Classifier, Failure> {
    Ok(Classifier::new(&cli.a_sizes)?)
}

fn read_system(input: &str) -> Result<(System, Vec<ParseWarning>), Failure> {
    let path = Path::new(input);
    let text = if path.is_file() {
        fs::read_to_string(path).map_err(|e| usage(format!("cannot read {input}: {e}")))?
    } else {
        input.to_string()
    };
    let parsed = parse_system(&text).map_err(usage)?;
    Ok((parsed.system, parsed.warnings))
}

fn check(cli: &Cli, output: &mut Output, err: &mut dyn Write, input: &str) -> Result<(), Failure> {
    let (system, warnings) = read_system(input)?;
    for w in warnings {
        let _ = writeln!(err, "warning: {}:{}: trivial identity {}", w.line, w.col, w.text);
    }
    let c = classifier(cli)?.classify(&system)?;
    let linsys = coefficient_system(&system);
    let mut solvable = Vec::new();
    for n in 2..=cli.bound {
        if solve_mod(&linsys, n).map_err(usage)?.is_some() {
            solvable.push(n);
        }
    }
    let agree = match c.ring.prime() {
        None => solvable.is_empty(),
        Some(p) => p > cli.bound || solvable.first() == Some(&p),
    };
    let mut value = serde_json::to_value(verdict_json(&c)).map_err(usage)?;
    value["solvable_moduli"] = json!(solvable);
    value["modulus_bound"] = json!(cli.bound);
    persist_certificates(cli, std::slice::from_ref(&c))?;
    output.emit("check", &value, || check_markdown(&c, &solvable, cli.bound))?;
    if agree {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "ring verdict and modular scan disagree for '{system}'"
        )))
    }
}

fn check_markdown(c: &Classification, solvable: &[u64], bound: u64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "## `{}`\n", c.system);
    let _ = writeln!(s, "- canonical form: `{}`", c.canonical);
    match c.ring.prime() {
        Some(p) => {
            let _ = writeln!(s, "- solvable over ℤ{p}");
        }
        None => {
            let _ = writeln!(s, "- no solution over any finite ring");
        }
    }
    let _ = writeln!(s, "- moduli up to {bound} with a solution: {}", solvable.len());
    let _ = writeln!(s, "- holds in the semilattice: {}", c.holds_in_b.satisfiable);
    let _ = writeln!(s, "- holds in the majority algebra: {}", c.holds_in_a.satisfiable);
    let _ = writeln!(s, "- candidate: {}", c.is_candidate);
    s
}

/// File name of a canonical system's certificate.
pub fn certificate_name(canonical: &System) -> String {
    let digest = Sha256::digest(canonical.to_string().as_bytes());
    format!("{}.json", &hex::encode(digest)[..16])
}

fn persist_certificates(cli: &Cli, classes: &[Classification]) -> Result<(), Failure> {
    let Some(dir) = &cli.out_dir else {
        return Ok(());
    };
    let dir = dir.join("certificates");
    fs::create_dir_all(&dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
    let classifier = classifier(cli)?;
    for c in classes {
        let canonical = if c.system == c.canonical {
            c.clone()
        } else {
            classifier.classify(&c.canonical)?
        };
        let path = dir.join(certificate_name(&canonical.canonical));
        let text = format!("{}\n", serde_json::to_string_pretty(&verdict_json(&canonical)).map_err(usage)?);
        write_file(&path, &text)?;
        if cli.recheck {
            recheck_certificate(&path)?;
        }
    }
    Ok(())
}

/// Loads a certificate and checks its witness by substitution, or its Smith
/// form data against a fresh computation.
pub fn recheck_file(path: &Path) -> Result<(), String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let system = parse_system(v["system"].as_str().ok_or("missing system")?)
        .map_err(|e| e.to_string())?
        .system;
    match v["status"].as_str() {
        Some("SatisfiableIn") => {
            let prime = v["prime"].as_u64().ok_or("missing prime")?;
            let mut witness = ReductWitness::new();
            for (name, coeffs) in v["witness"].as_object().ok_or("missing witness")? {
                let symbol = name.chars().next().and_then(Symbol::from_name).ok_or("bad symbol")?;
                let coeffs: Vec<i64> = coeffs
                    .as_array()
                    .ok_or("bad coefficients")?
                    .iter()
                    .map(|c| c.as_i64().ok_or("bad coefficient"))
                    .collect::<Result<_, _>>()?;
                witness.insert(symbol, AffineTerm::new(prime, coeffs).map_err(|e| e.to_string())?);
            }
            if verify_witness(&system, &witness, prime) {
                Ok(())
            } else {
                Err(format!("witness fails mod {prime}"))
            }
        }
        Some("UnsatisfiableAllFiniteRings") => {
            let fresh = classify_fresh(&system)?;
            let expected = serde_json::to_value(verdict_json(&fresh)).map_err(|e| e.to_string())?;
            if fresh.ring.is_satisfiable() || expected["snf"] != v["snf"] {
                Err("Smith form data does not match".to_string())
            } else {
                Ok(())
            }
        }
        _ => Err("unknown status".to_string()),
    }
}

fn classify_fresh(system: &System) -> Result<Classification, String> {
    Classifier::new(&[3]).and_then(|c| c.classify(system)).map_err(|e| e.to_string())
}

fn recheck_certificate(path: &Path) -> Result<(), Failure> {
    recheck_file(path).map_err(|e| Failure::Mismatch(format!("certificate {} fails recheck: {e}", path.display())))
}

fn parse_algebra(name: &str) -> Result<FiniteAlgebra, Failure> {
    let bad = || usage(format!("unknown algebra '{name}' (expected b, a, a:<m> or reduct:<n>)"));
    match name.split_once(':') {
        None if name == "b" => Ok(semilattice_b()),
        None if name == "a" => majority_a(3).map_err(usage),
        Some(("a", m)) => majority_a(m.parse().map_err(|_| bad())?).map_err(usage),
        Some(("reduct", n)) => reduct_algebra(n.parse().map_err(|_| bad())?).map_err(usage),
        _ => Err(bad()),
    }
}

fn clone(output: &mut Output, name: &str, arity: usize) -> Result<(), Failure> {
    let algebra = parse_algebra(name)?;
    let slice = clone_slice(&algebra, arity, DEFAULT_CAP).map_err(usage)?;
    let members: Vec<Vec<u16>> = slice.iter().map(|t| t.values().to_vec()).collect();
    let projections = slice.iter().filter(|t| t.projection_index().is_some()).count();
    let value = json!({
        "algebra": name,
        "size": algebra.size(),
        "arity": arity,
        "count": slice.len(),
        "projections": projections,
        "wnu_bridge": algebra.ops().iter().any(|o| o.table.arity() == 3).then(|| check_wnu_bridge(&algebra)),
        "members": members,
    });
    output.emit(&format!("clone-{}-{arity}", name.replace(':', "-")), &value, || {
        let mut s = format!("## Term operations of arity {arity} of `{name}`\n\n");
        let _ = writeln!(s, "{} operations, {} of them projections.\n", slice.len(), projections);
        for m in &members {
            let row: Vec<String> = m.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "- `{}`", row.join(""));
        }
        s
    })
}

fn reduct_terms(output: &mut Output, n: u64) -> Result<(), Failure> {
    let terms = affine_terms(n, 3).map_err(usage)?;
    let shown: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
    let mut value = json!({ "modulus": n, "arity": 3, "count": terms.len(), "terms": shown });
    let diff = if n == 5 {
        let d = inventory_diff(5, 3, &listed_z5_terms()).map_err(usage)?;
        let names = |v: &[AffineTerm]| v.iter().map(|t| t.to_string()).collect::<Vec<_>>();
        value["listed"] = json!({
            "listed_count": d.listed_count,
            "distinct_listed": d.distinct_listed,
            "duplicates": d.duplicates.iter().map(|(t, k)| json!({"term": t.to_string(), "times": k})).collect::<Vec<_>>(),
            "missing": names(&d.missing),
            "invalid": d.invalid,
        });
        Some(d)
    } else {
        None
    };
    output.emit(&format!("reduct-terms-{n}"), &value, || {
        let mut s = format!("## Idempotent affine ternary terms over ℤ{n}\n\n{} terms.\n\n", terms.len());
        for t in &shown {
            let _ = writeln!(s, "- `{t}`");
        }
        if let Some(d) = &diff {
            let _ = writeln!(s, "\nListed table: {} entries, {} distinct.", d.listed_count, d.distinct_listed);
            for (t, k) in &d.duplicates {
                let _ = writeln!(s, "- listed {k} times: `{t}`");
            }
            for t in &d.missing {
                let _ = writeln!(s, "- not listed: `{t}`");
            }
        }
        s
    })
}

fn family(name: &str) -> Result<MasterFamily, Failure> {
    Ok(name.parse::<MasterFamily>()?)
}

fn enumerate(cli: &Cli, output: &mut Output, name: &str) -> Result<(), Failure> {
    use rayon::prelude::*;
    let family = family(name)?;
    let classifier = classifier(cli)?;
    let e = enumerate_family(family);
    let classes: Vec<Classification> = e
        .systems
        .par_iter()
        .map(|s| classifier.classify(s))
        .collect::<Result<_, _>>()?;
    let value = json!({
        "family": family,
        "raw_count": e.raw_count,
        "count": classes.len(),
        "systems": classes.iter().map(verdict_json).collect::<Vec<_>>(),
    });
    output.emit(&format!("enumerate-{family}"), &value, || {
        let mut s = format!("## {}\n\n{} systems.\n\n", family.title(), classes.len());
        let _ = writeln!(s, "| System | Least prime | B | Candidate |");
        let _ = writeln!(s, "|---|---|---|---|");
        for c in &classes {
            let prime = c.ring.prime().map_or("-".to_string(), |p| p.to_string());
            let _ = writeln!(s, "| `{}` | {prime} | {} | {} |", c.canonical, c.holds_in_b.satisfiable, c.is_candidate);
        }
        s
    })
}

fn minimal(cli: &Cli, output: &mut Output, name: &str) -> Result<(), Failure> {
    let family = family(name)?;
    let report = minimal_candidates(family, &classifier(cli)?)?;
    let classes: Vec<Classification> = report.candidates.iter().map(|c| c.classification.clone()).collect();
    persist_certificates(cli, &classes)?;
    output.emit(&format!("minimal-{family}"), &report, || candidate_markdown(&report))
}

fn verify(cli: &Cli, output: &mut Output, err: &mut dyn Write, path: Option<&Path>) -> Result<(), Failure> {
    let manifest = match path {
        None => Manifest::builtin(),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            Manifest::parse(&text)?
        }
    };
    let report = linid::classify::verify_paper(&manifest, &classifier(cli)?)?;
    let classes: Vec<Classification> = report
        .families
        .iter()
        .flat_map(|f| f.candidates.iter().map(|c| c.classification.clone()))
        .collect();
    persist_certificates(cli, &classes)?;
    output.emit("verify-paper", &report, || manifest_markdown(&report))?;
    for f in report.failures() {
        let _ = writeln!(err, "finding: line {} [{}] {}: {}", f.line, f.expectation, f.system, f.detail);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{} expectations failed", report.failures().len())))
    }
}
