use std::path::PathBuf;

use linid::algebra::FiniteAlgebra;
use linid::classify::Manifest;
use linid::reducts::AffineTerm;
use linid::terms::{format_system, parse_system, parse_system_in};
use proptest::prelude::*;

fn parse_system_target(text: &str) {
    if let Ok(parsed) = parse_system(text) {
        let s = parsed.system;
        let again = parse_system_in(&format_system(&s), s.signature(), s.num_vars()).unwrap();
        assert_eq!(again.system, s);
    }
}

fn manifest_target(text: &str) {
    let _ = Manifest::parse(text);
}

fn affine_target(head: u8, text: &str) {
    let arity = 1 + (head % 3) as usize;
    let modulus = 2 + (head / 3) as u64;
    if let Ok(t) = AffineTerm::parse(text, arity, modulus) {
        assert!(t.coeffs().iter().all(|c| (0..modulus as i64).contains(c)));
    }
    let _ = AffineTerm::parse_integer(text, arity);
}

fn algebra_target(text: &str) {
    if let Ok(a) = FiniteAlgebra::from_json(text) {
        let back = FiniteAlgebra::from_json(&a.to_json()).unwrap();
        assert_eq!(back.to_json(), a.to_json());
    }
}

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<Vec<u8>> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "{target}");
    out
}

#[test]
fn corpus_seeds_replay() {
    for s in seeds("parse_system") {
        parse_system_target(&String::from_utf8_lossy(&s));
    }
    for s in seeds("manifest") {
        manifest_target(&String::from_utf8_lossy(&s));
    }
    for s in seeds("affine_term") {
        let (head, rest) = s.split_first().unwrap();
        affine_target(*head, &String::from_utf8_lossy(rest));
    }
    for s in seeds("algebra_json") {
        algebra_target(&String::from_utf8_lossy(&s));
    }
    let accepted = seeds("algebra_json")
        .iter()
        .filter(|s| FiniteAlgebra::from_json(&String::from_utf8_lossy(s)).is_ok())
        .count();
    assert_eq!(accepted, 2);
}

#[test]
fn builtin_manifest_parses() {
    Manifest::parse(Manifest::builtin_text()).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn systems_never_panic(text in "[xyzpqts(),=; 0-9]{0,60}") {
        parse_system_target(&text);
    }

    #[test]
    fn manifest_lines_never_panic(text in "[A-Za-z]{0,14} ?\\| ?[xypq(),=; -]{0,30} ?\\| ?[a-z-]{0,18}( \\| \\[[0-9]{0,25}(, ?[-+0-9xyzpi]{0,10}){0,3}\\]?)?\n?") {
        manifest_target(&text);
    }

    #[test]
    fn affine_terms_never_panic(head in any::<u8>(), text in "[-+0-9xyzpiπ ]{0,30}") {
        affine_target(head, &text);
    }

    #[test]
    fn algebras_never_panic(size in 0usize..5, arity in 0usize..6, table in proptest::collection::vec(0usize..6, 0..40), name in "[a-z]{0,3}") {
        let text = format!(r#"{{"size":{size},"ops":[{{"name":"{name}","arity":{arity},"table":{table:?}}}]}}"#);
        algebra_target(&text);
    }

    #[test]
    fn arbitrary_text_never_panics(text in any::<String>()) {
        parse_system_target(&text);
        manifest_target(&text);
        affine_target(0, &text);
        algebra_target(&text);
    }
}
