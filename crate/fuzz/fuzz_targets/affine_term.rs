#![no_main]

use libfuzzer_sys::fuzz_target;
use linid::reducts::AffineTerm;

fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let arity = 1 + (head % 3) as usize;
    let modulus = 2 + (head / 3) as u64;
    if let Ok(t) = AffineTerm::parse(text, arity, modulus) {
        assert!(t.coeffs().iter().all(|c| (0..modulus as i64).contains(c)));
    }
    let _ = AffineTerm::parse_integer(text, arity);
});
