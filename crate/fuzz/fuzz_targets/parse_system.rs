#![no_main]

use libfuzzer_sys::fuzz_target;
use linid::terms::{format_system, parse_system, parse_system_in};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(parsed) = parse_system(text) {
        let s = parsed.system;
        let again = parse_system_in(&format_system(&s), s.signature(), s.num_vars()).expect("formatted system parses");
        assert_eq!(again.system, s);
    }
});
