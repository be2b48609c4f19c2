#![no_main]

use libfuzzer_sys::fuzz_target;
use linid::algebra::FiniteAlgebra;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(a) = FiniteAlgebra::from_json(text) {
        let back = FiniteAlgebra::from_json(&a.to_json()).expect("serialized algebra parses");
        assert_eq!(back.to_json(), a.to_json());
    }
});
