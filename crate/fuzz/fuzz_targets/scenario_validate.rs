#![no_main]

use libfuzzer_sys::fuzz_target;

// Validation must reject oversized or malformed scenarios without panicking
// and without allocating the matrices they describe.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = toeplitz_lab::scenario::parse(text) {
        let _ = s.max_dim();
        let _ = s.validate(false);
    }
});
