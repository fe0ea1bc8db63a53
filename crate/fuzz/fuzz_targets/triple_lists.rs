#![no_main]

use libfuzzer_sys::fuzz_target;
use toeplitz_triples::triple::{dirac_ext, Params, TruncatedTriple};

// First byte: number of modes (capped); then one mask byte and eight bytes of
// f64 per mode. Any bit pattern, including NaN and infinities, must produce
// either a triple or an error.
fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let n = (n as usize % 24).min(rest.len() / 9);
    let mut dirac = Vec::with_capacity(n);
    let mut mask = Vec::with_capacity(n);
    for chunk in rest.chunks_exact(9).take(n) {
        mask.push(chunk[0] & 1 == 1);
        dirac.push(f64::from_le_bytes(chunk[1..9].try_into().unwrap()));
    }
    if let Ok(t) = TruncatedTriple::new("fuzz", dirac, mask) {
        let _ = dirac_ext(&t, Params::new(1.0, 1.0));
    }
});
