#![no_main]

use libfuzzer_sys::fuzz_target;
use toric_core::degrees::degree_sequence;

// Parsed problems with small entries go through the degree engine.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(p) = toric_core::io::parse_problem(s) else { return };
    if p.matrix.dim() > 3 || p.matrix.rows().iter().flatten().any(|x| x.bits() > 8) {
        return;
    }
    if let Ok(map) = p.map() {
        let _ = degree_sequence(&map, &p.divisor, p.k, p.n.min(4));
    }
});
