#![no_main]

use libfuzzer_sys::fuzz_target;
use toric_core::linalg::IntegerMatrix;
use toric_core::rational::parse_matrix;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = parse_matrix(s) {
        if let Ok(m) = IntegerMatrix::new(rows) {
            if m.dim() <= 4 {
                let _ = m.det();
                let _ = m.char_poly();
            }
        }
    }
});
