#![no_main]

use libfuzzer_sys::fuzz_target;
use toric_core::io::{parse_degree_csv, write_degree_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(terms) = parse_degree_csv(s) {
        assert_eq!(parse_degree_csv(&write_degree_csv(&terms)).unwrap(), terms);
    }
});
