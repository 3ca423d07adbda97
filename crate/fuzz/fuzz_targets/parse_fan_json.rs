#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(fan) = toric_core::io::parse_fan_json(s) {
        let _ = fan.is_complete();
    }
});
