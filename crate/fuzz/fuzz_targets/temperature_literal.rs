#![no_main]

use libfuzzer_sys::fuzz_target;
use thermosup_cli::literals::{format_temperature, parse_temperature};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_temperature(text) {
        let again = parse_temperature(&format_temperature(t)).expect("echoed literal parses");
        let (a, b) = (again.beta(), t.beta());
        assert!(a == b || (a - b).abs() <= 1e-15 * b);
    }
});
