#![no_main]

use libfuzzer_sys::fuzz_target;
use thermosup_cli::literals::parse_unitary;

fuzz_target!(|data: &[u8]| {
    let Some((&d, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let dim = 1 + (d as usize % 4);
    if let Ok(u) = parse_unitary(text, dim, 0) {
        assert!(u.is_unitary(1e-10));
    }
});
