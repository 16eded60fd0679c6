#![no_main]

use libfuzzer_sys::fuzz_target;
use thermosup_cli::literals::parse_probe;

// first byte picks the dimension
fuzz_target!(|data: &[u8]| {
    let Some((&d, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let dim = 1 + (d as usize % 4);
    if let Ok(rho) = parse_probe(text, dim) {
        assert_eq!(rho.dim(), dim);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-9);
    }
});
