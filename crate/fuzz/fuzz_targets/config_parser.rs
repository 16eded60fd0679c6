#![no_main]

use libfuzzer_sys::fuzz_target;
use thermosup_cli::config::Params;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = Params::from_toml_str(text) {
            // overlaying onto itself must be a no-op
            assert_eq!(p.overlay(&p), p);
        }
    }
});
