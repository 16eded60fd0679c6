#![no_main]

use clap::Parser;
use libfuzzer_sys::fuzz_target;
use thermosup_cli::Cli;

// NUL-separated argv after the binary name
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("thermosup").chain(text.split('\0'));
    let _ = Cli::try_parse_from(args);
});
