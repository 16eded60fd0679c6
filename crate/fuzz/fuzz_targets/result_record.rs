#![no_main]

use libfuzzer_sys::fuzz_target;
use thermosup_cli::record::ResultRecord;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = ResultRecord::from_json_str(text) {
        let back = ResultRecord::from_json_str(&r.to_json()).expect("emitted record parses");
        assert_eq!(back, r);
    }
});
