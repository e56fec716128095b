#![no_main]

use kacdepth::report::Report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = Report::from_json_str(s) {
        assert_eq!(Report::from_json_str(&r.to_json_string()).expect("re-decode"), r);
        let _ = r.to_text();
    }
});
