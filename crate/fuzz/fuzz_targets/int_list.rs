#![no_main]

use kacdepth_cli::parse_int_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_int_list(s) {
        let joined: Vec<String> = v.iter().map(i64::to_string).collect();
        assert_eq!(parse_int_list(&joined.join(",")).expect("re-parse"), v);
    }
});
