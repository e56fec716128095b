#![no_main]

use kacdepth::algebra::RatFunc;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = RatFunc::from_json_str(s) {
        let back = RatFunc::from_json_str(&f.to_json_string()).expect("re-decode");
        assert_eq!(back, f);
        assert_eq!(RatFunc::new(f.num().clone(), f.den().clone()).expect("canonical"), f);
    }
});
