#![no_main]

use kacdepth::algebra::LaurentPoly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = LaurentPoly::from_json_str(s) {
        assert_eq!(LaurentPoly::from_json_str(&p.to_json_string()).expect("re-decode"), p);
        let text: LaurentPoly = p.to_string().parse().expect("display parses");
        assert_eq!(text, p);
    }
});
