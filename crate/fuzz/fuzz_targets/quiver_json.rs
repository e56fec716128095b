#![no_main]

use kacdepth::quiver::Quiver;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = Quiver::from_json_str(s) {
        let back = Quiver::from_json_str(&q.to_json_string()).expect("re-decode");
        assert_eq!(back, q);
        assert_eq!(q.betti() + q.nvertices(), q.num_components() + q.narrows());
    }
});
