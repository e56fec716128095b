#![no_main]

use kacdepth::algebra::TSeries;
use libfuzzer_sys::fuzz_target;

// First byte: number of variables (1..=3) and per-variable bound (0..=3).
fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else { return };
    let nvars = 1 + (head & 3) as usize % 3;
    let bound: Vec<u32> = (0..nvars).map(|i| ((head >> (2 + 2 * i)) & 3) as u32).collect();
    let Ok(s) = std::str::from_utf8(rest) else { return };
    if let Ok(f) = TSeries::from_json_str(s, bound.clone()) {
        let back = TSeries::from_json_str(&f.to_json_string(), bound).expect("re-decode");
        assert_eq!(back, f);
    }
});
