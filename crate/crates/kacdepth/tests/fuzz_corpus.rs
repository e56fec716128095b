//! Replays the checked-in fuzz seeds through the same round-trip checks.

use std::path::PathBuf;

use kacdepth::algebra::{LaurentPoly, RatFunc, TSeries};
use kacdepth::quiver::Quiver;
use kacdepth::report::Report;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<Vec<u8>> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(b: &[u8]) -> Option<&str> {
    std::str::from_utf8(b).ok()
}

#[test]
fn quiver_seeds() {
    let mut decoded = 0;
    for s in seeds("quiver_json") {
        if let Some(q) = text(&s).and_then(|t| Quiver::from_json_str(t).ok()) {
            assert_eq!(Quiver::from_json_str(&q.to_json_string()).unwrap(), q);
            decoded += 1;
        }
    }
    assert!(decoded > 0);
}

#[test]
fn laurent_and_text_seeds() {
    for s in seeds("laurent_json") {
        if let Some(p) = text(&s).and_then(|t| LaurentPoly::from_json_str(t).ok()) {
            assert_eq!(LaurentPoly::from_json_str(&p.to_json_string()).unwrap(), p);
            assert_eq!(p.to_string().parse::<LaurentPoly>().unwrap(), p);
        }
    }
    for s in seeds("poly_text") {
        let p: LaurentPoly = text(&s).unwrap().parse().unwrap();
        assert_eq!(p.to_string().parse::<LaurentPoly>().unwrap(), p);
    }
}

#[test]
fn ratfunc_seeds() {
    for s in seeds("ratfunc_json") {
        if let Some(f) = text(&s).and_then(|t| RatFunc::from_json_str(t).ok()) {
            assert_eq!(RatFunc::from_json_str(&f.to_json_string()).unwrap(), f);
        }
    }
}

#[test]
fn series_seeds() {
    let mut decoded = 0;
    for s in seeds("series_json") {
        let (&head, rest) = s.split_first().unwrap();
        let nvars = 1 + (head & 3) as usize % 3;
        let bound: Vec<u32> = (0..nvars).map(|i| ((head >> (2 + 2 * i)) & 3) as u32).collect();
        if let Ok(f) = TSeries::from_json_str(text(rest).unwrap(), bound.clone()) {
            assert_eq!(TSeries::from_json_str(&f.to_json_string(), bound).unwrap(), f);
            decoded += 1;
        }
    }
    assert_eq!(decoded, 2);
}

#[test]
fn report_seeds() {
    let decoded: Vec<Report> = seeds("report_json").iter().filter_map(|s| Report::from_json_str(text(s)?).ok()).collect();
    assert_eq!(decoded.len(), 1);
    assert_eq!(Report::from_json_str(&decoded[0].to_json_string()).unwrap(), decoded[0]);
}
