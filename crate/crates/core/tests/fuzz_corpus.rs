//! Replays the checked-in fuzz seeds through the same entry points as the
//! fuzz targets, so the corpus stays meaningful without cargo-fuzz.

use std::fs;
use std::path::PathBuf;

use giant_routing::runner::{
    parse_config, parse_config_or_manifest, parse_manifest, raw_config_from_text, read_csv_table,
};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn config_seeds() {
    let mut accepted = 0;
    for (path, text) in seeds("parse_config") {
        let _ = parse_config(&text, false);
        if let Ok(parsed) = parse_config(&text, true) {
            accepted += 1;
            let again = parse_config(&parsed.config.to_json().to_string(), true)
                .unwrap_or_else(|e| panic!("{}: round trip failed: {e}", path.display()));
            assert_eq!(again.config.to_json(), parsed.config.to_json(), "{}", path.display());
        }
    }
    assert!(accepted >= 3);
}

#[test]
fn config_errors_name_a_field() {
    for (path, text) in seeds("parse_config") {
        if let Err(e) = parse_config(&text, false) {
            assert!(e.field().is_some(), "{}: {e}", path.display());
            assert_eq!(e.exit_code(), 2, "{}", path.display());
        }
    }
}

#[test]
fn csv_seeds() {
    let mut accepted = 0;
    for (path, text) in seeds("parse_csv_table") {
        if let Ok(table) = read_csv_table("seed", &text) {
            accepted += 1;
            let again = read_csv_table("seed", &table.to_csv()).unwrap();
            assert_eq!(again.columns, table.columns, "{}", path.display());
            assert_eq!(again.to_csv(), table.to_csv(), "{}", path.display());
        }
    }
    assert!(accepted >= 3);
}

#[test]
fn manifest_seeds() {
    let mut rerunnable = 0;
    for (_, text) in seeds("parse_manifest") {
        let _ = parse_manifest(&text);
        let _ = raw_config_from_text(&text);
        if parse_config_or_manifest(&text, true).is_ok() {
            rerunnable += 1;
        }
    }
    assert!(rerunnable >= 2);
}

mod mutated {
    use super::*;
    use proptest::prelude::*;

    fn all_seeds() -> Vec<String> {
        ["parse_config", "parse_csv_table", "parse_manifest"].iter().flat_map(|t| seeds(t)).map(|(_, s)| s).collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        /// Truncated and byte-patched seeds never panic any parser.
        #[test]
        fn parsers_never_panic(pick in any::<prop::sample::Index>(), cut in any::<prop::sample::Index>(),
                               patch in proptest::collection::vec((any::<prop::sample::Index>(), 0x20u8..0x7f), 0..4)) {
            let seeds = all_seeds();
            let mut bytes = pick.get(&seeds).clone().into_bytes();
            bytes.truncate(cut.index(bytes.len() + 1));
            for (at, b) in patch {
                if !bytes.is_empty() {
                    let i = at.index(bytes.len());
                    bytes[i] = b;
                }
            }
            if let Ok(text) = String::from_utf8(bytes) {
                let _ = parse_config(&text, false);
                if let Ok(parsed) = parse_config(&text, true) {
                    let again = parse_config(&parsed.config.to_json().to_string(), true).unwrap();
                    prop_assert_eq!(again.config.to_json(), parsed.config.to_json());
                }
                if let Ok(table) = read_csv_table("m", &text) {
                    prop_assert!(read_csv_table("m", &table.to_csv()).is_ok());
                }
                let _ = parse_manifest(&text);
                let _ = parse_config_or_manifest(&text, false);
            }
        }
    }
}
