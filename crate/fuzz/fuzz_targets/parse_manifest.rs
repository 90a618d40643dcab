#![no_main]

use giant_routing::runner::{parse_config_or_manifest, parse_manifest, raw_config_from_text};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_manifest(s);
        let _ = raw_config_from_text(s);
        let _ = parse_config_or_manifest(s, false);
    }
});
