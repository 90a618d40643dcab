#![no_main]

use giant_routing::runner::parse_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_config(s, false);
        // a config that resolves must survive its own round trip
        if let Ok(parsed) = parse_config(s, true) {
            let again = parse_config(&parsed.config.to_json().to_string(), true).expect("round trip");
            assert_eq!(again.config.to_json(), parsed.config.to_json());
        }
    }
});
