#![no_main]

use giant_routing::runner::read_csv_table;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(table) = read_csv_table("fuzz", s) {
            let _ = read_csv_table("fuzz", &table.to_csv());
        }
    }
});
