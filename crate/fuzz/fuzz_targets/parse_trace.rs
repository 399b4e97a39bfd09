#![no_main]

use libfuzzer_sys::fuzz_target;
use qstiefel::io::{format_trace, parse_trace};

fuzz_target!(|data: &[u8]| {
    // Trace CSVs are re-read for plotting and monotonicity checks; the
    // parser must never panic, and accepted rows must round-trip.
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(rows) = parse_trace(text) {
            let again = parse_trace(&format_trace(&rows)).expect("formatted trace must parse");
            assert_eq!(again.len(), rows.len());
        }
    }
});
