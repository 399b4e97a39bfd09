#![no_main]

use libfuzzer_sys::fuzz_target;
use qstiefel::io::{format_qmat, parse_qmat};

fuzz_target!(|data: &[u8]| {
    // The QMAT1 parser must reject malformed input with an error, never a
    // panic, and anything it accepts must round-trip through the writer.
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(m) = parse_qmat(text) {
            let again = parse_qmat(&format_qmat(&m)).expect("formatted output must parse");
            assert_eq!(again, m);
        }
    }
});
