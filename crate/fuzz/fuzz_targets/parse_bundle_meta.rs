#![no_main]

use libfuzzer_sys::fuzz_target;
use qstiefel::io::parse_bundle_meta;

fuzz_target!(|data: &[u8]| {
    // meta.json payloads come from disk; arbitrary bytes must only ever
    // produce a parse error.
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_bundle_meta(text);
    }
});
