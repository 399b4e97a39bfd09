#![no_main]

use libfuzzer_sys::fuzz_target;
use qstiefel::io::parse_tol_overrides;

fuzz_target!(|data: &str| {
    // QSTIEFEL_TOLS is user-controlled environment input.
    let _ = parse_tol_overrides(data);
});
