//! Report parser under arbitrary bytes: accepted reports must round-trip
//! through rendering with identical structure.

#![no_main]

use libfuzzer_sys::fuzz_target;
use linkage_cli::{parse_report, render_parsed};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(parsed) = parse_report(text) {
        let rendered = render_parsed(&parsed);
        let again = parse_report(&rendered).expect("rendered report text parses");
        assert_eq!(again, parsed);
    }
});
