//! Instance parser under arbitrary bytes: accepted inputs must survive a
//! canonical serialize/parse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use linkage_core::{parse_instance, serialize_instance};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(instance) = parse_instance(text) {
        let canonical = serialize_instance(&instance);
        let again = parse_instance(&canonical).expect("canonical instance text parses");
        assert_eq!(serialize_instance(&again), canonical);
    }
});
