//! Bundle parser under arbitrary bytes: accepted bundles must survive a
//! canonical serialize/parse round trip with witness and vertex set intact.

#![no_main]

use libfuzzer_sys::fuzz_target;
use linkage_core::{parse_bundle, serialize_bundle};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(bundle) = parse_bundle(text) {
        let canonical =
            serialize_bundle(&bundle.instance, bundle.linkage.as_ref(), bundle.bset.as_ref());
        let again = parse_bundle(&canonical).expect("canonical bundle text parses");
        assert_eq!(again.linkage, bundle.linkage);
        assert_eq!(again.bset, bundle.bset);
        let stable =
            serialize_bundle(&again.instance, again.linkage.as_ref(), again.bset.as_ref());
        assert_eq!(stable, canonical);
    }
});
