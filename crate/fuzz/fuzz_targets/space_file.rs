#![no_main]

use libfuzzer_sys::fuzz_target;
use meaningfock::lsa::SemanticSpace;

fuzz_target!(|data: &[u8]| {
    if let Ok(space) = SemanticSpace::from_bytes(data) {
        assert_eq!(space.to_bytes(), data);
    }
});
