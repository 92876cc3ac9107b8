#![no_main]

use libfuzzer_sys::fuzz_target;
use meaningfock::dataset::read_pairs;

fuzz_target!(|data: &[u8]| {
    if let Ok(pairs) = read_pairs(data) {
        for p in &pairs {
            let _ = p.combined_phrase();
        }
    }
});
