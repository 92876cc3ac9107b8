#![no_main]

use libfuzzer_sys::fuzz_target;
use meaningfock::dataset::read_similarities;
use meaningfock::threshold_model::{apply, ThresholdParams};

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = read_similarities(data) {
        for m in apply(&rows, &ThresholdParams::NARROW) {
            assert!((0.0..=1.0).contains(&m.mu_or));
        }
    }
});
