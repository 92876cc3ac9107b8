#![no_main]

use libfuzzer_sys::fuzz_target;
use meaningfock::classicality::classify;
use meaningfock::dataset::{read_membership, write_membership};

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = read_membership(data) {
        for t in &rows {
            let _ = classify(t, 0.0);
        }
        let mut out = Vec::new();
        write_membership(&mut out, &rows).unwrap();
        assert_eq!(read_membership(out.as_slice()).unwrap(), rows);
    }
});
