#![no_main]

use libfuzzer_sys::fuzz_target;
use meaningfock::state_reconstruction::parse_request;

fuzz_target!(|data: &[u8]| {
    if let Ok(req) = parse_request(data) {
        let _ = req.solve();
    }
});
