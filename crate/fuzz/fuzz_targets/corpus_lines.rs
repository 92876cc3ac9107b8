#![no_main]

use libfuzzer_sys::fuzz_target;
use meaningfock::dataset::{read_corpus_lines, TokenizerOptions};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = read_corpus_lines(text, TokenizerOptions { stem: false });
        let _ = read_corpus_lines(text, TokenizerOptions { stem: true });
    }
});
