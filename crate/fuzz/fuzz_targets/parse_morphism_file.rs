#![no_main]

use dejean::morphisms::{emit_morphism_file, parse_morphism_file};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(mut parsed) = parse_morphism_file(text) else {
        return;
    };
    let emitted = emit_morphism_file(&parsed);
    let reparsed = parse_morphism_file(&emitted).expect("emitted stanzas parse");
    parsed.sort_by_key(|h| h.n());
    assert_eq!(parsed, reparsed);
});
