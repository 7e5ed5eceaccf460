#![no_main]

use dejean::BinaryWord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    match text.parse::<BinaryWord>() {
        Ok(w) => {
            assert_eq!(w.to_string(), text);
            assert!(w.iter().all(|&b| b <= 1));
        }
        Err(_) => assert!(text.chars().any(|c| c != '0' && c != '1')),
    }
});
