#![no_main]

use dejean::SigmaWord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let n = 2 + n as usize % 30;
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let Ok(v) = SigmaWord::parse(n, text) else { return };
    assert!(v.iter().all(|&a| a >= 1 && a as usize <= n));
    let again = SigmaWord::parse(n, &v.to_string()).expect("display output parses");
    assert_eq!(again, v);
});
