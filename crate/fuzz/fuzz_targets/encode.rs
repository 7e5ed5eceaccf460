#![no_main]

use dejean::pansiot::{decode, encode};
use dejean::SigmaWord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let n = 2 + n as usize % 12;
    let letters: Vec<u8> = rest.iter().map(|x| 1 + x % n as u8).collect();
    let Ok(v) = SigmaWord::new(n, letters) else { return };
    match encode(&v) {
        Ok(b) => {
            let prefix = SigmaWord::new(n, v[..n - 1].to_vec()).unwrap();
            assert_eq!(decode(&b, &prefix).unwrap(), v);
        }
        Err(_) => assert!(v.len() < n - 1 || !v.is_pansiot_valid()),
    }
});
