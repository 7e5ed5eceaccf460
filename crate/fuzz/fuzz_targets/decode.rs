#![no_main]

use dejean::pansiot::{canonical_prefix, decode, encode};
use dejean::BinaryWord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let n = 2 + n as usize % 40;
    let b = BinaryWord::from_bits(rest.iter().map(|x| x & 1).collect());
    let v = decode(&b, &canonical_prefix(n)).expect("canonical prefix decodes anything");
    assert!(v.is_pansiot_valid());
    assert_eq!(v.len(), b.len() + n - 1);
    assert_eq!(encode(&v).expect("decoded words encode"), b);
});
