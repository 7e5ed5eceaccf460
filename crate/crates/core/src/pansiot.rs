//! Pansiot encoding between words over `Σ_n` whose `(n−1)`-windows are
//! made of distinct letters and binary codewords.
//!
//! Positions are 1-based in the prose below and 0-based in code: bit `i`
//! (0-based) compares letters `i` and `i + n − 1`.

use thiserror::Error;

use crate::words::{BinaryWord, SigmaWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PansiotError {
    #[error("word of length {len} is shorter than n - 1 = {need}")]
    TooShort { len: usize, need: usize },
    #[error("window starting at index {0} repeats a letter")]
    RepeatedLetter(usize),
    #[error("prefix must be n - 1 = {need} distinct letters, got {got:?}")]
    BadPrefix { need: usize, got: Vec<u8> },
}

/// Bit `i` is 0 iff `v_i = v_{i+n−1}`.
pub fn encode(v: &SigmaWord) -> Result<BinaryWord, PansiotError> {
    let span = v.n() - 1;
    if v.len() < span {
        return Err(PansiotError::TooShort {
            len: v.len(),
            need: span,
        });
    }
    if let Some(k) = v.first_bad_window() {
        return Err(PansiotError::RepeatedLetter(k));
    }
    let bits = (0..v.len() - span).map(|i| u8::from(v[i] != v[i + span])).collect();
    Ok(BinaryWord::from_bits(bits))
}

/// `1, 2, …, n−1`.
pub fn canonical_prefix(n: usize) -> SigmaWord {
    assert!(n >= 2);
    SigmaWord::from_trusted(n, (1..n as u8).collect())
}

/// Incremental inverse of [`encode`].
///
/// Keeps the last `n − 1` letters and the one letter absent from them.
/// A 0 bit repeats the letter leaving the window; a 1 bit brings in the
/// absent letter. Either way the window stays distinct, so every decoded
/// word is Pansiot-valid.
#[derive(Debug, Clone)]
pub struct Decoder {
    letters: Vec<u8>,
    span: usize,
    absent: u8,
}

impl Decoder {
    pub fn new(prefix: &SigmaWord) -> Result<Self, PansiotError> {
        let n = prefix.n();
        let mut seen = vec![false; n + 1];
        let distinct = prefix.len() == n - 1 && prefix.iter().all(|&a| !std::mem::replace(&mut seen[a as usize], true));
        if !distinct {
            return Err(PansiotError::BadPrefix {
                need: n - 1,
                got: prefix.to_vec(),
            });
        }
        let absent = (1..=n).find(|&a| !seen[a]).expect("one letter is absent") as u8;
        Ok(Decoder {
            letters: prefix.to_vec(),
            span: n - 1,
            absent,
        })
    }

    pub fn push(&mut self, bit: u8) -> u8 {
        let leaving = self.letters[self.letters.len() - self.span];
        let next = if bit == 0 {
            leaving
        } else {
            std::mem::replace(&mut self.absent, leaving)
        };
        self.letters.push(next);
        next
    }

    /// Undoes the last [`push`](Self::push) of `bit`.
    pub fn pop(&mut self, bit: u8) {
        let last = self.letters.pop().expect("pop past the prefix");
        assert!(self.letters.len() >= self.span, "pop past the prefix");
        if bit == 1 {
            self.absent = last;
        }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn into_word(self) -> SigmaWord {
        let n = self.span + 1;
        SigmaWord::from_trusted(n, self.letters)
    }
}

/// Recovers the word with the given `(n−1)`-letter prefix and encoding `b`.
pub fn decode(b: &BinaryWord, prefix: &SigmaWord) -> Result<SigmaWord, PansiotError> {
    let mut dec = Decoder::new(prefix)?;
    dec.letters.reserve(b.len());
    for &bit in b.iter() {
        dec.push(bit);
    }
    let w = dec.into_word();
    debug_assert!(w.is_pansiot_valid());
    Ok(w)
}
