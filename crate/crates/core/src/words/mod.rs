//! Finite words over `{0,1}` and over `{1,…,n}`, plus the repetition
//! machinery (periods, maximal period extensions, exact exponents).

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

mod repetitions;

pub use repetitions::{
    find_repetitions_exceeding, find_repetitions_with_excess_at_least, first_repetition_exceeding, has_period,
    max_exponent, maximal_extension, period_runs,
};

/// Exact exponent `|v| / q` of a repetition.
pub type Exponent = Ratio<u64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("symbol {symbol:?} at position {position} is not a binary digit")]
    NotBinary { position: usize, symbol: char },
    #[error("letter {letter} at position {position} is outside 1..={n}")]
    LetterOutOfRange { position: usize, letter: u32, n: usize },
    #[error("malformed letter {token:?} at position {position}")]
    MalformedLetter { position: usize, token: String },
    #[error("alphabet size {0} is not supported (need 2..=255)")]
    BadAlphabet(usize),
    #[error("interval [{i}, {j}) is out of range for a word of length {len}")]
    IndexOutOfRange { i: usize, j: usize, len: usize },
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("factor [{i}, {j}) does not have period {q}")]
    NotPeriodic { i: usize, j: usize, q: usize },
    #[error("word is empty")]
    Empty,
}

/// A word over `{0,1}`; symbols are stored as the bytes `0` and `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryWord(Vec<u8>);

impl BinaryWord {
    pub fn new() -> Self {
        BinaryWord(Vec::new())
    }

    /// Panics if any symbol is not 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "binary word with symbol > 1");
        BinaryWord(bits)
    }

    pub fn try_from_bits(bits: Vec<u8>) -> Result<Self, WordError> {
        if let Some(position) = bits.iter().position(|&b| b > 1) {
            return Err(WordError::NotBinary {
                position,
                symbol: char::from_digit(bits[position] as u32 % 36, 36).unwrap_or('?'),
            });
        }
        Ok(BinaryWord(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.0
    }

    pub fn push(&mut self, bit: u8) {
        assert!(bit <= 1);
        self.0.push(bit);
    }

    pub fn extend_from(&mut self, other: &BinaryWord) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn factor(&self, start: usize, end: usize) -> BinaryWord {
        BinaryWord(self.0[start..end].to_vec())
    }

    /// Longest common prefix of two words.
    pub fn common_prefix(&self, other: &BinaryWord) -> BinaryWord {
        let len = self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count();
        self.factor(0, len)
    }

    pub fn contains(&self, needle: &BinaryWord) -> bool {
        find_all(&self.0, &needle.0).next().is_some()
    }
}

impl Deref for BinaryWord {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl FromStr for BinaryWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, WordError> {
        s.chars()
            .enumerate()
            .map(|(position, c)| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                symbol => Err(WordError::NotBinary { position, symbol }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BinaryWord)
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

/// A word over `Σ_n = {1,…,n}`.
///
/// Serializes as plain digits when `n ≤ 9` and as dot-separated decimals
/// otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SigmaWord {
    n: usize,
    letters: Vec<u8>,
}

impl SigmaWord {
    pub fn new(n: usize, letters: Vec<u8>) -> Result<Self, WordError> {
        if !(2..=255).contains(&n) {
            return Err(WordError::BadAlphabet(n));
        }
        if let Some(position) = letters.iter().position(|&a| a == 0 || a as usize > n) {
            return Err(WordError::LetterOutOfRange {
                position,
                letter: letters[position] as u32,
                n,
            });
        }
        Ok(SigmaWord { n, letters })
    }

    pub(crate) fn from_trusted(n: usize, letters: Vec<u8>) -> Self {
        debug_assert!(letters.iter().all(|&a| a >= 1 && a as usize <= n));
        SigmaWord { n, letters }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Index (0-based) of the first window of `n − 1` letters that repeats a
    /// letter, or `None` if every such window is made of distinct letters.
    pub fn first_bad_window(&self) -> Option<usize> {
        let w = self.n - 1;
        let mut count = vec![0u32; self.n + 1];
        let mut dup = 0usize;
        for (k, &a) in self.letters.iter().enumerate() {
            count[a as usize] += 1;
            if count[a as usize] == 2 {
                dup += 1;
            }
            if k >= w {
                let old = self.letters[k - w] as usize;
                if count[old] == 2 {
                    dup -= 1;
                }
                count[old] -= 1;
            }
            if k + 1 >= w && dup > 0 {
                return Some(k + 1 - w);
            }
        }
        None
    }

    /// Every factor of length `n − 1` has `n − 1` distinct letters.
    pub fn is_pansiot_valid(&self) -> bool {
        self.first_bad_window().is_none()
    }

    /// Parses digits (`"1213"`) or separated decimals (`"1.2.13"`, `"1 2 13"`).
    pub fn parse(n: usize, s: &str) -> Result<Self, WordError> {
        let s = s.trim();
        let separated = s.contains(['.', ' ', ',', '\t', '\n']);
        let mut letters = Vec::new();
        if separated {
            let mut position = 0;
            for token in s.split(['.', ' ', ',', '\t', '\n', '\r']) {
                if token.is_empty() {
                    position += 1;
                    continue;
                }
                let letter: u32 = token.parse().map_err(|_| WordError::MalformedLetter {
                    position,
                    token: token.to_string(),
                })?;
                if letter == 0 || letter as usize > n {
                    return Err(WordError::LetterOutOfRange { position, letter, n });
                }
                letters.push(letter as u8);
                position += token.len() + 1;
            }
        } else {
            for (position, c) in s.chars().enumerate() {
                let letter = c.to_digit(10).ok_or_else(|| WordError::MalformedLetter {
                    position,
                    token: c.to_string(),
                })?;
                if letter == 0 || letter as usize > n {
                    return Err(WordError::LetterOutOfRange { position, letter, n });
                }
                letters.push(letter as u8);
            }
        }
        SigmaWord::new(n, letters)
    }
}

impl Deref for SigmaWord {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.letters
    }
}

impl fmt::Display for SigmaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 9 {
            for &a in &self.letters {
                write!(f, "{a}")?;
            }
        } else {
            for (k, &a) in self.letters.iter().enumerate() {
                if k > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}

/// A maximal occurrence of a period-`q` factor `w[start..start+length)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RepetitionOccurrence {
    pub start: usize,
    pub period: usize,
    pub length: usize,
}

impl RepetitionOccurrence {
    pub fn exponent(&self) -> Exponent {
        Ratio::new(self.length as u64, self.period as u64)
    }

    pub fn excess(&self) -> usize {
        self.length - self.period
    }

    pub fn end(&self) -> usize {
        self.start + self.length
    }

    /// Exponent strictly above `num/den`, by cross-multiplication.
    pub fn exceeds(&self, num: u64, den: u64) -> bool {
        den * self.length as u64 > num * self.period as u64
    }
}

impl fmt::Display for RepetitionOccurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.exponent();
        write!(
            f,
            "start={} period={} length={} exponent={}/{}",
            self.start,
            self.period,
            self.length,
            e.numer(),
            e.denom()
        )
    }
}

/// Start positions of every (possibly overlapping) occurrence of `needle`.
pub fn find_all<'a>(haystack: &'a [u8], needle: &'a [u8]) -> impl Iterator<Item = usize> + 'a {
    let last = (haystack.len() + 1).saturating_sub(needle.len());
    (0..last).filter(move |&p| &haystack[p..p + needle.len()] == needle)
}
