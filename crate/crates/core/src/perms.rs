//! Permutations of `{1,…,n}` and the homomorphism `σ` from binary words.
//!
//! Composition is `(f·g)(i) = f(g(i))` and `σ(uv) = σ(u)·σ(v)`. With this
//! order, for a Pansiot-valid `v` of length `m`, `σ(b(v))` sends
//! `(1,…,n)` to `(v_{m−n+2}, …, v_m, v̂)` where `v̂` is the letter missing
//! from the last `n − 1` letters of `v`: appending a letter shifts the
//! window left by one, which is a right composition with `σ(0)` or `σ(1)`.

use std::collections::HashMap;
use std::fmt;

use crate::words::BinaryWord;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    /// `images[i − 1]` is the image of point `i`.
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!((1..=255).contains(&n));
        Permutation {
            images: (1..=n as u8).collect(),
        }
    }

    /// One-line form, 1-based. Returns `None` unless `images` is a bijection
    /// of `{1,…,images.len()}`.
    pub fn from_images(images: Vec<u8>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &a in &images {
            let a = a as usize;
            if a == 0 || a > n || std::mem::replace(&mut seen[a], true) {
                return None;
            }
        }
        Some(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, point: u8) -> u8 {
        self.images[point as usize - 1]
    }

    /// `self · other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&p| self.apply(p)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &p) in self.images.iter().enumerate() {
            inv[p as usize - 1] = (i + 1) as u8;
        }
        Permutation { images: inv }
    }

    /// `self · p · self⁻¹`.
    pub fn conjugate(&self, p: &Permutation) -> Permutation {
        self.compose(p).compose(&self.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| p as usize == i + 1)
    }

    /// Cycle lengths, largest first; they sum to the degree.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize - 1;
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, p) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// `1→2→…→n−1→1`, fixing `n`.
pub fn sigma0(n: usize) -> Permutation {
    assert!(n >= 2);
    let mut images: Vec<u8> = (2..=n as u8).collect();
    images[n - 2] = 1;
    images.push(n as u8);
    Permutation { images }
}

/// `1→2→…→n→1`.
pub fn sigma1(n: usize) -> Permutation {
    assert!(n >= 2);
    let mut images: Vec<u8> = (2..=n as u8).collect();
    images.push(1);
    Permutation { images }
}

/// Right-multiplies `acc` in place by `σ(bit)`.
///
/// `σ(0)` and `σ(1)` both shift points `1..n−2` up by one, so
/// `acc·σ(bit)` is `acc` rotated left with the tail fixed up.
fn step(acc: &mut [u8], bit: u8) {
    let n = acc.len();
    let first = acc[0];
    acc.copy_within(1..n - 1, 0);
    if bit == 0 {
        // (acc·σ0)(n−1) = acc(1), (acc·σ0)(n) = acc(n)
        acc[n - 2] = first;
    } else {
        // (acc·σ1)(n−1) = acc(n), (acc·σ1)(n) = acc(1)
        acc[n - 2] = acc[n - 1];
        acc[n - 1] = first;
    }
}

pub fn sigma_word(b: &[u8], n: usize) -> Permutation {
    let mut acc = Permutation::identity(n);
    for &bit in b {
        step(&mut acc.images, bit);
    }
    acc
}

pub fn is_kernel(b: &[u8], n: usize) -> bool {
    sigma_word(b, n).is_identity()
}

/// `τ` with `τ·a0·τ⁻¹ = σ0(n)` and `τ·a1·τ⁻¹ = σ1(n)`, lexicographically
/// least by image sequence, if one exists.
///
/// Conjugating `a1` onto the `n`-cycle `σ1` forces `a1` to be an `n`-cycle,
/// and fixing `τ(1)` then determines `τ` along that cycle. That gives `n`
/// candidates, each checked against the `a0` equation.
pub fn find_conjugator(a0: &Permutation, a1: &Permutation, n: usize) -> Option<Permutation> {
    if a0.degree() != n || a1.degree() != n {
        return None;
    }
    if a1.cycle_type() != [n] || a0.cycle_type() != sigma0(n).cycle_type() {
        return None;
    }
    let s0 = sigma0(n);
    let s1 = sigma1(n);
    let mut best: Option<Permutation> = None;
    for start in 1..=n as u8 {
        // τ(a1^k(1)) = σ1^k(start)
        let mut images = vec![0u8; n];
        let (mut x, mut y) = (1u8, start);
        for _ in 0..n {
            images[x as usize - 1] = y;
            x = a1.apply(x);
            y = s1.apply(y);
        }
        let tau = Permutation { images };
        if tau.compose(a0) == s0.compose(&tau) && best.as_ref().is_none_or(|b| tau < *b) {
            best = Some(tau);
        }
    }
    best
}

/// `σ` of every prefix of a word, for constant-time kernel tests on factors.
///
/// Row `k` holds `σ(word[0..k))`; `σ(word[i..j)) = row(i)⁻¹ · row(j)`, so
/// `word[i..j)` is in the kernel exactly when rows `i` and `j` coincide.
#[derive(Debug, Clone)]
pub struct PrefixSigmaTable {
    n: usize,
    word: BinaryWord,
    rows: Vec<u8>,
}

impl PrefixSigmaTable {
    pub fn new(word: &BinaryWord, n: usize) -> Self {
        let mut rows = Vec::with_capacity((word.len() + 1) * n);
        let mut acc = Permutation::identity(n).images;
        rows.extend_from_slice(&acc);
        for &bit in word.iter() {
            step(&mut acc, bit);
            rows.extend_from_slice(&acc);
        }
        PrefixSigmaTable {
            n,
            word: word.clone(),
            rows,
        }
    }

    pub fn word(&self) -> &BinaryWord {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn row_slice(&self, k: usize) -> &[u8] {
        &self.rows[k * self.n..(k + 1) * self.n]
    }

    pub fn row(&self, k: usize) -> Permutation {
        Permutation {
            images: self.row_slice(k).to_vec(),
        }
    }

    /// `σ(word[i..j))`.
    pub fn factor(&self, i: usize, j: usize) -> Permutation {
        self.row(i).inverse().compose(&self.row(j))
    }

    pub fn is_kernel_factor(&self, i: usize, j: usize) -> bool {
        self.row_slice(i) == self.row_slice(j)
    }

    /// Positions `0..len()` grouped by equal rows, each group ascending.
    /// Groups with a single member are dropped.
    pub fn equal_row_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: HashMap<&[u8], Vec<usize>> = HashMap::new();
        for k in 0..self.len() {
            classes.entry(self.row_slice(k)).or_default().push(k);
        }
        let mut out: Vec<Vec<usize>> = classes.into_values().filter(|c| c.len() > 1).collect();
        out.sort_unstable();
        out
    }
}
