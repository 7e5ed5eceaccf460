//! Uniform binary morphisms, their limit words and factor sets.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::words::BinaryWord;

mod stanza;

pub use stanza::{emit_morphism_file, parse_morphism_file};

/// Alphabet sizes with an embedded morphism.
pub const BUILTIN_RANGE: std::ops::RangeInclusive<usize> = 15..=26;

const BUILTIN_DATA: &str = include_str!("../../data/morphisms.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: symbol {symbol:?} at column {column} is not binary")]
    NotBinary { line: usize, column: usize, symbol: char },
    #[error("line {line}: image lengths {h0} and {h1} do not match r = {r}")]
    LengthMismatch {
        line: usize,
        r: usize,
        h0: usize,
        h1: usize,
    },
    #[error("images must have equal length at least 2 (got {h0} and {h1})")]
    NotUniform { h0: usize, h1: usize },
    #[error("alphabet size {0} must be between 2 and 255")]
    BadAlphabet(usize),
    #[error("no embedded morphism for n = {0} (available: 15..=26)")]
    NotBuiltin(usize),
    #[error("iterating h^2 from {seed} is not prefix-stable at step {step}")]
    PrefixUnstable { seed: u8, step: usize },
}

/// A morphism `0 ↦ image0`, `1 ↦ image1` with `|image0| = |image1| = r`,
/// tagged with the alphabet size `n` it is meant to serve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniformMorphism {
    n: usize,
    image0: BinaryWord,
    image1: BinaryWord,
    eta_prime: BinaryWord,
}

impl UniformMorphism {
    pub fn new(n: usize, image0: BinaryWord, image1: BinaryWord) -> Result<Self, MorphismError> {
        if !(2..=255).contains(&n) {
            return Err(MorphismError::BadAlphabet(n));
        }
        if image0.len() != image1.len() || image0.len() < 2 {
            return Err(MorphismError::NotUniform {
                h0: image0.len(),
                h1: image1.len(),
            });
        }
        let eta_prime = image0.common_prefix(&image1);
        Ok(UniformMorphism {
            n,
            image0,
            image1,
            eta_prime,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.image0.len()
    }

    pub fn image(&self, letter: u8) -> &BinaryWord {
        if letter == 0 {
            &self.image0
        } else {
            &self.image1
        }
    }

    pub fn image0(&self) -> &BinaryWord {
        &self.image0
    }

    pub fn image1(&self) -> &BinaryWord {
        &self.image1
    }

    /// Longest common prefix of the two images.
    pub fn eta_prime(&self) -> &BinaryWord {
        &self.eta_prime
    }

    pub fn apply(&self, w: &[u8]) -> BinaryWord {
        let mut out = Vec::with_capacity(w.len() * self.r());
        for &a in w {
            out.extend_from_slice(self.image(a));
        }
        BinaryWord::from_bits(out)
    }

    /// The morphism whose images are the reversals of this one's.
    pub fn mirror(&self) -> UniformMorphism {
        let rev = |w: &BinaryWord| BinaryWord::from_bits(w.iter().rev().copied().collect());
        UniformMorphism::new(self.n, rev(&self.image0), rev(&self.image1)).expect("reversal keeps uniformity")
    }

    /// `h(h(w))`.
    pub fn apply_twice(&self, w: &[u8]) -> BinaryWord {
        self.apply(&self.apply(w))
    }

    /// Letter from which `h²` iterates to a limit: `0` when `h²(0)` begins
    /// with 0, else `1` (then both images begin with 1, so `h²(1)` does).
    pub fn limit_seed(&self) -> u8 {
        let first = |a: u8| self.image(self.image(a)[0])[0];
        if first(0) == 0 {
            0
        } else {
            1
        }
    }

    /// Prefix of length `min_length` of the fixed point of `h²` grown from
    /// [`limit_seed`](Self::limit_seed). Each iterate is checked to extend
    /// the previous one.
    pub fn limit_prefix(&self, min_length: usize) -> Result<BinaryWord, MorphismError> {
        let seed = self.limit_seed();
        let mut cur = BinaryWord::from_bits(vec![seed]);
        let mut step = 0;
        while cur.len() < min_length {
            step += 1;
            let next = self.apply_twice(&cur);
            if next.len() <= cur.len() || next[..cur.len()] != cur[..] {
                return Err(MorphismError::PrefixUnstable { seed, step });
            }
            cur = next;
        }
        Ok(cur.factor(0, min_length.max(1).min(cur.len())))
    }

    /// Length-`k` factors of the limit word.
    ///
    /// Any length-`k` factor of `h(x)` lies inside `h(u)` for a factor `u`
    /// of length `m = ⌊(k + 2(r−1))/r⌋ ≤ k`. Starting from the factors of a
    /// limit prefix, the set is closed under "take length-`m` factors, apply
    /// `h`, take length-`k` factors" until nothing new appears.
    pub fn factor_closure(&self, k: usize) -> Result<FactorSet, MorphismError> {
        assert!(k >= 1);
        let r = self.r();
        let m = (k + 2 * (r - 1)) / r;
        debug_assert!(m <= k);
        let seed = self.limit_prefix(2 * (k + r))?;
        let mut members: BTreeSet<BinaryWord> = seed.windows(k).map(|f| BinaryWord::from_bits(f.to_vec())).collect();
        let mut done: HashSet<Vec<u8>> = HashSet::new();
        let mut frontier: Vec<BinaryWord> = members.iter().cloned().collect();
        while let Some(member) = frontier.pop() {
            for u in member.windows(m) {
                if !done.insert(u.to_vec()) {
                    continue;
                }
                let image = self.apply(u);
                for f in image.windows(k) {
                    let f = BinaryWord::from_bits(f.to_vec());
                    if members.insert(f.clone()) {
                        frontier.push(f);
                    }
                }
            }
        }
        Ok(FactorSet { length: k, members })
    }
}

impl fmt::Display for UniformMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h_{}: 0 -> {}, 1 -> {}", self.n, self.image0, self.image1)
    }
}

/// Deduplicated set of words of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    pub length: usize,
    pub members: BTreeSet<BinaryWord>,
}

impl FactorSet {
    pub fn contains(&self, w: &[u8]) -> bool {
        self.members.contains(&BinaryWord::from_bits(w.to_vec()))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BinaryWord> {
        self.members.iter()
    }

    /// Members as strings, in lexicographic order.
    pub fn to_strings(&self) -> Vec<String> {
        self.members.iter().map(|w| w.to_string()).collect()
    }
}

/// `⌊(⌊(ℓ + 2(r−1))/r⌋ + 2(r−1))/r⌋`: length bound on a factor `u₃` with
/// `u₁` a factor of `h²(u₃)` and `|u₁| = ℓ`.
pub fn iterate_bound(ell: u64, r: u64) -> u64 {
    assert!(r >= 2);
    ((ell + 2 * (r - 1)) / r + 2 * (r - 1)) / r
}

fn builtin_table() -> &'static [UniformMorphism] {
    static TABLE: OnceLock<Vec<UniformMorphism>> = OnceLock::new();
    TABLE.get_or_init(|| parse_morphism_file(BUILTIN_DATA).expect("embedded morphism data parses"))
}

/// The embedded morphism for `15 ≤ n ≤ 26`.
pub fn builtin(n: usize) -> Result<&'static UniformMorphism, MorphismError> {
    builtin_table()
        .iter()
        .find(|h| h.n() == n)
        .ok_or(MorphismError::NotBuiltin(n))
}

/// All twelve embedded morphisms, ascending in `n`.
pub fn builtins() -> &'static [UniformMorphism] {
    builtin_table()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    fn expected_r(n: usize) -> usize {
        if n == 21 {
            4 * n
        } else {
            4 * n - 4
        }
    }

    #[test]
    fn table_has_twelve_entries_with_expected_lengths() {
        assert_eq!(builtins().len(), 12);
        let total: usize = builtins().iter().map(|h| 2 * h.r()).sum();
        let expected: usize = BUILTIN_RANGE.map(|n| 2 * expected_r(n)).sum();
        assert_eq!(total, expected);
        for n in BUILTIN_RANGE {
            let h = builtin(n).unwrap();
            assert_eq!(h.n(), n);
            assert_eq!(h.r(), expected_r(n), "n = {n}");
            assert_eq!(h.image1().len(), h.r());
        }
        assert_eq!(builtin(14), Err(MorphismError::NotBuiltin(14)));
    }

    #[test]
    fn builtin_spot_values() {
        assert!(builtin(15).unwrap().image0().to_string().starts_with("01101101011011"));
        assert_eq!(builtin(15).unwrap().r(), 56);
        assert_eq!(builtin(21).unwrap().r(), 84);
        assert_eq!(builtin(26).unwrap().r(), 100);
        assert_eq!(
            builtin(26).unwrap().image1().to_string(),
            "1010101010101010101010101011010101010101101101101101010110110110101101010110110110110110110110110110"
        );
    }

    #[test]
    fn factor_and_prefix_facts_hold_for_every_builtin() {
        for h in builtins() {
            assert!(h.image0().contains(&w("011")), "n = {}", h.n());
            assert!(h.image1().contains(&w("110")), "n = {}", h.n());
            assert!(h.eta_prime().len() < h.r());
        }
    }

    #[test]
    fn last_letters_as_tabulated() {
        // The table's images end in different letters for nine of the twelve
        // sizes; for 15, 16 and 18 both end in 1 and the first letters differ.
        for h in builtins() {
            let last_differ = h.image0().last() != h.image1().last();
            let first_differ = h.image0()[0] != h.image1()[0];
            assert_eq!(last_differ, ![15, 16, 18].contains(&h.n()), "n = {}", h.n());
            assert!(last_differ || first_differ);
        }
    }

    #[test]
    fn apply_examples() {
        let h = builtin(15).unwrap();
        assert!(h.apply(&[]).is_empty());
        let mut both = h.image0().clone();
        both.extend_from(h.image1());
        assert_eq!(h.apply(&[0, 1]), both);
        assert_eq!(h.apply(&w("0110")).len(), 4 * h.r());
    }

    #[test]
    fn limit_prefix_examples() {
        let h15 = builtin(15).unwrap();
        let p = h15.limit_prefix(56).unwrap();
        assert_eq!(&p, h15.image0());
        assert_eq!(builtin(16).unwrap().limit_prefix(1).unwrap().to_string(), "0");
        for h in builtins() {
            let short = h.limit_prefix(500).unwrap();
            let long = h.limit_prefix(1000).unwrap();
            assert_eq!(&long[..500], &short[..]);
            // a fixed point of h²
            let image = h.apply_twice(&short[..5]);
            assert_eq!(image, h.limit_prefix(image.len()).unwrap());
        }
    }

    #[test]
    fn factor_closure_examples() {
        let expected_u = vec!["01", "10", "11"];
        for h in builtins() {
            assert_eq!(h.factor_closure(2).unwrap().to_strings(), expected_u, "n = {}", h.n());
            assert_eq!(h.factor_closure(1).unwrap().to_strings(), vec!["0", "1"]);
        }
    }

    #[test]
    fn length_r_factors_live_in_h_of_0110() {
        for n in [15, 21, 26] {
            let h = builtin(n).unwrap();
            let probe = h.apply(&w("0110"));
            let closure = h.factor_closure(h.r()).unwrap();
            for f in closure.iter() {
                assert!(probe.contains(f));
            }
            // soundness spot check against a long limit prefix
            let prefix = h.limit_prefix(40 * h.r()).unwrap();
            let seen: BTreeSet<BinaryWord> = prefix
                .windows(h.r())
                .map(|f| BinaryWord::from_bits(f.to_vec()))
                .collect();
            assert!(seen.is_subset(&closure.members));
        }
    }

    #[test]
    fn factor_closure_is_closed_at_length_two() {
        for h in builtins() {
            let u = h.factor_closure(2).unwrap();
            for a in u.iter() {
                for b in u.iter() {
                    let mut ab = a.clone();
                    ab.extend_from(b);
                    // only windows made of limit factors are relevant
                    if !u.contains(&ab[1..3]) {
                        continue;
                    }
                    for f in h.apply(&ab).windows(2) {
                        assert!(u.contains(f));
                    }
                }
            }
        }
    }

    #[test]
    fn mirror_reverses_images() {
        let h = builtin(15).unwrap();
        let m = h.mirror();
        assert_eq!(m.mirror(), *h);
        assert_eq!(m.image0()[0], *h.image0().last().unwrap());
    }

    #[test]
    fn iterate_bound_examples() {
        assert_eq!(iterate_bound(1936, 56), 2);
        assert_eq!(iterate_bound(1, 2), 1);
        assert_eq!(iterate_bound(5929, 100), 2);
        assert_eq!(iterate_bound(3844, 84), 2);
        // floors nest: ⌊(⌊(100+110)/56⌋ + 110)/56⌋ = ⌊113/56⌋
        assert_eq!(iterate_bound(100, 56), 2);
    }
}
