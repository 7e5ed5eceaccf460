//! 2-markability of factors relative to a uniform morphism.
//!
//! An occurrence of `v` at position `p` inside `h(u)` splits as
//! `p = |X|·r + |x|` with `0 ≤ |x| < r`; the phase word `x` is the part of
//! the block containing `p` that precedes the occurrence. `v` is 2-markable
//! when all occurrences across `h(u)`, `u ∈ U`, have the same phase word.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::morphisms::{FactorSet, MorphismError, UniformMorphism};
use crate::words::{find_all, BinaryWord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseOccurrence {
    pub u: BinaryWord,
    pub position: usize,
    pub phase_word: BinaryWord,
}

impl fmt::Display for PhaseOccurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h({}) at {} after \"{}\"", self.u, self.position, self.phase_word)
    }
}

/// Two occurrences of one word with different phase words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseConflict {
    pub first: PhaseOccurrence,
    pub second: PhaseOccurrence,
}

impl fmt::Display for PhaseConflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vs {}", self.first, self.second)
    }
}

/// Phase decomposition of position `p` in `h(u)`.
pub fn phase_at(h: &UniformMorphism, u: &BinaryWord, p: usize) -> PhaseOccurrence {
    let image = h.apply(u);
    let boundary = p - p % h.r();
    PhaseOccurrence {
        u: u.clone(),
        position: p,
        phase_word: image.factor(boundary, p),
    }
}

/// `Ok(())` when `v` is 2-markable with respect to `h` and `u_set`,
/// otherwise the first conflicting pair (scanning `u_set` in order).
pub fn two_markable(v: &[u8], h: &UniformMorphism, u_set: &FactorSet) -> Result<(), PhaseConflict> {
    let r = h.r();
    let mut first: Option<PhaseOccurrence> = None;
    for u in u_set.iter() {
        let image = h.apply(u);
        for p in find_all(&image, v) {
            let boundary = p - p % r;
            let x = &image[boundary..p];
            match &first {
                None => {
                    first = Some(PhaseOccurrence {
                        u: u.clone(),
                        position: p,
                        phase_word: BinaryWord::from_bits(x.to_vec()),
                    })
                }
                Some(seen) if seen.phase_word[..] != *x => {
                    return Err(PhaseConflict {
                        first: seen.clone(),
                        second: PhaseOccurrence {
                            u: u.clone(),
                            position: p,
                            phase_word: BinaryWord::from_bits(x.to_vec()),
                        },
                    });
                }
                Some(_) => {}
            }
        }
    }
    Ok(())
}

pub fn is_2markable(v: &[u8], h: &UniformMorphism, u_set: &FactorSet) -> bool {
    two_markable(v, h, u_set).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkabilityReport {
    /// Distinct length-`r` factors of `h(0110)`.
    pub factor_count: usize,
    /// Failing factors in lexicographic order.
    pub failures: Vec<(BinaryWord, PhaseConflict)>,
}

impl MarkabilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Distinct length-`k` factors of `h(0110)`, sorted.
pub fn probe_factors(h: &UniformMorphism, k: usize) -> Vec<BinaryWord> {
    let probe = h.apply(&[0, 1, 1, 0]);
    let set: BTreeSet<BinaryWord> = probe.windows(k).map(|f| BinaryWord::from_bits(f.to_vec())).collect();
    set.into_iter().collect()
}

/// Checks that every length-`r` factor of `h(0110)` is 2-markable, with
/// `U` taken as the length-2 factor closure of `h`.
pub fn check_all_length_r_factors_markable(h: &UniformMorphism) -> Result<MarkabilityReport, MorphismError> {
    let u_set = h.factor_closure(2)?;
    Ok(check_factors_with(h, &u_set))
}

pub fn check_factors_with(h: &UniformMorphism, u_set: &FactorSet) -> MarkabilityReport {
    let factors = probe_factors(h, h.r());
    let failures = factors
        .par_iter()
        .filter_map(|v| two_markable(v, h, u_set).err().map(|c| (v.clone(), c)))
        .collect();
    MarkabilityReport {
        factor_count: factors.len(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphisms::{builtin, builtins};

    /// Phase words of every occurrence, by direct substring extraction.
    fn phase_words_oracle(v: &[u8], h: &UniformMorphism, u_set: &FactorSet) -> BTreeSet<Vec<u8>> {
        let mut out = BTreeSet::new();
        for u in u_set.iter() {
            let image: Vec<u8> = u.iter().flat_map(|&a| h.image(a).to_vec()).collect();
            for p in 0..image.len() {
                if image[p..].starts_with(v) {
                    out.insert(image[(p / h.r()) * h.r()..p].to_vec());
                }
            }
        }
        out
    }

    #[test]
    fn single_letter_is_not_markable() {
        for h in builtins() {
            let u = h.factor_closure(2).unwrap();
            let conflict = two_markable(&[0], h, &u).unwrap_err();
            assert_ne!(conflict.first.phase_word, conflict.second.phase_word);
            assert!(phase_words_oracle(&[0], h, &u).len() > 1);
        }
    }

    #[test]
    fn unique_occurrence_is_markable() {
        let h = builtin(15).unwrap();
        let u = h.factor_closure(2).unwrap();
        let factors = probe_factors(h, h.r());
        let unique = factors
            .iter()
            .find(|v| u.iter().map(|w| find_all(&h.apply(w), v).count()).sum::<usize>() == 1)
            .expect("some factor occurs once");
        assert!(is_2markable(unique, h, &u));
    }

    #[test]
    fn length_r_factors_per_builtin() {
        // n = 15, 16, 18 have images ending in the same letter; there some
        // length-r factors sit at one phase after h(0)- and h(1)-prefixes
        // that differ as words.
        for h in builtins() {
            let report = check_all_length_r_factors_markable(h).unwrap();
            assert!(report.factor_count > 0);
            let expect_pass = ![15, 16, 18].contains(&h.n());
            assert_eq!(
                report.passed(),
                expect_pass,
                "n = {}: {:?}",
                h.n(),
                report.failures.first()
            );
            for (_, c) in &report.failures {
                assert_eq!(c.first.phase_word.len(), c.second.phase_word.len());
            }
        }
    }

    #[test]
    fn agrees_with_phase_oracle() {
        let h = builtin(17).unwrap();
        let u = h.factor_closure(2).unwrap();
        let probe = h.apply(&[0, 1, 1, 0]);
        for k in [1, 3, 8, 20, h.r() / 2, h.r()] {
            for start in (0..probe.len() - k).step_by(7) {
                let v = &probe[start..start + k];
                assert_eq!(
                    is_2markable(v, h, &u),
                    phase_words_oracle(v, h, &u).len() <= 1,
                    "k={k} start={start}"
                );
            }
        }
    }

    #[test]
    fn phase_at_matches_substring() {
        let h = builtin(16).unwrap();
        let u: BinaryWord = "10".parse().unwrap();
        let image = h.apply(&u);
        for p in [0, 1, h.r() - 1, h.r(), h.r() + 17] {
            let occ = phase_at(h, &u, p);
            assert_eq!(occ.phase_word.len(), p % h.r());
            assert_eq!(&occ.phase_word[..], &image[p - p % h.r()..p]);
        }
    }

    /// Right extensions keep a subset of the occurrences. Left extensions
    /// do too, except that a phase-0 occurrence moves into the previous
    /// block, so they are only checked when every phase is non-zero.
    #[test]
    fn extensions_of_markable_factors_stay_markable() {
        for n in [15, 17, 20, 26] {
            let h = builtin(n).unwrap();
            let u = h.factor_closure(2).unwrap();
            let probe = h.apply(&[0, 1, 1, 0]);
            let len = h.r() - 10;
            let mut checked_left = 0;
            for start in (1..probe.len() - len - 1).step_by(5) {
                let v = &probe[start..start + len];
                if !is_2markable(v, h, &u) {
                    continue;
                }
                assert!(is_2markable(&probe[start..start + len + 1], h, &u));
                let phase_zero = u.iter().any(|w| find_all(&h.apply(w), v).any(|p| p % h.r() == 0));
                if !phase_zero {
                    assert!(is_2markable(&probe[start - 1..start + len], h, &u));
                    checked_left += 1;
                }
            }
            assert!(checked_left > 0);
        }
    }

    #[test]
    fn probe_covers_limit_factors() {
        for h in builtins() {
            let probe: BTreeSet<BinaryWord> = probe_factors(h, h.r()).into_iter().collect();
            let prefix = h.limit_prefix(10 * h.r()).unwrap();
            for f in prefix.windows(h.r()) {
                assert!(probe.contains(&BinaryWord::from_bits(f.to_vec())), "n = {}", h.n());
            }
        }
    }

    #[test]
    fn corrupted_morphism_can_fail() {
        // flipping bits of h(0) must eventually produce a failure somewhere
        let h = builtin(15).unwrap();
        let mut failed = false;
        for flip in 0..h.r() {
            let mut bits = h.image0().to_vec();
            bits[flip] ^= 1;
            let broken = UniformMorphism::new(15, BinaryWord::from_bits(bits), h.image1().clone()).unwrap();
            let u = FactorSet {
                length: 2,
                members: ["00", "01", "10", "11"].iter().map(|s| s.parse().unwrap()).collect(),
            };
            let report = check_factors_with(&broken, &u);
            if !report.passed() {
                failed = true;
                break;
            }
        }
        assert!(failed);
    }
}
