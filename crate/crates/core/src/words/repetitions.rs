use num_rational::Ratio;
use rayon::prelude::*;

use super::{Exponent, RepetitionOccurrence, WordError};

/// Words at least this long are scanned with one rayon task per period.
const PARALLEL_SCAN_LEN: usize = 4096;

/// `true` iff `w[k] == w[k+q]` for all `i ≤ k < j − q`.
pub fn has_period(w: &[u8], i: usize, j: usize, q: usize) -> Result<bool, WordError> {
    if q == 0 {
        return Err(WordError::ZeroPeriod);
    }
    if i > j || j > w.len() {
        return Err(WordError::IndexOutOfRange { i, j, len: w.len() });
    }
    Ok(period_holds(w, i, j, q))
}

fn period_holds(w: &[u8], i: usize, j: usize, q: usize) -> bool {
    j < i + q || (i..j - q).all(|k| w[k] == w[k + q])
}

/// Maximal period-`q` extension of the occurrence `w[i..j)`.
///
/// Extends left as far as possible, then right. Left and right stops are
/// real mismatches (or word boundaries), so the result does not depend on
/// the order.
pub fn maximal_extension(w: &[u8], i: usize, j: usize, q: usize) -> Result<(usize, usize), WordError> {
    if !has_period(w, i, j, q)? {
        return Err(WordError::NotPeriodic { i, j, q });
    }
    let (mut lo, mut hi) = (i, j);
    while lo > 0 && (lo - 1 + q >= hi || w[lo - 1] == w[lo - 1 + q]) {
        lo -= 1;
    }
    while hi < w.len() && (hi < lo + q || w[hi] == w[hi - q]) {
        hi += 1;
    }
    Ok((lo, hi))
}

/// All maximal period-`q` occurrences whose excess is at least `min_excess`
/// (`min_excess ≥ 1`), in increasing start order.
///
/// A run of `t ≥ min_excess` consecutive matches `w[k] == w[k+q]` must
/// contain a position `k ≡ min_excess − 1 (mod min_excess)`, so only those
/// positions are probed and each hit is expanded to its full run.
pub fn period_runs(w: &[u8], q: usize, min_excess: usize) -> Vec<RepetitionOccurrence> {
    assert!(q >= 1 && min_excess >= 1);
    let mut out = Vec::new();
    if w.len() <= q {
        return out;
    }
    let last = w.len() - q; // comparisons are k in 0..last
    let mut k = min_excess - 1;
    while k < last {
        if w[k] != w[k + q] {
            k += min_excess;
            continue;
        }
        let mut s = k;
        while s > 0 && w[s - 1] == w[s - 1 + q] {
            s -= 1;
        }
        let mut e = k + 1;
        while e < last && w[e] == w[e + q] {
            e += 1;
        }
        if e - s >= min_excess {
            out.push(RepetitionOccurrence {
                start: s,
                period: q,
                length: q + e - s,
            });
        }
        // next probe strictly after this run, `e` itself is a mismatch
        k = e + 1;
        let rem = (k + 1) % min_excess;
        if rem != 0 {
            k += min_excess - rem;
        }
    }
    out
}

/// Collects runs over all periods `q` for which `min_excess_for(q)` is
/// `Some`, then sorts canonically by `(start, period)`.
fn scan<F>(w: &[u8], max_period: usize, min_excess_for: F) -> Vec<RepetitionOccurrence>
where
    F: Fn(usize) -> Option<usize> + Sync,
{
    let periods = 1..max_period.min(w.len());
    let mut out: Vec<RepetitionOccurrence> = if w.len() >= PARALLEL_SCAN_LEN {
        periods
            .into_par_iter()
            .flat_map_iter(|q| match min_excess_for(q) {
                Some(t) => period_runs(w, q, t),
                None => Vec::new(),
            })
            .collect()
    } else {
        periods
            .flat_map(|q| match min_excess_for(q) {
                Some(t) => period_runs(w, q, t),
                None => Vec::new(),
            })
            .collect()
    };
    out.sort_unstable();
    out
}

/// Smallest excess `t` with `den·(q+t) > num·q`.
fn min_excess_exceeding(q: usize, num: u64, den: u64) -> usize {
    let q = q as u64;
    (((num - den) * q) / den + 1) as usize
}

/// Every maximal occurrence with exponent strictly greater than `num/den`.
/// Empty iff `w` is `(num/den)⁺`-power-free.
pub fn find_repetitions_exceeding(w: &[u8], num: u64, den: u64) -> Vec<RepetitionOccurrence> {
    assert!(den >= 1 && num >= den, "threshold must be at least 1");
    // a period-q factor can only exceed the threshold if den·|w| > num·q
    let max_period = ((den as u128 * w.len() as u128).div_ceil(num as u128)) as usize;
    scan(w, max_period, |q| {
        let t = min_excess_exceeding(q, num, den);
        (q + t <= w.len()).then_some(t)
    })
}

/// First witness (in `(period, start)` order) of an exponent above
/// `num/den`, or `None`. Cheaper than the full listing when a violation
/// exists.
pub fn first_repetition_exceeding(w: &[u8], num: u64, den: u64) -> Option<RepetitionOccurrence> {
    assert!(den >= 1 && num >= den, "threshold must be at least 1");
    (1..w.len()).find_map(|q| {
        let t = min_excess_exceeding(q, num, den);
        if q + t > w.len() {
            return None;
        }
        period_runs(w, q, t).into_iter().next()
    })
}

/// Every maximal occurrence whose excess `length − period` is at least
/// `min_excess`.
pub fn find_repetitions_with_excess_at_least(w: &[u8], min_excess: usize) -> Vec<RepetitionOccurrence> {
    assert!(min_excess >= 1);
    scan(w, w.len(), |q| (q + min_excess <= w.len()).then_some(min_excess))
}

/// Largest exponent `|v|/q` over factors `v` with period `q < |v|`.
///
/// Returns exponent 1 with no witness when no such factor exists. Ties keep
/// the first witness in `(period, start)` order.
pub fn max_exponent(w: &[u8]) -> Result<(Exponent, Option<RepetitionOccurrence>), WordError> {
    if w.is_empty() {
        return Err(WordError::Empty);
    }
    let mut best = Ratio::from_integer(1u64);
    let mut witness = None;
    for q in 1..w.len() {
        // no period-q factor beats `best` once |w|/q ≤ best
        if Ratio::new(w.len() as u64, q as u64) <= best {
            break;
        }
        for occ in period_runs(w, q, 1) {
            let e = occ.exponent();
            if e > best {
                best = e;
                witness = Some(occ);
            }
        }
    }
    Ok((best, witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Vec<u8> {
        s.bytes().map(|c| c - b'0').collect()
    }

    fn occ(start: usize, period: usize, length: usize) -> RepetitionOccurrence {
        RepetitionOccurrence { start, period, length }
    }

    /// Brute force over every (start, period, length) triple.
    fn oracle_max(w: &[u8]) -> Exponent {
        let mut best = Ratio::from_integer(1u64);
        for i in 0..w.len() {
            for j in i + 1..=w.len() {
                for q in 1..j - i {
                    if (i..j - q).all(|k| w[k] == w[k + q]) {
                        best = best.max(Ratio::new((j - i) as u64, q as u64));
                    }
                }
            }
        }
        best
    }

    /// Maximal period-q intervals with exponent > num/den, by brute force.
    fn oracle_exceeding(w: &[u8], num: u64, den: u64) -> Vec<RepetitionOccurrence> {
        let mut out = Vec::new();
        for i in 0..w.len() {
            for j in i + 1..=w.len() {
                for q in 1..j - i {
                    let periodic = |a: usize, b: usize| (a..b - q).all(|k| w[k] == w[k + q]);
                    if !periodic(i, j) {
                        continue;
                    }
                    let left_blocked = i == 0 || !periodic(i - 1, j);
                    let right_blocked = j == w.len() || !periodic(i, j + 1);
                    let o = occ(i, q, j - i);
                    if left_blocked && right_blocked && o.exceeds(num, den) {
                        out.push(o);
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn has_period_examples() {
        assert!(has_period(&b("010"), 0, 3, 2).unwrap());
        assert!(has_period(&b("01"), 0, 2, 5).unwrap());
        assert!(!has_period(&b("0110"), 0, 4, 2).unwrap());
        assert_eq!(
            has_period(&b("01"), 0, 3, 1),
            Err(WordError::IndexOutOfRange { i: 0, j: 3, len: 2 })
        );
        assert_eq!(has_period(&b("01"), 0, 2, 0), Err(WordError::ZeroPeriod));
    }

    #[test]
    fn maximal_extension_examples() {
        assert_eq!(maximal_extension(&b("0010100"), 2, 4, 2).unwrap(), (1, 6));
        assert_eq!(maximal_extension(&b("000"), 1, 2, 1).unwrap(), (0, 3));
        assert_eq!(maximal_extension(&b("011011011"), 0, 6, 3).unwrap(), (0, 9));
        assert_eq!(
            maximal_extension(&b("0110"), 0, 4, 2),
            Err(WordError::NotPeriodic { i: 0, j: 4, q: 2 })
        );
    }

    #[test]
    fn max_exponent_examples() {
        let (e, w) = max_exponent(&b("010")).unwrap();
        assert_eq!(e, Ratio::new(3, 2));
        assert_eq!(w, Some(occ(0, 2, 3)));
        let (e, w) = max_exponent(&b("0101")).unwrap();
        assert_eq!(e, Ratio::from_integer(2));
        assert_eq!(w, Some(occ(0, 2, 4)));
        let (e, w) = max_exponent(&[1, 2, 3]).unwrap();
        assert_eq!((e, w), (Ratio::from_integer(1), None));
        assert_eq!(max_exponent(&[]), Err(WordError::Empty));
    }

    #[test]
    fn exceeding_examples() {
        assert!(find_repetitions_exceeding(&b("010"), 3, 2).is_empty());
        let found = find_repetitions_exceeding(&b("0110110"), 3, 2);
        assert!(found.contains(&occ(0, 3, 7)));
        assert_eq!(found[0].exponent(), Ratio::new(7, 3));
        assert!(find_repetitions_exceeding(&[1, 2, 3], 1, 1).is_empty());
    }

    #[test]
    fn excess_examples() {
        assert!(find_repetitions_with_excess_at_least(&[1, 2, 1, 3], 2).is_empty());
        let found = find_repetitions_with_excess_at_least(&[1, 2, 1, 2, 1, 2], 2);
        assert!(found.contains(&occ(0, 2, 6)));
        let prefix: Vec<u8> = (1..=14).collect();
        assert!(find_repetitions_with_excess_at_least(&prefix, 1).is_empty());
    }

    #[test]
    fn probing_finds_runs_of_exact_minimum_length() {
        // run of exactly 3 matches at period 5, starting at offsets 0..7
        for pad in 0..7 {
            let mut w = vec![9u8; pad];
            w.extend([1, 2, 3, 4, 5, 1, 2, 3, 7, 8]);
            let runs = period_runs(&w, 5, 3);
            assert_eq!(runs, vec![occ(pad, 5, 8)], "pad {pad}");
            assert!(period_runs(&w, 5, 4).is_empty());
        }
    }

    #[test]
    fn exhaustive_binary_oracle_up_to_16() {
        for len in 1..=16usize {
            for mask in 0u32..(1 << len) {
                let w: Vec<u8> = (0..len).map(|k| ((mask >> k) & 1) as u8).collect();
                let (e, witness) = max_exponent(&w).unwrap();
                assert_eq!(e, oracle_max(&w), "{w:?}");
                if let Some(o) = witness {
                    assert_eq!(o.exponent(), e);
                    assert!(has_period(&w, o.start, o.end(), o.period).unwrap());
                }
            }
        }
    }

    #[test]
    fn exceeding_agrees_with_oracle_on_small_words() {
        for len in 1..=11usize {
            for mask in 0u32..(1 << len) {
                let w: Vec<u8> = (0..len).map(|k| ((mask >> k) & 1) as u8).collect();
                for (num, den) in [(1, 1), (3, 2), (2, 1), (7, 3)] {
                    assert_eq!(find_repetitions_exceeding(&w, num, den), oracle_exceeding(&w, num, den));
                }
            }
        }
    }

    #[test]
    fn ternary_oracle_up_to_10() {
        let mut w = [0u8; 10];
        for len in 1..=10usize {
            for code in 0..3usize.pow(len as u32) {
                let mut c = code;
                for slot in w.iter_mut().take(len) {
                    *slot = (c % 3) as u8;
                    c /= 3;
                }
                let w = &w[..len];
                assert_eq!(max_exponent(w).unwrap().0, oracle_max(w));
                assert_eq!(find_repetitions_exceeding(w, 4, 3), oracle_exceeding(w, 4, 3));
            }
        }
    }
}
