//! Backtracking search for morphisms that pass the full verification.
//!
//! The search walks binary words of one fixed length depth-first, keeping
//! only those whose decoding (from `1 2 … n−1`) has no factor of exponent
//! above `n/(n−1)`. Complete words whose `σ`-image is an `n`-cycle are
//! candidates for `h(1)`; those of cycle type `(n−1, 1)` are candidates for
//! `h(0)`. Each new candidate is paired with the earlier candidates of the
//! other kind that admit a common conjugator, and each such pair is run
//! through [`verify`](crate::verifier::verify).
//!
//! Only the current path, the two candidate pools and the results are kept
//! in memory.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::morphisms::UniformMorphism;
use crate::pansiot::{canonical_prefix, Decoder};
use crate::perms::{find_conjugator, sigma0, sigma1, sigma_word, Permutation};
use crate::verifier::{check_factor_set_2, check_structure, probe_word, verify, CheckName, VerifyOptions};
use crate::words::{first_repetition_exceeding, BinaryWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Candidate {
    /// `σ(b)` has cycle type `(n−1, 1)`, like `σ(0)`.
    H0,
    /// `σ(b)` is an `n`-cycle, like `σ(1)`.
    H1,
    Neither,
}

pub fn classify_permutation(p: &Permutation) -> Candidate {
    let n = p.degree();
    let ct = p.cycle_type();
    if ct == [n] {
        Candidate::H1
    } else if ct.len() == 2 && ct[0] == n - 1 && ct[1] == 1 {
        Candidate::H0
    } else {
        Candidate::Neither
    }
}

pub fn classify_candidate(b: &[u8], n: usize) -> Candidate {
    classify_permutation(&sigma_word(b, n))
}

/// Default search length: `4n − 4`, or `4n` for `n = 21`.
pub fn default_length(n: usize) -> usize {
    crate::verifier::tabulated_length(n)
}

/// Depth-first walk over legal codewords of one length, optionally below a
/// fixed prefix.
struct Walker {
    n: usize,
    length: usize,
    decoder: Decoder,
    bits: Vec<u8>,
    /// `σ` of each prefix of `bits`, `n` bytes per row.
    sigma_rows: Vec<u8>,
}

impl Walker {
    fn new(n: usize, length: usize) -> Self {
        let decoder = Decoder::new(&canonical_prefix(n)).expect("canonical prefix is distinct");
        let sigma_rows = Permutation::identity(n).images().to_vec();
        Walker {
            n,
            length,
            decoder,
            bits: Vec::with_capacity(length),
            sigma_rows,
        }
    }

    /// Appends `bit`; returns `false` (and leaves the state unchanged) if
    /// the decoded word would gain a factor of exponent above `n/(n−1)`.
    ///
    /// Any new violation ends at the new letter, so only suffixes are
    /// examined: for period `q`, a suffix with `⌊q/(n−1)⌋ + 1` matches
    /// `w[k] = w[k−q]` is too long.
    fn push(&mut self, bit: u8) -> bool {
        self.decoder.push(bit);
        let w = self.decoder.letters();
        let e = w.len() - 1;
        let span = self.n - 1;
        for q in 1..=e {
            let need = q / span + 1;
            if q + need > e + 1 {
                break;
            }
            let mut t = 0;
            while t < need && w[e - t] == w[e - t - q] {
                t += 1;
            }
            if t == need {
                self.decoder.pop(bit);
                return false;
            }
        }
        self.bits.push(bit);
        let n = self.n;
        let last = self.sigma_rows.len() - n;
        self.sigma_rows.extend_from_within(last..);
        let row = &mut self.sigma_rows[last + n..];
        step_row(row, bit);
        true
    }

    fn pop(&mut self) {
        let bit = self.bits.pop().expect("pop on empty path");
        self.decoder.pop(bit);
        self.sigma_rows.truncate(self.sigma_rows.len() - self.n);
    }

    fn sigma(&self) -> &[u8] {
        &self.sigma_rows[self.sigma_rows.len() - self.n..]
    }

    /// Visits every legal completion of the current path in lexicographic
    /// order.
    fn walk<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u8], &[u8]) -> ControlFlow<()>,
    {
        if self.bits.len() == self.length {
            return visit(&self.bits, self.sigma());
        }
        for bit in [0, 1] {
            if self.push(bit) {
                let flow = self.walk(visit);
                self.pop();
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Right-multiplies a one-line permutation by `σ(bit)`.
fn step_row(row: &mut [u8], bit: u8) {
    let n = row.len();
    let first = row[0];
    row.copy_within(1..n - 1, 0);
    if bit == 0 {
        row[n - 2] = first;
    } else {
        row[n - 2] = row[n - 1];
        row[n - 1] = first;
    }
}

/// Calls `visitor(word, σ(word))` for every binary word of `length` whose
/// decoding is `(n/(n−1))⁺`-power-free, in lexicographic order, and returns
/// how many were visited. The visitor may stop the walk early.
pub fn enumerate_legal<F>(n: usize, length: usize, mut visitor: F) -> u64
where
    F: FnMut(&[u8], &[u8]) -> ControlFlow<()>,
{
    enumerate_legal_below(n, length, &[], &mut visitor)
}

/// As [`enumerate_legal`], restricted to words starting with `prefix`.
pub fn enumerate_legal_below<F>(n: usize, length: usize, prefix: &[u8], visitor: &mut F) -> u64
where
    F: FnMut(&[u8], &[u8]) -> ControlFlow<()>,
{
    assert!(n >= 2);
    let mut walker = Walker::new(n, length);
    for &bit in prefix.iter().take(length) {
        if !walker.push(bit) {
            return 0;
        }
    }
    let mut count = 0u64;
    let mut counting = |w: &[u8], s: &[u8]| {
        count += 1;
        visitor(w, s)
    };
    let _ = walker.walk(&mut counting);
    count
}

pub fn count_legal(n: usize, length: usize) -> u64 {
    enumerate_legal(n, length, |_, _| ControlFlow::Continue(()))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchProgress {
    pub visited: u64,
    pub h0_pool: usize,
    pub h1_pool: usize,
    pub pairs_tested: u64,
    pub verified: usize,
}

#[derive(Default)]
struct Pools {
    seen: HashSet<Vec<u8>>,
    h0: Vec<(BinaryWord, Permutation)>,
    h1: Vec<(BinaryWord, Permutation)>,
    /// `σ(h(0))` value → indices into `h0`.
    h0_by_sigma: HashMap<Vec<u8>, Vec<usize>>,
    /// `σ(h(0))` value a partner must have → indices into `h1`.
    h1_by_wanted: HashMap<Vec<u8>, Vec<usize>>,
}

/// The `n` values `τ⁻¹·σ0·τ` over the conjugators `τ` sending `a1` to `σ1`.
fn wanted_h0_images(a1: &Permutation, n: usize) -> Vec<Vec<u8>> {
    let (s0, s1) = (sigma0(n), sigma1(n));
    (1..=n as u8)
        .map(|start| {
            let mut images = vec![0u8; n];
            let (mut x, mut y) = (1u8, start);
            for _ in 0..n {
                images[x as usize - 1] = y;
                x = a1.apply(x);
                y = s1.apply(y);
            }
            let tau = Permutation::from_images(images).expect("bijection along an n-cycle");
            tau.inverse().compose(&s0).compose(&tau).images().to_vec()
        })
        .collect()
}

/// Candidate pools, pairing and verification for one `(n, length)`.
pub struct Searcher {
    n: usize,
    length: usize,
    limit: usize,
    pools: Mutex<Pools>,
    found: Mutex<Vec<UniformMorphism>>,
    stop: AtomicBool,
    visited: AtomicU64,
    pairs_tested: AtomicU64,
}

impl Searcher {
    pub fn new(n: usize, length: usize, limit: usize) -> Self {
        assert!(n >= 2 && length >= 1 && limit >= 1);
        Searcher {
            n,
            length,
            limit,
            pools: Mutex::new(Pools::default()),
            found: Mutex::new(Vec::new()),
            stop: AtomicBool::new(false),
            visited: AtomicU64::new(0),
            pairs_tested: AtomicU64::new(0),
        }
    }

    pub fn is_done(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }

    pub fn progress(&self) -> SearchProgress {
        let pools = self.pools.lock().unwrap();
        SearchProgress {
            visited: self.visited.load(Ordering::Relaxed),
            h0_pool: pools.h0.len(),
            h1_pool: pools.h1.len(),
            pairs_tested: self.pairs_tested.load(Ordering::Relaxed),
            verified: self.found.lock().unwrap().len(),
        }
    }

    /// Adds a candidate word; pairs it with earlier candidates of the other
    /// kind (in discovery order) and verifies each conjugate pair. Returns
    /// `true` once `limit` morphisms have been verified.
    pub fn offer(&self, word: &[u8], sigma: &[u8]) -> bool {
        if self.is_done() || word.len() != self.length {
            return self.is_done();
        }
        let n = self.n;
        let a = Permutation::from_images(sigma.to_vec()).expect("sigma row is a permutation");
        let kind = classify_permutation(&a);
        if kind == Candidate::Neither {
            return false;
        }
        let b = BinaryWord::from_bits(word.to_vec());
        let partners: Vec<(BinaryWord, Permutation)> = {
            let mut pools = self.pools.lock().unwrap();
            if !pools.seen.insert(word.to_vec()) {
                return false;
            }
            match kind {
                Candidate::H0 => {
                    let partners = pools
                        .h1_by_wanted
                        .get(sigma)
                        .map(|ids| ids.iter().map(|&i| pools.h1[i].clone()).collect())
                        .unwrap_or_default();
                    let id = pools.h0.len();
                    pools.h0.push((b.clone(), a.clone()));
                    pools.h0_by_sigma.entry(sigma.to_vec()).or_default().push(id);
                    partners
                }
                Candidate::H1 => {
                    let wanted = wanted_h0_images(&a, n);
                    let mut ids: Vec<usize> = wanted
                        .iter()
                        .filter_map(|w| pools.h0_by_sigma.get(w))
                        .flatten()
                        .copied()
                        .collect();
                    ids.sort_unstable();
                    ids.dedup();
                    let partners = ids.into_iter().map(|i| pools.h0[i].clone()).collect();
                    let id = pools.h1.len();
                    pools.h1.push((b.clone(), a.clone()));
                    for w in wanted {
                        pools.h1_by_wanted.entry(w).or_default().push(id);
                    }
                    partners
                }
                Candidate::Neither => unreachable!(),
            }
        };
        for (other, other_sigma) in partners {
            if self.is_done() {
                break;
            }
            let ((h0, s0), (h1, s1)) = match kind {
                Candidate::H0 => ((b.clone(), a.clone()), (other, other_sigma)),
                _ => ((other, other_sigma), (b.clone(), a.clone())),
            };
            self.pairs_tested.fetch_add(1, Ordering::Relaxed);
            if find_conjugator(&s0, &s1, n).is_none() {
                continue;
            }
            let h = UniformMorphism::new(n, h0, h1).expect("equal lengths");
            if self.screen(&h) && verify(&h, &VerifyOptions::default()).overall {
                let mut found = self.found.lock().unwrap();
                if found.len() < self.limit {
                    found.push(h);
                }
                if found.len() >= self.limit {
                    self.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        self.is_done()
    }

    /// Cheap necessary conditions, tried before the full report.
    fn screen(&self, h: &UniformMorphism) -> bool {
        if !check_structure(h, None).pass || !check_factor_set_2(h).pass {
            return false;
        }
        let n = h.n() as u64;
        let v = crate::pansiot::decode(&probe_word(h), &canonical_prefix(h.n())).expect("canonical prefix");
        first_repetition_exceeding(&v, n, n - 1).is_none()
    }

    fn visit(&self, word: &[u8], sigma: &[u8]) -> ControlFlow<()> {
        self.visited.fetch_add(1, Ordering::Relaxed);
        if self.offer(word, sigma) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    }

    fn visit_reporting(
        &self,
        word: &[u8],
        sigma: &[u8],
        on_progress: &(dyn Fn(SearchProgress) + Sync),
    ) -> ControlFlow<()> {
        let flow = self.visit(word, sigma);
        if self.visited.load(Ordering::Relaxed).is_multiple_of(1 << 16) {
            on_progress(self.progress());
        }
        flow
    }

    /// Walks every legal word once. With more than one worker the walk is
    /// split into prefix shards handed out dynamically.
    pub fn run(&self, workers: usize, on_progress: &(dyn Fn(SearchProgress) + Sync)) {
        let mut visit = |w: &[u8], s: &[u8]| self.visit_reporting(w, s, on_progress);
        if workers <= 1 {
            enumerate_legal_below(self.n, self.length, &[], &mut visit);
            return;
        }
        let depth = self.length.min(12);
        let shards = 1usize << depth;
        let next = AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| {
                    let mut visit = |w: &[u8], s: &[u8]| self.visit_reporting(w, s, on_progress);
                    loop {
                        let shard = next.fetch_add(1, Ordering::Relaxed);
                        if shard >= shards || self.is_done() {
                            break;
                        }
                        let prefix: Vec<u8> = (0..depth).rev().map(|k| ((shard >> k) & 1) as u8).collect();
                        enumerate_legal_below(self.n, self.length, &prefix, &mut visit);
                    }
                });
            }
        });
    }

    /// Verified morphisms. Single-worker runs keep discovery order; with
    /// several workers the list is sorted by `(h(0), h(1))`.
    pub fn into_results(self, sort: bool) -> Vec<UniformMorphism> {
        let mut found = self.found.into_inner().unwrap();
        if sort {
            found.sort_by(|a, b| (a.image0(), a.image1()).cmp(&(b.image0(), b.image1())));
        }
        found
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { workers: 1 }
    }
}

/// Up to `limit` morphisms with images of `length` letters whose full
/// verification passes.
pub fn search_convenient(n: usize, length: usize, limit: usize) -> Vec<UniformMorphism> {
    search_convenient_with(n, length, limit, &SearchOptions::default(), &|_| {})
}

pub fn search_convenient_with(
    n: usize,
    length: usize,
    limit: usize,
    options: &SearchOptions,
    on_progress: &(dyn Fn(SearchProgress) + Sync),
) -> Vec<UniformMorphism> {
    let searcher = Searcher::new(n, length, limit);
    searcher.run(options.workers, on_progress);
    searcher.into_results(options.workers > 1)
}

/// Whether a verified report would list `check` as passing for `h`; used by
/// tests to confirm search output independently.
pub fn passes(h: &UniformMorphism, check: CheckName) -> bool {
    crate::verifier::run_check(check, h, &VerifyOptions::default()).pass
}
