//! Per-`n` verification report.
//!
//! A report runs eight named checks against one morphism. Each check is
//! independent and every check always runs, so a failing report still
//! documents the state of the others.
//!
//! The kernel-repetition lifting argument (replacing a kernel repetition by
//! its preimage under `h` while the excess stays markable) is not executed:
//! `h²(0110)` has no kernel repetitions, and the bound `9n² − 6n + 1` already
//! accounts for any number of lifting steps.

use std::fmt;
use std::time::Instant;

use num_rational::Ratio;
use serde::Serialize;

use crate::markability::check_all_length_r_factors_markable;
use crate::morphisms::{builtin, iterate_bound, MorphismError, UniformMorphism};
use crate::pansiot::{canonical_prefix, decode, PansiotError};
use crate::perms::{find_conjugator, sigma0, sigma1, sigma_word, PrefixSigmaTable};
use crate::words::{
    find_repetitions_exceeding, find_repetitions_with_excess_at_least, maximal_extension, BinaryWord,
    RepetitionOccurrence, SigmaWord,
};

/// Stable check identifiers, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CheckName {
    #[serde(rename = "structure")]
    Structure,
    #[serde(rename = "algebraic_condition")]
    AlgebraicCondition,
    #[serde(rename = "factor_set_2")]
    FactorSet2,
    #[serde(rename = "markability_r")]
    MarkabilityR,
    #[serde(rename = "iteration_bound")]
    IterationBound,
    #[serde(rename = "kernel_free")]
    KernelFree,
    #[serde(rename = "big_excess_free")]
    BigExcessFree,
    #[serde(rename = "power_free")]
    PowerFree,
}

impl CheckName {
    pub const ALL: [CheckName; 8] = [
        CheckName::Structure,
        CheckName::AlgebraicCondition,
        CheckName::FactorSet2,
        CheckName::MarkabilityR,
        CheckName::IterationBound,
        CheckName::KernelFree,
        CheckName::BigExcessFree,
        CheckName::PowerFree,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Structure => "structure",
            CheckName::AlgebraicCondition => "algebraic_condition",
            CheckName::FactorSet2 => "factor_set_2",
            CheckName::MarkabilityR => "markability_r",
            CheckName::IterationBound => "iteration_bound",
            CheckName::KernelFree => "kernel_free",
            CheckName::BigExcessFree => "big_excess_free",
            CheckName::PowerFree => "power_free",
        }
    }

    pub fn parse(s: &str) -> Option<CheckName> {
        CheckName::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: CheckName,
    pub pass: bool,
    pub witness: String,
    pub ms: u64,
}

impl CheckResult {
    fn new(name: CheckName, pass: bool, witness: impl Into<String>) -> Self {
        CheckResult {
            name,
            pass,
            witness: witness.into(),
            ms: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub r: usize,
    pub overall: bool,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn check(&self, name: CheckName) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Same report with all durations zeroed, for comparisons.
    pub fn without_timings(&self) -> VerificationReport {
        let mut out = self.clone();
        out.checks.iter_mut().for_each(|c| c.ms = 0);
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} r={} overall={}", self.n, self.r, pass_str(self.overall))?;
        for c in &self.checks {
            writeln!(
                f,
                "  {:<20} {}  {:>7} ms  {}",
                c.name.as_str(),
                pass_str(c.pass),
                c.ms,
                c.witness
            )?;
        }
        Ok(())
    }
}

fn pass_str(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Length bounds and the power threshold for one alphabet size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// `9n² − 6n + 1`: longest possible kernel repetition with non-markable
    /// excess.
    pub kernel_bound: u64,
    /// `n² − 3n + 1`: longest possible encoding of a repetition with excess
    /// at most `n − 2`. Negative for `n = 2`.
    pub short_bound: i64,
    /// `n / (n − 1)`.
    pub threshold: Ratio<u64>,
}

pub fn compute_bounds(n: usize) -> Bounds {
    assert!(n >= 2);
    let m = n as u64;
    let kernel_bound = 9 * m * m - 6 * m + 1;
    // |ℰ| < r ≤ 4n, |η′| < r: r + (n−1)(r + (r−1)·r/(r−1) + n − 1) ≤ 4n + (n−1)(9n−1)
    assert_eq!(kernel_bound, 4 * m + (m - 1) * (9 * m - 1));
    let n_signed = n as i64;
    Bounds {
        kernel_bound,
        short_bound: n_signed * n_signed - 3 * n_signed + 1,
        threshold: Ratio::new(m, m - 1),
    }
}

/// `r = 4n − 4`, or `4n` for `n = 21`.
pub fn tabulated_length(n: usize) -> usize {
    if n == 21 {
        4 * n
    } else {
        4 * n - 4
    }
}

/// `h²(0110)`.
pub fn probe_word(h: &UniformMorphism) -> BinaryWord {
    h.apply_twice(&[0, 1, 1, 0])
}

/// The word over `Σ_n` with prefix `1 2 … n−1` and Pansiot encoding
/// `h²(0110)`; its length is `4r² + n − 1`.
pub fn build_v(h: &UniformMorphism) -> Result<SigmaWord, PansiotError> {
    decode(&probe_word(h), &canonical_prefix(h.n()))
}

/// Maximal kernel repetitions of `b`: factors `PE` with period `q = |P|`,
/// `|E| ≥ 1` and `σ(P) = id`. With `max_period`, only `q ≤ max_period`.
///
/// Two positions `i < j` bound a kernel factor exactly when their prefix
/// permutations coincide, so only positions within one class of equal rows
/// are paired.
pub fn kernel_repetitions(b: &BinaryWord, n: usize, max_period: Option<usize>) -> Vec<RepetitionOccurrence> {
    let table = PrefixSigmaTable::new(b, n);
    let mut found = Vec::new();
    for class in table.equal_row_classes() {
        for (a, &i) in class.iter().enumerate() {
            for &j in &class[a + 1..] {
                let q = j - i;
                if max_period.is_some_and(|m| q > m) {
                    break;
                }
                if j < b.len() && b[i] == b[j] {
                    let (start, end) = maximal_extension(b, i, j + 1, q).expect("b[i] == b[i+q]");
                    found.push(RepetitionOccurrence {
                        start,
                        period: q,
                        length: end - start,
                    });
                }
            }
        }
    }
    found.sort_unstable();
    found.dedup();
    found
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Checks left out of the report.
    pub skip: Vec<CheckName>,
    /// Scan kernel repetitions of every period instead of `q ≤ 9n² − 6n + 1`.
    pub unbounded_kernel_scan: bool,
    /// Required image length. `None` only requires `r ≤ 4n`.
    pub exact_length: Option<usize>,
}

pub fn check_structure(h: &UniformMorphism, exact_length: Option<usize>) -> CheckResult {
    let (n, r) = (h.n(), h.r());
    let mut problems = Vec::new();
    if let Some(expected) = exact_length {
        if r != expected {
            problems.push(format!("r = {r}, expected {expected}"));
        }
    }
    if r > 4 * n {
        problems.push(format!("r = {r} exceeds 4n = {}", 4 * n));
    }
    let (last0, last1) = (h.image0()[r - 1], h.image1()[r - 1]);
    if last0 == last1 {
        problems.push(format!("h(0) and h(1) both end in {last0}"));
    }
    if !h.image0().contains(&BinaryWord::from_bits(vec![0, 1, 1])) {
        problems.push("011 is not a factor of h(0)".into());
    }
    if !h.image1().contains(&BinaryWord::from_bits(vec![1, 1, 0])) {
        problems.push("110 is not a factor of h(1)".into());
    }
    if problems.is_empty() {
        CheckResult::new(
            CheckName::Structure,
            true,
            format!("r={r} |eta'|={}", h.eta_prime().len()),
        )
    } else {
        CheckResult::new(CheckName::Structure, false, problems.join("; "))
    }
}

pub fn check_algebraic_condition(h: &UniformMorphism) -> CheckResult {
    let n = h.n();
    let a0 = sigma_word(h.image0(), n);
    let a1 = sigma_word(h.image1(), n);
    match find_conjugator(&a0, &a1, n) {
        Some(tau) => {
            let sound = tau.conjugate(&a0) == sigma0(n) && tau.conjugate(&a1) == sigma1(n);
            CheckResult::new(CheckName::AlgebraicCondition, sound, format!("tau={tau}"))
        }
        None => CheckResult::new(
            CheckName::AlgebraicCondition,
            false,
            format!(
                "no conjugator; cycle types sigma(h(0))={:?} sigma(h(1))={:?}",
                a0.cycle_type(),
                a1.cycle_type()
            ),
        ),
    }
}

pub fn check_factor_set_2(h: &UniformMorphism) -> CheckResult {
    match h.factor_closure(2) {
        Ok(u) => {
            let members = u.to_strings();
            let pass = members == ["01", "10", "11"];
            CheckResult::new(CheckName::FactorSet2, pass, format!("U={{{}}}", members.join(",")))
        }
        Err(e) => CheckResult::new(CheckName::FactorSet2, false, e.to_string()),
    }
}

pub fn check_markability(h: &UniformMorphism) -> CheckResult {
    match check_all_length_r_factors_markable(h) {
        Ok(report) if report.passed() => CheckResult::new(
            CheckName::MarkabilityR,
            true,
            format!("factors={}", report.factor_count),
        ),
        Ok(report) => {
            let (v, conflict) = &report.failures[0];
            CheckResult::new(
                CheckName::MarkabilityR,
                false,
                format!(
                    "{} of {} factors not 2-markable; first {v}: {conflict}",
                    report.failures.len(),
                    report.factor_count
                ),
            )
        }
        Err(e) => CheckResult::new(CheckName::MarkabilityR, false, e.to_string()),
    }
}

pub fn check_iteration_bound(h: &UniformMorphism) -> CheckResult {
    let b = compute_bounds(h.n());
    let i = iterate_bound(b.kernel_bound, h.r() as u64);
    let pass = i == 2 && b.short_bound < b.kernel_bound as i64;
    CheckResult::new(
        CheckName::IterationBound,
        pass,
        format!(
            "I({},{})={i}; n^2-3n+1={} < {}",
            b.kernel_bound,
            h.r(),
            b.short_bound,
            b.kernel_bound
        ),
    )
}

pub fn check_kernel_free(h: &UniformMorphism, unbounded: bool) -> CheckResult {
    let b = probe_word(h);
    let max_period = (!unbounded).then(|| compute_bounds(h.n()).kernel_bound as usize);
    check_kernel_free_word(&b, h.n(), max_period)
}

pub fn check_kernel_free_word(b: &BinaryWord, n: usize, max_period: Option<usize>) -> CheckResult {
    let found = kernel_repetitions(b, n, max_period);
    let scope = match max_period {
        Some(m) => format!("periods<={m}"),
        None => "all periods".to_string(),
    };
    match found.first() {
        None => CheckResult::new(CheckName::KernelFree, true, format!("|b|={} {scope}", b.len())),
        Some(o) => CheckResult::new(
            CheckName::KernelFree,
            false,
            format!("{} found; first {o}", found.len()),
        ),
    }
}

fn with_v(name: CheckName, h: &UniformMorphism, f: impl FnOnce(&SigmaWord) -> CheckResult) -> CheckResult {
    match build_v(h) {
        Ok(v) => f(&v),
        Err(e) => CheckResult::new(name, false, format!("cannot build v: {e}")),
    }
}

pub fn check_big_excess_free(h: &UniformMorphism) -> CheckResult {
    with_v(CheckName::BigExcessFree, h, |v| {
        let found = find_repetitions_with_excess_at_least(v, h.n() - 1);
        match found.first() {
            None => CheckResult::new(
                CheckName::BigExcessFree,
                true,
                format!("|v|={} excess>={}", v.len(), h.n() - 1),
            ),
            Some(o) => CheckResult::new(
                CheckName::BigExcessFree,
                false,
                format!("{} found; first {o}", found.len()),
            ),
        }
    })
}

pub fn check_power_free(h: &UniformMorphism) -> CheckResult {
    let n = h.n() as u64;
    with_v(CheckName::PowerFree, h, |v| {
        let found = find_repetitions_exceeding(v, n, n - 1);
        match found.first() {
            None => CheckResult::new(
                CheckName::PowerFree,
                true,
                format!("|v|={} threshold={}/{}", v.len(), n, n - 1),
            ),
            Some(o) => CheckResult::new(CheckName::PowerFree, false, format!("{} found; first {o}", found.len())),
        }
    })
}

pub fn run_check(name: CheckName, h: &UniformMorphism, options: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let mut result = match name {
        CheckName::Structure => check_structure(h, options.exact_length),
        CheckName::AlgebraicCondition => check_algebraic_condition(h),
        CheckName::FactorSet2 => check_factor_set_2(h),
        CheckName::MarkabilityR => check_markability(h),
        CheckName::IterationBound => check_iteration_bound(h),
        CheckName::KernelFree => check_kernel_free(h, options.unbounded_kernel_scan),
        CheckName::BigExcessFree => check_big_excess_free(h),
        CheckName::PowerFree => check_power_free(h),
    };
    result.ms = started.elapsed().as_millis() as u64;
    result
}

/// Runs every check not in `options.skip`, in the order of
/// [`CheckName::ALL`].
pub fn verify(h: &UniformMorphism, options: &VerifyOptions) -> VerificationReport {
    let checks: Vec<CheckResult> = CheckName::ALL
        .into_iter()
        .filter(|c| !options.skip.contains(c))
        .map(|c| run_check(c, h, options))
        .collect();
    VerificationReport {
        n: h.n(),
        r: h.r(),
        overall: checks.iter().all(|c| c.pass),
        checks,
    }
}

/// Verifies the embedded morphism for `n`, requiring the tabulated length.
pub fn verify_builtin(n: usize) -> Result<VerificationReport, MorphismError> {
    let h = builtin(n)?;
    let options = VerifyOptions {
        exact_length: Some(tabulated_length(n)),
        ..Default::default()
    };
    Ok(verify(h, &options))
}
