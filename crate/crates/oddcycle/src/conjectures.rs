//! Verifiers and range screeners for two conjectured cycle symmetries.
//!
//! For Fermat numbers `F_n = 2^(2^n) + 1`: an odd `d > 1` is conjectured to
//! divide `F_n` exactly when every cycle of `d` has length `2^n`.
//!
//! For Mersenne numbers `M_p = 2^p - 1` with `p` prime: the number of
//! k-cycles of `M_p` is conjectured to be `(p-1)! / (k! (p-k)!)`, and an odd
//! `d > 1` is conjectured to divide `M_p` exactly when its k-cycle and
//! (p-k)-cycle counts agree for every `k`.
//!
//! Nothing here proves anything: the checkers decompose and compare, and a
//! violation is a first-class result, not an error. "Cycles of d" always
//! means all cycles, reducible ones included.

use std::time::{Duration, Instant};

use crate::arith::{cycle_count_formula, is_prime};
use crate::cycles::{self, decompose_stats, LengthHistogram, OddModulus, DEFAULT_MEMORY_BUDGET};
use crate::par::map_odd_range;
use crate::{Error, Result};

/// `F_n = 2^(2^n) + 1`. Only `n <= 5` fits the modulus limit.
pub fn fermat_number(n: u32) -> Result<u64> {
    if n > 5 {
        return Err(Error::FermatIndexTooLarge(n));
    }
    Ok((1u64 << (1u32 << n)) + 1)
}

/// `M_p = 2^p - 1` for prime `p` up to 62.
pub fn mersenne_number(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > 62 {
        return Err(Error::MersenneExponentTooLarge(p));
    }
    Ok((1u64 << p) - 1)
}

/// What a conjecture check is aimed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Fermat { n: u32 },
    Mersenne { p: u64 },
}

impl Target {
    pub fn value(&self) -> Result<u64> {
        match *self {
            Target::Fermat { n } => fermat_number(n),
            Target::Mersenne { p } => mersenne_number(p),
        }
    }

    /// Order of 2 modulo any true divisor `d > 1` of the target: `2^(n+1)`
    /// for `F_n`, `p` for `M_p`. Used as a screening prefilter.
    pub fn expected_order(&self) -> u64 {
        match *self {
            Target::Fermat { n } => 1u64 << (n + 1),
            Target::Mersenne { p } => p,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Target::Fermat { n } => format!("F_{n}"),
            Target::Mersenne { p } => format!("M_{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    FermatCycles,
    MersenneCounts,
    MersenneSymmetry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// Concrete evidence for a failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A cycle whose length is not the required one.
    CycleLength { min: u64, length: u64, expected: u64 },
    /// A k-cycle count differing from the formula.
    CountMismatch { length: u64, expected: u64, actual: u64 },
    /// `N_k != N_(p-k)`; `mirror` is `p - k` clamped into the histogram
    /// domain (absent lengths count zero).
    AsymmetricCount { length: u64, count: u64, mirror_count: u64 },
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::CycleLength { min, length, expected } => write!(
                f,
                "cycle starting at {min} has length {length}, expected {expected}"
            ),
            Witness::CountMismatch { length, expected, actual } => write!(
                f,
                "{actual} cycles of length {length}, formula expects {expected}"
            ),
            Witness::AsymmetricCount { length, count, mirror_count } => write!(
                f,
                "N_{length} = {count} but mirror count is {mirror_count}"
            ),
        }
    }
}

/// Verdict plus evidence for one conjecture check on one modulus.
#[derive(Debug, Clone)]
pub struct ConjectureReport {
    pub subject: u64,
    pub target: Target,
    pub kind: CheckKind,
    pub verdict: Verdict,
    pub histogram: LengthHistogram,
    /// Formula-derived histogram, present for the counts check.
    pub expected: Option<LengthHistogram>,
    /// Present exactly when the verdict is `Fail`.
    pub witness: Option<Witness>,
    pub elapsed: Duration,
}

impl ConjectureReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Do all cycles of `d` (reducible included) have length `2^n`?
pub fn check_fermat_cycles(d: OddModulus, n: u32, max_memory_bytes: u64) -> Result<ConjectureReport> {
    fermat_number(n)?;
    let expected_len = 1u64 << n;
    let start = Instant::now();
    let stats = decompose_stats(d, max_memory_bytes)?;
    let witness = stats
        .histogram
        .iter()
        .find(|&(len, _)| len != expected_len)
        .map(|(len, _)| Witness::CycleLength {
            min: stats.first_min_by_length[&len],
            length: len,
            expected: expected_len,
        });
    Ok(ConjectureReport {
        subject: d.get(),
        target: Target::Fermat { n },
        kind: CheckKind::FermatCycles,
        verdict: if witness.is_none() { Verdict::Pass } else { Verdict::Fail },
        histogram: stats.histogram,
        expected: None,
        witness,
        elapsed: start.elapsed(),
    })
}

/// Does the cycle-length histogram of `M_p` match `(p-1)! / (k! (p-k)!)` at
/// every `k` in `1..p`?
pub fn check_mersenne_counts(p: u64, max_memory_bytes: u64) -> Result<ConjectureReport> {
    let mp = mersenne_number(p)?;
    let expected: LengthHistogram = (1..p)
        .map(|k| Ok((k, cycle_count_formula(p, k)?)))
        .collect::<Result<_>>()?;
    let start = Instant::now();
    let d = OddModulus::new(mp)?;
    let stats = decompose_stats(d, max_memory_bytes)?;
    let mut witness = None;
    for k in expected.lengths().chain(stats.histogram.lengths()) {
        let want = expected.count(k);
        let got = stats.histogram.count(k);
        if want != got {
            witness = Some(Witness::CountMismatch { length: k, expected: want, actual: got });
            break;
        }
    }
    Ok(ConjectureReport {
        subject: mp,
        target: Target::Mersenne { p },
        kind: CheckKind::MersenneCounts,
        verdict: if witness.is_none() { Verdict::Pass } else { Verdict::Fail },
        histogram: stats.histogram,
        expected: Some(expected),
        witness,
        elapsed: start.elapsed(),
    })
}

/// Is the cycle-length histogram of `d` symmetric under `k -> p - k`?
/// Absent lengths count zero; lengths at or above `p` have no mirror and
/// fail outright.
pub fn check_mersenne_symmetry(d: OddModulus, p: u64, max_memory_bytes: u64) -> Result<ConjectureReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let start = Instant::now();
    let stats = decompose_stats(d, max_memory_bytes)?;
    let mut witness = None;
    for (k, n_k) in stats.histogram.iter() {
        let mirror_count = if k < p { stats.histogram.count(p - k) } else { 0 };
        if n_k != mirror_count {
            witness = Some(Witness::AsymmetricCount { length: k, count: n_k, mirror_count });
            break;
        }
    }
    Ok(ConjectureReport {
        subject: d.get(),
        target: Target::Mersenne { p },
        kind: CheckKind::MersenneSymmetry,
        verdict: if witness.is_none() { Verdict::Pass } else { Verdict::Fail },
        histogram: stats.histogram,
        expected: None,
        witness,
        elapsed: start.elapsed(),
    })
}

/// Both sides of the identity `(2^p - 2) / 2 = sum_k k * (p-1)!/(k!(p-k)!)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Eq4Identity {
    pub p: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

pub fn eq4_identity(p: u64) -> Result<Eq4Identity> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > 63 {
        return Err(Error::Overflow("eq4_identity"));
    }
    let lhs = (1u64 << (p - 1)) - 1;
    let mut rhs = 0u128;
    for k in 1..p {
        let term = (k as u128)
            .checked_mul(cycle_count_formula(p, k)? as u128)
            .ok_or(Error::Overflow("eq4_identity"))?;
        rhs = rhs.checked_add(term).ok_or(Error::Overflow("eq4_identity"))?;
    }
    let rhs = u64::try_from(rhs).map_err(|_| Error::Overflow("eq4_identity"))?;
    Ok(Eq4Identity { p, lhs, rhs, holds: lhs == rhs })
}

#[derive(Debug, Clone, Copy)]
pub struct ScreenOptions {
    /// Skip full decomposition of `d` whenever the order of 2 mod `d`
    /// already rules it out as a divisor. True divisors always match the
    /// expected order, so they are never skipped.
    pub prefilter: bool,
    /// Worker threads; 0 means all available. Output is independent of this.
    pub workers: usize,
    pub max_memory_bytes: u64,
}

impl Default for ScreenOptions {
    fn default() -> Self {
        Self {
            prefilter: true,
            workers: 0,
            max_memory_bytes: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// One screened modulus whose cycle criterion or divisibility made it
/// reportable.
#[derive(Debug, Clone)]
pub struct ScreenHit {
    pub d: u64,
    /// Ground truth by direct division.
    pub divides: bool,
    pub report: ConjectureReport,
}

/// Result of screening an odd range against a target's cycle criterion.
#[derive(Debug, Clone)]
pub struct ScreenOutcome {
    pub target: Target,
    pub lo: u64,
    pub hi: u64,
    /// Moduli passing the cycle criterion, ascending. `divides` records
    /// whether each one actually divides the target.
    pub candidates: Vec<ScreenHit>,
    /// True divisors in range that failed the criterion — each one is a
    /// conjecture violation.
    pub missed_divisors: Vec<ScreenHit>,
    /// Moduli whose check was refused (budget), with the reason.
    pub skipped: Vec<(u64, String)>,
    pub elapsed: Duration,
}

impl ScreenOutcome {
    /// Human-readable descriptions of every conjecture violation found.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for hit in &self.candidates {
            if !hit.divides {
                out.push(format!(
                    "{} passes the cycle criterion but does not divide {}",
                    hit.d,
                    self.target.label()
                ));
            }
        }
        for hit in &self.missed_divisors {
            out.push(format!(
                "{} divides {} but fails the cycle criterion ({})",
                hit.d,
                self.target.label(),
                hit.report
                    .witness
                    .as_ref()
                    .map(|w| w.to_string())
                    .unwrap_or_default()
            ));
        }
        out
    }

    pub fn candidate_values(&self) -> Vec<u64> {
        self.candidates.iter().map(|h| h.d).collect()
    }
}

enum PerModulus {
    Quiet,
    Candidate(ScreenHit),
    MissedDivisor(ScreenHit),
    Skipped(u64, String),
}

/// Evaluate the target's cycle criterion for every odd `d` in `[lo, hi]`
/// (`d = 1` is excluded; even endpoints shrink to the odd values inside).
/// Candidates are cross-checked against true divisibility; violations in
/// either direction are surfaced, never hidden.
pub fn screen(lo: u64, hi: u64, target: Target, opts: &ScreenOptions) -> Result<ScreenOutcome> {
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let odd_lo = if lo.is_multiple_of(2) { lo + 1 } else { lo };
    let odd_hi = if hi.is_multiple_of(2) { hi - 1 } else { hi };
    if odd_lo > odd_hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let value = target.value()?;
    let start = Instant::now();
    let per: Vec<PerModulus> = map_odd_range(odd_lo, odd_hi, opts.workers, |d| {
        if d == 1 {
            return PerModulus::Quiet;
        }
        let dm = OddModulus::new(d).expect("odd d >= 3");
        let divides = value % d == 0;
        if opts.prefilter
            && !divides
            && cycles::epsilon_capped(dm, target.expected_order()) != Some(target.expected_order())
        {
            return PerModulus::Quiet;
        }
        let report = match target {
            Target::Fermat { n } => check_fermat_cycles(dm, n, opts.max_memory_bytes),
            Target::Mersenne { p } => check_mersenne_symmetry(dm, p, opts.max_memory_bytes),
        };
        match report {
            Err(e) => PerModulus::Skipped(d, e.to_string()),
            Ok(r) if r.passed() => PerModulus::Candidate(ScreenHit { d, divides, report: r }),
            Ok(r) if divides => PerModulus::MissedDivisor(ScreenHit { d, divides, report: r }),
            Ok(_) => PerModulus::Quiet,
        }
    });

    let mut outcome = ScreenOutcome {
        target,
        lo,
        hi,
        candidates: Vec::new(),
        missed_divisors: Vec::new(),
        skipped: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for item in per {
        match item {
            PerModulus::Quiet => {}
            PerModulus::Candidate(hit) => outcome.candidates.push(hit),
            PerModulus::MissedDivisor(hit) => outcome.missed_divisors.push(hit),
            PerModulus::Skipped(d, reason) => outcome.skipped.push((d, reason)),
        }
    }
    outcome.elapsed = start.elapsed();
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use crate::cycles::epsilon;

    fn m(q: u64) -> OddModulus {
        OddModulus::new(q).unwrap()
    }

    fn hist(pairs: &[(u64, u64)]) -> LengthHistogram {
        pairs.iter().copied().collect()
    }

    #[test]
    fn fermat_numbers() {
        assert_eq!(fermat_number(0).unwrap(), 3);
        assert_eq!(fermat_number(1).unwrap(), 5);
        assert_eq!(fermat_number(2).unwrap(), 17);
        assert_eq!(fermat_number(3).unwrap(), 257);
        assert_eq!(fermat_number(4).unwrap(), 65_537);
        assert_eq!(fermat_number(5).unwrap(), 4_294_967_297);
        assert_eq!(fermat_number(6), Err(Error::FermatIndexTooLarge(6)));
    }

    #[test]
    fn mersenne_numbers() {
        assert_eq!(mersenne_number(2).unwrap(), 3);
        assert_eq!(mersenne_number(5).unwrap(), 31);
        assert_eq!(mersenne_number(11).unwrap(), 2047);
        assert_eq!(mersenne_number(13).unwrap(), 8191);
        assert_eq!(mersenne_number(4), Err(Error::NotPrime(4)));
        assert_eq!(mersenne_number(67), Err(Error::MersenneExponentTooLarge(67)));
    }

    #[test]
    fn fermat_cycles_examples() {
        let r = check_fermat_cycles(m(17), 2, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(r.passed());
        assert_eq!(r.histogram, hist(&[(4, 2)]));

        let r = check_fermat_cycles(m(641), 5, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(r.passed());
        assert_eq!(r.histogram, hist(&[(32, 10)]));

        let r = check_fermat_cycles(m(15), 2, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(!r.passed());
        match r.witness {
            Some(Witness::CycleLength { length, expected: 4, .. }) => assert_ne!(length, 4),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn mersenne_counts_examples() {
        let r = check_mersenne_counts(7, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(r.passed());
        assert_eq!(
            r.histogram,
            hist(&[(1, 1), (2, 3), (3, 5), (4, 5), (5, 3), (6, 1)])
        );

        let r = check_mersenne_counts(11, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(r.passed());
        assert_eq!(
            r.histogram,
            hist(&[
                (1, 1), (2, 5), (3, 15), (4, 30), (5, 42),
                (6, 42), (7, 30), (8, 15), (9, 5), (10, 1)
            ])
        );

        let r = check_mersenne_counts(13, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(r.passed());
        let counts: Vec<u64> = (1..13).map(|k| r.histogram.count(k)).collect();
        assert_eq!(counts, vec![1, 6, 22, 55, 99, 132, 132, 99, 55, 22, 6, 1]);

        let r = check_mersenne_counts(2, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn mersenne_symmetry_examples() {
        let r = check_mersenne_symmetry(m(89), 11, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(r.passed());
        assert_eq!(r.histogram.count(3), r.histogram.count(8));
        assert_eq!(r.histogram.count(5), 2);

        let r = check_mersenne_symmetry(m(23), 11, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(r.passed());
        assert_eq!(r.histogram, hist(&[(4, 1), (7, 1)]));

        let r = check_mersenne_symmetry(m(9), 11, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(!r.passed());
        assert!(r.witness.is_some());
    }

    #[test]
    fn symmetry_rejects_composite_exponent() {
        assert!(matches!(
            check_mersenne_symmetry(m(9), 9, DEFAULT_MEMORY_BUDGET),
            Err(Error::NotPrime(9))
        ));
    }

    #[test]
    fn eq4_examples() {
        assert_eq!(
            eq4_identity(5).unwrap(),
            Eq4Identity { p: 5, lhs: 15, rhs: 15, holds: true }
        );
        assert_eq!(
            eq4_identity(3).unwrap(),
            Eq4Identity { p: 3, lhs: 3, rhs: 3, holds: true }
        );
        let e = eq4_identity(19).unwrap();
        assert_eq!(e.lhs, 262_143);
        assert!(e.holds);
    }

    #[test]
    fn eq4_rejects_bad_inputs() {
        assert_eq!(eq4_identity(9), Err(Error::NotPrime(9)));
        assert_eq!(eq4_identity(67), Err(Error::Overflow("eq4_identity")));
    }

    #[test]
    fn quick_reject_order_fact() {
        // Every divisor d > 1 of M_p has order exactly p; of F_n, 2^(n+1).
        for p in [3u64, 5, 7, 11, 13] {
            let mp = mersenne_number(p).unwrap();
            for d in factorize(mp).unwrap().divisors().into_iter().skip(1) {
                assert_eq!(epsilon(m(d)), p, "divisor {d} of M_{p}");
            }
        }
        for n in 0..=5u32 {
            let fnum = fermat_number(n).unwrap();
            for d in factorize(fnum).unwrap().divisors().into_iter().skip(1) {
                assert_eq!(epsilon(m(d)), 1 << (n + 1), "divisor {d} of F_{n}");
            }
        }
    }

    #[test]
    fn screen_small_fermat() {
        let out = screen(3, 29, Target::Fermat { n: 2 }, &ScreenOptions::default()).unwrap();
        assert_eq!(out.candidate_values(), vec![17]);
        assert!(out.candidates[0].divides);
        assert!(out.missed_divisors.is_empty());
        assert!(out.violations().is_empty());
    }

    #[test]
    fn screen_small_mersenne() {
        let out = screen(3, 99, Target::Mersenne { p: 11 }, &ScreenOptions::default()).unwrap();
        assert_eq!(out.candidate_values(), vec![23, 89]);
        assert!(out.candidates.iter().all(|h| h.divides));
        assert!(out.violations().is_empty());
    }

    #[test]
    fn screen_prefilter_agrees_with_full_scan() {
        let with = screen(3, 999, Target::Mersenne { p: 11 }, &ScreenOptions::default()).unwrap();
        let without = screen(
            3,
            999,
            Target::Mersenne { p: 11 },
            &ScreenOptions { prefilter: false, ..Default::default() },
        )
        .unwrap();
        assert_eq!(with.candidate_values(), without.candidate_values());
        assert_eq!(with.missed_divisors.len(), without.missed_divisors.len());
    }

    #[test]
    fn screen_rejects_bad_range() {
        assert!(matches!(
            screen(9, 3, Target::Fermat { n: 2 }, &ScreenOptions::default()),
            Err(Error::InvalidRange { .. })
        ));
        assert!(matches!(
            screen(4, 4, Target::Fermat { n: 2 }, &ScreenOptions::default()),
            Err(Error::InvalidRange { .. })
        ));
    }

    #[test]
    fn screen_normalizes_even_endpoints() {
        let even = screen(2, 30, Target::Fermat { n: 2 }, &ScreenOptions::default()).unwrap();
        let odd = screen(3, 29, Target::Fermat { n: 2 }, &ScreenOptions::default()).unwrap();
        assert_eq!(even.candidate_values(), odd.candidate_values());
    }

    #[test]
    fn screen_records_budget_skips() {
        let out = screen(
            1_000_001,
            1_000_005,
            Target::Mersenne { p: 31 },
            &ScreenOptions {
                prefilter: false,
                workers: 1,
                max_memory_bytes: 1024,
            },
        )
        .unwrap();
        assert_eq!(out.skipped.len(), 3);
        assert!(out.candidates.is_empty());
    }
}
