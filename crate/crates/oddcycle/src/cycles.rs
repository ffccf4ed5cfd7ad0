//! Cycles of the successor map on odd residues.
//!
//! Fix an odd `q > 1` and write `G_q` for the odd integers in `(0, q)`. The
//! successor of `a` is `(q + a) / 2^k` with `k` the 2-adic valuation of
//! `q + a`; the result is again an odd integer in `(0, q)`. The map is a
//! bijection on `G_q` (see [`predecessor`]), so iterating it from any element
//! closes into a cycle, and the cycles partition `G_q`.
//!
//! A cycle whose elements are coprime to `q` is *irreducible*; otherwise the
//! common gcd with `q` is constant along the cycle and the cycle is
//! *reducible*. The sum `xi` of the step exponents along an irreducible
//! cycle is the same for every irreducible cycle of `q` and equals the
//! multiplicative order of 2 modulo `q` — that is [`epsilon`], computed here
//! purely by walking the cycle of 1, never by modular exponentiation.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{gcd, val2};
use crate::{Error, Result};

/// Default memory budget for [`decompose`]: 1 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

/// Under [`ElementPolicy::Auto`], element lists are always kept for moduli up
/// to this bound.
const AUTO_KEEP_Q: u64 = 1_000_000;

/// Under [`ElementPolicy::Auto`] with a modulus above `AUTO_KEEP_Q`, element
/// lists are kept only for cycles up to this length.
const AUTO_KEEP_LEN: usize = 10_000;

/// A validated odd modulus `q` with `1 < q < 2^63`.
///
/// The upper bound keeps `q + a` inside `u64` and `a * b` inside `u128` for
/// all residues `a, b < q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OddModulus(u64);

impl OddModulus {
    pub const MAX: u64 = (1 << 63) - 1;

    pub fn new(q: u64) -> Result<Self> {
        if q <= 1 || q.is_multiple_of(2) {
            return Err(Error::InvalidModulus(q));
        }
        if q > Self::MAX {
            return Err(Error::ModulusTooLarge(q));
        }
        Ok(Self(q))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `|G_q| = (q - 1) / 2`, the number of odd residues in `(0, q)`.
    #[inline]
    pub fn residue_count(self) -> u64 {
        (self.0 - 1) / 2
    }
}

impl fmt::Display for OddModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn validate_residue(q: OddModulus, x: u64) -> Result<()> {
    if x == 0 || x.is_multiple_of(2) || x >= q.get() {
        return Err(Error::ElementOutOfRange { q: q.get(), x });
    }
    Ok(())
}

#[inline(always)]
fn step(q: u64, a: u64) -> (u64, u32) {
    let s = q + a;
    let k = val2(s);
    (s >> k, k)
}

/// One application of the successor map: `(b, k)` with `q + a = 2^k * b` and
/// `b` odd.
pub fn successor(q: OddModulus, a: u64) -> Result<(u64, u32)> {
    validate_residue(q, a)?;
    Ok(step(q.get(), a))
}

/// Inverse of [`successor`]: the unique `(a, k)` with `q + a = 2^k * b`,
/// i.e. `k` is the one exponent with `q < 2^k * b < 2q`.
pub fn predecessor(q: OddModulus, b: u64) -> Result<(u64, u32)> {
    validate_residue(q, b)?;
    let q = q.get();
    let mut shifted = b;
    let mut k = 0u32;
    while shifted <= q {
        shifted <<= 1;
        k += 1;
    }
    debug_assert!(shifted < 2 * q);
    Ok((shifted - q, k))
}

/// One orbit of the successor map.
///
/// `elements[0]` is the cycle minimum, and for each `i`,
/// `q + elements[i] == 2^steps[i] * elements[(i+1) % length]`. `xi` is the
/// sum of the steps and `gcd_with_q` the (constant) gcd of any element with
/// `q`. Element and step lists may be dropped by a [`DecomposeOptions`]
/// policy; the scalar fields are always exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub min: u64,
    pub length: u64,
    pub xi: u64,
    pub gcd_with_q: u64,
    pub elements: Option<Vec<u64>>,
    pub steps: Option<Vec<u32>>,
}

impl Cycle {
    pub fn is_irreducible(&self) -> bool {
        self.gcd_with_q == 1
    }
}

/// The cycle generated by `a`, canonicalized to start at its minimum.
pub fn cycle_from(q: OddModulus, a: u64) -> Result<Cycle> {
    validate_residue(q, a)?;
    let qv = q.get();
    let mut elements = Vec::new();
    let mut steps = Vec::new();
    let mut xi = 0u64;
    let mut x = a;
    loop {
        let (next, k) = step(qv, x);
        elements.push(x);
        steps.push(k);
        xi += u64::from(k);
        x = next;
        if x == a {
            break;
        }
    }
    let min_pos = elements
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    elements.rotate_left(min_pos);
    steps.rotate_left(min_pos);
    Ok(Cycle {
        min: elements[0],
        length: elements.len() as u64,
        xi,
        gcd_with_q: gcd(a, qv),
        elements: Some(elements),
        steps: Some(steps),
    })
}

/// The multiplicative order of 2 modulo `q`, computed by walking the cycle
/// of 1 and summing the step exponents. No modular exponentiation — the
/// independent route for that is [`crate::arith::order2_oracle`].
pub fn epsilon(q: OddModulus) -> u64 {
    let q = q.get();
    let mut xi = 0u64;
    let mut x = 1u64;
    loop {
        let (next, k) = step(q, x);
        xi += u64::from(k);
        x = next;
        if x == 1 {
            return xi;
        }
    }
}

/// [`epsilon`] with an early exit: `None` as soon as the running exponent
/// sum exceeds `cap`. The sum only grows, so this is a cheap way to test
/// `epsilon(q) == cap` without finishing the walk.
pub(crate) fn epsilon_capped(q: OddModulus, cap: u64) -> Option<u64> {
    let q = q.get();
    let mut xi = 0u64;
    let mut x = 1u64;
    loop {
        let (next, k) = step(q, x);
        xi += u64::from(k);
        if xi > cap {
            return None;
        }
        x = next;
        if x == 1 {
            return Some(xi);
        }
    }
}

/// `sum of tau(q + x)` over all odd `x` in `(0, q)`, and whether it equals
/// `q - 1`.
pub fn tau_sum_identity(q: OddModulus) -> (u64, bool) {
    let qv = q.get();
    let mut sum = 0u64;
    let mut x = 1u64;
    while x < qv {
        sum += u64::from(val2(qv + x));
        x += 2;
    }
    (sum, sum == qv - 1)
}

/// Cycle-length histogram: count of cycles per length, ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LengthHistogram(BTreeMap<u64, u64>);

impl LengthHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, length: u64) {
        *self.0.entry(length).or_insert(0) += 1;
    }

    /// `N_k`, zero for absent lengths.
    pub fn count(&self, length: u64) -> u64 {
        self.0.get(&length).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.0.iter().map(|(&k, &n)| (k, n))
    }

    pub fn lengths(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of cycles counted.
    pub fn cycle_count(&self) -> u64 {
        self.0.values().sum()
    }

    /// `sum of k * N_k`: the number of elements the counted cycles cover.
    pub fn covered(&self) -> u64 {
        self.0.iter().map(|(&k, &n)| k * n).sum()
    }
}

impl FromIterator<(u64, u64)> for LengthHistogram {
    fn from_iter<T: IntoIterator<Item = (u64, u64)>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// What [`decompose`] stores per cycle beyond the scalar summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementPolicy {
    /// Keep every element and step list.
    KeepAll,
    /// Keep lists for all cycles when `q <= 10^6`, otherwise only for cycles
    /// of length at most `10^4`. Statistics stay exact either way.
    Auto,
    /// Keep no lists.
    Drop,
}

#[derive(Debug, Clone, Copy)]
pub struct DecomposeOptions {
    pub elements: ElementPolicy,
    pub max_memory_bytes: u64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            elements: ElementPolicy::Auto,
            max_memory_bytes: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// The complete partition of `G_q` into cycles.
///
/// `cycles` is sorted by cycle minimum. `phi` is twice the number of
/// elements lying on irreducible cycles (the odd residues coprime to `q` are
/// exactly half of all residues coprime to `q`), so it is derived from the
/// walk itself and can be cross-checked against
/// [`crate::arith::euler_totient`].
#[derive(Debug, Clone)]
pub struct CycleDecomposition {
    pub q: OddModulus,
    pub phi: u64,
    pub epsilon: u64,
    pub irreducible_count: u64,
    pub cycles: Vec<Cycle>,
    pub histogram: LengthHistogram,
    pub irreducible_histogram: LengthHistogram,
}

/// Summary statistics of a full decomposition, without per-cycle storage.
///
/// This is what the conjecture checkers and sweep harness use; its memory
/// footprint is the visited bitmap alone, so it scales to moduli in the
/// billions.
#[derive(Debug, Clone)]
pub struct DecompositionStats {
    pub q: OddModulus,
    pub phi: u64,
    pub epsilon: u64,
    pub cycle_count: u64,
    pub irreducible_count: u64,
    pub xi_total: u64,
    pub histogram: LengthHistogram,
    pub irreducible_histogram: LengthHistogram,
    /// For each length present in the histogram, the minimum element of the
    /// first cycle of that length (in seed order) — enough to name a witness
    /// without storing every cycle.
    pub first_min_by_length: BTreeMap<u64, u64>,
}

#[derive(Debug, Clone, Copy)]
struct CycleSummary {
    min: u64,
    length: u64,
    xi: u64,
    gcd_with_q: u64,
}

trait CycleSink {
    /// Called once per element, in cycle order starting at the minimum.
    fn element(&mut self, x: u64, step: u32);
    fn finish(&mut self, summary: CycleSummary);
}

struct StatsSink {
    epsilon: u64,
    xi_total: u64,
    coprime_elements: u64,
    cycle_count: u64,
    irreducible_count: u64,
    histogram: LengthHistogram,
    irreducible_histogram: LengthHistogram,
    first_min_by_length: BTreeMap<u64, u64>,
}

impl StatsSink {
    fn new() -> Self {
        Self {
            epsilon: 0,
            xi_total: 0,
            coprime_elements: 0,
            cycle_count: 0,
            irreducible_count: 0,
            histogram: LengthHistogram::new(),
            irreducible_histogram: LengthHistogram::new(),
            first_min_by_length: BTreeMap::new(),
        }
    }
}

impl CycleSink for StatsSink {
    #[inline(always)]
    fn element(&mut self, _x: u64, _step: u32) {}

    fn finish(&mut self, s: CycleSummary) {
        if s.min == 1 {
            // The cycle of 1 is irreducible; its xi is the order of 2.
            self.epsilon = s.xi;
        }
        self.xi_total += s.xi;
        self.cycle_count += 1;
        self.histogram.record(s.length);
        self.first_min_by_length.entry(s.length).or_insert(s.min);
        if s.gcd_with_q == 1 {
            self.coprime_elements += s.length;
            self.irreducible_count += 1;
            self.irreducible_histogram.record(s.length);
        }
    }
}

struct CollectSink {
    q: u64,
    policy: ElementPolicy,
    stats: StatsSink,
    cycles: Vec<Cycle>,
    elements: Vec<u64>,
    steps: Vec<u32>,
    collecting: bool,
}

impl CollectSink {
    fn new(q: u64, policy: ElementPolicy) -> Self {
        Self {
            q,
            policy,
            stats: StatsSink::new(),
            cycles: Vec::new(),
            elements: Vec::new(),
            steps: Vec::new(),
            collecting: policy != ElementPolicy::Drop,
        }
    }
}

impl CycleSink for CollectSink {
    #[inline]
    fn element(&mut self, x: u64, step: u32) {
        if self.collecting {
            self.elements.push(x);
            self.steps.push(step);
            if self.policy == ElementPolicy::Auto
                && self.q > AUTO_KEEP_Q
                && self.elements.len() > AUTO_KEEP_LEN
            {
                // Too long to retain under Auto; stop collecting this cycle.
                self.elements.clear();
                self.steps.clear();
                self.collecting = false;
            }
        }
    }

    fn finish(&mut self, s: CycleSummary) {
        let (elements, steps) = if self.collecting {
            (
                Some(std::mem::take(&mut self.elements)),
                Some(std::mem::take(&mut self.steps)),
            )
        } else {
            self.elements.clear();
            self.steps.clear();
            (None, None)
        };
        self.cycles.push(Cycle {
            min: s.min,
            length: s.length,
            xi: s.xi,
            gcd_with_q: s.gcd_with_q,
            elements,
            steps,
        });
        self.collecting = self.policy != ElementPolicy::Drop;
        self.stats.finish(s);
    }
}

/// Bitmap over the odd residues of `(0, q)`, indexed by `(x - 1) / 2`.
struct OddBitmap(Vec<u64>);

impl OddBitmap {
    fn new(residues: u64) -> Self {
        Self(vec![0u64; residues.div_ceil(64) as usize])
    }

    #[inline(always)]
    fn get(&self, idx: u64) -> bool {
        self.0[(idx / 64) as usize] & (1 << (idx % 64)) != 0
    }

    #[inline(always)]
    fn set(&mut self, idx: u64) {
        self.0[(idx / 64) as usize] |= 1 << (idx % 64);
    }
}

fn bitmap_bytes(residues: u64) -> u64 {
    residues.div_ceil(64) * 8
}

/// Conservative allocation estimate for a decomposition of `q`.
fn estimate_bytes(q: OddModulus, policy: ElementPolicy) -> u64 {
    let residues = q.residue_count();
    let per_element: u64 = match policy {
        ElementPolicy::Drop => 0,
        // u64 element + u32 step per entry; Auto is charged like KeepAll
        // since cycle lengths are unknown before the walk.
        ElementPolicy::KeepAll | ElementPolicy::Auto => 12,
    };
    bitmap_bytes(residues).saturating_add(residues.saturating_mul(per_element))
}

fn check_budget(q: OddModulus, policy: ElementPolicy, budget: u64) -> Result<()> {
    let required = estimate_bytes(q, policy);
    if required > budget {
        return Err(Error::MemoryBudget {
            q: q.get(),
            required,
            budget,
        });
    }
    Ok(())
}

/// Walk every cycle of `q` once. Seeds are scanned in increasing odd order,
/// so each new seed is the minimum of its cycle and cycles are emitted
/// sorted by minimum.
fn walk_all<S: CycleSink>(q: OddModulus, sink: &mut S) {
    let qv = q.get();
    let residues = q.residue_count();
    let mut visited = OddBitmap::new(residues);
    for idx in 0..residues {
        if visited.get(idx) {
            continue;
        }
        let seed = 2 * idx + 1;
        let g = gcd(seed, qv);
        let mut x = seed;
        let mut length = 0u64;
        let mut xi = 0u64;
        loop {
            let (next, k) = step(qv, x);
            visited.set((x - 1) / 2);
            sink.element(x, k);
            length += 1;
            xi += u64::from(k);
            x = next;
            if x == seed {
                break;
            }
        }
        sink.finish(CycleSummary {
            min: seed,
            length,
            xi,
            gcd_with_q: g,
        });
    }
}

/// Decompose `G_q` into cycles.
///
/// Refuses up front (with the required byte count) when the estimated
/// allocation exceeds `opts.max_memory_bytes`.
pub fn decompose(q: OddModulus, opts: &DecomposeOptions) -> Result<CycleDecomposition> {
    check_budget(q, opts.elements, opts.max_memory_bytes)?;
    let mut sink = CollectSink::new(q.get(), opts.elements);
    walk_all(q, &mut sink);
    debug_assert_eq!(sink.stats.histogram.covered(), q.residue_count());
    Ok(CycleDecomposition {
        q,
        phi: 2 * sink.stats.coprime_elements,
        epsilon: sink.stats.epsilon,
        irreducible_count: sink.stats.irreducible_count,
        cycles: sink.cycles,
        histogram: sink.stats.histogram,
        irreducible_histogram: sink.stats.irreducible_histogram,
    })
}

/// Decomposition statistics only; memory use is the visited bitmap.
pub fn decompose_stats(q: OddModulus, max_memory_bytes: u64) -> Result<DecompositionStats> {
    check_budget(q, ElementPolicy::Drop, max_memory_bytes)?;
    let mut sink = StatsSink::new();
    walk_all(q, &mut sink);
    debug_assert_eq!(sink.histogram.covered(), q.residue_count());
    Ok(DecompositionStats {
        q,
        phi: 2 * sink.coprime_elements,
        epsilon: sink.epsilon,
        cycle_count: sink.cycle_count,
        irreducible_count: sink.irreducible_count,
        xi_total: sink.xi_total,
        histogram: sink.histogram,
        irreducible_histogram: sink.irreducible_histogram,
        first_min_by_length: sink.first_min_by_length,
    })
}
