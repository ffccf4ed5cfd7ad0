//! The binary operation on odd residues coprime to `q` and the group of
//! cycles it induces.
//!
//! For `a, b` in `G_q*` (odd, in `(0, q)`, coprime to `q`), define
//! `a * b = (ab - sq) / 2^t` where `s = floor(ab / q)` and `t` strips the
//! result to odd. On elements this is only "multiplication mod q up to a
//! power of 2", and indeed it is not associative element-for-element (see
//! [`verify_group_axioms`], which measures this). On cycles it is well
//! defined and turns the set of irreducible cycles into a commutative group
//! of size `phi(q) / epsilon(q)`, with the cycle of 1 as identity. Each
//! cycle is named by its minimum element.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::gcd;
use crate::cycles::{self, DecomposeOptions, ElementPolicy, OddModulus};
use crate::{Error, Result};

/// Largest class count for which [`quotient_group`] will tabulate the full
/// Cayley table by default.
pub const DEFAULT_TABLE_CAP: u64 = 512;

fn validate_unit(q: OddModulus, x: u64) -> Result<()> {
    if x == 0 || x.is_multiple_of(2) || x >= q.get() {
        return Err(Error::ElementOutOfRange { q: q.get(), x });
    }
    let g = gcd(x, q.get());
    if g != 1 {
        return Err(Error::NotCoprime { q: q.get(), x, g });
    }
    Ok(())
}

#[inline(always)]
fn star_unchecked(q: u64, a: u64, b: u64) -> u64 {
    let r = (a as u128 * b as u128 % q as u128) as u64;
    debug_assert!(r != 0);
    r >> r.trailing_zeros()
}

/// `a * b = (ab - sq) / 2^t`, the product reduced into `(0, q)` and stripped
/// to odd. Both inputs must lie in `G_q*`.
pub fn star(q: OddModulus, a: u64, b: u64) -> Result<u64> {
    validate_unit(q, a)?;
    validate_unit(q, b)?;
    Ok(star_unchecked(q.get(), a, b))
}

/// Canonical name of the cycle containing `x`: its minimum element.
pub fn class_of(q: OddModulus, x: u64) -> Result<u64> {
    validate_unit(q, x)?;
    Ok(cycles::cycle_from(q, x)?.min)
}

/// Constant-time class lookup for every element of `G_q*`, built from one
/// decomposition.
pub(crate) struct ClassMap {
    q: u64,
    /// Sorted minimum elements of the irreducible cycles.
    reps: Vec<u64>,
    /// For odd `x`, `rep_index[(x-1)/2]` is the index into `reps` of the
    /// cycle of `x`, or `u32::MAX` if `x` is not coprime to `q`.
    rep_index: Vec<u32>,
}

impl ClassMap {
    pub(crate) fn build(q: OddModulus, max_memory_bytes: u64) -> Result<Self> {
        // Charge the lookup table against the same budget as the walk.
        let table_bytes = q.residue_count().saturating_mul(4);
        let d = cycles::decompose(
            q,
            &DecomposeOptions {
                elements: ElementPolicy::KeepAll,
                max_memory_bytes: max_memory_bytes.saturating_sub(table_bytes),
            },
        )?;
        let mut reps = Vec::new();
        let mut rep_index = vec![u32::MAX; q.residue_count() as usize];
        for c in d.cycles.iter().filter(|c| c.is_irreducible()) {
            let idx = reps.len() as u32;
            reps.push(c.min);
            for &x in c.elements.as_ref().unwrap() {
                rep_index[((x - 1) / 2) as usize] = idx;
            }
        }
        Ok(Self { q: q.get(), reps, rep_index })
    }

    #[inline(always)]
    fn index_of(&self, x: u64) -> u32 {
        self.rep_index[((x - 1) / 2) as usize]
    }

    #[inline(always)]
    fn rep_of(&self, x: u64) -> u64 {
        self.reps[self.index_of(x) as usize]
    }

    /// All elements of `G_q*`, ascending.
    fn units(&self) -> Vec<u64> {
        (0..self.rep_index.len() as u64)
            .filter(|&i| self.rep_index[i as usize] != u32::MAX)
            .map(|i| 2 * i + 1)
            .collect()
    }
}

/// The set of irreducible cycles of `q` under the induced operation.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    pub q: OddModulus,
    /// Sorted canonical representatives; always contains 1.
    pub reps: Vec<u64>,
    /// `table[i * reps.len() + j]` is the index in `reps` of
    /// `class(reps[i] * reps[j])`. `None` when not requested or over the cap.
    pub table: Option<Vec<u32>>,
    /// Set when a requested table was omitted because the class count
    /// exceeded the cap.
    pub table_omitted: bool,
}

impl QuotientGroup {
    pub fn class_count(&self) -> u64 {
        self.reps.len() as u64
    }
}

/// Enumerate the classes of `G_q*`, optionally with the full Cayley table
/// (omitted, with a notice, when there are more than `table_cap` classes).
pub fn quotient_group(q: OddModulus, with_table: bool, table_cap: u64) -> Result<QuotientGroup> {
    let map = ClassMap::build(q, cycles::DEFAULT_MEMORY_BUDGET)?;
    let n = map.reps.len();
    let mut table = None;
    let mut table_omitted = false;
    if with_table {
        if (n as u64) <= table_cap {
            let mut t = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    let prod = star_unchecked(map.q, map.reps[i], map.reps[j]);
                    t[i * n + j] = map.index_of(prod);
                }
            }
            table = Some(t);
        } else {
            table_omitted = true;
        }
    }
    Ok(QuotientGroup {
        q,
        reps: map.reps,
        table,
        table_omitted,
    })
}

/// How [`verify_group_axioms`] explores the space of trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomMode {
    /// Exhaustive where budgets allow, otherwise an error.
    Exhaustive,
    /// Fixed number of seeded random trials per axiom.
    Sampled { trials: u64 },
    /// Exhaustive if within budgets, else sampled with the default trial
    /// count.
    Auto,
}

pub const DEFAULT_SAMPLED_TRIALS: u64 = 10_000;

/// Trial budgets for the exhaustive mode.
#[derive(Debug, Clone, Copy)]
pub struct AxiomBudgets {
    /// Cap on class-level associativity triples (`classes^3`).
    pub class_triples: u64,
    /// Cap on element-level triples (`|G_q*|^3`); beyond it the element-level
    /// associativity measurement falls back to sampling.
    pub element_triples: u64,
}

impl Default for AxiomBudgets {
    fn default() -> Self {
        Self {
            class_triples: 10_000_000,
            element_triples: 100_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub pass: bool,
    pub trials: u64,
    pub witness: Option<String>,
}

impl AxiomCheck {
    fn pass(trials: u64) -> Self {
        Self { pass: true, trials, witness: None }
    }

    fn fail(trials: u64, witness: String) -> Self {
        Self { pass: false, trials, witness: Some(witness) }
    }
}

/// Outcome of checking the five group axioms on the classes of `G_q*`,
/// plus the element-level associativity measurement.
///
/// `element_associativity` is informational: the element-level identity
/// `(x*y)*z == x*(y*z)` can fail while the class-level one holds (the two
/// sides then lie on the same cycle without being equal). It does not count
/// against [`AxiomReport::all_pass`].
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub q: u64,
    pub classes: u64,
    pub exhaustive: bool,
    pub well_defined: AxiomCheck,
    pub associativity: AxiomCheck,
    pub commutativity: AxiomCheck,
    pub identity: AxiomCheck,
    pub inverses: AxiomCheck,
    pub element_associativity: AxiomCheck,
}

impl AxiomReport {
    /// All five group axioms hold.
    pub fn all_pass(&self) -> bool {
        self.well_defined.pass
            && self.associativity.pass
            && self.commutativity.pass
            && self.identity.pass
            && self.inverses.pass
    }
}

/// Seed the per-modulus RNG so results depend only on `(seed, q)`, never on
/// scheduling.
fn rng_for(seed: u64, q: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ q.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Empirically verify that the classes of `G_q*` form a commutative group.
///
/// Checks well-definedness of the induced operation, associativity on
/// classes, commutativity, identity (the class of 1), and existence of
/// inverses; also measures element-level associativity and reports it
/// separately. Exhaustive mode refuses (with the required trial count) when
/// `classes^3` exceeds `budgets.class_triples`.
pub fn verify_group_axioms(
    q: OddModulus,
    mode: AxiomMode,
    seed: u64,
    budgets: &AxiomBudgets,
) -> Result<AxiomReport> {
    let map = ClassMap::build(q, cycles::DEFAULT_MEMORY_BUDGET)?;
    let qv = q.get();
    let units = map.units();
    let classes = map.reps.len() as u64;
    let class_triples = classes.saturating_mul(classes).saturating_mul(classes);
    let unit_count = units.len() as u64;
    let element_triples = unit_count
        .saturating_mul(unit_count)
        .saturating_mul(unit_count);

    let exhaustive = match mode {
        AxiomMode::Exhaustive => {
            if class_triples > budgets.class_triples {
                return Err(Error::TrialBudget {
                    q: qv,
                    required: class_triples as u128,
                    budget: budgets.class_triples as u128,
                });
            }
            true
        }
        AxiomMode::Sampled { .. } => false,
        AxiomMode::Auto => class_triples <= budgets.class_triples,
    };
    let sample_trials = match mode {
        AxiomMode::Sampled { trials } => trials,
        _ => DEFAULT_SAMPLED_TRIALS,
    };

    let star = |a: u64, b: u64| star_unchecked(qv, a, b);
    let rep = |x: u64| map.rep_of(x);

    // Identity: star(1, b) == b exactly (s = 0, t = 0), plus the class view.
    let identity = {
        let mut out = AxiomCheck::pass(unit_count);
        for &b in &units {
            if star(1, b) != b || rep(star(1, b)) != rep(b) {
                out = AxiomCheck::fail(unit_count, format!("1 * {b} != {b}"));
                break;
            }
        }
        out
    };

    // Well-definedness: replacing an element by its class representative
    // never changes the class of a product. By transitivity this covers all
    // pairs of equivalent elements.
    let well_defined = if exhaustive {
        let mut out = AxiomCheck::pass(unit_count * classes);
        'wd: for &x in &units {
            let rx = rep(x);
            for &b in &map.reps {
                if rep(star(x, b)) != rep(star(rx, b)) {
                    out = AxiomCheck::fail(
                        unit_count * classes,
                        format!("class({x} * {b}) != class({rx} * {b}) though {x} ~ {rx}"),
                    );
                    break 'wd;
                }
            }
        }
        out
    } else {
        let mut rng = rng_for(seed, qv ^ 1);
        let pick = Uniform::from(0..units.len());
        let mut out = AxiomCheck::pass(sample_trials);
        for _ in 0..sample_trials {
            let x = units[pick.sample(&mut rng)];
            let b = units[pick.sample(&mut rng)];
            let rx = rep(x);
            if rep(star(x, b)) != rep(star(rx, b)) {
                out = AxiomCheck::fail(
                    sample_trials,
                    format!("class({x} * {b}) != class({rx} * {b}) though {x} ~ {rx}"),
                );
                break;
            }
        }
        out
    };

    // Associativity on classes.
    let associativity = if exhaustive {
        let mut out = AxiomCheck::pass(class_triples);
        'assoc: for &a in &map.reps {
            for &b in &map.reps {
                let ab = star(a, b);
                for &c in &map.reps {
                    if rep(star(ab, c)) != rep(star(a, star(b, c))) {
                        out = AxiomCheck::fail(
                            class_triples,
                            format!("class(({a}*{b})*{c}) != class({a}*({b}*{c}))"),
                        );
                        break 'assoc;
                    }
                }
            }
        }
        out
    } else {
        let mut rng = rng_for(seed, qv ^ 2);
        let pick = Uniform::from(0..units.len());
        let mut out = AxiomCheck::pass(sample_trials);
        for _ in 0..sample_trials {
            let a = units[pick.sample(&mut rng)];
            let b = units[pick.sample(&mut rng)];
            let c = units[pick.sample(&mut rng)];
            if rep(star(star(a, b), c)) != rep(star(a, star(b, c))) {
                out = AxiomCheck::fail(
                    sample_trials,
                    format!("class(({a}*{b})*{c}) != class({a}*({b}*{c}))"),
                );
                break;
            }
        }
        out
    };

    // Element-level associativity, measured over elements (not classes).
    let element_associativity = if exhaustive && element_triples <= budgets.element_triples {
        let mut out = AxiomCheck::pass(element_triples);
        'elem: for &a in &units {
            for &b in &units {
                let ab = star(a, b);
                for &c in &units {
                    if star(ab, c) != star(a, star(b, c)) {
                        out = AxiomCheck::fail(
                            element_triples,
                            format!(
                                "({a}*{b})*{c} = {} but {a}*({b}*{c}) = {}",
                                star(ab, c),
                                star(a, star(b, c))
                            ),
                        );
                        break 'elem;
                    }
                }
            }
        }
        out
    } else {
        let mut rng = rng_for(seed, qv ^ 3);
        let pick = Uniform::from(0..units.len());
        let mut out = AxiomCheck::pass(sample_trials);
        for _ in 0..sample_trials {
            let a = units[pick.sample(&mut rng)];
            let b = units[pick.sample(&mut rng)];
            let c = units[pick.sample(&mut rng)];
            let lhs = star(star(a, b), c);
            let rhs = star(a, star(b, c));
            if lhs != rhs {
                out = AxiomCheck::fail(
                    sample_trials,
                    format!("({a}*{b})*{c} = {lhs} but {a}*({b}*{c}) = {rhs}"),
                );
                break;
            }
        }
        out
    };

    // Commutativity at element level (the formula is symmetric; verify).
    let commutativity = if exhaustive {
        let pairs = unit_count * unit_count;
        let mut out = AxiomCheck::pass(pairs);
        'comm: for &a in &units {
            for &b in &units {
                if star(a, b) != star(b, a) {
                    out = AxiomCheck::fail(pairs, format!("{a}*{b} != {b}*{a}"));
                    break 'comm;
                }
            }
        }
        out
    } else {
        let mut rng = rng_for(seed, qv ^ 4);
        let pick = Uniform::from(0..units.len());
        let mut out = AxiomCheck::pass(sample_trials);
        for _ in 0..sample_trials {
            let a = units[pick.sample(&mut rng)];
            let b = units[pick.sample(&mut rng)];
            if star(a, b) != star(b, a) {
                out = AxiomCheck::fail(sample_trials, format!("{a}*{b} != {b}*{a}"));
                break;
            }
        }
        out
    };

    // Inverses: every class has a partner multiplying into the class of 1.
    // Always exhaustive over classes (quadratic in class count).
    let inverses = {
        let trials = classes * classes;
        let mut out = AxiomCheck::pass(trials);
        for &a in &map.reps {
            let found = map.reps.iter().any(|&b| rep(star(a, b)) == 1);
            if !found {
                out = AxiomCheck::fail(trials, format!("class {a} has no inverse"));
                break;
            }
        }
        out
    };

    Ok(AxiomReport {
        q: qv,
        classes,
        exhaustive,
        well_defined,
        associativity,
        commutativity,
        identity,
        inverses,
        element_associativity,
    })
}

/// Count classes per representative for the cancellation law test:
/// for fixed `a`, `class(b) -> class(a*b)` must permute the classes.
pub fn translation_map(q: OddModulus, a: u64) -> Result<BTreeMap<u64, u64>> {
    validate_unit(q, a)?;
    let map = ClassMap::build(q, cycles::DEFAULT_MEMORY_BUDGET)?;
    Ok(map
        .reps
        .iter()
        .map(|&b| (b, map.rep_of(star_unchecked(q.get(), a, b))))
        .collect())
}
