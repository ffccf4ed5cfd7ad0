//! Batch verification over ranges of odd moduli.
//!
//! Each modulus gets an independent bundle of checks; results come back in
//! ascending order no matter how many workers run them, so sweep output is
//! reproducible byte for byte.

use std::time::{Duration, Instant};

use crate::arith::{euler_totient, legendre_tau_ratio, order2_oracle};
use crate::cycles::{self, OddModulus, DEFAULT_MEMORY_BUDGET};
use crate::group::{verify_group_axioms, AxiomBudgets, AxiomMode};
use crate::par::map_odd_range;
use crate::{Error, Result};

/// One verifiable identity in the sweep bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepCheck {
    /// Orbit-walk order equals the order oracle.
    Order,
    /// The tau sum over all residues equals `q - 1` and the Legendre-sum
    /// route agrees.
    Tau,
    /// Irreducible cycle count equals `phi(q) / epsilon(q)`.
    Prop3,
    /// Sampled group-axiom verification on the classes.
    Group,
}

impl SweepCheck {
    pub fn name(self) -> &'static str {
        match self {
            SweepCheck::Order => "order",
            SweepCheck::Tau => "tau",
            SweepCheck::Prop3 => "prop3",
            SweepCheck::Group => "group",
        }
    }
}

/// Which checks a sweep runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckSet {
    pub order: bool,
    pub tau: bool,
    pub prop3: bool,
    pub group: bool,
}

impl Default for CheckSet {
    /// The cheap identity bundle; group axioms are opt-in.
    fn default() -> Self {
        Self { order: true, tau: true, prop3: true, group: false }
    }
}

impl CheckSet {
    pub fn all() -> Self {
        Self { order: true, tau: true, prop3: true, group: true }
    }

    pub fn none() -> Self {
        Self { order: false, tau: false, prop3: false, group: false }
    }

    pub fn only(check: SweepCheck) -> Self {
        let mut set = Self::none();
        set.enable(check);
        set
    }

    pub fn enable(&mut self, check: SweepCheck) {
        match check {
            SweepCheck::Order => self.order = true,
            SweepCheck::Tau => self.tau = true,
            SweepCheck::Prop3 => self.prop3 = true,
            SweepCheck::Group => self.group = true,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.order || self.tau || self.prop3 || self.group)
    }

    /// Parse a comma-separated list: `order,tau,prop3,group` or `all`.
    pub fn parse(list: &str) -> std::result::Result<Self, String> {
        let mut set = Self::none();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "order" => set.order = true,
                "tau" => set.tau = true,
                "prop3" => set.prop3 = true,
                "group" => set.group = true,
                "all" => set = Self::all(),
                other => return Err(format!("unknown check '{other}'")),
            }
        }
        if set.is_empty() {
            return Err("no checks selected".into());
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    Skipped(String),
}

impl CheckOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, CheckOutcome::Fail(_))
    }
}

/// Outcome of the check bundle for a single modulus.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub q: u64,
    pub outcomes: Vec<(SweepCheck, CheckOutcome)>,
    pub elapsed: Duration,
}

impl SweepResult {
    pub fn failed(&self) -> bool {
        self.outcomes.iter().any(|(_, o)| o.is_fail())
    }

    /// The first failure, if any.
    pub fn first_failure(&self) -> Option<(SweepCheck, &str)> {
        self.outcomes.iter().find_map(|(c, o)| match o {
            CheckOutcome::Fail(msg) => Some((*c, msg.as_str())),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub checks: CheckSet,
    /// Worker threads; 0 means all available.
    pub workers: usize,
    /// Seed for the sampled group-axiom check; each modulus derives its own
    /// stream from `(seed, q)`, so results do not depend on scheduling.
    pub seed: u64,
    pub max_memory_bytes: u64,
    /// Trials per modulus for the sampled group-axiom check.
    pub group_trials: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            checks: CheckSet::default(),
            workers: 0,
            seed: 0,
            max_memory_bytes: DEFAULT_MEMORY_BUDGET,
            group_trials: 1000,
        }
    }
}

fn check_order(q: OddModulus) -> CheckOutcome {
    let eps = cycles::epsilon(q);
    let oracle = order2_oracle(q);
    if eps == oracle {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(format!("epsilon = {eps}, oracle = {oracle}"))
    }
}

fn check_tau(q: OddModulus) -> CheckOutcome {
    let (lhs, holds) = cycles::tau_sum_identity(q);
    let legendre = legendre_tau_ratio(q);
    if holds && lhs == legendre {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(format!(
            "tau sum = {lhs}, q - 1 = {}, legendre = {legendre}",
            q.get() - 1
        ))
    }
}

fn check_prop3(q: OddModulus, max_memory_bytes: u64) -> CheckOutcome {
    let stats = match cycles::decompose_stats(q, max_memory_bytes) {
        Ok(s) => s,
        Err(e) => return CheckOutcome::Skipped(e.to_string()),
    };
    let phi = match euler_totient(q) {
        Ok(p) => p,
        Err(e) => return CheckOutcome::Skipped(format!("totient unavailable: {e}")),
    };
    if stats.phi != phi {
        return CheckOutcome::Fail(format!(
            "walk counts phi = {}, factorization gives {phi}",
            stats.phi
        ));
    }
    if phi % stats.epsilon != 0 || stats.irreducible_count != phi / stats.epsilon {
        return CheckOutcome::Fail(format!(
            "{} irreducible cycles, phi/epsilon = {phi}/{} ",
            stats.irreducible_count, stats.epsilon
        ));
    }
    CheckOutcome::Pass
}

fn check_group(q: OddModulus, opts: &SweepOptions) -> CheckOutcome {
    let mode = AxiomMode::Sampled { trials: opts.group_trials };
    match verify_group_axioms(q, mode, opts.seed, &AxiomBudgets::default()) {
        Ok(report) if report.all_pass() => CheckOutcome::Pass,
        Ok(report) => {
            let detail = [
                ("well-defined", &report.well_defined),
                ("associativity", &report.associativity),
                ("commutativity", &report.commutativity),
                ("identity", &report.identity),
                ("inverses", &report.inverses),
            ]
            .iter()
            .find(|(_, c)| !c.pass)
            .map(|(name, c)| {
                format!("{name}: {}", c.witness.clone().unwrap_or_default())
            })
            .unwrap_or_else(|| "unknown axiom failure".into());
            CheckOutcome::Fail(detail)
        }
        Err(e) => CheckOutcome::Skipped(e.to_string()),
    }
}

/// Run the configured bundle on one modulus.
pub fn sweep_one(q: OddModulus, opts: &SweepOptions) -> SweepResult {
    let start = Instant::now();
    let mut outcomes = Vec::new();
    if opts.checks.order {
        outcomes.push((SweepCheck::Order, check_order(q)));
    }
    if opts.checks.tau {
        outcomes.push((SweepCheck::Tau, check_tau(q)));
    }
    if opts.checks.prop3 {
        outcomes.push((SweepCheck::Prop3, check_prop3(q, opts.max_memory_bytes)));
    }
    if opts.checks.group {
        outcomes.push((SweepCheck::Group, check_group(q, opts)));
    }
    SweepResult { q: q.get(), outcomes, elapsed: start.elapsed() }
}

/// Sweep every odd `q` in `[lo, hi]`, in ascending order.
pub fn run_sweep(lo: u64, hi: u64, opts: &SweepOptions) -> Result<Vec<SweepResult>> {
    if lo > hi || lo.is_multiple_of(2) || hi.is_multiple_of(2) || lo < 3 {
        return Err(Error::InvalidRange { lo, hi });
    }
    Ok(map_odd_range(lo, hi, opts.workers, |q| {
        sweep_one(OddModulus::new(q).expect("odd q >= 3"), opts)
    }))
}
