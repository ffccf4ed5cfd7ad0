//! Cycle calculus on odd moduli.
//!
//! For an odd `q > 1`, the map `a -> (q + a) / 2^t` (with `t` chosen so the
//! result is odd) permutes the odd residues in `(0, q)` and partitions them
//! into cycles. This crate computes those cycles and everything built on
//! them:
//!
//! - [`cycles`] — the successor map, single cycles, and the full
//!   decomposition of all odd residues below `q`, plus the orbit-walk
//!   algorithm for the multiplicative order of 2 modulo `q`.
//! - [`group`] — the binary operation `(a, b) -> (ab - sq) / 2^t` on odd
//!   residues coprime to `q`, the quotient of cycles it induces, and an
//!   empirical verifier for the commutative-group axioms.
//! - [`conjectures`] — checkers and range screeners for two conjectured
//!   cycle symmetries: divisors of `2^(2^n) + 1` have all cycles of length
//!   `2^n`, and divisors of `2^p - 1` (p prime) have mirror-symmetric
//!   cycle-length counts.
//! - [`arith`] — elementary kernels (valuations, factorization, totient,
//!   multiplicative order by direct powering) used as independent oracles
//!   for everything above.
//! - [`sweep`] — a batch harness that re-verifies the identities over dense
//!   ranges of moduli, optionally in parallel (feature `parallel`).
//!
//! The `oddcycle` binary exposes all of this on the command line.

pub mod arith;
pub mod conjectures;
pub mod cycles;
mod error;
pub mod group;
pub mod output;
mod par;
pub mod sweep;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
