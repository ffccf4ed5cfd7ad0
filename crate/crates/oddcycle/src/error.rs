use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not an odd number greater than 1")]
    InvalidModulus(u64),

    #[error("modulus {0} exceeds the supported range (q must satisfy q < 2^63)")]
    ModulusTooLarge(u64),

    #[error("{x} is not an odd residue in (0, {q})")]
    ElementOutOfRange { q: u64, x: u64 },

    #[error("{x} is not coprime to {q} (gcd = {g})")]
    NotCoprime { q: u64, x: u64, g: u64 },

    #[error("2-adic valuation of 0 is undefined")]
    ZeroValuation,

    #[error("cannot factorize {0}: input must be at least 2")]
    FactorizeRange(u64),

    #[error("trial division left an unfactored composite cofactor {0}")]
    UnfactoredCofactor(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("binomial index {k} out of range for p = {p} (need 1 <= k <= p-1)")]
    IndexOutOfRange { p: u64, k: u64 },

    #[error("exact arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("Fermat index {0} out of range (F_n fits the modulus limit only for n <= 5)")]
    FermatIndexTooLarge(u32),

    #[error("Mersenne exponent {0} out of range (2^p - 1 must stay below 2^63)")]
    MersenneExponentTooLarge(u64),

    #[error("decomposition of q = {q} needs about {required} bytes, over the {budget}-byte budget")]
    MemoryBudget { q: u64, required: u64, budget: u64 },

    #[error("exhaustive axiom check for q = {q} needs {required} trials, over the {budget}-trial budget")]
    TrialBudget { q: u64, required: u128, budget: u128 },

    #[error("invalid range [{lo}, {hi}]: endpoints must be odd with lo <= hi")]
    InvalidRange { lo: u64, hi: u64 },
}
