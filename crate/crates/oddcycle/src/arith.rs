//! Elementary number-theoretic kernels.
//!
//! Everything here is deliberately independent of the cycle machinery in
//! [`crate::cycles`]: these functions serve as the oracles the cycle-based
//! algorithms are validated against, so they must not share a code path with
//! them. All products go through `u128` intermediates; moduli are capped at
//! `2^63` by [`OddModulus`](crate::cycles::OddModulus) so nothing here can
//! overflow.

use crate::cycles::OddModulus;
use crate::{Error, Result};

/// Trial-division bound used by [`factorize`] before falling back to a
/// primality check on the cofactor.
const TRIAL_DIVISION_LIMIT: u64 = 1 << 21;

/// Largest modulus for which [`order2_oracle`] walks plain doublings instead
/// of factoring the totient first.
const DOUBLING_CUTOFF: u64 = 1 << 22;

/// 2-adic valuation for nonzero `n`, no validation.
#[inline(always)]
pub(crate) fn val2(n: u64) -> u32 {
    debug_assert!(n != 0);
    n.trailing_zeros()
}

/// Largest `t` with `2^t | n`. Zero for odd `n`; `n = 0` is rejected.
pub fn two_adic_valuation(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroValuation);
    }
    Ok(val2(n))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Modular exponentiation with `u128` intermediates.
pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut result = 1u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        exp >>= 1;
        b = b * b % m;
    }
    result as u64
}

/// Deterministic Miller-Rabin, valid for the full `u64` range.
///
/// The base set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} has no strong
/// pseudoprime below 3.3 * 10^24, far past `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = val2(n - 1);
    let d = (n - 1) >> s;
    'base: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// The factored integer, reassembled.
    pub fn value(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product()
    }

    /// Euler's totient of the factored integer.
    pub fn totient(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.pairs {
            let base = divs.clone();
            let mut power = 1u64;
            for _ in 0..e {
                power *= p;
                divs.extend(base.iter().map(|d| d * power));
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Factor `n >= 2` by trial division up to 2^21, then a primality check on
/// whatever is left. Inputs here are desk-scale; a cofactor that is neither 1
/// nor prime (both factors above the trial bound) is reported as an error
/// rather than silently mis-factored.
pub fn factorize(mut n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::FactorizeRange(n));
    }
    let mut pairs = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            pairs.push((p, e));
        }
    };

    let e2 = val2(n);
    n >>= e2;
    push(2, e2);

    let mut d = 3u64;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= n {
        let mut e = 0u32;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        push(d, e);
        d += 2;
    }

    if n > 1 {
        if !is_prime(n) {
            return Err(Error::UnfactoredCofactor(n));
        }
        push(n, 1);
    }
    Ok(Factorization { pairs })
}

/// Euler's totient of `q`, via factorization. Even for every odd `q > 1`.
pub fn euler_totient(q: OddModulus) -> Result<u64> {
    Ok(factorize(q.get())?.totient())
}

fn order2_by_doubling(q: u64) -> u64 {
    let mut x = 2 % q;
    let mut order = 1u64;
    while x != 1 {
        x <<= 1;
        if x >= q {
            x -= q;
        }
        order += 1;
    }
    order
}

fn order2_from_totient(q: u64, phi: u64) -> Result<u64> {
    let mut order = phi;
    for &(p, _) in factorize(phi)?.pairs() {
        while order.is_multiple_of(p) && pow_mod(2, order / p, q) == 1 {
            order /= p;
        }
    }
    Ok(order)
}

/// Multiplicative order of 2 modulo `q`: the smallest `r > 0` with
/// `2^r = 1 (mod q)`.
///
/// This is the independent oracle for the orbit-walk computation in
/// [`crate::cycles::epsilon`]; it never touches cycles. Small moduli walk
/// plain doublings; larger ones refine divisors of the totient, falling back
/// to doublings if the totient cannot be factored.
pub fn order2_oracle(q: OddModulus) -> u64 {
    let q = q.get();
    if q <= DOUBLING_CUTOFF {
        return order2_by_doubling(q);
    }
    match factorize(q).map(|f| f.totient()) {
        Ok(phi) => match order2_from_totient(q, phi) {
            Ok(order) => order,
            Err(_) => order2_by_doubling(q),
        },
        Err(_) => order2_by_doubling(q),
    }
}

/// Exact `(p-1)! / (k! (p-k)!)` for prime `p` and `1 <= k <= p-1`, computed
/// as the binomial `C(p, k)` followed by exact division by `p`. Overflow is
/// reported, never wrapped.
pub fn cycle_count_formula(p: u64, k: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 || k >= p {
        return Err(Error::IndexOutOfRange { p, k });
    }
    // Multiplicative binomial: after i steps the accumulator holds C(p, i)
    // exactly, so every division below is exact.
    let k = k.min(p - k);
    let mut acc = 1u128;
    for i in 1..=k {
        acc = acc
            .checked_mul((p - k + i) as u128)
            .ok_or(Error::Overflow("cycle_count_formula"))?;
        acc /= i as u128;
    }
    debug_assert_eq!(acc % p as u128, 0);
    let out = acc / p as u128;
    u64::try_from(out).map_err(|_| Error::Overflow("cycle_count_formula"))
}

/// `tau((2q-2)! / (q-1)!)` by Legendre's floor sums:
/// `sum_j floor((2q-2)/2^j) - floor((q-1)/2^j)`. Always equals `q - 1`.
pub fn legendre_tau_ratio(q: OddModulus) -> u64 {
    let q = q.get();
    let (mut hi, mut lo) = (2 * q - 2, q - 1);
    let mut sum = 0u64;
    while hi > 0 {
        hi >>= 1;
        lo >>= 1;
        sum += hi - lo;
    }
    sum
}
