//! Order-preserving map over a range of odd moduli, parallel when the
//! `parallel` feature is on. Results always come back in ascending modulus
//! order, so output is identical for any worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn odd_range(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).step_by(2)
}

#[cfg(feature = "parallel")]
pub(crate) fn map_odd_range<T, F>(lo: u64, hi: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if workers == 1 {
        return odd_range(lo, hi).map(f).collect();
    }
    let qs: Vec<u64> = odd_range(lo, hi).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers) // 0 = rayon default
        .build();
    match pool {
        Ok(pool) => pool.install(|| qs.into_par_iter().map(f).collect()),
        Err(_) => qs.into_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_odd_range<T, F>(lo: u64, hi: u64, _workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    odd_range(lo, hi).map(f).collect()
}
