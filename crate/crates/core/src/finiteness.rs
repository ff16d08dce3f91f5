//! Effective degree bound beyond which the ψ-condition eliminates every type
//! of a given rank.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinitenessBound {
    pub p: u64,
    pub r: u64,
    /// Number of non-constant monomials of word length at most `p`.
    pub n: u64,
    /// Least `M0` with `n (floor(log_p(2(p-1)m)) + 1) < m` for every `m >= M0`.
    pub m0: u64,
    /// Last half-degree inspected by the scan; beyond it the tail argument applies.
    pub horizon: u64,
    pub tail: String,
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// `sum_{l=1}^{p} C(r + l - 1, l)`.
pub fn monomial_count(p: u64, r: u64) -> Result<u64> {
    check_prime(p)?;
    if r == 0 {
        return Err(Error::OutOfRange("rank must be at least 1".into()));
    }
    let mut total: u64 = 0;
    let mut c: u64 = 1;
    for l in 1..=p {
        // C(r + l - 1, l) = C(r + l - 2, l - 1) (r + l - 1) / l
        c = c
            .checked_mul(r + l - 1)
            .map(|v| v / l)
            .ok_or_else(|| Error::OutOfRange(format!("monomial count overflows for p = {p}, r = {r}")))?;
        total = total
            .checked_add(c)
            .ok_or_else(|| Error::OutOfRange(format!("monomial count overflows for p = {p}, r = {r}")))?;
    }
    Ok(total)
}

/// `floor(log_p(x))` for `x >= 1`.
pub fn floor_log(p: u64, x: u64) -> u32 {
    let mut k = 0;
    let mut pow = p;
    while pow <= x {
        k += 1;
        match pow.checked_mul(p) {
            Some(v) => pow = v,
            None => break,
        }
    }
    k
}

/// The right side of the per-class estimate at top half-degree `m`.
pub fn estimate(p: u64, n: u64, m: u64) -> u64 {
    n * (floor_log(p, 2 * (p - 1) * m) as u64 + 1)
}

pub fn rank_bound(p: u64, r: u64) -> Result<FinitenessBound> {
    let n = monomial_count(p, r)?;
    let c = 2 * (p - 1);
    // On the k-th interval, floor(log_p(c m)) = k and the estimate is the
    // constant n (k + 1); the failures there are m <= n (k + 1).
    let start = |k: u32| -> Option<u64> { p.checked_pow(k).map(|v| v.div_ceil(c)) };
    let mut last_fail = 0u64;
    let mut k = 0u32;
    loop {
        let (Some(lo), Some(next)) = (start(k), start(k + 1)) else {
            return Err(Error::OutOfRange(format!("scan for p = {p}, r = {r} left the u64 range")));
        };
        let hi = next - 1;
        let level = n * (k as u64 + 1);
        if lo <= level {
            last_fail = last_fail.max(hi.min(level));
        }
        // Once an interval starts above its level with (p-1) lo >= n + p, every
        // later interval does too: start_{k+1} >= p start_k - p + 1, and the
        // level grows by n.
        if lo > level && (p - 1) * lo >= n + p {
            let tail = format!(
                "from m = {lo} on, every log-breakpoint interval starts above its level n(k+1) \
                 (induction: start_(k+1) >= p start_k - p + 1 and (p-1) start_k >= n + p)"
            );
            return Ok(FinitenessBound { p, r, n, m0: last_fail + 1, horizon: hi, tail });
        }
        k += 1;
    }
}
