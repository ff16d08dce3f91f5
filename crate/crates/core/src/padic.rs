//! Exact p-adic valuation arithmetic for an odd prime.
//!
//! Everything here works on machine integers. Big integers only appear in
//! the fallback of [`PrimeContext::val_power_diff`] for the rare base whose
//! order-power agrees with 1 beyond the precision of a `u64` modulus.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A p-adic valuation, with `Infinite` standing for the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// Finite value, panicking on the sentinel. Only for call sites where
    /// the argument is known to be non-zero.
    pub fn unwrap_finite(self) -> u32 {
        self.finite().expect("valuation of zero is infinite")
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl Add<u32> for Valuation {
    type Output = Valuation;

    fn add(self, rhs: u32) -> Valuation {
        self + Valuation::Finite(rhs)
    }
}

impl From<u32> for Valuation {
    fn from(v: u32) -> Self {
        Valuation::Finite(v)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_u32(*v),
            Valuation::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// An odd prime together with its smallest primitive root modulo `p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeContext {
    p: u64,
    k0: u64,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if p > u32::MAX as u64 {
            return Err(Error::PrimeTooLarge(p));
        }
        let k0 = primitive_root_mod_p2(p)?;
        Ok(PrimeContext { p, k0 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Smallest `k >= 2` generating `(Z/p^2)^*`.
    pub fn k0(&self) -> u64 {
        self.k0
    }

    /// `e(n)`: exponent of `p` in `n`, sign ignored.
    pub fn val(&self, n: i64) -> Valuation {
        self.val_u(n.unsigned_abs())
    }

    pub fn val_u(&self, mut n: u64) -> Valuation {
        if n == 0 {
            return Valuation::Infinite;
        }
        let mut f = 0;
        while n.is_multiple_of(self.p) {
            n /= self.p;
            f += 1;
        }
        Valuation::Finite(f)
    }

    pub fn val_big(&self, n: &BigUint) -> Valuation {
        if n.is_zero() {
            return Valuation::Infinite;
        }
        let p = BigUint::from(self.p);
        let mut n = n.clone();
        let mut f = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            f += 1;
        }
        Valuation::Finite(f)
    }

    /// `s_p(n)`, the base-p digit sum.
    pub fn digit_sum(&self, mut n: u64) -> u64 {
        let mut s = 0;
        while n > 0 {
            s += n % self.p;
            n /= self.p;
        }
        s
    }

    /// `e(n!)` as the sum of `floor(n / p^k)`.
    pub fn legendre_sum(&self, n: u64) -> u64 {
        let mut total = 0;
        let mut q = n / self.p;
        while q > 0 {
            total += q;
            q /= self.p;
        }
        total
    }

    /// `e(n!)` as `(n - s_p(n)) / (p - 1)`.
    pub fn legendre_digit_form(&self, n: u64) -> u64 {
        (n - self.digit_sum(n)) / (self.p - 1)
    }

    /// `e(n!)`, computed by both closed forms.
    ///
    /// The two forms are required to agree; a disagreement is an internal
    /// arithmetic fault and panics.
    pub fn val_factorial(&self, n: u64) -> u64 {
        let by_sum = self.legendre_sum(n);
        let by_digits = self.legendre_digit_form(n);
        assert_eq!(by_sum, by_digits, "Legendre forms disagree at n = {n}");
        by_sum
    }

    /// `nu(n)`: the valuation of `k0^n - 1`, which is `e(n) + 1` when
    /// `(p - 1) | n` and 0 otherwise. Sign ignored; `nu(0)` is infinite.
    pub fn nu(&self, n: i64) -> Valuation {
        let n = n.unsigned_abs();
        if n == 0 {
            return Valuation::Infinite;
        }
        if !n.is_multiple_of(self.p - 1) {
            return Valuation::Finite(0);
        }
        self.val_u(n) + 1
    }

    /// Exact `e(k^a - k^b)` for `k >= 2`, without big integers on the
    /// common path (order of `k` mod `p` plus lifting the exponent).
    pub fn val_power_diff(&self, k: u64, a: u64, b: u64) -> Result<Valuation> {
        if k < 2 {
            return Err(Error::BaseTooSmall(k));
        }
        if a == b {
            return Ok(Valuation::Infinite);
        }
        let d = a.abs_diff(b);
        let lower = a.min(b);
        let ek = self.val_u(k).unwrap_finite();
        if ek > 0 {
            // k^lower (k^d - 1) with k^d - 1 a unit.
            return Ok(Valuation::Finite(ek * lower as u32));
        }
        let t = multiplicative_order(k % self.p, self.p);
        if !d.is_multiple_of(t) {
            return Ok(Valuation::Finite(0));
        }
        Ok(Valuation::Finite(self.val_order_power_minus_one(k, t) + self.val_u(d).unwrap_finite()))
    }

    /// `e(k^t - 1)` where `t` is the order of `k` mod `p`.
    fn val_order_power_minus_one(&self, k: u64, t: u64) -> u32 {
        let (modulus, precision) = self.max_power_in_u64();
        let r = mod_pow(k % modulus, t, modulus);
        let diff = (r + modulus - 1) % modulus;
        if diff != 0 {
            return self.val_u(diff).unwrap_finite();
        }
        // k^t agrees with 1 to full u64 precision; finish exactly.
        let big = BigUint::from(k).pow(t as u32) - BigUint::one();
        let v = self.val_big(&big).unwrap_finite();
        debug_assert!(v >= precision);
        v
    }

    fn max_power_in_u64(&self) -> (u64, u32) {
        let mut m = self.p;
        let mut c = 1;
        while let Some(next) = m.checked_mul(self.p) {
            if next > (1u64 << 62) {
                break;
            }
            m = next;
            c += 1;
        }
        (m, c)
    }

    /// Minimum of `e(k^t1 - k^t2)` over all bases `k >= 2`:
    /// `min(nu(|t1 - t2|), min(t1, t2))`. The first branch is attained at
    /// `k = k0`, the second at `k = p`. Infinite when `t1 == t2`.
    pub fn pair_min_val(&self, t1: u64, t2: u64) -> Valuation {
        if t1 == t2 {
            return Valuation::Infinite;
        }
        let diff = t1.abs_diff(t2) as i64;
        self.nu(diff).min(Valuation::Finite(t1.min(t2) as u32))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Order of `a` in `(Z/n)^*`; `a` must be a unit mod `n`.
pub fn multiplicative_order(a: u64, n: u64) -> u64 {
    let phi = euler_phi(n);
    let mut order = phi;
    for q in prime_factors(phi) {
        while order.is_multiple_of(q) && mod_pow(a, order / q, n) == 1 {
            order /= q;
        }
    }
    order
}

fn euler_phi(n: u64) -> u64 {
    prime_factors(n).into_iter().fold(n, |acc, q| acc / q * (q - 1))
}

/// Smallest `k >= 2` of order `p(p - 1)` modulo `p^2`. Such a `k` is a
/// primitive root modulo every power of `p`.
pub fn primitive_root_mod_p2(p: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let p2 = p * p;
    let group = p * (p - 1);
    let factors = prime_factors(group);
    (2..p2)
        .filter(|k| k % p != 0)
        .find(|&k| factors.iter().all(|&q| mod_pow(k, group / q, p2) != 1))
        .ok_or(Error::NotOddPrime(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn big_val(ctx: &PrimeContext, k: u64, a: u64, b: u64) -> Valuation {
        let diff = BigInt::from(k).pow(a as u32) - BigInt::from(k).pow(b as u32);
        ctx.val_big(diff.magnitude())
    }

    #[test]
    fn val_examples() {
        let c = ctx(3);
        assert_eq!(c.val(27), Valuation::Finite(3));
        assert_eq!(c.val(7), Valuation::Finite(0));
        assert_eq!(c.val(0), Valuation::Infinite);
        assert_eq!(c.val(-54), Valuation::Finite(3));
    }

    #[test]
    fn sentinel_arithmetic() {
        let inf = Valuation::Infinite;
        assert!(inf > Valuation::Finite(u32::MAX));
        assert_eq!(inf + 4, inf);
        assert_eq!(inf.min(Valuation::Finite(9)), Valuation::Finite(9));
    }

    #[test]
    fn digit_sum_examples() {
        let c = ctx(3);
        assert_eq!(c.digit_sum(9), 1);
        assert_eq!(c.digit_sum(2), 2);
        assert_eq!(c.digit_sum(17), 5);
    }

    #[test]
    fn val_factorial_examples() {
        assert_eq!(ctx(3).val_factorial(2), 0);
        assert_eq!(ctx(3).val_factorial(9), 4);
        assert_eq!(ctx(5).val_factorial(25), 6);
        // 9! = 362880 = 3^4 * 4480
        assert_eq!(ctx(3).val(362880), Valuation::Finite(4));
    }

    #[test]
    fn nu_examples() {
        let c = ctx(3);
        assert_eq!(c.nu(3), Valuation::Finite(0));
        assert_eq!(c.nu(2), Valuation::Finite(1));
        assert_eq!(c.nu(18), Valuation::Finite(3));
        assert_eq!(c.val(262143), Valuation::Finite(3));
        assert_eq!(c.nu(0), Valuation::Infinite);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root_mod_p2(3).unwrap(), 2);
        assert_eq!(primitive_root_mod_p2(5).unwrap(), 2);
        assert_eq!(primitive_root_mod_p2(7).unwrap(), 3);
        assert_eq!(mod_pow(2, 6, 9), 1);
        assert_ne!(mod_pow(3, 6, 49), 1);
        assert!(primitive_root_mod_p2(9).is_err());
        assert!(PrimeContext::new(2).is_err());
        for p in [3u64, 5, 7, 11, 13, 29, 31, 37] {
            let k = primitive_root_mod_p2(p).unwrap();
            assert_eq!(multiplicative_order(k, p * p), p * (p - 1));
        }
    }

    #[test]
    fn val_power_diff_examples() {
        let c = ctx(3);
        assert_eq!(c.val_power_diff(2, 9, 27).unwrap(), Valuation::Finite(3));
        assert_eq!(c.val_power_diff(3, 2, 5).unwrap(), Valuation::Finite(2));
        assert_eq!(c.val_power_diff(4, 1, 2).unwrap(), Valuation::Finite(1));
        assert_eq!(c.val_power_diff(5, 7, 7).unwrap(), Valuation::Infinite);
        assert!(c.val_power_diff(1, 2, 3).is_err());
    }

    #[test]
    fn val_power_diff_high_precision_fallback() {
        // k = 1 + 3^39 agrees with 1 far beyond the u64 modulus.
        let c = ctx(3);
        let k = 1 + 3u64.pow(39);
        let got = c.val_power_diff(k, 1, 4).unwrap();
        assert_eq!(got, big_val(&c, k, 4, 1));
        assert_eq!(got, Valuation::Finite(40));
    }

    #[test]
    fn pair_min_val_examples() {
        let c = ctx(3);
        assert_eq!(c.pair_min_val(9, 27), Valuation::Finite(3));
        assert_eq!(c.pair_min_val(2, 4), Valuation::Finite(1));
        assert_eq!(c.pair_min_val(4, 7), Valuation::Finite(0));
        assert_eq!(c.pair_min_val(5, 5), Valuation::Infinite);
    }

    #[test]
    fn val_power_diff_matches_bigint() {
        for p in [3u64, 5, 7] {
            let c = ctx(p);
            for k in 2..=30u64 {
                for a in 1..=40u64 {
                    for b in [1u64, 3, 8, 17, 40] {
                        assert_eq!(
                            c.val_power_diff(k, a, b).unwrap(),
                            big_val(&c, k, a, b),
                            "p={p} k={k} a={a} b={b}"
                        );
                    }
                }
            }
        }
    }
}
