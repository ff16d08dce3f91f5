//! Reduced-power calculus at an odd prime and its action on truncated
//! polynomial algebras with unknown coefficients.

pub mod adem;
pub mod poly;
pub mod symbolic;

pub use adem::{
    adem_expand, format_adem, format_sum, format_word, normalize, normalize_sum, verify_adem_instance,
    verify_relation_42, verify_relation_43, PowerWord, Relation42, Relation43,
};
pub use poly::Poly;
pub use symbolic::{Constraint, ConstraintKind, Derivation, Monomial, SolveOutcome, SymbolicElement, Unknown};

use crate::psimod::SpaceType;

/// `C(a, b) mod p` by Lucas' theorem.
pub fn binom_mod_p(mut a: u64, mut b: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while b > 0 {
        let (ad, bd) = (a % p, b % p);
        if bd > ad {
            return 0;
        }
        acc = acc * small_binom(ad, bd, p) % p;
        a /= p;
        b /= p;
    }
    acc
}

fn small_binom(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * inverse_mod(den, p) % p
}

pub(crate) fn inverse_mod(a: u64, p: u64) -> u64 {
    crate::padic::mod_pow(a % p, p - 2, p)
}

/// Whether `d` is the half-degree of a nonzero monomial of the truncated
/// algebra, i.e. a sum of `1..=p` generator half-degrees.
pub fn degree_realizable(space: &SpaceType, d: u32) -> bool {
    space.monomial_degrees().contains_key(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PrimeContext;

    #[test]
    fn lucas_examples() {
        assert_eq!(binom_mod_p(13, 3, 3), 1);
        assert_eq!(binom_mod_p(17, 3, 3), 2);
        assert_eq!(binom_mod_p(5, 0, 3), 1);
        assert_eq!(binom_mod_p(3, 5, 3), 0);
    }

    #[test]
    fn realizable_examples() {
        let ctx = PrimeContext::new(3).unwrap();
        let t = SpaceType::new(ctx, vec![6, 8, 12]).unwrap();
        assert!(degree_realizable(&t, 16));
        assert!(!degree_realizable(&t, 9));
        let single = SpaceType::new(ctx, vec![7]).unwrap();
        assert!(degree_realizable(&single, 7));
    }
}
