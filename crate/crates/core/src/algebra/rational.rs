//! Arbitrary-precision rational numbers.
//!
//! Backed by `num_rational::BigRational`, which keeps every value reduced
//! with a positive denominator — exactly the invariant required here.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Shorthand constructor from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact k-th root of a rational, if one exists in ℚ.
pub fn nth_root_exact(value: &Rational, k: u32) -> Option<Rational> {
    if k == 0 {
        return None;
    }
    if value.is_zero() {
        return Some(Rational::zero());
    }
    if value.is_negative() && k % 2 == 0 {
        return None;
    }
    let root_of = |n: &BigInt| -> Option<BigInt> {
        let r = n.nth_root(k);
        if &r.pow(k) == n {
            Some(r)
        } else {
            None
        }
    };
    let num = value.numer();
    let den = value.denom();
    let rn = if num.is_negative() {
        -root_of(&(-num))?
    } else {
        root_of(num)?
    };
    let rd = root_of(den)?;
    Some(Rational::new(rn, rd))
}

/// Binomial coefficient C(n, k) for integer n (possibly negative), as used by
/// the generalized binomial series.
pub fn binomial_int(n: i64, k: u32) -> Rational {
    binomial_rational(&Rational::from(BigInt::from(n)), k)
}

/// Generalized binomial coefficient C(q, k) = q(q-1)…(q-k+1)/k! for rational q.
pub fn binomial_rational(q: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut factor = q.clone();
    for i in 0..k {
        acc *= &factor / Rational::from(BigInt::from(i as i64 + 1));
        factor -= Rational::one();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_roots() {
        assert_eq!(nth_root_exact(&rat(4, 9), 2), Some(rat(2, 3)));
        assert_eq!(nth_root_exact(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(nth_root_exact(&rat(-4, 9), 2), None);
        assert_eq!(nth_root_exact(&rat(2, 1), 2), None);
        assert_eq!(nth_root_exact(&rat(0, 1), 5), Some(rat(0, 1)));
        assert_eq!(nth_root_exact(&rat(1, 1), 7), Some(rat(1, 1)));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_int(4, 2), rat(6, 1));
        assert_eq!(binomial_int(-1, 3), rat(-1, 1));
        assert_eq!(binomial_int(-2, 2), rat(3, 1));
        // C(1/2, 2) = -1/8 drives the square-root series.
        assert_eq!(binomial_rational(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binomial_rational(&rat(1, 2), 3), rat(1, 16));
        assert_eq!(binomial_rational(&rat(-1, 2), 2), rat(3, 8));
        assert_eq!(binomial_rational(&rat(-1, 2), 3), rat(-5, 16));
    }
}
