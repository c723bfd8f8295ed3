//! Integer primitives shared by every formula in the crate.
//!
//! All coefficients are [`BigInt`]; small indices (exponents, edge counts,
//! grid positions) stay in `i64`.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

pub use num_bigint::BigInt as Integer;

/// Binomial coefficient with the convention that it vanishes unless
/// `0 <= k <= a`. In particular `binom(a, k) = 0` for every negative `a`
/// and `k >= 1`; this is *not* the generalized binomial.
///
/// Computed by the multiplicative formula, dividing exactly at every step.
pub fn binom(a: i64, k: i64) -> BigInt {
    if k < 0 || a < 0 || k > a {
        return BigInt::zero();
    }
    let k = k.min(a - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc * (a - i) is a product of i+1 consecutive integers, divisible by (i+1)!
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// `[a]_+ = max(a, 0)`.
#[inline]
pub fn plus_part(a: i64) -> i64 {
    a.max(0)
}

/// `[a]_+` for unbounded integers.
pub fn plus_part_big(a: &BigInt) -> BigInt {
    if a.sign() == Sign::Minus {
        BigInt::zero()
    } else {
        a.clone()
    }
}

/// Row of binomials `binom(n + k - 1, k)` for `k = 0..len`, i.e. the
/// coefficients of `(1 - t)^{-n}` truncated by the zero convention: for
/// `n <= 0` the whole row vanishes.
pub(crate) fn multiset_row(n: i64, len: usize) -> Vec<BigInt> {
    if n <= 0 {
        return vec![BigInt::zero(); len];
    }
    let mut row = Vec::with_capacity(len);
    let mut cur = BigInt::one();
    for k in 0..len as i64 {
        if k > 0 {
            cur *= n + k - 1;
            cur /= k;
        }
        row.push(cur.clone());
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binom_examples() {
        assert_eq!(binom(-1, 1), BigInt::zero());
        assert_eq!(binom(3, 2), BigInt::from(3));
        assert_eq!(binom(5, 0), BigInt::one());
        assert_eq!(binom(0, 0), BigInt::one());
        assert_eq!(binom(-1, 0), BigInt::zero());
        assert_eq!(binom(4, 5), BigInt::zero());
        assert_eq!(binom(4, -1), BigInt::zero());
    }

    #[test]
    fn binom_negative_top_vanishes() {
        for a in -20..=-1 {
            for k in 1..=20 {
                assert!(binom(a, k).is_zero(), "binom({a},{k})");
            }
        }
    }

    #[test]
    fn binom_beyond_u64() {
        // C(100, 50) = 100891344545564193334812497256
        assert_eq!(binom(100, 50).to_string(), "100891344545564193334812497256");
    }

    #[test]
    fn plus_part_examples() {
        assert_eq!(plus_part(3), 3);
        assert_eq!(plus_part(-2), 0);
        assert_eq!(plus_part(0), 0);
        assert_eq!(plus_part_big(&BigInt::from(-7)), BigInt::zero());
        assert_eq!(plus_part_big(&BigInt::from(7)), BigInt::from(7));
    }

    #[test]
    fn multiset_row_matches_binom() {
        for n in -4..9 {
            let row = multiset_row(n, 12);
            for (k, v) in row.iter().enumerate() {
                assert_eq!(*v, binom(n + k as i64 - 1, k as i64), "n={n} k={k}");
            }
        }
    }

    proptest! {
        #[test]
        fn pascal(a in 0i64..200, k in 0i64..200) {
            prop_assume!(k <= a);
            prop_assert_eq!(binom(a, k) + binom(a, k + 1), binom(a + 1, k + 1));
        }

        #[test]
        fn plus_part_reflection(a in any::<i32>()) {
            let a = a as i64;
            prop_assert_eq!(plus_part(a) - a, plus_part(-a));
        }
    }
}
