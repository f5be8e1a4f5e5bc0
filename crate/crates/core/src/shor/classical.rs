// Copyright 2026 The qcshor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Number theory around the quantum part: inverses, continued fractions and
//! the gcd step that turns a period into factors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, b, m);
        }
        b = mod_mul(b, b, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `b` modulo `n` in `[1, n)` by the extended Euclidean algorithm.
pub fn mod_inverse(b: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("modulus {n} must be at least 2")));
    }
    let (mut r0, mut r1) = (n as i128, (b % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible { b, modulus: n });
    }
    Ok(t0.rem_euclid(n as i128) as u64)
}

/// Order of `a` modulo `n` by direct iteration; for small moduli and tests.
pub fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if gcd(a, n) != 1 {
        return None;
    }
    let mut v = a % n;
    for r in 1..=n {
        if v == 1 {
            return Some(r);
        }
        v = mod_mul(v, a, n);
    }
    None
}

/// Denominators of the convergents of `p/q`, in increasing order.
pub fn convergent_denominators(p: u64, q: u64) -> Vec<u64> {
    let (mut num, mut den) = (p as u128, q as u128);
    let (mut k_prev, mut k) = (1u128, 0u128);
    let mut out = Vec::new();
    while den != 0 {
        let a = num / den;
        (num, den) = (den, num - a * den);
        (k_prev, k) = (k, a * k + k_prev);
        out.push(k);
        if out.len() > 128 {
            break;
        }
    }
    out.dedup();
    out.into_iter().map(|d| d as u64).collect()
}

/// Period candidate from a measured `outcome` of a `bits`-qubit register.
///
/// Walks the convergent denominators `q < n` of `outcome/2^bits` in increasing
/// order and, for each, the multiples `q, 2q, …` below `n`; the first value `r`
/// with `a^r ≡ 1 (mod n)` is returned. Multiples recover the period when the
/// peak index shares a factor with it.
pub fn continued_fraction_period(outcome: u64, bits: u32, n: u64, a: u64) -> Option<u64> {
    if outcome == 0 || bits >= 64 || outcome >> bits != 0 {
        return None;
    }
    for q in convergent_denominators(outcome, 1u64 << bits) {
        if q >= n {
            break;
        }
        let mut r = q;
        while r < n {
            if mod_pow(a, r, n) == 1 {
                return Some(r);
            }
            r += q;
        }
    }
    None
}

/// The stricter reading: the largest convergent denominator below `n` that
/// verifies, with no multiples tried.
pub fn convergent_period_strict(outcome: u64, bits: u32, n: u64, a: u64) -> Option<u64> {
    if outcome == 0 || bits >= 64 || outcome >> bits != 0 {
        return None;
    }
    convergent_denominators(outcome, 1u64 << bits)
        .into_iter()
        .filter(|&q| q < n && mod_pow(a, q, n) == 1)
        .max()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RetryReason {
    OddPeriod,
    /// `a^{r/2} ≡ −1 (mod N)`.
    MinusOne,
    /// Both gcds were trivial (`a^{r/2} ≡ 1`, so `r` was not the order).
    TrivialGcd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Postprocess {
    /// Nontrivial factors, smaller first.
    Factors(u64, u64),
    Retry(RetryReason),
}

/// Turns a period into factors via `gcd(a^{r/2} ± 1, N)`.
pub fn postprocess(r: u64, a: u64, n: u64) -> Postprocess {
    if r == 0 || r % 2 == 1 {
        return Postprocess::Retry(RetryReason::OddPeriod);
    }
    let y = mod_pow(a, r / 2, n);
    if y == n - 1 {
        return Postprocess::Retry(RetryReason::MinusOne);
    }
    for f in [gcd(y + n - 1, n), gcd(y + 1, n)] {
        if f > 1 && f < n {
            let g = n / f;
            return Postprocess::Factors(f.min(g), f.max(g));
        }
    }
    Postprocess::Retry(RetryReason::TrivialGcd)
}

/// True for `n = p^k` with `p` prime and `k ≥ 1`.
pub fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..).take_while(|p| p * p <= n).find(|p| n.is_multiple_of(*p)).unwrap_or(n);
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(11, 21).unwrap(), 2);
        assert_eq!(mod_inverse(1, 21).unwrap(), 1);
        assert_eq!(mod_inverse(4, 5).unwrap(), 4);
        assert!(matches!(mod_inverse(6, 21), Err(Error::NotInvertible { b: 6, modulus: 21 })));
    }

    #[test]
    fn powers() {
        assert_eq!(mod_pow(7, 3, 15), 13);
        assert_eq!(mod_pow(11, 6, 21), 1);
        assert_eq!(mod_pow(5, 0, 7), 1);
        assert_eq!(multiplicative_order(11, 21), Some(6));
        assert_eq!(multiplicative_order(7, 15), Some(4));
    }

    #[test]
    fn convergents() {
        assert_eq!(convergent_denominators(171, 1024), vec![1, 5, 6, 509, 1024]);
        assert_eq!(convergent_denominators(64, 256), vec![1, 4]);
    }

    #[test]
    fn periods() {
        assert_eq!(continued_fraction_period(64, 8, 15, 7), Some(4));
        assert_eq!(continued_fraction_period(0, 8, 15, 7), None);
        assert_eq!(continued_fraction_period(171, 10, 21, 11), Some(6));
        assert_eq!(convergent_period_strict(171, 10, 21, 11), Some(6));
        // 128/256 = 1/2; 7^2 ≠ 1 but the multiple 4 verifies
        assert_eq!(convergent_period_strict(128, 8, 15, 7), None);
        assert_eq!(continued_fraction_period(128, 8, 15, 7), Some(4));
    }

    #[test]
    fn postprocess_examples() {
        assert_eq!(postprocess(4, 7, 15), Postprocess::Factors(3, 5));
        assert_eq!(postprocess(6, 11, 21), Postprocess::Factors(3, 7));
        assert_eq!(postprocess(3, 2, 21), Postprocess::Retry(RetryReason::OddPeriod));
        assert_eq!(postprocess(2, 14, 15), Postprocess::Retry(RetryReason::MinusOne));
        assert_eq!(postprocess(12, 11, 21), Postprocess::Retry(RetryReason::TrivialGcd));
    }

    #[test]
    fn prime_powers() {
        assert!(is_prime_power(9) && is_prime_power(7) && is_prime_power(32));
        assert!(!is_prime_power(15) && !is_prime_power(21) && !is_prime_power(1));
        assert!(is_prime(13) && !is_prime(21));
    }

    proptest! {
        #[test]
        fn inverse_multiplies_to_one(n in 2u64..5000, b in 1u64..5000) {
            let b = b % n;
            match mod_inverse(b, n) {
                Ok(inv) => {
                    prop_assert!(inv >= 1 && inv < n);
                    prop_assert_eq!(mod_mul(b, inv, n), 1 % n);
                }
                Err(_) => prop_assert!(gcd(b, n) != 1),
            }
        }

        #[test]
        fn mod_pow_matches_repeated_product(a in 0u64..100, e in 0u64..40, n in 2u64..500) {
            let slow = (0..e).fold(1 % n, |acc, _| acc * a % n);
            prop_assert_eq!(mod_pow(a, e, n), slow);
        }

        #[test]
        fn reported_factors_divide(n in 6u64..2000, a in 2u64..2000, r in 1u64..64) {
            let a = a % n;
            if let Postprocess::Factors(p, q) = postprocess(r, a, n) {
                prop_assert!(p > 1 && q > 1 && p * q == n);
            }
        }
    }
}
