//! Small integer helpers shared by the field and orbit code.

use crate::error::{Error, Result};
use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^k` with `p` an odd prime.
pub fn odd_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 3 {
        return Err(Error::InvalidPrimePower(q));
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap_or(q);
    if p == 2 {
        return Err(Error::InvalidPrimePower(q));
    }
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest == 1 {
        Ok((p, k))
    } else {
        Err(Error::InvalidPrimePower(q))
    }
}

/// `base^exp`, or `None` on overflow of `u64`.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `0..m`.
pub fn reduce(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n)
        .take_while(|d| d * d <= n)
        .filter(|d| n % d == 0)
        .collect();
    let upper: Vec<u64> = out
        .iter()
        .rev()
        .map(|d| n / d)
        .filter(|&d| d * d != n)
        .collect();
    out.extend(upper);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(odd_prime_power(81).unwrap(), (3, 4));
        assert_eq!(odd_prime_power(121).unwrap(), (11, 2));
        assert!(odd_prime_power(8).is_err());
        assert!(odd_prime_power(15).is_err());
    }

    #[test]
    fn divisors_are_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(9), vec![1, 3, 9]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn pow_mod_matches_naive() {
        for m in 1..40u64 {
            for b in 0..12u64 {
                let mut naive = 1 % m;
                for e in 0..10u64 {
                    assert_eq!(pow_mod(b, e, m), naive);
                    naive = naive * b % m;
                }
            }
        }
    }
}
