//! Exact elements of `Z[zeta_n]`, stored in the power basis modulo the cyclotomic polynomial.

use crate::arith::divisors;
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Largest order accepted; reduction costs `O(n * phi(n))`.
const MAX_ORDER: u64 = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CyclotomicInteger {
    order: u64,
    /// Coefficients of `1, zeta, ..., zeta^{phi(n)-1}`.
    coeffs: Vec<i64>,
}

/// The n-th cyclotomic polynomial, coefficients in increasing degree.
pub fn cyclotomic_polynomial(n: u64) -> Result<Vec<i64>> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::TooLarge { size: n as u128 });
    }
    let mut cache = BTreeMap::new();
    Ok(phi_cached(n, &mut cache))
}

fn phi_cached(n: u64, cache: &mut BTreeMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d a proper divisor of n.
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        let phi_d = phi_cached(d, cache);
        poly = exact_div(&poly, &phi_d);
    }
    cache.insert(n, poly.clone());
    poly
}

/// Quotient by a monic divisor.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quo = vec![0i64; num.len() - dd];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dd];
        quo[i] = c;
        if c != 0 {
            for (j, &dc) in den.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quo
}

impl CyclotomicInteger {
    pub fn zero(order: u64) -> Result<Self> {
        let deg = cyclotomic_polynomial(order)?.len() - 1;
        Ok(Self {
            order,
            coeffs: vec![0; deg],
        })
    }

    /// `sum_i c_i zeta_n^{e_i}` from (exponent, multiplicity) pairs.
    pub fn from_terms(order: u64, terms: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        let phi = cyclotomic_polynomial(order)?;
        let mut full = vec![0i64; order as usize];
        for (e, c) in terms {
            full[(e % order) as usize] += c;
        }
        Ok(Self {
            order,
            coeffs: reduce_mod(full, &phi),
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The value when it is a rational integer.
    pub fn as_integer(&self) -> Option<i64> {
        let rest_zero = self.coeffs.iter().skip(1).all(|&c| c == 0);
        rest_zero.then(|| self.coeffs.first().copied().unwrap_or(0))
    }

    pub fn neg(&self) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

fn reduce_mod(mut full: Vec<i64>, phi: &[i64]) -> Vec<i64> {
    let deg = phi.len() - 1;
    for i in (deg..full.len()).rev() {
        let c = full[i];
        if c != 0 {
            for (j, &pc) in phi.iter().enumerate() {
                full[i - deg + j] -= c * pc;
            }
        }
    }
    full.truncate(deg);
    full
}
