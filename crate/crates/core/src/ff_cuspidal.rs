//! Cuspidal representations of `GL_m(F_q)` as Frobenius orbits of characters of `F_{q^m}^x`.
//!
//! A character `xi` of the cyclic group `F_{q^m}^x` of order `M = q^m - 1` is the exponent
//! `k` with `xi(g) = exp(2 pi i k / M)`. Frobenius acts by `k -> k q`, the contragredient
//! by `k -> -k`. Regular characters have orbits of size exactly `m`.

use crate::arith::{checked_pow, divisors, gcd, mul_mod, odd_prime_power, pow_mod};
use crate::cyclotomic::CyclotomicInteger;
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Largest group order enumerated exhaustively.
const MAX_ENUMERATION: u64 = 50_000_000;

fn torus_order(q: u64, m: u32) -> Result<u64> {
    odd_prime_power(q)?;
    if m == 0 {
        return Err(Error::Constraint("degree m must be at least 1".into()));
    }
    match checked_pow(q, m) {
        Some(qm) if qm < (1 << 62) => Ok(qm - 1),
        _ => Err(Error::TooLarge {
            size: (q as u128).saturating_pow(m),
        }),
    }
}

/// Exponent of `b` as a power of `a`, when `b = a^k` with `k >= 1`.
fn log_exact(b: u64, a: u64) -> Option<u32> {
    let (mut x, mut k) = (a, 1);
    while x < b {
        x = x.checked_mul(a)?;
        k += 1;
    }
    (x == b).then_some(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharOrbit {
    q: u64,
    m: u32,
    rep_exponent: u64,
}

/// Orbit of `k` under `x -> x q` in `Z/(q^m - 1)`, in increasing order of `i`.
fn frobenius_orbit(k: u64, q: u64, modulus: u64, m: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(m as usize);
    let mut x = k % modulus;
    for _ in 0..m {
        out.push(x);
        x = mul_mod(x, q, modulus);
    }
    out
}

fn is_regular(k: u64, q: u64, modulus: u64, m: u32) -> bool {
    // The orbit has size m iff k q^i != k for 0 < i < m; it suffices to test divisors of m.
    divisors(m as u64)
        .into_iter()
        .filter(|&i| i < m as u64)
        .all(|i| mul_mod(k, pow_mod(q, i, modulus), modulus) != k % modulus)
}

impl CharOrbit {
    /// The orbit of a regular exponent, in canonical form.
    pub fn new(q: u64, m: u32, k: u64) -> Result<Self> {
        let modulus = torus_order(q, m)?;
        let k = k % modulus;
        if !is_regular(k, q, modulus, m) {
            return Err(Error::NotRegular { q, m, k });
        }
        let rep = frobenius_orbit(k, q, modulus, m)
            .into_iter()
            .min()
            .unwrap_or(k);
        Ok(Self {
            q,
            m,
            rep_exponent: rep,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn rep_exponent(&self) -> u64 {
        self.rep_exponent
    }

    pub fn modulus(&self) -> u64 {
        self.q.pow(self.m) - 1
    }

    pub fn elements(&self) -> Vec<u64> {
        frobenius_orbit(self.rep_exponent, self.q, self.modulus(), self.m)
    }

    pub fn contains(&self, k: u64) -> bool {
        self.elements().contains(&(k % self.modulus()))
    }

    /// Order of the character.
    pub fn order(&self) -> u64 {
        let n = self.modulus();
        n / gcd(self.rep_exponent, n)
    }

    pub fn is_selfdual(&self) -> bool {
        let n = self.modulus();
        self.contains((n - self.rep_exponent) % n)
    }

    /// Autoduality for the Galois involution of `F_q / F_{sqrt q}` raised to `c`:
    /// the order divides `q0^{mc} + 1` where `q = q0^{2c}`.
    pub fn is_sigma_autodual(&self, q0: u64) -> Result<bool> {
        let two_c = log_exact(self.q, q0)
            .filter(|k| k % 2 == 0)
            .ok_or_else(|| {
                Error::Constraint(format!("{} is not an even power of {}", self.q, q0))
            })?;
        let bound = (q0 as u128).pow(self.m * two_c / 2) + 1;
        Ok(bound % self.order() as u128 == 0)
    }

    /// Order of the stabilizer of the orbit in `Gal(F_q / F_{qE})`, a cyclic group of order `c`.
    pub fn stabilizer_order(&self, q_e: u64) -> Result<u32> {
        let c = log_exact(self.q, q_e)
            .ok_or_else(|| Error::Constraint(format!("{} is not a power of {}", self.q, q_e)))?;
        let n = self.modulus();
        let b = divisors(c as u64)
            .into_iter()
            .find(|&b| self.contains(mul_mod(self.rep_exponent, pow_mod(q_e, b, n), n)))
            .unwrap_or(c as u64);
        Ok(c / b as u32)
    }
}

/// All cuspidal representations of `GL_m(F_q)`, ordered by representative.
pub fn enumerate_cuspidals(q: u64, m: u32) -> Result<Vec<CharOrbit>> {
    let n = torus_order(q, m)?;
    if n > MAX_ENUMERATION {
        return Err(Error::TooLarge { size: n as u128 });
    }
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for k in 0..n {
        if seen[k as usize] {
            continue;
        }
        let orbit = frobenius_orbit(k, q, n, m);
        let distinct = {
            let mut o = orbit.clone();
            o.sort_unstable();
            o.dedup();
            o.len()
        };
        for &x in &orbit {
            seen[x as usize] = true;
        }
        if distinct == m as usize {
            out.push(CharOrbit {
                q,
                m,
                rep_exponent: k,
            });
        }
    }
    Ok(out)
}

/// Whether some autodual cuspidal `rho` of `GL_m(F_{q0^{2c}})` has stabilizer order `s`
/// under `Gal(F_{q0^{2c}} / F_{q0^2})`: exactly when `s` divides `c` and is prime to `m`.
pub fn exists_autodual_with_stabilizer(q0: u64, m: u32, c: u32, s: u32) -> Result<bool> {
    odd_prime_power(q0)?;
    if m == 0 || c == 0 || (m * c) % 2 == 0 {
        return Err(Error::Constraint(format!("m*c = {} must be odd", m * c)));
    }
    Ok(s >= 1 && c % s == 0 && gcd(s as u64, m as u64) == 1)
}

/// Brute-force census: number of autodual cuspidal orbits of `GL_m(F_{q0^{2c}})`,
/// grouped by stabilizer order under `Gal(F_{q0^{2c}} / F_{q0^2})`.
///
/// Autoduality is tested directly: `-k` must lie in the orbit of `k q0^c`. Such `k`
/// satisfy `k (q0^{cj} + 1) = 0` for an odd `j < 2m`, so only these subgroups are scanned.
pub fn autodual_stabilizer_census(q0: u64, m: u32, c: u32) -> Result<BTreeMap<u32, u64>> {
    odd_prime_power(q0)?;
    let x = checked_pow(q0, c).ok_or(Error::TooLarge { size: q0 as u128 })?;
    let q = checked_pow(x, 2).ok_or(Error::TooLarge { size: x as u128 })?;
    let n = torus_order(q, m)?;
    let mut census = BTreeMap::new();
    let odd_js: Vec<u64> = (1..2 * m as u64).step_by(2).collect();
    let steps: Vec<u64> = odd_js
        .iter()
        .map(|&j| {
            let xj1 = (pow_mod(x, j, u64::MAX) as u128 + 1) % n as u128;
            n / gcd(n, if xj1 == 0 { n } else { xj1 as u64 })
        })
        .collect();
    let subgroup_size = |step: u64| n / step;
    if steps.iter().map(|&s| subgroup_size(s)).sum::<u64>() > MAX_ENUMERATION {
        return Err(Error::TooLarge { size: n as u128 });
    }
    let q_e = checked_pow(q0, 2).ok_or(Error::TooLarge { size: q0 as u128 })?;
    for (idx, &step) in steps.iter().enumerate() {
        for t in 0..subgroup_size(step) {
            let k = t * step;
            // Skip elements already met in an earlier subgroup.
            if steps[..idx].iter().any(|&s| k % s == 0) {
                continue;
            }
            if !is_regular(k, q, n, m) {
                continue;
            }
            let orbit = frobenius_orbit(k, q, n, m);
            if orbit.iter().any(|&y| y < k) {
                continue;
            }
            let twisted = mul_mod(k, x, n);
            let dual = (n - k) % n;
            if !frobenius_orbit(twisted, q, n, m).contains(&dual) {
                continue;
            }
            let s = CharOrbit {
                q,
                m,
                rep_exponent: k,
            }
            .stabilizer_order(q_e)?;
            *census.entry(s).or_insert(0) += 1;
        }
    }
    Ok(census)
}

/// Green's trace formula `(-1)^{m-1} sum_i xi(x^{q^i})` at a regular elliptic `x = g^x_exponent`.
pub fn green_trace(o: &CharOrbit, x_exponent: u64) -> Result<CyclotomicInteger> {
    let n = o.modulus();
    if !is_regular(x_exponent % n, o.q, n, o.m) {
        return Err(Error::NotRegular {
            q: o.q,
            m: o.m,
            k: x_exponent,
        });
    }
    let sign = if o.m % 2 == 1 { 1 } else { -1 };
    let terms = o
        .elements()
        .into_iter()
        .map(|k| (mul_mod(k, x_exponent, n), sign));
    CyclotomicInteger::from_terms(n, terms)
}

/// Whether a regular `xi` and `i < m` satisfy the residue-level relation forced by an
/// autodual type, for some admissible character `chi` of `F_q^x`:
/// unramified (`q = q0^2`): `xi^{q^i + q0} = chi o N` with `chi^{q0} = chi`;
/// ramified (`q = q0`): `xi^{q^i + 1} = chi o N`.
pub fn parity_constraint_has_solution(q0: u64, m: u32, ramified: bool) -> Result<bool> {
    let q = if ramified {
        q0
    } else {
        q0.checked_mul(q0)
            .ok_or(Error::TooLarge { size: q0 as u128 })?
    };
    let n = torus_order(q, m)?;
    if n > MAX_ENUMERATION {
        return Err(Error::TooLarge { size: n as u128 });
    }
    // chi o N has exponent c * n/(q-1) for chi of exponent c on F_q^x.
    let scale = n / (q - 1);
    let chis: Vec<u64> = (0..q - 1)
        .filter(|&c| ramified || mul_mod(c, q0 - 1, q - 1) == 0)
        .map(|c| c * scale)
        .collect();
    let shift = if ramified { 1 } else { q0 };
    let multipliers: Vec<u64> = (0..m as u64)
        .map(|i| (pow_mod(q, i, n) + shift) % n)
        .collect();
    for k in 0..n {
        if !is_regular(k, q, n, m) {
            continue;
        }
        for &a in &multipliers {
            let lhs = mul_mod(k, a, n);
            // lhs is a multiple of scale exactly when it is of the form chi o N.
            if lhs % scale == 0 && chis.contains(&lhs) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Checks the parity constraint on `m`: a solution exists exactly when `m` is odd
/// (unramified) or `m` is even or 1 (ramified).
pub fn verify_parity_constraint(q0: u64, m: u32, ramified: bool) -> Result<bool> {
    let permitted = if ramified {
        m % 2 == 0 || m == 1
    } else {
        m % 2 == 1
    };
    Ok(parity_constraint_has_solution(q0, m, ramified)? == permitted)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GowFlavor {
    /// Distinction by `GL_m` over the subfield of index 2, of size `q0`.
    Subfield(u64),
    /// Distinction by the centralizer of an inner involution.
    InnerConj,
}

pub fn is_distinguished_gow(o: &CharOrbit, flavor: GowFlavor) -> Result<bool> {
    match flavor {
        GowFlavor::Subfield(q0) => {
            if q0.checked_mul(q0) != Some(o.q) {
                return Err(Error::Constraint(format!(
                    "{} is not the square of {}",
                    o.q, q0
                )));
            }
            let bound = (q0 as u128).pow(o.m) + 1;
            Ok(bound % o.order() as u128 == 0)
        }
        GowFlavor::InnerConj => Ok(o.is_selfdual()),
    }
}
