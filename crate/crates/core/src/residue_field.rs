//! Finite fields of odd characteristic, seen only through their cyclic unit groups.
//!
//! Every field `F_{p^f}` carries an abstract generator, and the generators are chosen
//! compatibly along the lattice of subfields: the generator of `F_{p^a}` is the norm of
//! the generator of `F_{p^{ab}}`. Hence the unit with exponent `x` in a subfield sits
//! inside the extension with exponent `x * (Q-1)/(q-1)`.

use crate::arith::{checked_pow, is_prime, mul_mod, reduce};
use crate::error::{Error, Result};
use crate::sign::Sign;
use serde::Serialize;
use std::fmt;

/// Largest cardinality accepted, so that products of exponents fit in `u128`.
const MAX_CARDINALITY: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FiniteField {
    p: u64,
    f: u32,
    #[serde(skip)]
    q: u64,
}

impl FiniteField {
    pub fn new(p: u64, f: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if f == 0 {
            return Err(Error::Constraint(
                "residue degree must be at least 1".into(),
            ));
        }
        match checked_pow(p, f) {
            Some(q) if q <= MAX_CARDINALITY => Ok(Self { p, f, q }),
            _ => Err(Error::FieldTooLarge { p, f }),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Order of the cyclic unit group.
    pub fn group_order(&self) -> u64 {
        self.q - 1
    }

    /// The extension of degree `k`.
    pub fn extension(&self, k: u32) -> Result<Self> {
        let f = self.f.checked_mul(k).ok_or(Error::FieldTooLarge {
            p: self.p,
            f: u32::MAX,
        })?;
        Self::new(self.p, f)
    }

    /// The subfield of index `k`.
    pub fn subfield(&self, k: u32) -> Result<Self> {
        if k == 0 || self.f % k != 0 {
            return Err(Error::NotADivisor {
                k: k as u64,
                of: self.f as u64,
            });
        }
        Self::new(self.p, self.f / k)
    }

    /// Whether `self` is a subfield of `other`.
    pub fn is_subfield_of(&self, other: &FiniteField) -> bool {
        self.p == other.p && other.f % self.f == 0
    }

    pub fn unit(&self, exponent: i128) -> UnitClass {
        UnitClass {
            field: *self,
            exponent: reduce(exponent, self.group_order()),
        }
    }

    pub fn one(&self) -> UnitClass {
        self.unit(0)
    }

    pub fn generator(&self) -> UnitClass {
        self.unit(1)
    }

    pub fn minus_one(&self) -> UnitClass {
        self.unit((self.group_order() / 2) as i128)
    }

    pub fn units(&self) -> impl Iterator<Item = UnitClass> + '_ {
        (0..self.group_order()).map(move |k| self.unit(k as i128))
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

/// The unit `g^exponent` of a finite field, `g` the field's abstract generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UnitClass {
    field: FiniteField,
    exponent: u64,
}

impl UnitClass {
    pub fn field(&self) -> FiniteField {
        self.field
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0
    }

    pub fn mul(&self, other: &UnitClass) -> Result<UnitClass> {
        self.same_field(other)?;
        Ok(self
            .field
            .unit(self.exponent as i128 + other.exponent as i128))
    }

    pub fn inv(&self) -> UnitClass {
        self.field.unit(-(self.exponent as i128))
    }

    pub fn pow(&self, k: i128) -> UnitClass {
        let order = self.field.group_order();
        let k = reduce(k, order);
        self.field.unit(mul_mod(self.exponent, k, order) as i128)
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        let n = self.field.group_order();
        n / crate::arith::gcd(self.exponent, n)
    }

    pub fn is_square(&self) -> bool {
        self.exponent % 2 == 0
    }

    /// Image in an extension field.
    pub fn embed(&self, target: FiniteField) -> Result<UnitClass> {
        if !self.field.is_subfield_of(&target) {
            return Err(Error::NotADivisor {
                k: self.field.f as u64,
                of: target.f as u64,
            });
        }
        let scale = target.group_order() / self.field.group_order();
        Ok(target.unit(self.exponent as i128 * scale as i128))
    }

    fn same_field(&self, other: &UnitClass) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.q,
                right: other.field.q,
            })
        }
    }
}

/// `+1` on squares, `-1` on non-squares.
pub fn qr_character(x: &UnitClass) -> Sign {
    Sign::from_parity(x.exponent as i128)
}

/// Norm to the subfield of index `k`: the product of the `k` Galois conjugates.
///
/// With compatible generators the norm of `g^x` is `h^x`, `h` the subfield generator;
/// seen inside the source field it is `g^{x (Q-1)/(q0-1)}`.
pub fn norm_map(x: &UnitClass, k: u32) -> Result<UnitClass> {
    let target = x.field.subfield(k)?;
    Ok(target.unit(x.exponent as i128))
}

/// Norm down to a given subfield.
pub fn norm_to(x: &UnitClass, target: FiniteField) -> Result<UnitClass> {
    if !target.is_subfield_of(&x.field) {
        return Err(Error::NotADivisor {
            k: target.f as u64,
            of: x.field.f as u64,
        });
    }
    norm_map(x, x.field.f / target.f)
}
