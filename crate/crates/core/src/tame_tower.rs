//! Square classes, tame Hilbert symbols and norms in tamely ramified towers.
//!
//! Elements are tracked modulo principal units, which are squares because the
//! residue characteristic is odd. A tower `(e, f, zeta)` over the base is the field
//! obtained from the unramified extension `U` of degree `f` by adjoining `w` with
//! `w^e = pi_F * zeta`, `zeta` a Teichmüller unit of `U`.

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::residue_field::{norm_to, qr_character, FiniteField, UnitClass};
use crate::sign::Sign;
use serde::Serialize;
use std::fmt;

/// A non-archimedean local field with odd residue characteristic, seen through its residue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BaseField {
    residue: FiniteField,
}

impl BaseField {
    pub fn new(p: u64, f0: u32) -> Result<Self> {
        Ok(Self {
            residue: FiniteField::new(p, f0)?,
        })
    }

    pub fn from_residue(residue: FiniteField) -> Self {
        Self { residue }
    }

    pub fn residue(&self) -> FiniteField {
        self.residue
    }

    pub fn q(&self) -> u64 {
        self.residue.q()
    }

    /// The element `pi^val * u` of the base field.
    pub fn element(&self, val: i64, unit_exponent: i128) -> FieldElementClass {
        FieldElementClass::new(val, self.residue.unit(unit_exponent))
    }

    pub fn uniformizer(&self) -> FieldElementClass {
        self.element(1, 0)
    }

    pub fn minus_one(&self) -> FieldElementClass {
        FieldElementClass::new(0, self.residue.minus_one())
    }

    /// Square class of -1.
    pub fn minus_one_class(&self) -> SquareClass {
        SquareClass::new(0, qr_character(&self.residue.minus_one()))
    }
}

/// An element of `F^x / F^x2`: valuation parity and quadratic character of the unit part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SquareClass {
    pub val_parity: u8,
    pub unit_qr: Sign,
}

impl SquareClass {
    pub const ONE: SquareClass = SquareClass {
        val_parity: 0,
        unit_qr: Sign::Plus,
    };
    pub const UNIT_NONSQUARE: SquareClass = SquareClass {
        val_parity: 0,
        unit_qr: Sign::Minus,
    };
    pub const UNIFORMIZER: SquareClass = SquareClass {
        val_parity: 1,
        unit_qr: Sign::Plus,
    };
    pub const UNIFORMIZER_NONSQUARE: SquareClass = SquareClass {
        val_parity: 1,
        unit_qr: Sign::Minus,
    };

    pub fn new(val: i64, unit_qr: Sign) -> Self {
        Self {
            val_parity: val.rem_euclid(2) as u8,
            unit_qr,
        }
    }

    pub fn all() -> [SquareClass; 4] {
        [
            Self::ONE,
            Self::UNIT_NONSQUARE,
            Self::UNIFORMIZER,
            Self::UNIFORMIZER_NONSQUARE,
        ]
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::ONE
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        SquareClass {
            val_parity: (self.val_parity + other.val_parity) % 2,
            unit_qr: self.unit_qr * other.unit_qr,
        }
    }

    /// A base-field representative: `pi^v * g^k` with `k in {0, 1}`.
    pub fn representative(&self, base: &BaseField) -> FieldElementClass {
        let k = if self.unit_qr.is_plus() { 0 } else { 1 };
        base.element(self.val_parity as i64, k)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match (self.val_parity, self.unit_qr) {
            (0, Sign::Plus) => "1",
            (0, Sign::Minus) => "u",
            (_, Sign::Plus) => "pi",
            (_, Sign::Minus) => "u*pi",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum QuadKind {
    Unramified,
    Ramified,
}

/// The quadratic extension `F[sqrt(disc)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadExtClass {
    disc: SquareClass,
}

impl QuadExtClass {
    pub fn new(disc: SquareClass) -> Result<Self> {
        if disc.is_trivial() {
            return Err(Error::Constraint(
                "a square does not generate a quadratic field".into(),
            ));
        }
        Ok(Self { disc })
    }

    pub fn all() -> [QuadExtClass; 3] {
        [
            QuadExtClass {
                disc: SquareClass::UNIT_NONSQUARE,
            },
            QuadExtClass {
                disc: SquareClass::UNIFORMIZER,
            },
            QuadExtClass {
                disc: SquareClass::UNIFORMIZER_NONSQUARE,
            },
        ]
    }

    pub fn disc(&self) -> SquareClass {
        self.disc
    }

    pub fn kind(&self) -> QuadKind {
        if self.disc.val_parity == 0 {
            QuadKind::Unramified
        } else {
            QuadKind::Ramified
        }
    }

    /// Ramification index over the base.
    pub fn e(&self) -> u32 {
        match self.kind() {
            QuadKind::Unramified => 1,
            QuadKind::Ramified => 2,
        }
    }

    /// Residue degree over the base.
    pub fn f(&self) -> u32 {
        3 - self.e()
    }
}

/// A tame extension `L/F` with `w_L^e = pi_F * zeta`, `zeta` in the residue field of size `q^f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TameTower {
    base: BaseField,
    e: u32,
    f: u32,
    zeta: UnitClass,
}

impl TameTower {
    pub fn new(base: BaseField, e: u32, f: u32, zeta: UnitClass) -> Result<Self> {
        if e == 0 || f == 0 {
            return Err(Error::Constraint(
                "ramification index and residue degree must be positive".into(),
            ));
        }
        let p = base.residue.p();
        if gcd(e as u64, p) != 1 {
            return Err(Error::WildRamification { e, p });
        }
        let top = base.residue.extension(f)?;
        if zeta.field() != top {
            return Err(Error::FieldMismatch {
                left: zeta.field().q(),
                right: top.q(),
            });
        }
        Ok(Self { base, e, f, zeta })
    }

    /// Tower with `zeta = g^zeta_exponent` in the top residue field.
    pub fn with_zeta_exponent(
        base: BaseField,
        e: u32,
        f: u32,
        zeta_exponent: i128,
    ) -> Result<Self> {
        let top = base.residue.extension(f)?;
        Self::new(base, e, f, top.unit(zeta_exponent))
    }

    /// The base field seen as a tower over itself.
    pub fn trivial(base: BaseField) -> Self {
        Self {
            base,
            e: 1,
            f: 1,
            zeta: base.residue.one(),
        }
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn zeta(&self) -> UnitClass {
        self.zeta
    }

    pub fn degree(&self) -> u32 {
        self.e * self.f
    }

    /// Residue field of the top of the tower.
    pub fn residue(&self) -> FiniteField {
        self.zeta.field()
    }

    /// The unramified extension of degree `m` of this tower (same uniformizer).
    pub fn unramified_extension(&self, m: u32) -> Result<TameTower> {
        let top = self.residue().extension(m)?;
        TameTower::new(self.base, self.e, self.f * m, self.zeta.embed(top)?)
    }

    /// Image of a base element `pi_F^a * v`: since `pi_F = w^e * zeta^{-1}`,
    /// it equals `w^{ea} * zeta^{-a} * v`.
    pub fn lift(&self, x: &FieldElementClass) -> Result<FieldElementClass> {
        self.check_base(x)?;
        let unit = self
            .zeta
            .pow(-(x.val as i128))
            .mul(&x.unit.embed(self.residue())?)?;
        Ok(FieldElementClass::new(x.val * self.e as i64, unit))
    }

    /// The element `w^val * g^unit_exponent` of the tower.
    pub fn element(&self, val: i64, unit_exponent: i128) -> FieldElementClass {
        FieldElementClass::new(val, self.residue().unit(unit_exponent))
    }

    fn check_base(&self, x: &FieldElementClass) -> Result<()> {
        if x.unit.field() != self.base.residue {
            return Err(Error::FieldMismatch {
                left: x.unit.field().q(),
                right: self.base.q(),
            });
        }
        Ok(())
    }

    fn check_top(&self, x: &FieldElementClass) -> Result<()> {
        if x.unit.field() != self.residue() {
            return Err(Error::FieldMismatch {
                left: x.unit.field().q(),
                right: self.residue().q(),
            });
        }
        Ok(())
    }
}

/// `w^val * unit` modulo principal units, `w` the uniformizer of the ambient tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FieldElementClass {
    pub val: i64,
    pub unit: UnitClass,
}

impl FieldElementClass {
    pub fn new(val: i64, unit: UnitClass) -> Self {
        Self { val, unit }
    }

    pub fn mul(&self, other: &FieldElementClass) -> Result<FieldElementClass> {
        Ok(Self::new(self.val + other.val, self.unit.mul(&other.unit)?))
    }

    pub fn pow(&self, k: i64) -> FieldElementClass {
        Self::new(self.val * k, self.unit.pow(k as i128))
    }

    pub fn is_square(&self) -> bool {
        self.val % 2 == 0 && self.unit.is_square()
    }
}

pub fn square_class(x: &FieldElementClass) -> SquareClass {
    SquareClass::new(x.val, qr_character(&x.unit))
}

/// The tame Hilbert symbol over `base`:
/// `(-1)^{v(a) v(b) (q-1)/2} * chi(u_a)^{v(b)} * chi(u_b)^{v(a)}`.
pub fn hilbert_symbol(base: &BaseField, a: &SquareClass, b: &SquareClass) -> Sign {
    let (va, vb) = (a.val_parity as i128, b.val_parity as i128);
    let half = ((base.q() - 1) / 2) as i128;
    Sign::from_parity(va * vb * half) * a.unit_qr.pow(vb) * b.unit_qr.pow(va)
}

/// Hilbert symbol of two base elements.
pub fn hilbert_symbol_elements(
    base: &BaseField,
    a: &FieldElementClass,
    b: &FieldElementClass,
) -> Result<Sign> {
    for x in [a, b] {
        if x.unit.field() != base.residue() {
            return Err(Error::FieldMismatch {
                left: x.unit.field().q(),
                right: base.q(),
            });
        }
    }
    Ok(hilbert_symbol(base, &square_class(a), &square_class(b)))
}

/// The quadratic character of `F^x` whose kernel is the norm group of `K`.
pub fn omega(base: &BaseField, k: &QuadExtClass, x: &SquareClass) -> Sign {
    hilbert_symbol(base, &k.disc, x)
}

/// `N_{L/F}(x)` modulo principal units, as an element of the base.
///
/// Through the unramified layer `U` of degree `f` and the totally ramified step:
/// `N_{L/U}(w) = (-1)^{e-1} pi_F zeta`, and a Teichmüller unit `t` has `N_{L/U}(t) = t^e`.
pub fn norm_to_base(x: &FieldElementClass, tower: &TameTower) -> Result<FieldElementClass> {
    tower.check_top(x)?;
    let base = tower.base;
    let k = base.residue();
    let (e, f) = (tower.e as i128, tower.f as i128);
    let half = (k.group_order() / 2) as i128;
    // N_{L/F}(w) = (-1)^{(e-1) f} * pi_F^f * N_res(zeta)
    let norm_w_unit = norm_to(&tower.zeta, k)?.exponent() as i128 + (e - 1) * f * half;
    let norm_unit = norm_to(&x.unit, k)?.exponent() as i128 * e;
    let unit = k.unit(norm_w_unit * x.val as i128 + norm_unit);
    Ok(FieldElementClass::new(x.val * tower.f as i64, unit))
}

pub fn norm_square_class(x: &FieldElementClass, tower: &TameTower) -> Result<SquareClass> {
    Ok(square_class(&norm_to_base(x, tower)?))
}

/// Whether the base element `x` is a square in `P`.
pub fn is_square_in(x: &FieldElementClass, p: &TameTower) -> Result<bool> {
    Ok(p.lift(x)?.is_square())
}

/// Which quadratic extensions of the base embed in an even-degree tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadProfile {
    pub embeds_unramified: bool,
    pub embedded_ramified_discs: Vec<SquareClass>,
}

pub fn quad_subext_profile(p: &TameTower) -> Result<QuadProfile> {
    if p.degree() % 2 != 0 {
        return Err(Error::Constraint(format!(
            "tower of odd degree {} has no quadratic subfield",
            p.degree()
        )));
    }
    let base = p.base;
    let mut embeds_unramified = false;
    let mut embedded_ramified_discs = Vec::new();
    for k in QuadExtClass::all() {
        if is_square_in(&k.disc.representative(&base), p)? {
            match k.kind() {
                QuadKind::Unramified => embeds_unramified = true,
                QuadKind::Ramified => embedded_ramified_discs.push(k.disc),
            }
        }
    }
    Ok(QuadProfile {
        embeds_unramified,
        embedded_ramified_discs,
    })
}

/// Representatives of the residue units modulo `gcd(2e, Q-1)`-th powers.
///
/// Changing the uniformizer by a unit `t` replaces `zeta` by `zeta * t^e`, and every
/// square-class computation sees `zeta` only through its quadratic character, so these
/// classes exhaust all behaviours. Small fields are enumerated in full.
pub fn zeta_representatives(field: FiniteField, e: u32, full_below: u64) -> Vec<UnitClass> {
    let n = field.group_order();
    let count = if n <= full_below {
        n
    } else {
        gcd(2 * e as u64, n)
    };
    (0..count).map(|k| field.unit(k as i128)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(p: u64, f0: u32) -> BaseField {
        BaseField::new(p, f0).unwrap()
    }

    #[test]
    fn square_class_examples() {
        let b = base(3, 1);
        assert_eq!(square_class(&b.element(0, 0)), SquareClass::ONE);
        assert_eq!(square_class(&b.element(1, 0)), SquareClass::UNIFORMIZER);
        assert_eq!(square_class(&b.element(2, 1)), SquareClass::UNIT_NONSQUARE);
    }

    #[test]
    fn hilbert_examples() {
        let b = base(3, 1);
        let u = SquareClass::UNIT_NONSQUARE;
        let pi = SquareClass::UNIFORMIZER;
        for x in SquareClass::all() {
            assert_eq!(hilbert_symbol(&b, &SquareClass::ONE, &x), Sign::Plus);
        }
        assert_eq!(hilbert_symbol(&b, &pi, &u), Sign::Minus);
        assert_eq!(hilbert_symbol(&b, &pi, &pi), Sign::Minus);
        assert_eq!(hilbert_symbol(&base(5, 1), &pi, &pi), Sign::Plus);
    }

    #[test]
    fn omega_examples() {
        let b = base(3, 1);
        let unram = QuadExtClass::new(SquareClass::UNIT_NONSQUARE).unwrap();
        let ram = QuadExtClass::new(SquareClass::UNIFORMIZER).unwrap();
        assert_eq!(omega(&b, &unram, &SquareClass::UNIFORMIZER), Sign::Minus);
        assert_eq!(omega(&b, &ram, &b.minus_one_class()), Sign::Minus);
        assert!(QuadExtClass::new(SquareClass::ONE).is_err());
    }

    #[test]
    fn norm_examples() {
        let b = base(3, 1);
        let unram2 = TameTower::with_zeta_exponent(b, 1, 2, 0).unwrap();
        let lifted = unram2.lift(&b.uniformizer()).unwrap();
        assert_eq!(
            norm_square_class(&lifted, &unram2).unwrap(),
            SquareClass::ONE
        );
        let ram2 = TameTower::with_zeta_exponent(b, 2, 1, 0).unwrap();
        let w = ram2.element(1, 0);
        assert_eq!(
            norm_square_class(&w, &ram2).unwrap(),
            SquareClass::new(1, qr_character(&b.residue().minus_one()))
        );
        assert_eq!(
            norm_square_class(&ram2.element(0, 0), &ram2).unwrap(),
            SquareClass::ONE
        );
    }

    #[test]
    fn is_square_examples() {
        let b = base(3, 1);
        let unram2 = TameTower::with_zeta_exponent(b, 1, 2, 0).unwrap();
        assert!(is_square_in(&b.element(0, 1), &unram2).unwrap());
        let ram2 = TameTower::with_zeta_exponent(b, 2, 1, 0).unwrap();
        assert!(is_square_in(&b.uniformizer(), &ram2).unwrap());
        assert!(!is_square_in(&b.element(1, 1), &ram2).unwrap());
        assert!(is_square_in(&b.element(2, 0), &TameTower::trivial(b)).unwrap());
    }

    #[test]
    fn profile_examples() {
        let b = base(3, 1);
        let unram2 = TameTower::with_zeta_exponent(b, 1, 2, 0).unwrap();
        let prof = quad_subext_profile(&unram2).unwrap();
        assert!(prof.embeds_unramified && prof.embedded_ramified_discs.is_empty());
        let ram2 = TameTower::with_zeta_exponent(b, 2, 1, 0).unwrap();
        let prof = quad_subext_profile(&ram2).unwrap();
        assert!(!prof.embeds_unramified);
        assert_eq!(prof.embedded_ramified_discs, vec![SquareClass::UNIFORMIZER]);
        assert!(quad_subext_profile(&TameTower::trivial(b)).is_err());
    }

    #[test]
    fn wild_index_rejected() {
        let b = base(3, 1);
        assert!(matches!(
            TameTower::with_zeta_exponent(b, 3, 1, 0),
            Err(Error::WildRamification { .. })
        ));
    }
}
