//! Decision formulas: embeddings, existence and counts of tau-autodual simple characters,
//! epsilon signs, and the distinction verdict.

use crate::endo_invariants::{
    embedding_condition, BetaClass, DerivedInvariants, EndoClassInvariants, InnerFormSpec,
    InvolutionSpec, QuadType,
};
use crate::error::{constraint, Error, Result};
use crate::ff_cuspidal::{enumerate_cuspidals, is_distinguished_gow, CharOrbit, GowFlavor};
use crate::residue_field::qr_character;
use crate::sign::Sign;
use crate::tame_tower::{
    hilbert_symbol, is_square_in, norm_to_base, omega, square_class, BaseField, FieldElementClass,
    QuadExtClass, QuadKind, SquareClass, TameTower,
};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Whether `F^k` (a maximal commutative subalgebra of `M_k(F)`) embeds: `k | r`.
pub fn matrix_embeds(k: u32, inner: &InnerFormSpec) -> bool {
    k >= 1 && inner.r() % k == 0
}

/// Embedding of the quaternionic algebra attached to `alpha` when `E0 = F`.
pub fn quaternion_embeds(alpha_in_norm: bool, inner: &InnerFormSpec) -> bool {
    if alpha_in_norm {
        inner.r() % 2 == 0
    } else {
        inner.r() % 2 == inner.n() % 2
    }
}

pub fn field_embedding_with_involution(
    inner: &InnerFormSpec,
    degree: u32,
    alpha_in_norm: bool,
) -> Result<bool> {
    if degree == 0 || degree % 2 != 0 || inner.two_n() % degree != 0 {
        return constraint(format!(
            "degree {degree} must be even and divide 2n = {}",
            inner.two_n()
        ));
    }
    Ok(embedding_condition(inner, degree, alpha_in_norm))
}

pub fn stable_max_order_exists(c0: u32, quad: QuadType) -> Result<bool> {
    match quad {
        QuadType::Null => {
            constraint("stable maximal orders are only discussed for a nonzero level")
        }
        QuadType::Unramified => Ok(c0 % 2 == 1),
        QuadType::Ramified => Ok(true),
    }
}

/// The towers `E0 ⊂ E` over the base.
///
/// Ramified `E/E0`: `E = (e, f, zeta)`, `E0 = (e/2, f, zeta)` and `w_E^2 = w_{E0}`.
/// Unramified `E/E0`: `E0 = (e, f/2, zeta0)` and `E` its quadratic unramified extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EndoTowers {
    base: BaseField,
    endo: EndoClassInvariants,
    e: TameTower,
    e0: TameTower,
}

impl EndoTowers {
    /// `zeta_exponent` lives in the residue field of `E` (ramified) or `E0` (unramified).
    pub fn new(base: BaseField, endo: EndoClassInvariants, zeta_exponent: i128) -> Result<Self> {
        let (e, e0) = match endo.quad() {
            QuadType::Null => return constraint("level zero carries no quadratic extension E/E0"),
            QuadType::Ramified => {
                let e = TameTower::with_zeta_exponent(base, endo.e(), endo.f(), zeta_exponent)?;
                (e, TameTower::new(base, endo.e() / 2, endo.f(), e.zeta())?)
            }
            QuadType::Unramified => {
                let e0 =
                    TameTower::with_zeta_exponent(base, endo.e(), endo.f() / 2, zeta_exponent)?;
                (e0.unramified_extension(2)?, e0)
            }
        };
        Ok(Self { base, endo, e, e0 })
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn endo(&self) -> EndoClassInvariants {
        self.endo
    }

    pub fn e_tower(&self) -> TameTower {
        self.e
    }

    pub fn e0_tower(&self) -> TameTower {
        self.e0
    }

    /// `P`, the unramified extension of `E` of degree `m`.
    pub fn p_tower(&self, m: u32) -> Result<TameTower> {
        self.e.unramified_extension(m)
    }

    /// `alpha` in `N_{E/E0}(E^x)`, through the Hilbert symbol of `E0`.
    pub fn alpha_in_norm_hilbert(&self, alpha: &SquareClass) -> Result<bool> {
        let x = self.e0.lift(&alpha.representative(&self.base))?;
        let e0_base = BaseField::from_residue(self.e0.residue());
        let disc = match self.endo.quad() {
            QuadType::Ramified => SquareClass::UNIFORMIZER,
            _ => SquareClass::UNIT_NONSQUARE,
        };
        Ok(hilbert_symbol(&e0_base, &disc, &square_class(&x)).is_plus())
    }

    /// Same question, by explicit valuation and residue conditions.
    pub fn alpha_in_norm_closed(&self, alpha: &SquareClass) -> Result<bool> {
        let a = alpha.val_parity as i64;
        match self.endo.quad() {
            QuadType::Unramified => Ok((self.endo.e() as i64 * a) % 2 == 0),
            _ => {
                let l = self.e.residue();
                let v = alpha.representative(&self.base).unit.embed(l)?;
                let e0 = (self.endo.e() / 2) as i128;
                let u = l
                    .minus_one()
                    .pow(e0 * a as i128)
                    .mul(&self.e.zeta().pow(-(a as i128)))?
                    .mul(&v)?;
                Ok(qr_character(&u).is_plus())
            }
        }
    }

    /// Even valuation in `T`, and the reduction of `alpha * N_{T/T0}(w_T)^{-val/2}` a square in `k_P`.
    pub fn residue_criterion(&self, alpha: &SquareClass, m: u32) -> Result<bool> {
        let a = alpha.val_parity as i64;
        if (self.endo.e() as i64 * a) % 2 != 0 {
            return Ok(false);
        }
        let rep = alpha.representative(&self.base);
        let u = match self.endo.quad() {
            QuadType::Ramified => {
                let l = self.e.residue();
                let e0 = (self.endo.e() / 2) as i128;
                l.minus_one()
                    .pow(e0 * a as i128)
                    .mul(&self.e.zeta().pow(-(a as i128)))?
                    .mul(&rep.unit.embed(l)?)?
            }
            _ => {
                let l0 = self.e0.residue();
                self.e0.zeta().pow(-(a as i128)).mul(&rep.unit.embed(l0)?)?
            }
        };
        let k_p = self.p_tower(m)?.residue();
        Ok(u.embed(k_p)?.is_square())
    }

    fn check_beta(&self, beta: &BetaClass) -> Result<()> {
        if beta.zeta.field() != self.e.residue() {
            return Err(Error::FieldMismatch {
                left: beta.zeta.field().q(),
                right: self.e.residue().q(),
            });
        }
        BetaClass::new(&self.endo, beta.val, beta.zeta).map(|_| ())
    }

    /// A beta class satisfying the constraints, used when none is supplied.
    pub fn default_beta(&self) -> Result<BetaClass> {
        let l = self.e.residue();
        match self.endo.quad() {
            QuadType::Unramified => {
                let q0 = self.e0.residue().q();
                BetaClass::new(&self.endo, 0, l.unit(((q0 + 1) / 2) as i128))
            }
            _ => BetaClass::new(&self.endo, 1, l.one()),
        }
    }
}

/// Whether a tau-autodual simple character exists.
pub fn tau_character_exists(
    inner: &InnerFormSpec,
    endo: &EndoClassInvariants,
    inv: &InvolutionSpec,
    alpha_in_norm_t: bool,
) -> bool {
    if endo.is_null() {
        return level0_order_exists(inner, inv);
    }
    embedding_condition(
        inner,
        endo.degree(),
        alpha_in_norm_t || inv.alpha_is_square(),
    )
}

pub fn level0_order_exists(inner: &InnerFormSpec, inv: &InvolutionSpec) -> bool {
    inv.alpha_is_square() || inner.d() % inv.e_k() == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Level0Case {
    I,
    II,
    III,
}

/// Shape of the stable order at level zero.
pub fn level0_case(inner: &InnerFormSpec, inv: &InvolutionSpec) -> Result<Level0Case> {
    if !level0_order_exists(inner, inv) {
        return constraint("no tau-stable maximal order exists at level zero");
    }
    let Some(k) = inv.k() else {
        return Ok(Level0Case::I);
    };
    Ok(match (k.kind(), inner.d() % 2 == 0) {
        (QuadKind::Unramified, true) => Level0Case::I,
        (QuadKind::Unramified, false) => Level0Case::II,
        (QuadKind::Ramified, _) => Level0Case::III,
    })
}

pub fn character_class_count(
    inner: &InnerFormSpec,
    endo: &EndoClassInvariants,
    inv: &InvolutionSpec,
    derived: &DerivedInvariants,
) -> Result<u32> {
    match endo.quad() {
        QuadType::Null => Ok(match level0_case(inner, inv)? {
            Level0Case::I => inner.r() / 2 + 1,
            _ => 1,
        }),
        quad => {
            let c0 = derived.c0.ok_or_else(|| {
                Error::Constraint("no tau-autodual simple character exists".into())
            })?;
            Ok(if quad == QuadType::Ramified && c0 % 2 == 1 {
                derived.m / 2 + 1
            } else {
                1
            })
        }
    }
}

pub fn w_sign_closed_form(
    inner: &InnerFormSpec,
    endo: &EndoClassInvariants,
    alpha_in_norm_t: bool,
) -> Result<Sign> {
    if endo.is_null() {
        return constraint("the closed form applies to a nonzero level");
    }
    endo.check_against(inner)?;
    Ok(Sign::from_bool(
        alpha_in_norm_t || (inner.two_n() / endo.degree()) % 2 == 0,
    ))
}

/// `w_K` of the cuspidal representation of `GL_{m deg}(F)` with `P` of degree `m` over `E`,
/// case by case on the ramification of `K/F` and `E/E0`.
pub fn w_sign_formulary(
    k: &QuadExtClass,
    towers: &EndoTowers,
    beta: &BetaClass,
    m: u32,
) -> Result<Sign> {
    towers.check_beta(beta)?;
    let endo = towers.endo();
    let base = towers.base();
    match (k.kind(), endo.quad()) {
        (QuadKind::Unramified, _) => Ok(Sign::from_parity(
            m as i128 * endo.f() as i128 * beta.val as i128,
        )),
        (QuadKind::Ramified, QuadType::Unramified) => Ok(Sign::from_parity(endo.e() as i128)),
        (QuadKind::Ramified, _) => {
            let n0 = (m * endo.degree() / 2) as i128;
            let sign = omega(&base, k, &base.minus_one_class()).pow(n0);
            let embeds = is_square_in(&k.disc().representative(&base), &towers.p_tower(m)?)?;
            Ok(if embeds { sign } else { -sign })
        }
    }
}

/// `omega_K((-1)^{n0} N_{E/F}(beta)^m)` from the norm of `beta` itself.
pub fn w_sign_direct(
    k: &QuadExtClass,
    towers: &EndoTowers,
    beta: &BetaClass,
    m: u32,
) -> Result<Sign> {
    towers.check_beta(beta)?;
    let base = towers.base();
    let n0 = (m * towers.endo().degree() / 2) as i64;
    let norm = norm_to_base(
        &FieldElementClass::new(beta.val, beta.zeta),
        &towers.e_tower(),
    )?;
    let x = norm.pow(m as i64).mul(&base.minus_one().pow(n0))?;
    Ok(omega(&base, k, &square_class(&x)))
}

pub fn epsilon_level0(
    inner: &InnerFormSpec,
    s: u32,
    k: &QuadExtClass,
    chi_trivial_on_norms: Option<bool>,
) -> Result<Sign> {
    if s == 0 || inner.two_n() % s != 0 {
        return Err(Error::NotADivisor {
            k: s as u64,
            of: inner.two_n() as u64,
        });
    }
    match (s == inner.two_n(), chi_trivial_on_norms) {
        (true, Some(trivial)) => Ok(Sign::from_bool(!trivial)),
        (true, None) => constraint("s = 2n requires the Steinberg twist flag"),
        (false, Some(_)) => constraint("the Steinberg twist flag only applies when s = 2n"),
        (false, None) => Ok(Sign::from_parity(s as i128 * k.f() as i128)),
    }
}

pub fn distinguished_verdict(symplectic: bool, e_k: Sign, r: u32) -> bool {
    symplectic && e_k == Sign::from_parity(r as i128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaModel {
    /// Cardinality of the residue field of `E0`.
    pub q0: u64,
    pub m: u32,
    pub c: u32,
    pub quad: QuadKind,
    pub c0_odd: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaCounts {
    pub omega: u64,
    pub omega_plus: u64,
    /// Classes under the Galois action, i.e. autodual representations of `G`.
    pub a_total: u64,
    pub a_plus: u64,
}

impl OmegaModel {
    pub fn new(q0: u64, m: u32, c: u32, quad: QuadKind, c0_odd: bool) -> Result<Self> {
        if m == 0 || c == 0 {
            return constraint("m and c must be positive");
        }
        let ok = match (quad, c0_odd) {
            (QuadKind::Unramified, true) => (m * c) % 2 == 1,
            (QuadKind::Unramified, false) => false,
            (QuadKind::Ramified, true) => m % 2 == 0 || m == 1,
            (QuadKind::Ramified, false) => true,
        };
        if !ok {
            return constraint(format!(
                "(quad {quad:?}, m = {m}, c = {c}, c0 odd = {c0_odd}) is not an admissible case"
            ));
        }
        Ok(Self {
            q0,
            m,
            c,
            quad,
            c0_odd,
        })
    }

    /// Residue field of `C` and of `E`.
    fn fields(&self) -> Result<(u64, u64)> {
        let q_e = match self.quad {
            QuadKind::Unramified => self.q0.checked_mul(self.q0),
            QuadKind::Ramified => Some(self.q0),
        }
        .ok_or(Error::TooLarge {
            size: self.q0 as u128,
        })?;
        let q = q_e
            .checked_pow(self.c)
            .ok_or(Error::TooLarge { size: q_e as u128 })?;
        Ok((q, q_e))
    }

    /// Cuspidal orbits of `GL_m(l)` which are tau-autodual and whose Galois stabilizer is prime to `m`.
    pub fn admissible_orbits(&self) -> Result<Vec<CharOrbit>> {
        let (q, q_e) = self.fields()?;
        let mut out = Vec::new();
        for o in enumerate_cuspidals(q, self.m)? {
            let autodual = match self.quad {
                QuadKind::Unramified => o.is_sigma_autodual(self.q0)?,
                QuadKind::Ramified => o.is_selfdual(),
            };
            if autodual && crate::arith::gcd(o.stabilizer_order(q_e)? as u64, self.m as u64) == 1 {
                out.push(o);
            }
        }
        Ok(out)
    }
}

pub fn omega_counts(model: &OmegaModel) -> Result<OmegaCounts> {
    let (q, q_e) = model.fields()?;
    let orbits = model.admissible_orbits()?;
    // Each orbit carries two extensions rho and rho*, exactly one of them distinguished.
    let omega = 2 * orbits.len() as u64;
    let modulus = q.pow(model.m) - 1;
    // Frobenius of l over k_E permutes the orbits; q_E^c = q acts trivially.
    let classes: BTreeSet<u64> = orbits
        .iter()
        .map(|o| {
            (0..model.c as u64)
                .map(|j| {
                    let k = crate::arith::mul_mod(
                        o.rep_exponent(),
                        crate::arith::pow_mod(q_e, j, modulus),
                        modulus,
                    );
                    CharOrbit::new(q, model.m, k).map_or(k, |x| x.rep_exponent())
                })
                .min()
                .unwrap_or(0)
        })
        .collect();
    Ok(OmegaCounts {
        omega,
        omega_plus: omega / 2,
        a_total: 2 * classes.len() as u64,
        a_plus: classes.len() as u64,
    })
}

/// Number of autodual cuspidal representations with symplectic parameter, from the fibers `s -> |A|`.
pub fn symplectic_count(
    counts_per_s: &BTreeMap<u32, u64>,
    theta_null: bool,
    r: u32,
    two_n: u32,
) -> Result<u64> {
    for (&s, &count) in counts_per_s {
        if count % 2 != 0 && s != two_n {
            return constraint(format!("fiber s = {s} has odd cardinality {count}"));
        }
    }
    let total: u64 = counts_per_s.values().sum();
    if total % 2 != 0 {
        return constraint(format!("total {total} is odd"));
    }
    Ok(total / 2 + if theta_null && r == 1 { 2 } else { 0 })
}

pub fn level0_type_distinction(
    case: Level0Case,
    inner: &InnerFormSpec,
    orbit: &CharOrbit,
    index_i: Option<u32>,
) -> Result<bool> {
    let r = inner.r();
    match case {
        Level0Case::I => {
            let i = index_i.ok_or_else(|| Error::Constraint("case I needs the index i".into()))?;
            Ok((r % 2 == 0 || r == 1) && i == r / 2 && orbit.is_selfdual())
        }
        Level0Case::II => Ok(r % 2 == 0 && orbit.is_selfdual()),
        Level0Case::III => {
            let q0 = (1..=orbit.q())
                .take_while(|x| x * x <= orbit.q())
                .last()
                .unwrap_or(1);
            if q0 * q0 != orbit.q() {
                return constraint(format!(
                    "case III needs a square residue field, got {}",
                    orbit.q()
                ));
            }
            if orbit.m() != r {
                return constraint(format!(
                    "case III needs an orbit of degree r = {r}, got {}",
                    orbit.m()
                ));
            }
            Ok(r % 2 == 1 && is_distinguished_gow(orbit, GowFlavor::Subfield(q0))?)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RhoData {
    UnramifiedCharacter(bool),
    CentralCharNontrivialOnZ(bool),
    CentralCharTrivialOnZ0(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parity {
    Symplectic,
    Orthogonal,
}

pub fn parity_predicate(quad: QuadType, m: u32, rho: RhoData) -> Result<Parity> {
    let symplectic = match (quad, rho) {
        (QuadType::Null, _) => return constraint("parity data applies to a nonzero level"),
        (QuadType::Ramified, _) if m % 2 == 1 && m > 1 => {
            return constraint(format!("ramified T/T0 forces m even or 1, got {m}"))
        }
        (QuadType::Unramified, _) if m % 2 == 0 => {
            return constraint(format!("unramified T/T0 forces m odd, got {m}"))
        }
        (QuadType::Ramified, RhoData::UnramifiedCharacter(b)) if m == 1 => b,
        (QuadType::Ramified, RhoData::CentralCharNontrivialOnZ(b)) if m % 2 == 0 => b,
        (QuadType::Unramified, RhoData::CentralCharTrivialOnZ0(b)) => b,
        (q, d) => return constraint(format!("data {d:?} does not apply to ({q:?}, m = {m})")),
    };
    Ok(if symplectic {
        Parity::Symplectic
    } else {
        Parity::Orthogonal
    })
}
