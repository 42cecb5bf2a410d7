//! Numeric data of inner forms, autodual endo-classes and involutions.

use crate::arith::{gcd, lcm};
use crate::error::{constraint, Error, Result};
use crate::residue_field::{FiniteField, UnitClass};
use crate::tame_tower::{QuadExtClass, SquareClass};
use serde::Serialize;

/// Largest residue group enumerated when listing beta classes.
const MAX_BETA_ENUMERATION: u64 = 1 << 20;

/// The inner form `GL_r(D)` of `GL_{2n}(F)`, `D` of reduced degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct InnerFormSpec {
    n: u32,
    r: u32,
    d: u32,
}

impl InnerFormSpec {
    pub fn new(r: u32, d: u32) -> Result<Self> {
        if r == 0 || d == 0 {
            return constraint("r and d must be positive");
        }
        if (r * d) % 2 != 0 {
            return constraint(format!("r*d = {} must be even", r * d));
        }
        Ok(Self { n: r * d / 2, r, d })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn two_n(&self) -> u32 {
        2 * self.n
    }

    pub fn is_split(&self) -> bool {
        self.d == 1
    }
}

/// Type of the quadratic extension `T/T0` attached to an autodual endo-class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadType {
    /// Level zero.
    Null,
    Unramified,
    Ramified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EndoClassInvariants {
    degree: u32,
    e: u32,
    f: u32,
    quad: QuadType,
}

impl EndoClassInvariants {
    pub fn new(e: u32, f: u32, quad: QuadType) -> Result<Self> {
        if e == 0 || f == 0 {
            return constraint("e and f must be positive");
        }
        match quad {
            QuadType::Null if e * f != 1 => {
                return constraint(format!("a null endo-class has degree 1, not {}", e * f))
            }
            QuadType::Unramified if f % 2 != 0 => {
                return constraint(format!(
                    "unramified T/T0 needs an even residue degree, got f = {f}"
                ))
            }
            QuadType::Ramified if e % 2 != 0 => {
                return constraint(format!(
                    "ramified T/T0 needs an even ramification index, got e = {e}"
                ))
            }
            _ => {}
        }
        Ok(Self {
            degree: e * f,
            e,
            f,
            quad,
        })
    }

    pub fn null() -> Self {
        Self {
            degree: 1,
            e: 1,
            f: 1,
            quad: QuadType::Null,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn quad(&self) -> QuadType {
        self.quad
    }

    pub fn is_null(&self) -> bool {
        self.quad == QuadType::Null
    }

    /// Rejects an endo-class whose degree does not divide `2n`.
    pub fn check_against(&self, inner: &InnerFormSpec) -> Result<()> {
        if inner.two_n() % self.degree != 0 {
            return Err(Error::NotADivisor {
                k: self.degree as u64,
                of: inner.two_n() as u64,
            });
        }
        Ok(())
    }
}

/// The involution `Ad(kappa)` with `kappa^2 = alpha`; `K = F[kappa]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct InvolutionSpec {
    alpha: SquareClass,
    k: Option<QuadExtClass>,
}

impl InvolutionSpec {
    pub fn new(alpha: SquareClass) -> Self {
        Self {
            alpha,
            k: QuadExtClass::new(alpha).ok(),
        }
    }

    /// Validates against an inner form: the square case requires `r` even.
    pub fn for_inner(alpha: SquareClass, inner: &InnerFormSpec) -> Result<Self> {
        if alpha.is_trivial() && inner.r() % 2 != 0 {
            return constraint(format!(
                "alpha a square requires r even, got r = {}",
                inner.r()
            ));
        }
        Ok(Self::new(alpha))
    }

    pub fn alpha(&self) -> SquareClass {
        self.alpha
    }

    pub fn k(&self) -> Option<QuadExtClass> {
        self.k
    }

    pub fn alpha_is_square(&self) -> bool {
        self.alpha.is_trivial()
    }

    /// Ramification index of `K/F`, 1 in the split case.
    pub fn e_k(&self) -> u32 {
        self.k.map_or(1, |k| k.e())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedInvariants {
    pub m: u32,
    pub c: u32,
    /// `[E0 : F]`.
    pub g: Option<u32>,
    pub c0: Option<u32>,
    pub l: Option<u32>,
    pub t: Option<u32>,
}

/// `(m, c)` for the centralizer of `E` in `A`.
pub fn m_and_c(inner: &InnerFormSpec, endo: &EndoClassInvariants) -> Result<(u32, u32)> {
    endo.check_against(inner)?;
    let deg = endo.degree();
    let c = inner.d() / gcd(inner.d() as u64, deg as u64) as u32;
    let per = inner.two_n() / deg;
    if per % c != 0 {
        return constraint(format!("c = {c} does not divide 2n/deg = {per}"));
    }
    Ok((per / c, c))
}

/// Whether `E` embeds in `A` with `kappa` acting as the nontrivial automorphism of `E/E0`.
pub(crate) fn embedding_condition(inner: &InnerFormSpec, degree: u32, alpha_in_norm: bool) -> bool {
    let ratio_even = (inner.two_n() / degree) % 2 == 0;
    if inner.r() % 2 == 0 {
        alpha_in_norm || ratio_even
    } else {
        !alpha_in_norm && !ratio_even
    }
}

pub fn derive(
    inner: &InnerFormSpec,
    endo: &EndoClassInvariants,
    inv: &InvolutionSpec,
    alpha_in_norm: bool,
) -> Result<DerivedInvariants> {
    let (m, c) = m_and_c(inner, endo)?;
    let mut out = DerivedInvariants {
        m,
        c,
        g: None,
        c0: None,
        l: None,
        t: None,
    };
    if endo.is_null() {
        return Ok(out);
    }
    let d = inner.d();
    let g = endo.degree() / 2;
    out.g = Some(g);
    out.t = Some(inner.two_n() / lcm(d as u64, g as u64) as u32);
    if !embedding_condition(inner, endo.degree(), alpha_in_norm || inv.alpha_is_square()) {
        return Ok(out);
    }
    let ratio = d / gcd(d as u64, g as u64) as u32;
    let c0 = if alpha_in_norm || inv.alpha_is_square() || ratio % 4 == 0 {
        ratio
    } else if ratio % 2 == 1 {
        2 * ratio
    } else {
        ratio / 2
    };
    out.c0 = Some(c0);
    out.l = ((m * c) % c0 == 0).then(|| m * c / c0);
    Ok(out)
}

/// Whether a cuspidal autodual representation of parametric degree `N * deg` exists.
pub fn cuspidal_exists(inner: &InnerFormSpec, endo: &EndoClassInvariants, big_n: u32) -> bool {
    let delta = big_n * endo.degree();
    if big_n == 0 || delta > inner.two_n() {
        return false;
    }
    let parity_ok = match endo.quad() {
        QuadType::Unramified => big_n % 2 == 1,
        QuadType::Ramified | QuadType::Null => big_n % 2 == 0 || big_n == 1,
    };
    delta as u64 == inner.r() as u64 * gcd(inner.d() as u64, delta as u64) && parity_ok
}

/// All `N` for which [`cuspidal_exists`] holds.
pub fn admissible_n(inner: &InnerFormSpec, endo: &EndoClassInvariants) -> Vec<u32> {
    if endo.check_against(inner).is_err() {
        return Vec::new();
    }
    (1..=inner.two_n() / endo.degree())
        .filter(|&n| cuspidal_exists(inner, endo, n))
        .collect()
}

/// `beta = w^val * zeta` up to principal units, `zeta` in the residue field of `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BetaClass {
    pub val: i64,
    pub zeta: UnitClass,
}

impl BetaClass {
    /// Checks the constraints coming from `sigma(beta) = -beta`.
    pub fn new(endo: &EndoClassInvariants, val: i64, zeta: UnitClass) -> Result<Self> {
        match endo.quad() {
            QuadType::Null => return constraint("beta classes are undefined at level zero"),
            QuadType::Ramified if val % 2 == 0 => {
                return constraint(format!(
                    "ramified E/E0 forces an odd valuation of beta, got {val}"
                ))
            }
            QuadType::Unramified if !unramified_beta_residue_ok(&zeta)? => {
                return constraint(format!(
                    "residue exponent {} does not satisfy zeta^(Q0-1) = -1",
                    zeta.exponent()
                ))
            }
            _ => {}
        }
        Ok(Self { val, zeta })
    }
}

/// `zeta^{Q0 - 1} = -1` with `Q0` the size of the index-2 subfield.
fn unramified_beta_residue_ok(zeta: &UnitClass) -> Result<bool> {
    let l = zeta.field();
    let q0 = l.subfield(2)?.q();
    Ok(zeta.pow((q0 - 1) as i128) == l.minus_one())
}

/// All beta classes for a residue field `l` of `E`: valuation parity and residue unit.
pub fn enumerate_beta_classes(
    endo: &EndoClassInvariants,
    l: FiniteField,
) -> Result<Vec<BetaClass>> {
    if l.group_order() > MAX_BETA_ENUMERATION {
        return Err(Error::TooLarge {
            size: l.group_order() as u128,
        });
    }
    match endo.quad() {
        QuadType::Null => constraint("beta classes are undefined at level zero"),
        QuadType::Ramified => Ok(l.units().map(|z| BetaClass { val: 1, zeta: z }).collect()),
        QuadType::Unramified => {
            let zetas: Vec<UnitClass> = l
                .units()
                .filter(|z| unramified_beta_residue_ok(z).unwrap_or(false))
                .collect();
            if l.degree() % 2 != 0 {
                return Err(Error::NotADivisor {
                    k: 2,
                    of: l.degree() as u64,
                });
            }
            Ok([0, 1]
                .into_iter()
                .flat_map(|val| zetas.iter().map(move |&z| BetaClass { val, zeta: z }))
                .collect())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RepInvariants {
    pub delta: u32,
    pub s: u32,
    pub b: u32,
    pub t_pi: u32,
    pub conductor: Option<u64>,
}

pub fn rep_invariants(
    inner: &InnerFormSpec,
    endo: &EndoClassInvariants,
    delta: u32,
    beta: Option<&BetaClass>,
) -> Result<RepInvariants> {
    let (m, _) = m_and_c(inner, endo)?;
    let deg = endo.degree();
    if delta % deg != 0 || !cuspidal_exists(inner, endo, delta / deg) {
        return constraint(format!(
            "no autodual cuspidal representation has parametric degree {delta}"
        ));
    }
    if delta % (m * deg) != 0 {
        return constraint(format!(
            "m * deg = {} does not divide delta = {delta}",
            m * deg
        ));
    }
    let t_pi = delta / deg * endo.f();
    Ok(RepInvariants {
        delta,
        s: inner.two_n() / delta,
        b: delta / (m * deg),
        t_pi,
        conductor: beta.map(|b| t_pi as u64 * b.val.unsigned_abs()),
    })
}
