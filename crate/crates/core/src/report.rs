//! One parameter tuple in, every derived invariant and the verdict out.

use crate::distinction_engine::{
    character_class_count, distinguished_verdict, epsilon_level0, level0_case,
    tau_character_exists, w_sign_closed_form, w_sign_direct, w_sign_formulary, EndoTowers,
    Level0Case,
};
use crate::endo_invariants::{
    admissible_n, derive, rep_invariants, BetaClass, DerivedInvariants, EndoClassInvariants,
    InnerFormSpec, InvolutionSpec, QuadType, RepInvariants,
};
use crate::error::{Error, Result};
use crate::sign::Sign;
use crate::tame_tower::{BaseField, SquareClass};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Query {
    pub p: u64,
    pub f0: u32,
    pub r: u32,
    pub d: u32,
    pub e: u32,
    pub f: u32,
    pub quad: QuadType,
    pub alpha: SquareClass,
    /// Exponent of the tower unit, in the residue field of `E` (or `E0` when `E/E0` is unramified).
    pub zeta: i128,
    /// `(val, residue exponent)` of beta.
    pub beta: Option<(i64, i128)>,
    pub symplectic: Option<bool>,
    /// Whether the Steinberg twist character is trivial on norms from `K` (only used when `s = 2n`).
    pub chi_trivial_on_norms: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Distinguished,
    NotDistinguished,
    NeedsSymplecticFlag,
    /// The epsilon sign needs the Steinberg twist flag.
    Undetermined,
    /// Different representations of the same data get different answers.
    DependsOnRepresentation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepReport {
    pub n_big: u32,
    pub invariants: RepInvariants,
    /// Cuspidal-level sign before raising to `s`.
    pub w_cuspidal: Option<Sign>,
    pub e_k: Option<Sign>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistinctionReport {
    pub degree: u32,
    pub n: u32,
    pub derived: DerivedInvariants,
    pub alpha_in_norm: Option<bool>,
    pub tau_char_exists: bool,
    pub char_class_count: Option<u32>,
    pub level0_case: Option<Level0Case>,
    pub w_sign: Option<Sign>,
    pub e_k: Option<Sign>,
    pub verdict: Verdict,
    pub beta: Option<BetaClass>,
    pub representations: Vec<RepReport>,
}

fn verdict_for(symplectic: Option<bool>, e_k: Option<Sign>, r: u32) -> Verdict {
    match (symplectic, e_k) {
        (None, _) => Verdict::NeedsSymplecticFlag,
        (Some(false), _) => Verdict::NotDistinguished,
        (Some(true), None) => Verdict::Undetermined,
        (Some(true), Some(e)) if distinguished_verdict(true, e, r) => Verdict::Distinguished,
        (Some(true), Some(_)) => Verdict::NotDistinguished,
    }
}

pub fn evaluate(q: &Query) -> Result<DistinctionReport> {
    let base = BaseField::new(q.p, q.f0)?;
    let inner = InnerFormSpec::new(q.r, q.d)?;
    let endo = EndoClassInvariants::new(q.e, q.f, q.quad)?;
    endo.check_against(&inner)?;
    let inv = InvolutionSpec::for_inner(q.alpha, &inner)?;
    let ns = admissible_n(&inner, &endo);

    if endo.is_null() {
        return evaluate_level0(q, &inner, &endo, &inv, &ns);
    }

    let towers = EndoTowers::new(base, endo, q.zeta)?;
    let in_norm = inv.alpha_is_square() || towers.alpha_in_norm_hilbert(&q.alpha)?;
    let in_norm_closed = inv.alpha_is_square() || towers.alpha_in_norm_closed(&q.alpha)?;
    if in_norm != in_norm_closed {
        return Err(Error::CrossCheck(format!(
            "norm membership of alpha: Hilbert symbol says {in_norm}, residue test says {in_norm_closed}"
        )));
    }
    let derived = derive(&inner, &endo, &inv, in_norm)?;
    let tau = tau_character_exists(&inner, &endo, &inv, in_norm);
    let count = if tau {
        Some(character_class_count(&inner, &endo, &inv, &derived)?)
    } else {
        None
    };
    let w = w_sign_closed_form(&inner, &endo, in_norm)?;
    if tau != (w == Sign::from_parity(q.r as i128)) {
        return Err(Error::CrossCheck(format!(
            "tau existence {tau} against w = {w} and r = {}",
            q.r
        )));
    }
    let beta = match q.beta {
        Some((val, k)) => BetaClass::new(&endo, val, towers.e_tower().residue().unit(k))?,
        None => towers.default_beta()?,
    };

    let mut reps = Vec::new();
    for &big_n in &ns {
        let invariants = rep_invariants(&inner, &endo, big_n * endo.degree(), Some(&beta))?;
        let w_cuspidal = match inv.k() {
            Some(k) => {
                let formulary = w_sign_formulary(&k, &towers, &beta, big_n)?;
                let direct = w_sign_direct(&k, &towers, &beta, big_n)?;
                if formulary != direct || formulary.pow(invariants.s as i128) != w {
                    return Err(Error::CrossCheck(format!(
                        "N = {big_n}: formulary {formulary}, direct {direct}, s = {}, closed form {w}",
                        invariants.s
                    )));
                }
                Some(formulary)
            }
            None => None,
        };
        reps.push(RepReport {
            n_big: big_n,
            invariants,
            w_cuspidal,
            e_k: Some(w),
            verdict: verdict_for(q.symplectic, Some(w), q.r),
        });
    }

    Ok(DistinctionReport {
        degree: endo.degree(),
        n: inner.n(),
        derived,
        alpha_in_norm: Some(in_norm),
        tau_char_exists: tau,
        char_class_count: count,
        level0_case: None,
        w_sign: Some(w),
        e_k: Some(w),
        verdict: verdict_for(q.symplectic, Some(w), q.r),
        beta: Some(beta),
        representations: reps,
    })
}

fn evaluate_level0(
    q: &Query,
    inner: &InnerFormSpec,
    endo: &EndoClassInvariants,
    inv: &InvolutionSpec,
    ns: &[u32],
) -> Result<DistinctionReport> {
    let derived = derive(inner, endo, inv, inv.alpha_is_square())?;
    let tau = tau_character_exists(inner, endo, inv, false);
    let case = if tau {
        Some(level0_case(inner, inv)?)
    } else {
        None
    };
    let count = if tau {
        Some(character_class_count(inner, endo, inv, &derived)?)
    } else {
        None
    };
    let mut reps = Vec::new();
    for &big_n in ns {
        let invariants = rep_invariants(inner, endo, big_n, None)?;
        let e_k = match inv.k() {
            None => Some(Sign::Plus),
            Some(k) => {
                let flag = if invariants.s == inner.two_n() {
                    q.chi_trivial_on_norms
                } else {
                    None
                };
                if invariants.s == inner.two_n() && flag.is_none() {
                    None
                } else {
                    Some(epsilon_level0(inner, invariants.s, &k, flag)?)
                }
            }
        };
        reps.push(RepReport {
            n_big: big_n,
            invariants,
            w_cuspidal: None,
            e_k,
            verdict: verdict_for(q.symplectic, e_k, q.r),
        });
    }
    let mut verdicts: Vec<Verdict> = reps.iter().map(|r| r.verdict).collect();
    verdicts.dedup();
    let verdict = match verdicts.as_slice() {
        [] => verdict_for(q.symplectic, None, q.r),
        [v] => *v,
        _ => Verdict::DependsOnRepresentation,
    };
    let mut signs: Vec<Option<Sign>> = reps.iter().map(|r| r.e_k).collect();
    signs.dedup();
    let e_k = match signs.as_slice() {
        [s] => *s,
        _ => None,
    };
    Ok(DistinctionReport {
        degree: 1,
        n: inner.n(),
        derived,
        alpha_in_norm: None,
        tau_char_exists: tau,
        char_class_count: count,
        level0_case: case,
        w_sign: None,
        e_k,
        verdict,
        beta: None,
        representations: reps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn query(r: u32, d: u32, e: u32, f: u32, quad: QuadType, alpha: SquareClass) -> Query {
        Query {
            p: 3,
            f0: 1,
            r,
            d,
            e,
            f,
            quad,
            alpha,
            zeta: 0,
            beta: None,
            symplectic: Some(true),
            chi_trivial_on_norms: None,
        }
    }

    #[test]
    fn square_alpha_even_r() {
        let rep = evaluate(&query(2, 1, 2, 1, QuadType::Ramified, SquareClass::ONE)).unwrap();
        assert!(rep.tau_char_exists);
        assert_eq!(rep.e_k, Some(Sign::Plus));
        assert_eq!(rep.verdict, Verdict::Distinguished);
    }

    #[test]
    fn split_level0_unramified_k() {
        let rep = evaluate(&query(
            2,
            1,
            1,
            1,
            QuadType::Null,
            SquareClass::UNIT_NONSQUARE,
        ))
        .unwrap();
        let s1 = rep
            .representations
            .iter()
            .find(|r| r.invariants.s == 1)
            .unwrap();
        assert_eq!(s1.e_k, Some(Sign::Plus));
    }

    #[test]
    fn steinberg_fiber_needs_flag() {
        let rep = evaluate(&query(1, 2, 1, 1, QuadType::Null, SquareClass::UNIFORMIZER)).unwrap();
        assert!(rep.representations.iter().any(|r| r.e_k.is_none()));
        let mut q = query(1, 2, 1, 1, QuadType::Null, SquareClass::UNIFORMIZER);
        q.chi_trivial_on_norms = Some(true);
        let rep = evaluate(&q).unwrap();
        assert!(rep.representations.iter().all(|r| r.e_k.is_some()));
    }

    #[test]
    fn rejects_inconsistent_inputs() {
        assert!(evaluate(&query(1, 2, 1, 1, QuadType::Null, SquareClass::ONE)).is_err());
        assert!(evaluate(&query(
            1,
            2,
            2,
            2,
            QuadType::Ramified,
            SquareClass::UNIFORMIZER
        ))
        .is_err());
        assert!(evaluate(&query(2, 1, 3, 1, QuadType::Null, SquareClass::UNIFORMIZER)).is_err());
    }
}
