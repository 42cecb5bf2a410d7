//! Exhaustive enumeration of parameter tuples and the cross-checks run on each of them.

use crate::arith::{divisors, gcd};
use crate::distinction_engine::{
    field_embedding_with_involution, stable_max_order_exists, tau_character_exists,
    w_sign_closed_form, w_sign_direct, w_sign_formulary, EndoTowers,
};
use crate::endo_invariants::{
    admissible_n, derive, BetaClass, EndoClassInvariants, InnerFormSpec, InvolutionSpec, QuadType,
};
use crate::error::Result;
use crate::residue_field::FiniteField;
use crate::sign::Sign;
use crate::tame_tower::{is_square_in, zeta_representatives, BaseField, QuadKind, SquareClass};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRanges {
    pub primes: Vec<u64>,
    pub f0s: Vec<u32>,
    pub max_two_n: u32,
    pub max_e: u32,
    pub max_f: u32,
    /// Residue groups up to this order have every tower unit enumerated.
    pub zeta_full_below: u64,
    pub quads: Vec<QuadType>,
}

impl Default for SweepRanges {
    fn default() -> Self {
        Self {
            primes: vec![3, 5, 7, 11],
            f0s: vec![1, 2],
            max_two_n: 8,
            max_e: 4,
            max_f: 4,
            zeta_full_below: 32,
            quads: vec![QuadType::Unramified, QuadType::Ramified],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SweepTuple {
    pub p: u64,
    pub f0: u32,
    pub r: u32,
    pub d: u32,
    pub e: u32,
    pub f: u32,
    pub quad: QuadType,
    pub alpha: SquareClass,
    pub zeta: u64,
    pub beta_val: i64,
    pub beta_zeta: u64,
    pub n_big: u32,
}

/// Names of the checks run by [`check_tuple`], in report order.
pub const CHECK_NAMES: [&str; 14] = [
    "norm_membership_routes_agree",
    "tau_iff_w_sign",
    "closed_form_matches_formulary",
    "direct_norm_matches_formulary",
    "criterion_paths_agree",
    "split_tau_iff_w_plus",
    "unramified_k_w_iff_square",
    "degree_identity",
    "embedding_iff_tau",
    "stable_order_when_tau",
    "parity_filters_when_tau",
    "beta_valuation_odd",
    "parametric_degree_parity",
    "c0_in_c_or_2c",
];

fn residue_of_zeta(base: &BaseField, endo: &EndoClassInvariants) -> Result<FiniteField> {
    match endo.quad() {
        QuadType::Unramified => base.residue().extension(endo.f() / 2),
        _ => base.residue().extension(endo.f()),
    }
}

/// Beta representatives: a few valuations of each allowed parity, residues deduplicated by parity.
fn beta_representatives(endo: &EndoClassInvariants, l: FiniteField) -> Vec<(i64, u64)> {
    let (vals, residues): (&[i64], Vec<u64>) = match endo.quad() {
        QuadType::Ramified => (&[-1, 1, 3], vec![0, 1]),
        _ => {
            let q0 = l.subfield(2).map(|k| k.q()).unwrap_or(1);
            (&[-1, 0, 1, 2], vec![(q0 + 1) / 2])
        }
    };
    let mut seen = BTreeSet::new();
    let residues: Vec<u64> = residues
        .into_iter()
        .filter(|k| seen.insert(k % 2))
        .collect();
    vals.iter()
        .flat_map(|&v| residues.iter().map(move |&k| (v, k)))
        .collect()
}

pub fn enumerate_tuples(ranges: &SweepRanges) -> Result<Vec<SweepTuple>> {
    let mut out = Vec::new();
    for &p in &ranges.primes {
        for &f0 in &ranges.f0s {
            let base = BaseField::new(p, f0)?;
            for two_n in (2..=ranges.max_two_n).step_by(2) {
                for r in divisors(two_n as u64).into_iter().map(|x| x as u32) {
                    let d = two_n / r;
                    let inner = InnerFormSpec::new(r, d)?;
                    for deg in divisors(two_n as u64)
                        .into_iter()
                        .map(|x| x as u32)
                        .filter(|x| x % 2 == 0)
                    {
                        for e in divisors(deg as u64).into_iter().map(|x| x as u32) {
                            let f = deg / e;
                            if e > ranges.max_e || f > ranges.max_f || gcd(e as u64, p) != 1 {
                                continue;
                            }
                            for &quad in &ranges.quads {
                                let Ok(endo) = EndoClassInvariants::new(e, f, quad) else {
                                    continue;
                                };
                                if endo.is_null() {
                                    continue;
                                }
                                let ns = admissible_n(&inner, &endo);
                                if ns.is_empty() {
                                    continue;
                                }
                                let zeta_field = residue_of_zeta(&base, &endo)?;
                                let zetas =
                                    zeta_representatives(zeta_field, e, ranges.zeta_full_below);
                                let l = base.residue().extension(f)?;
                                let betas = beta_representatives(&endo, l);
                                for alpha in SquareClass::all() {
                                    if alpha.is_trivial() && r % 2 != 0 {
                                        continue;
                                    }
                                    for z in &zetas {
                                        for &(beta_val, beta_zeta) in &betas {
                                            for &n_big in &ns {
                                                out.push(SweepTuple {
                                                    p,
                                                    f0,
                                                    r,
                                                    d,
                                                    e,
                                                    f,
                                                    quad,
                                                    alpha,
                                                    zeta: z.exponent(),
                                                    beta_val,
                                                    beta_zeta,
                                                    n_big,
                                                });
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Runs every cross-check on one tuple; `None` marks a check that does not apply.
pub fn check_tuple(t: &SweepTuple) -> Result<Vec<(&'static str, Option<bool>)>> {
    let base = BaseField::new(t.p, t.f0)?;
    let inner = InnerFormSpec::new(t.r, t.d)?;
    let endo = EndoClassInvariants::new(t.e, t.f, t.quad)?;
    let inv = InvolutionSpec::for_inner(t.alpha, &inner)?;
    let towers = EndoTowers::new(base, endo, t.zeta as i128)?;
    let l = towers.e_tower().residue();
    let beta = BetaClass {
        val: t.beta_val,
        zeta: l.unit(t.beta_zeta as i128),
    };

    let square = inv.alpha_is_square();
    let in_norm = square || towers.alpha_in_norm_hilbert(&t.alpha)?;
    let in_norm_closed = square || towers.alpha_in_norm_closed(&t.alpha)?;
    let derived = derive(&inner, &endo, &inv, in_norm)?;
    let tau = tau_character_exists(&inner, &endo, &inv, in_norm);
    let w_closed = w_sign_closed_form(&inner, &endo, in_norm)?;
    let delta = t.n_big * endo.degree();
    let s = inner.two_n() / delta;
    let minus_one_to_r = Sign::from_parity(t.r as i128);

    // Criteria for the split group GL_delta, whose cuspidal support has P of degree N over E.
    let path_norm = in_norm || t.n_big % 2 == 0;
    let path_closed = in_norm_closed || t.n_big % 2 == 0;
    let path_residue = towers.residue_criterion(&t.alpha, t.n_big)?;

    let (w_cusp, direct) = match inv.k() {
        Some(k) => (
            w_sign_formulary(&k, &towers, &beta, t.n_big)?,
            Some(w_sign_direct(&k, &towers, &beta, t.n_big)?),
        ),
        None => (Sign::Plus, None),
    };
    let w = w_cusp.pow(s as i128);
    let unramified_k = inv.k().filter(|k| k.kind() == QuadKind::Unramified);
    let p_tower = towers.p_tower(t.n_big)?;

    let parity_ok = match endo.quad() {
        QuadType::Unramified => derived.m % 2 == 1 && derived.c % 2 == 1,
        _ => derived.m % 2 == 0 || derived.m == 1,
    } && (t.r % 2 == 0 || (derived.m % 2 == 1 && derived.c % 2 == 1));

    Ok(vec![
        (
            "norm_membership_routes_agree",
            Some(in_norm == in_norm_closed),
        ),
        ("tau_iff_w_sign", Some(tau == (w == minus_one_to_r))),
        ("closed_form_matches_formulary", Some(w_closed == w)),
        ("direct_norm_matches_formulary", direct.map(|d| d == w_cusp)),
        (
            "criterion_paths_agree",
            Some(path_norm == path_closed && path_closed == path_residue),
        ),
        (
            "split_tau_iff_w_plus",
            Some(path_norm == (w_cusp == Sign::Plus)),
        ),
        (
            "unramified_k_w_iff_square",
            match unramified_k {
                Some(k) => Some(
                    (w_cusp == Sign::Plus)
                        == is_square_in(&k.disc().representative(&base), &p_tower)?,
                ),
                None => None,
            },
        ),
        (
            "degree_identity",
            Some(derived.m * derived.c * endo.degree() == inner.two_n()),
        ),
        (
            "embedding_iff_tau",
            Some(field_embedding_with_involution(&inner, endo.degree(), in_norm || square)? == tau),
        ),
        (
            "stable_order_when_tau",
            tau.then(|| {
                derived
                    .c0
                    .map(|c0| stable_max_order_exists(c0, endo.quad()).unwrap_or(false))
                    == Some(true)
            }),
        ),
        ("parity_filters_when_tau", tau.then_some(parity_ok)),
        (
            "beta_valuation_odd",
            (endo.quad() == QuadType::Ramified).then_some(
                t.beta_val % 2 != 0 && BetaClass::new(&endo, beta.val, beta.zeta).is_ok(),
            ),
        ),
        (
            "parametric_degree_parity",
            Some(match endo.quad() {
                QuadType::Unramified => t.n_big % 2 == 1,
                _ => t.n_big % 2 == 0 || t.n_big == 1,
            }),
        ),
        (
            "c0_in_c_or_2c",
            derived.c0.map(|c0| {
                (c0 == derived.c && derived.l == Some(derived.m))
                    || (c0 == 2 * derived.c && derived.l.map(|l| 2 * l) == Some(derived.m))
            }),
        ),
    ])
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub name: &'static str,
    pub applied: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub tuples: u64,
    pub checks: Vec<CheckTally>,
    pub failures: Vec<(SweepTuple, &'static str)>,
    pub errors: Vec<(SweepTuple, String)>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.errors.is_empty()
    }

    pub fn tally(&self, name: &str) -> Option<&CheckTally> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Folds per-tuple results, given in canonical tuple order.
pub fn summarize<I>(results: I) -> SweepSummary
where
    I: IntoIterator<Item = (SweepTuple, Result<Vec<(&'static str, Option<bool>)>>)>,
{
    let mut checks: Vec<CheckTally> = CHECK_NAMES
        .iter()
        .map(|&name| CheckTally {
            name,
            applied: 0,
            failed: 0,
        })
        .collect();
    let mut failures = Vec::new();
    let mut errors = Vec::new();
    let mut tuples = 0;
    for (t, res) in results {
        tuples += 1;
        match res {
            Ok(list) => {
                for (name, outcome) in list {
                    let Some(ok) = outcome else { continue };
                    if let Some(c) = checks.iter_mut().find(|c| c.name == name) {
                        c.applied += 1;
                        if !ok {
                            c.failed += 1;
                            failures.push((t, name));
                        }
                    }
                }
            }
            Err(e) => errors.push((t, e.to_string())),
        }
    }
    SweepSummary {
        tuples,
        checks,
        failures,
        errors,
    }
}

/// Sequential sweep.
pub fn run_sweep(ranges: &SweepRanges) -> Result<SweepSummary> {
    let tuples = enumerate_tuples(ranges)?;
    Ok(summarize(tuples.into_iter().map(|t| {
        let r = check_tuple(&t);
        (t, r)
    })))
}
