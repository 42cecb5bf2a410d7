//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use distinction_core::distinction_engine::{
    epsilon_level0, omega_counts, symplectic_count, OmegaModel,
};
use distinction_core::endo_invariants::InnerFormSpec;
use distinction_core::ff_cuspidal::{
    autodual_stabilizer_census, enumerate_cuspidals, exists_autodual_with_stabilizer,
    verify_parity_constraint,
};
use distinction_core::sweep::{run_sweep, SweepRanges, SweepSummary};
use distinction_core::tame_tower::{
    hilbert_symbol, norm_square_class, quad_subext_profile, zeta_representatives, BaseField,
    QuadExtClass, QuadKind, SquareClass, TameTower,
};
use distinction_core::{arith::divisors, Sign};
use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn base_fields() -> Vec<BaseField> {
    let r = SweepRanges::default();
    r.primes
        .iter()
        .flat_map(|&p| r.f0s.iter().map(move |&f0| BaseField::new(p, f0).unwrap()))
        .collect()
}

fn zero_failures(s: &SweepSummary, names: &[&str]) -> Outcome {
    ensure(s.errors.is_empty(), || {
        format!(
            "{} tuples raised errors, first {:?}",
            s.errors.len(),
            s.errors[0]
        )
    })?;
    let mut parts = Vec::new();
    for &name in names {
        let t = s
            .tally(name)
            .ok_or_else(|| format!("missing check {name}"))?;
        ensure(t.failed == 0, || {
            let first = s.failures.iter().find(|(_, n)| *n == name).map(|(t, _)| *t);
            format!(
                "{name}: {} of {} failed, first {first:?}",
                t.failed, t.applied
            )
        })?;
        ensure(t.applied > 0, || format!("{name} never applied"))?;
        parts.push(format!("{name} {}/{}", t.applied, t.applied));
    }
    Ok(parts.join(", "))
}

fn criterion_1(s: &SweepSummary) -> Outcome {
    let t = s.tally("tau_iff_w_sign").ok_or("missing check")?;
    ensure(t.applied == s.tuples, || {
        format!("check ran on {} of {} tuples", t.applied, s.tuples)
    })?;
    zero_failures(s, &["tau_iff_w_sign"]).map(|d| format!("{} tuples; {d}", s.tuples))
}

fn criterion_2(s: &SweepSummary) -> Outcome {
    zero_failures(
        s,
        &[
            "norm_membership_routes_agree",
            "criterion_paths_agree",
            "split_tau_iff_w_plus",
            "unramified_k_w_iff_square",
            "direct_norm_matches_formulary",
            "closed_form_matches_formulary",
        ],
    )
}

fn criterion_3() -> Outcome {
    let classes = SquareClass::all();
    let mut checked = 0;
    for b in base_fields() {
        let h = |x: &SquareClass, y: &SquareClass| hilbert_symbol(&b, x, y);
        for x in &classes {
            let minus_x = x.mul(&b.minus_one_class());
            ensure(h(x, &minus_x) == Sign::Plus, || {
                format!("q = {}: (x, -x) != 1 for {x:?}", b.q())
            })?;
            ensure(
                x.is_trivial() || classes.iter().any(|y| h(x, y) == Sign::Minus),
                || format!("q = {}: {x:?} is in the radical", b.q()),
            )?;
            for y in &classes {
                ensure(h(x, y) == h(y, x), || {
                    format!("q = {}: asymmetric at {x:?}, {y:?}", b.q())
                })?;
                for z in &classes {
                    ensure(h(x, &y.mul(z)) == h(x, y) * h(x, z), || {
                        format!("q = {}: not multiplicative at {x:?}, {y:?}, {z:?}", b.q())
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!(
        "{} base fields, {checked} triples",
        base_fields().len()
    ))
}

fn criterion_4() -> Outcome {
    let mut towers = 0;
    let mut uniformizers = 0;
    for b in base_fields() {
        for e in 1..=8u32 {
            if e as u64 % b.residue().p() == 0 {
                continue;
            }
            for f in 1..=4u32 {
                let l = b.residue().extension(f).map_err(|x| x.to_string())?;
                for z in zeta_representatives(l, e, 32) {
                    let tower = TameTower::new(b, e, f, z).map_err(|x| x.to_string())?;
                    let profile = quad_subext_profile(&tower);
                    if e <= 6 && (e * f) % 2 == 0 {
                        let profile = profile.map_err(|x| x.to_string())?;
                        let ramified = profile.embedded_ramified_discs.len();
                        let shape = if f % 2 == 1 {
                            !profile.embeds_unramified && ramified == 1
                        } else {
                            profile.embeds_unramified && (ramified == 0 || ramified == 2)
                        };
                        ensure(shape, || {
                            format!("q = {}, e = {e}, f = {f}, zeta = {z:?}: {profile:?}", b.q())
                        })?;
                        towers += 1;
                    }
                    // Ramified quadratic step L / L0 with L0 = (e/2, f, zeta) of even residue degree.
                    if e % 2 == 0 && f % 2 == 0 {
                        let none_ramified = quad_subext_profile(&tower)
                            .map_err(|x| x.to_string())?
                            .embedded_ramified_discs
                            .is_empty();
                        if !none_ramified {
                            continue;
                        }
                        let units = l.group_order().min(64) as i128;
                        for k in 0..units {
                            let w = tower.element(1, k);
                            let sc = norm_square_class(&w, &tower).map_err(|x| x.to_string())?;
                            ensure(!sc.is_trivial(), || {
                                format!("q = {}, e = {e}, f = {f}, zeta = {z:?}: norm of w g^{k} is a square", b.q())
                            })?;
                            uniformizers += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{towers} tower profiles, {uniformizers} uniformizer norms"
    ))
}

fn criterion_5() -> Outcome {
    let mut cases = 0;
    for q0 in [3u64, 5] {
        for mc in (1..=9u32).step_by(2) {
            for m in divisors(mc as u64).into_iter().map(|x| x as u32) {
                let c = mc / m;
                let census = autodual_stabilizer_census(q0, m, c).map_err(|x| x.to_string())?;
                for s in divisors(c as u64).into_iter().map(|x| x as u32) {
                    let fast =
                        exists_autodual_with_stabilizer(q0, m, c, s).map_err(|x| x.to_string())?;
                    let brute = census.get(&s).is_some_and(|&n| n > 0);
                    ensure(fast == brute, || {
                        format!("q0 = {q0}, m = {m}, c = {c}, s = {s}: {fast} vs census {census:?}")
                    })?;
                    cases += 1;
                }
            }
        }
    }
    for m in 1..=4 {
        for ramified in [false, true] {
            ensure(
                verify_parity_constraint(3, m, ramified).map_err(|x| x.to_string())?,
                || format!("parity constraint fails for q0 = 3, m = {m}, ramified = {ramified}"),
            )?;
        }
    }
    let orbits = enumerate_cuspidals(3, 2).map_err(|x| x.to_string())?;
    let selfdual = orbits.iter().filter(|o| o.is_selfdual()).count();
    ensure(orbits.len() == 3 && selfdual == 1, || {
        format!("GL_2(F_3): {} orbits, {selfdual} self-dual", orbits.len())
    })?;
    Ok(format!(
        "{cases} stabilizer cases, 8 parity cases, GL_2(F_3) has 3 cuspidals, 1 self-dual"
    ))
}

fn criterion_6() -> Outcome {
    let unram = QuadExtClass::new(SquareClass::UNIT_NONSQUARE).unwrap();
    let ram = QuadExtClass::new(SquareClass::UNIFORMIZER).unwrap();
    let eps = |inner: &InnerFormSpec, s, k: &QuadExtClass, chi| {
        epsilon_level0(inner, s, k, chi).map_err(|x| x.to_string())
    };
    // Split group, s = 1.
    let split = InnerFormSpec::new(2, 1).unwrap();
    ensure(eps(&split, 1, &unram, None)? == Sign::Plus, || {
        "split, K unramified".into()
    })?;
    ensure(eps(&split, 1, &ram, None)? == Sign::Minus, || {
        "split, K ramified".into()
    })?;
    // Grid s <= 4, f in {1, 2}: sign is -1 exactly for f = 1 and s odd.
    let inner = InnerFormSpec::new(12, 1).unwrap();
    let expected = [
        (1, 1, -1),
        (2, 1, 1),
        (3, 1, -1),
        (4, 1, 1),
        (1, 2, 1),
        (2, 2, 1),
        (3, 2, 1),
        (4, 2, 1),
    ];
    for (s, f, want) in expected {
        let k = if f == 1 { &ram } else { &unram };
        ensure(eps(&inner, s, k, None)?.as_i8() == want, || {
            format!("s = {s}, f = {f}")
        })?;
    }
    // s = 2n with r = 1: the twisting character decides.
    let r1 = InnerFormSpec::new(1, 2).unwrap();
    for k in [&unram, &ram] {
        ensure(eps(&r1, 2, k, Some(true))? == Sign::Minus, || {
            "chi trivial on norms".into()
        })?;
        ensure(eps(&r1, 2, k, Some(false))? == Sign::Plus, || {
            "chi nontrivial on norms".into()
        })?;
        ensure(eps(&r1, 2, k, None).is_err(), || {
            "missing chi flag accepted".into()
        })?;
        ensure(eps(&r1, 1, k, Some(true)).is_err(), || {
            "chi flag accepted at s < 2n".into()
        })?;
    }
    Ok("2 split cases, 8 grid cells, 8 chi cases".into())
}

/// Largest `|l^x|` enumerated for the Omega models.
const MAX_TORUS: u64 = 100_000;

fn criterion_7() -> Outcome {
    let mut models = 0;
    for q0 in [3u64, 5, 7, 9] {
        for m in 1..=4u32 {
            for c in 1..=3u32 {
                for (quad, c0_odd) in [
                    (QuadKind::Unramified, true),
                    (QuadKind::Ramified, true),
                    (QuadKind::Ramified, false),
                ] {
                    let Ok(model) = OmegaModel::new(q0, m, c, quad, c0_odd) else {
                        continue;
                    };
                    let q_e = if quad == QuadKind::Unramified {
                        q0 * q0
                    } else {
                        q0
                    };
                    if q_e.pow(c * m) > MAX_TORUS {
                        continue;
                    }
                    let counts = omega_counts(&model).map_err(|x| x.to_string())?;
                    ensure(counts.omega == 2 * counts.omega_plus, || {
                        format!("{model:?}: {counts:?}")
                    })?;
                    ensure(counts.a_total == 2 * counts.a_plus, || {
                        format!("{model:?}: {counts:?}")
                    })?;
                    ensure(2 * counts.a_plus >= counts.a_total, || {
                        format!("{model:?}: {counts:?}")
                    })?;
                    models += 1;
                }
            }
        }
    }
    let census = autodual_stabilizer_census(3, 1, 1).map_err(|x| x.to_string())?;
    let unram = omega_counts(&OmegaModel::new(3, 1, 1, QuadKind::Unramified, true).unwrap())
        .map_err(|x| x.to_string())?;
    ensure(unram.omega == 2 * census.values().sum::<u64>(), || {
        format!("unramified (3, 1, 1): {unram:?} vs {census:?}")
    })?;
    let ram = omega_counts(&OmegaModel::new(3, 1, 1, QuadKind::Ramified, true).unwrap())
        .map_err(|x| x.to_string())?;
    ensure((ram.omega, ram.omega_plus) == (4, 2), || {
        format!("four-character fiber: {ram:?}")
    })?;

    let sc = |m: &[(u32, u64)], null, r, two_n| {
        symplectic_count(
            &m.iter().copied().collect::<BTreeMap<_, _>>(),
            null,
            r,
            two_n,
        )
    };
    ensure(sc(&[(1, 10)], false, 2, 4) == Ok(5), || "main case".into())?;
    ensure(sc(&[(1, 4), (2, 4)], true, 1, 2) == Ok(6), || {
        "null, r = 1".into()
    })?;
    ensure(sc(&[], false, 1, 2) == Ok(0), || "empty".into())?;
    ensure(sc(&[(1, 2), (4, 4)], true, 1, 4) == Ok(5), || {
        "F^x fiber of 4".into()
    })?;
    ensure(sc(&[(1, 3)], false, 2, 4).is_err(), || {
        "odd fiber accepted".into()
    })?;
    Ok(format!("{models} omega models, 5 symplectic counts"))
}

fn criterion_8(s: &SweepSummary) -> Outcome {
    zero_failures(
        s,
        &[
            "parity_filters_when_tau",
            "stable_order_when_tau",
            "parametric_degree_parity",
            "beta_valuation_odd",
            "c0_in_c_or_2c",
            "degree_identity",
            "embedding_iff_tau",
        ],
    )
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_distinction");
    let run = |jobs: &str| {
        Command::new(bin)
            .args(["--mode", "verify", "--json", "--jobs", jobs])
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run("1")?;
    let b = run("4")?;
    let c = run("0")?;
    ensure(a.status.success(), || {
        format!("verify exited with {:?}", a.status.code())
    })?;
    ensure(a.stdout == b.stdout && b.stdout == c.stdout, || {
        "outputs differ".into()
    })?;
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    ensure(
        doc["report"]["passed"] == serde_json::Value::Bool(true),
        || "verify summary reports failures".into(),
    )?;
    Ok(format!("3 runs, {} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |n: u32, budget: u64, f: &dyn Fn() -> Outcome, elapsed: Option<Duration>| {
        let start = Instant::now();
        let outcome = f();
        let t = elapsed.unwrap_or_else(|| start.elapsed());
        let timing = format!("{:.2}s, budget {budget}s", t.as_secs_f64());
        match outcome {
            Ok(detail) => println!("PASS criterion {n}: {detail} ({timing})"),
            Err(why) => {
                all = false;
                println!("FAIL criterion {n}: {why} ({timing})");
            }
        }
    };

    let start = Instant::now();
    let sweep = desk_sweep();
    let sweep_time = start.elapsed();
    match &sweep {
        Ok(s) => {
            report(1, 30, &|| criterion_1(s), Some(sweep_time));
            report(2, 30, &|| criterion_2(s), Some(sweep_time));
        }
        Err(e) => {
            report(1, 30, &|| Err(e.clone()), Some(sweep_time));
            report(2, 30, &|| Err(e.clone()), Some(sweep_time));
        }
    }
    report(3, 1, &criterion_3, None);
    report(4, 5, &criterion_4, None);
    report(5, 60, &criterion_5, None);
    report(6, 1, &criterion_6, None);
    report(7, 1, &criterion_7, None);
    match &sweep {
        Ok(s) => report(8, 30, &|| criterion_8(s), Some(sweep_time)),
        Err(e) => report(8, 30, &|| Err(e.clone()), Some(sweep_time)),
    }
    report(9, 60, &criterion_9, None);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// The criterion-1 sweep, single-threaded.
fn desk_sweep() -> Result<SweepSummary, String> {
    run_sweep(&SweepRanges::default()).map_err(|e| e.to_string())
}
