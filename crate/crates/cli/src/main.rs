mod args;
mod render;

use args::{Cli, Mode};
use clap::Parser;
use distinction_core::report::{evaluate, DistinctionReport, Query, RepReport};
use distinction_core::sweep::{check_tuple, enumerate_tuples, summarize, SweepSummary, SweepTuple};
use distinction_core::Error;
use rayon::prelude::*;
use render::{document, tagged};
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;

const EXIT_PARSE: u8 = 2;
const EXIT_CONSTRAINT: u8 = 3;
const EXIT_CROSS_CHECK: u8 = 4;

const BY_DEGREE: &str = "endo-class degree e * f";
const BY_M_C: &str = "c = d / (d, deg), m = 2n / (deg * c)";
const BY_C0: &str = "stable maximal order index from the embedding data";
const BY_G_T: &str = "g = deg / 2, t = 2n / lcm(d, g)";
const BY_N: &str = "admissible parametric degrees N * deg = r * (d, N * deg)";
const BY_DELTA: &str = "delta = N * deg, s = 2n / delta, b = delta / (m * deg)";
const BY_T_PI: &str = "unramified self-twists N * f";
const BY_CONDUCTOR: &str = "t_pi * |val(beta)|";
const BY_NORM: &str = "Hilbert symbol over E0, checked against the residue test";
const BY_TAU: &str =
    "tau-autodual simple character: embedding of E with alpha a norm or level-zero order";
const BY_COUNT: &str = "tau-autodual character classes up to conjugacy";
const BY_CASE: &str = "level-zero case split by alpha and K";
const BY_W: &str = "epsilon sign at the cuspidal support, raised to s";
const BY_W_CUSP: &str =
    "epsilon sign formulary at the cuspidal support, checked against the direct norm computation";
const BY_E_LEVEL0: &str = "level-zero epsilon sign (-1)^(s f_K), chi-on-norms at s = 2n";
const BY_VERDICT: &str = "symplectic parameter and e_K = (-1)^r";
const BY_SWEEP: &str = "exhaustive cross-check sweep";

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((doc, ok)) => {
            let text = if cli.table {
                render::table(&doc)
            } else {
                serde_json::to_string_pretty(&doc).expect("documents are plain JSON") + "\n"
            };
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CROSS_CHECK)
            }
        }
        Err(Failure::Args(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::CrossCheck(_) => EXIT_CROSS_CHECK,
                _ => EXIT_CONSTRAINT,
            })
        }
    }
}

enum Failure {
    Args(args::ArgError),
    Core(Error),
}

impl From<args::ArgError> for Failure {
    fn from(e: args::ArgError) -> Self {
        Failure::Args(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn run(cli: &Cli) -> Result<(Value, bool), Failure> {
    match cli.mode {
        Mode::Verify | Mode::Sweep => {
            let ranges = cli.ranges()?;
            let tuples: Vec<SweepTuple> = enumerate_tuples(&ranges)?
                .into_iter()
                .filter(|t| cli.mode == Mode::Verify || cli.admits(t))
                .collect();
            let summary = sweep(tuples, cli.jobs);
            let ok = summary.passed();
            Ok((
                document(
                    json!(ranges),
                    sweep_report(&summary, cli.mode == Mode::Sweep),
                ),
                ok,
            ))
        }
        mode => {
            let q = cli.query()?;
            let report = evaluate(&q)?;
            Ok((document(query_json(&q), mode_report(mode, &report)), true))
        }
    }
}

fn sweep(tuples: Vec<SweepTuple>, jobs: usize) -> SweepSummary {
    let work = || {
        tuples
            .into_par_iter()
            .map(|t| {
                let r = check_tuple(&t);
                (t, r)
            })
            .collect::<Vec<_>>()
    };
    let results = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    };
    summarize(results)
}

fn sweep_report(s: &SweepSummary, with_failures: bool) -> Value {
    let checks: Vec<Value> = s
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "applied": tagged(c.applied, BY_SWEEP), "failed": tagged(c.failed, BY_SWEEP) }))
        .collect();
    let mut report = json!({
        "tuples": tagged(s.tuples, BY_SWEEP),
        "checks": checks,
        "failure_count": tagged(s.failures.len(), BY_SWEEP),
        "error_count": tagged(s.errors.len(), BY_SWEEP),
        "passed": s.passed(),
    });
    if with_failures || !s.passed() {
        report["failures"] = json!(s
            .failures
            .iter()
            .map(|(t, name)| json!({ "check": name, "tuple": t }))
            .collect::<Vec<_>>());
        report["errors"] = json!(s
            .errors
            .iter()
            .map(|(t, e)| json!({ "error": e, "tuple": t }))
            .collect::<Vec<_>>());
    }
    report
}

fn query_json(q: &Query) -> Value {
    let mut v = json!(q);
    v["degree"] = json!(q.e * q.f);
    v
}

fn rep_json(rep: &RepReport, mode: Mode) -> Value {
    let inv = &rep.invariants;
    let mut v = json!({ "N": tagged(rep.n_big, BY_N) });
    match mode {
        Mode::Invariants => {
            v["delta"] = tagged(inv.delta, BY_DELTA);
            v["s"] = tagged(inv.s, BY_DELTA);
            v["b"] = tagged(inv.b, BY_DELTA);
            v["t_pi"] = tagged(inv.t_pi, BY_T_PI);
            v["conductor"] = tagged(inv.conductor, BY_CONDUCTOR);
        }
        Mode::Epsilon => {
            v["s"] = tagged(inv.s, BY_DELTA);
            v["w_cuspidal"] = tagged(rep.w_cuspidal, BY_W_CUSP);
            let by = if rep.w_cuspidal.is_some() {
                BY_W
            } else {
                BY_E_LEVEL0
            };
            v["e_K"] = tagged(rep.e_k, by);
        }
        Mode::Verdict => {
            let by = if rep.w_cuspidal.is_some() {
                BY_W
            } else {
                BY_E_LEVEL0
            };
            v["e_K"] = tagged(rep.e_k, by);
            v["verdict"] = tagged(rep.verdict, BY_VERDICT);
        }
        _ => {}
    }
    v
}

fn mode_report(mode: Mode, r: &DistinctionReport) -> Value {
    let level0 = r.level0_case.is_some() || r.w_sign.is_none();
    let e_by = if level0 { BY_E_LEVEL0 } else { BY_W };
    let mut v = json!({});
    match mode {
        Mode::Invariants => {
            let d = &r.derived;
            v["degree"] = tagged(r.degree, BY_DEGREE);
            v["n"] = tagged(r.n, "r * d / 2");
            v["m"] = tagged(d.m, BY_M_C);
            v["c"] = tagged(d.c, BY_M_C);
            v["g"] = tagged(d.g, BY_G_T);
            v["t"] = tagged(d.t, BY_G_T);
            v["c0"] = tagged(d.c0, BY_C0);
            v["l"] = tagged(d.l, BY_C0);
            v["beta"] = json!(r.beta);
        }
        Mode::Exists => {
            v["alpha_in_norm"] = tagged(r.alpha_in_norm, BY_NORM);
            v["tau_char_exists"] = tagged(r.tau_char_exists, BY_TAU);
        }
        Mode::Count => {
            v["tau_char_exists"] = tagged(r.tau_char_exists, BY_TAU);
            v["char_class_count"] = tagged(r.char_class_count, BY_COUNT);
            v["level0_case"] = tagged(r.level0_case, BY_CASE);
        }
        Mode::Epsilon => {
            v["w_sign"] = tagged(r.w_sign, BY_W);
            v["e_K"] = tagged(r.e_k, e_by);
        }
        Mode::Verdict => {
            v["tau_char_exists"] = tagged(r.tau_char_exists, BY_TAU);
            v["e_K"] = tagged(r.e_k, e_by);
            v["verdict"] = tagged(r.verdict, BY_VERDICT);
        }
        Mode::Verify | Mode::Sweep => unreachable!("sweep modes do not evaluate a single query"),
    }
    if matches!(mode, Mode::Invariants | Mode::Epsilon | Mode::Verdict) {
        v["representations"] = json!(r
            .representations
            .iter()
            .map(|x| rep_json(x, mode))
            .collect::<Vec<_>>());
    }
    v
}
