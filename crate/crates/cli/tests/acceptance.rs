//! End-to-end acceptance run: one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/generate.rs"]
mod generate;

use eb2dbc_core::animator::{check_translation, Bindings, ExploreOptions, Interpretation, Side};
use eb2dbc_core::ebfront::{ingest_rodin_named, load_model, EventBModel};
use eb2dbc_core::emitter::{normalize, translate, EBinOp, EExpr, EmitOptions};
use eb2dbc_core::typing::typecheck;
use proptest::test_runner::{Config, TestRunner};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn fixture(name: &str) -> PathBuf {
    fixtures().join(name)
}

fn text(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn eb2dbc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eb2dbc"))
        .args(args)
        .env("EB2DBC_COLOR", "0")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// Machine and context inputs in either surface syntax or Rodin form.
struct Inputs {
    machine: PathBuf,
    context: PathBuf,
}

impl Inputs {
    fn text() -> Self {
        Inputs {
            machine: fixture("m0.ebm"),
            context: fixture("c0.ebc"),
        }
    }

    fn rodin() -> Self {
        Inputs {
            machine: fixture("m0.bum"),
            context: fixture("c0.buc"),
        }
    }

    fn args<'a>(&'a self, command: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
        let mut v = vec![
            command,
            self.machine.to_str().unwrap(),
            self.context.to_str().unwrap(),
        ];
        v.extend_from_slice(extra);
        v
    }
}

fn bindings(dir: &Path, d: i64) -> PathBuf {
    let p = dir.join(format!("d{d}.bindings"));
    std::fs::write(&p, format!("d={d}\n")).unwrap();
    p
}

fn translated(inputs: &Inputs) -> Result<(tempfile::TempDir, PathBuf), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("out");
    let b = bindings(dir.path(), 2);
    let (code, _, err) = eb2dbc(&inputs.args(
        "translate",
        &[
            "--bindings",
            b.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--bare-constants",
        ],
    ));
    if code != 0 {
        return Err(format!("translate exited {code}: {err}"));
    }
    Ok((dir, out))
}

fn golden_machine(inputs: &Inputs) -> Outcome {
    let start = Instant::now();
    let (_keep, out) = translated(inputs)?;
    let got = normalize(&text(&out.join("m0.e")));
    let want = normalize(&text(&fixture("m0.golden.e")));
    if got != want {
        let at = got
            .iter()
            .zip(&want)
            .position(|(a, b)| a != b)
            .unwrap_or(got.len().min(want.len()));
        return Err(format!(
            "token {at} differs: {:?} vs {:?}",
            got.get(at),
            want.get(at)
        ));
    }
    Ok(format!("{} tokens match, {:?}", got.len(), start.elapsed()))
}

fn golden_constants(inputs: &Inputs) -> Outcome {
    let (_keep, out) = translated(inputs)?;
    let got = normalize(&text(&out.join("constants.e")));
    let want = normalize(&text(&fixture("constants.golden.e")));
    if got != want {
        return Err(format!("constants.e differs: {got:?}"));
    }
    Ok("once function d, axm1 `d >= 0`, axm2 `d > 0`".into())
}

/// Independent oracle: closure of {0} under n -> n+1 (n < d) and n -> n-1 (n > 0).
fn reachable(d: i64) -> usize {
    let mut seen = BTreeSet::from([0i64]);
    let mut todo = vec![0i64];
    while let Some(n) = todo.pop() {
        for next in [(n < d).then_some(n + 1), (n > 0).then_some(n - 1)]
            .into_iter()
            .flatten()
        {
            if seen.insert(next) {
                todo.push(next);
            }
        }
    }
    seen.len()
}

fn oracle_runs(inputs: &Inputs) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut notes = vec![];
    for d in [1, 2, 3, 5] {
        let b = bindings(dir.path(), d);
        let start = Instant::now();
        let (code, out, err) = eb2dbc(&inputs.args(
            "check",
            &["--bindings", b.to_str().unwrap(), "--max-depth", "10"],
        ));
        let want = format!(
            "{} states explored, 0 mismatches\n0 invariant violations, 0 deadlocks",
            reachable(d)
        );
        if code != 0 || !out.starts_with(&want) {
            return Err(format!("d={d}: exit {code}\n{out}{err}"));
        }
        notes.push(format!(
            "d={d}: {} states in {:?}",
            reachable(d),
            start.elapsed()
        ));
    }
    Ok(notes.join(", "))
}

fn m0_model() -> EventBModel {
    load_model(&text(&fixture("m0.ebm")), &[&text(&fixture("c0.ebc"))]).unwrap()
}

fn strip_old(e: &mut EExpr) {
    match e {
        EExpr::Old { name, .. } => *e = EExpr::Attr(name.clone()),
        EExpr::Binary(_, l, r) => {
            strip_old(l);
            strip_old(r);
        }
        EExpr::Not(x) | EExpr::Neg(x) => strip_old(x),
        _ => {}
    }
}

fn mutations() -> Outcome {
    let model = m0_model();
    let env = typecheck(&model).unwrap();
    let interp = Interpretation::from_bindings(&model, &env, &Bindings::parse("d=2").unwrap())
        .map_err(|e| e.to_string())?;
    let base =
        translate(&model, &env, &interp, EmitOptions::default()).map_err(|e| e.to_string())?;
    let opts = ExploreOptions::default();

    let mut no_old = base.clone();
    strip_old(&mut no_old.machine.feature_mut("ml_out").unwrap().ensure[0].expr);
    let mut weak = base.clone();
    if let EExpr::Binary(op, _, _) =
        &mut weak.machine.feature_mut("ml_out").unwrap().require[0].expr
    {
        *op = EBinOp::Le;
    }
    let mut dropped = base.clone();
    dropped.machine.invariant.retain(|a| a.tag != "inv1");

    let mut notes = vec![];
    for (name, t, side, tag) in [
        ("ensure without old", &no_old, Side::Ensure, "act1"),
        ("require <=", &weak, Side::Require, "grd1"),
        ("dropped inv1", &dropped, Side::Invariant, "inv1"),
    ] {
        let r = check_translation(&model, &env, &interp, opts, t).map_err(|e| e.to_string())?;
        let hits = r
            .mismatches
            .iter()
            .filter(|m| m.side == side && m.tag == tag)
            .count();
        if hits == 0 {
            return Err(format!("{name} went undetected"));
        }
        notes.push(format!("{name}: {hits}"));
    }
    let clean = check_translation(&model, &env, &interp, opts, &base).map_err(|e| e.to_string())?;
    if !clean.is_clean() {
        return Err("unmutated translation reports findings".into());
    }
    Ok(notes.join(", "))
}

fn properties() -> Outcome {
    type Prop = fn(&generate::Blueprint) -> Result<(), proptest::test_runner::TestCaseError>;
    let suites: [(&str, Prop); 5] = [
        ("totality/tags/counts", generate::structure_preserved),
        ("render determinism", generate::render_deterministic),
        ("print-parse", generate::print_parse_identity),
        ("contract agreement", generate::contracts_agree),
        ("frame/simultaneity", generate::frame_and_simultaneity),
    ];
    for (name, prop) in suites {
        let mut runner = TestRunner::new(Config {
            failure_persistence: None,
            ..Config::with_cases(generate::CASES)
        });
        runner
            .run(&generate::blueprint(), |s| prop(&s))
            .map_err(|e| format!("{name}: {e}"))?;
    }
    let mut runner = TestRunner::deterministic();
    let moving = generate::moving_share(&mut runner, generate::CASES);
    Ok(format!(
        "5 suites x {} cases; {moving} of {} sampled models fire events",
        generate::CASES,
        generate::CASES
    ))
}

fn rodin_parity() -> Outcome {
    let rodin = ingest_rodin_named(
        ("m0", &text(&fixture("m0.bum"))),
        &[("c0", &text(&fixture("c0.buc")))],
    )
    .map_err(|e| e.to_string())?;
    if rodin.without_positions() != m0_model().without_positions() {
        return Err("Rodin model differs from surface parse".into());
    }
    let r = Inputs::rodin();
    golden_machine(&r).map_err(|e| format!("criterion 1 on Rodin input: {e}"))?;
    golden_constants(&r).map_err(|e| format!("criterion 2 on Rodin input: {e}"))?;
    oracle_runs(&r).map_err(|e| format!("criterion 3 on Rodin input: {e}"))?;
    Ok("structurally identical; criteria 1-3 pass from .bum/.buc".into())
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("golden machine class", || golden_machine(&Inputs::text())),
        ("context translation", || golden_constants(&Inputs::text())),
        ("semantic oracle d in {1,2,3,5}", || {
            oracle_runs(&Inputs::text())
        }),
        ("mutation sensitivity", mutations),
        ("property suites", properties),
        ("Rodin ingestion parity", rodin_parity),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(note) => println!("PASS criterion {}: {name} ({note})", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
