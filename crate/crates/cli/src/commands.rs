use crate::config::{Format, RunConfig};
use crate::load::{diag, interpretation, load, read, Fail, Loaded};
use crate::output::summary_table;
use anyhow::{anyhow, Context as _};
use eb2dbc_core::animator::{
    check_contract_equivalence, fire, format_state, init_state, AnimError, ExploreOptions,
    Interpretation, RawValue, Value,
};
use eb2dbc_core::emitter::{translate as emit, EmitError, EmitOptions};
use eb2dbc_core::typing::TypeKey;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

fn emit_diag(l: &Loaded, e: &EmitError) -> String {
    let pos = match e {
        EmitError::UnsupportedExpr { pos, .. } | EmitError::InitReadsState { pos, .. } => {
            Some(*pos)
        }
        _ => None,
    };
    let message = e.to_string();
    let message = match pos {
        Some(p) => message
            .strip_prefix(&format!("{p}: "))
            .unwrap_or(&message)
            .to_string(),
        None => message,
    };
    diag("EMIT001", l.machine_file(), pos, &message)
}

/// Write every file into a scratch directory inside `out`, then move them
/// into place, so a failure never leaves half a translation behind.
fn write_atomically(out: &Path, files: &[(String, String)]) -> anyhow::Result<()> {
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let scratch = tempfile::Builder::new()
        .prefix(".eb2dbc-")
        .tempdir_in(out)
        .with_context(|| format!("cannot write to {}", out.display()))?;
    for (name, text) in files {
        let path = scratch.path().join(name);
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    for (name, _) in files {
        let target = out.join(name);
        fs::rename(scratch.path().join(name), &target)
            .with_context(|| format!("cannot move {} into place", target.display()))?;
    }
    Ok(())
}

pub fn translate(cfg: &RunConfig) -> Result<ExitCode, Fail> {
    let l = load(cfg)?;
    let interp = interpretation(cfg, &l)?;
    let opts = EmitOptions {
        bare_constants: cfg.bare_constants,
    };
    let t = emit(&l.model, &l.env, &interp, opts).map_err(|e| Fail::one(emit_diag(&l, &e)))?;
    t.self_check().map_err(|e| Fail::one(emit_diag(&l, &e)))?;
    let out = cfg
        .out
        .as_deref()
        .ok_or_else(|| anyhow!("no output directory"))?;
    write_atomically(out, &t.files())?;
    print!("{}", summary_table(&t));
    Ok(ExitCode::SUCCESS)
}

pub fn check(cfg: &RunConfig) -> Result<ExitCode, Fail> {
    let l = load(cfg)?;
    let interp = interpretation(cfg, &l)?;
    let opts = ExploreOptions {
        max_depth: cfg.max_depth,
        state_cap: cfg.state_cap,
        jobs: cfg.jobs,
    };
    let report = match check_contract_equivalence(&l.model, &l.env, &interp, opts) {
        Ok(r) => r,
        Err(e @ AnimError::StateSpaceExceeded(_)) => return Err(Fail::Io(anyhow!(e))),
        Err(AnimError::Emit(e)) => return Err(Fail::one(emit_diag(&l, &e))),
        Err(e) => {
            return Err(Fail::one(diag(
                "ANIM001",
                l.machine_file(),
                None,
                &e.to_string(),
            )))
        }
    };
    let mut stdout = std::io::stdout().lock();
    match cfg.format {
        Format::Text => write!(stdout, "{}", report.render_text()),
        Format::Records => report.records().iter().try_for_each(|r| {
            let line = serde_json::to_string(r).map_err(std::io::Error::other)?;
            writeln!(stdout, "{line}")
        }),
    }
    .context("cannot write report")?;
    Ok(if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Split `a, {b, c}, d` at top-level commas.
fn split_args(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0usize, 0);
    for (i, ch) in text.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = text[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

struct Call {
    event: String,
    args: Vec<RawValue>,
}

fn parse_script(path: &Path, text: &str) -> Result<Vec<Call>, Fail> {
    let mut calls = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |m: &str| {
            Fail::one(diag(
                "SCRIPT001",
                path,
                Some(eb2dbc_core::ebfront::Pos {
                    line: i + 1,
                    column: 1,
                }),
                m,
            ))
        };
        let (event, args) = match line.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| bad("expected `)` at end of line"))?;
                let args = split_args(inner)
                    .into_iter()
                    .map(|a| RawValue::parse(a, i + 1).map_err(|e| bad(&e.to_string())))
                    .collect::<Result<_, _>>()?;
                (name.trim().to_string(), args)
            }
            None => (line.to_string(), vec![]),
        };
        calls.push(Call { event, args });
    }
    Ok(calls)
}

fn arguments(l: &Loaded, interp: &Interpretation, call: &Call) -> Result<Vec<Value>, String> {
    let ev = l
        .model
        .machine
        .events
        .iter()
        .find(|e| e.name.name == call.event)
        .ok_or_else(|| AnimError::UnknownEvent(call.event.clone()).to_string())?;
    if ev.params.len() != call.args.len() {
        return Err(AnimError::Arity {
            event: call.event.clone(),
            expected: ev.params.len(),
            found: call.args.len(),
        }
        .to_string());
    }
    ev.params
        .iter()
        .zip(&call.args)
        .map(|(p, raw)| {
            let ty = &l.env.types[&TypeKey::param(&ev.name.name, &p.name)];
            interp.value_of(raw, ty).ok_or_else(|| {
                format!(
                    "event {}: `{raw}` is not a {ty} for `{}`",
                    call.event, p.name
                )
            })
        })
        .collect()
}

pub fn animate(cfg: &RunConfig) -> Result<ExitCode, Fail> {
    let l = load(cfg)?;
    let interp = interpretation(cfg, &l)?;
    let script_path = cfg.script.as_deref().ok_or_else(|| anyhow!("no script"))?;
    let calls = parse_script(script_path, &read(script_path)?)?;
    let anim = |e: String| Fail::one(diag("ANIM001", script_path, None, &e));

    let mut state = init_state(&l.model, &interp).map_err(|e| anim(e.to_string()))?;
    println!("INITIALISATION -> {}", format_state(&state));
    for call in &calls {
        let args = arguments(&l, &interp, call).map_err(anim)?;
        let ev = l
            .model
            .machine
            .events
            .iter()
            .find(|e| e.name.name == call.event)
            .expect("checked by arguments");
        state = fire(&l.model, &state, &interp, ev, &args).map_err(|e| anim(e.to_string()))?;
        let shown: Vec<String> = args.iter().map(Value::to_string).collect();
        let label = if shown.is_empty() {
            call.event.clone()
        } else {
            format!("{}({})", call.event, shown.join(", "))
        };
        println!("{label} -> {}", format_state(&state));
    }
    Ok(ExitCode::SUCCESS)
}
