//! Reading inputs into a typed model and an interpretation.

use crate::config::RunConfig;
use anyhow::Context as _;
use eb2dbc_core::animator::{Bindings, Interpretation};
use eb2dbc_core::ebfront::{
    link, parse_context_source, parse_machine_source, parse_rodin_context, parse_rodin_machine,
    ContextAst, EventBModel, FrontError, MachineAst, Pos, RodinError,
};
use eb2dbc_core::typing::{typecheck, TypeEnv};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Why a command stopped.
#[derive(Debug)]
pub enum Fail {
    /// Bad input or findings; one rendered diagnostic per line.
    Model(Vec<String>),
    /// I/O trouble or exhausted resources.
    Io(anyhow::Error),
}

impl Fail {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Fail::Model(_) => ExitCode::from(1),
            Fail::Io(_) => ExitCode::from(2),
        }
    }

    pub fn one(line: String) -> Fail {
        Fail::Model(vec![line])
    }
}

impl From<anyhow::Error> for Fail {
    fn from(e: anyhow::Error) -> Self {
        Fail::Io(e)
    }
}

pub fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Fail::Io)
}

/// `error CODE file:line:col message`
pub fn diag(code: &str, file: &Path, pos: Option<Pos>, message: &str) -> String {
    match pos {
        Some(p) => format!(
            "error {code} {}:{}:{} {message}",
            file.display(),
            p.line,
            p.column
        ),
        None => format!("error {code} {} {message}", file.display()),
    }
}

/// Split a leading `line:col: ` off an error message.
fn split_pos(message: &str) -> (Option<Pos>, &str) {
    let parsed = message.split_once(": ").and_then(|(head, rest)| {
        let (l, c) = head.split_once(':')?;
        Some((
            Pos {
                line: l.parse().ok()?,
                column: c.parse().ok()?,
            },
            rest,
        ))
    });
    match parsed {
        Some((p, rest)) => (Some(p), rest),
        None => (None, message),
    }
}

fn front_diag(code: &str, file: &Path, err: &dyn std::fmt::Display) -> String {
    let text = err.to_string();
    let (pos, msg) = split_pos(&text);
    diag(code, file, pos, msg)
}

fn is_rodin(path: &Path, ext: &str) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn rodin_diag(file: &Path, e: &RodinError) -> String {
    match e {
        RodinError::Link(l) => front_diag("LINK001", file, l),
        other => diag("RODIN001", file, other.pos(), &other.to_string()),
    }
}

fn parse_front(e: FrontError, file: &Path) -> String {
    match e {
        FrontError::Lex { source, .. } => front_diag("PARSE001", file, &source),
        FrontError::Parse { source, .. } => front_diag("PARSE001", file, &source),
        FrontError::Link(l) => front_diag("LINK001", file, &l),
    }
}

fn read_machine(path: &Path) -> Result<MachineAst, Fail> {
    let text = read(path)?;
    if is_rodin(path, "bum") {
        let mut m = parse_rodin_machine(&text).map_err(|e| Fail::one(rodin_diag(path, &e)))?;
        m.name.name = stem(path);
        Ok(m)
    } else {
        parse_machine_source(&text).map_err(|e| Fail::one(parse_front(e, path)))
    }
}

fn read_context(path: &Path) -> Result<ContextAst, Fail> {
    let text = read(path)?;
    if is_rodin(path, "buc") {
        let mut c = parse_rodin_context(&text).map_err(|e| Fail::one(rodin_diag(path, &e)))?;
        c.name.name = stem(path);
        Ok(c)
    } else {
        parse_context_source(&text).map_err(|e| Fail::one(parse_front(e, path)))
    }
}

/// A linked, type-checked model with the file each unit came from.
pub struct Loaded {
    pub model: EventBModel,
    pub env: TypeEnv,
    pub files: BTreeMap<String, PathBuf>,
}

impl Loaded {
    pub fn machine_file(&self) -> &Path {
        &self.files[&self.model.machine.name.name]
    }
}

pub fn load(cfg: &RunConfig) -> Result<Loaded, Fail> {
    let machine = read_machine(&cfg.machine)?;
    let mut files = BTreeMap::new();
    files.insert(machine.name.name.clone(), cfg.machine.clone());
    let mut contexts = Vec::new();
    for path in &cfg.contexts {
        let c = read_context(path)?;
        files.insert(c.name.name.clone(), path.clone());
        contexts.push(c);
    }
    // Explicit paths win; the search directory fills the gaps.
    if let Some(dir) = &cfg.search {
        for seen in &machine.sees {
            if contexts.iter().any(|c| c.name.name == seen.name) {
                continue;
            }
            let found = ["ebc", "buc"]
                .iter()
                .map(|ext| dir.join(format!("{}.{ext}", seen.name)))
                .find(|p| p.is_file());
            if let Some(path) = found {
                let c = read_context(&path)?;
                files.insert(c.name.name.clone(), path);
                contexts.push(c);
            }
        }
    }
    let model = link(machine, contexts).map_err(|e| {
        let file = files.get(e.unit()).unwrap_or(&cfg.machine);
        Fail::one(front_diag("LINK001", file, &e))
    })?;
    let env = typecheck(&model).map_err(|ds| {
        Fail::Model(
            ds.iter()
                .map(|d| {
                    let file = files.get(&d.unit).unwrap_or(&cfg.machine);
                    d.render(&file.display().to_string())
                })
                .collect(),
        )
    })?;
    Ok(Loaded { model, env, files })
}

pub fn interpretation(cfg: &RunConfig, l: &Loaded) -> Result<Interpretation, Fail> {
    let (bindings, source) = match &cfg.bindings {
        Some(p) => {
            let text = read(p)?;
            let b = Bindings::parse(&text)
                .map_err(|e| Fail::one(diag("BIND001", p, None, &e.to_string())))?;
            (b, p.clone())
        }
        None => (Bindings::default(), PathBuf::from("<no bindings>")),
    };
    Interpretation::from_bindings(&l.model, &l.env, &bindings)
        .map(|i| i.with_param_bound(cfg.param_bound))
        .map_err(|e| Fail::one(diag("BIND001", &source, None, &e.to_string())))
}
