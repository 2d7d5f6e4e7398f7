//! Finite interpretations: constant bindings, carrier sizes, parameter range.

use super::eval::{eval, EvalError};
use super::value::{atom_name, SimState, Value};
use crate::ebfront::{EventBModel, SymbolKind};
use crate::typing::{EbType, TypeEnv};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub const DEFAULT_PARAM_BOUND: i64 = 5;
pub const DEFAULT_CARRIER_SIZE: u32 = 2;

/// Constant identifier to value.
pub type ConstantBindings = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BindingError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: `{name}` is neither a constant nor a carrier set")]
    UnknownName { name: String, line: usize },
    #[error("line {line}: `{name}` is bound twice")]
    Duplicate { name: String, line: usize },
    #[error("line {line}: value `{value}` does not fit `{name}` of type {ty}")]
    IllTyped {
        name: String,
        value: String,
        ty: String,
        line: usize,
    },
    #[error("constant `{0}` needs a binding")]
    MissingBinding(String),
    #[error("binding of `{constant}` violates axiom {axiom}")]
    ViolatesAxioms { constant: String, axiom: String },
    #[error("axiom {axiom} cannot be evaluated: {source}")]
    Eval { axiom: String, source: EvalError },
}

/// Unchecked right-hand side of a binding line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawValue {
    Int(i64),
    Bool(bool),
    Name(String),
    Set(Vec<RawValue>),
}

impl std::fmt::Display for RawValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RawValue::Int(v) => write!(f, "{v}"),
            RawValue::Bool(b) => write!(f, "{b}"),
            RawValue::Name(n) => write!(f, "{n}"),
            RawValue::Set(items) => {
                let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

impl RawValue {
    /// A scalar or a `{a, b}` set; `line` is used for error messages.
    pub fn parse(text: &str, line: usize) -> Result<RawValue, BindingError> {
        let value = text.trim();
        if let Some(inner) = value.strip_prefix('{') {
            let Some(inner) = inner.strip_suffix('}') else {
                return Err(BindingError::Syntax {
                    line,
                    message: "unterminated `{`".into(),
                });
            };
            let items = if inner.trim().is_empty() {
                vec![]
            } else {
                inner
                    .split(',')
                    .map(|x| parse_scalar(x, line))
                    .collect::<Result<_, _>>()?
            };
            Ok(RawValue::Set(items))
        } else {
            parse_scalar(value, line)
        }
    }
}

/// Parsed bindings file, in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    pub entries: Vec<(String, RawValue, usize)>,
}

fn parse_scalar(text: &str, line: usize) -> Result<RawValue, BindingError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(BindingError::Syntax {
            line,
            message: "missing value".into(),
        });
    }
    match t {
        "true" | "TRUE" => return Ok(RawValue::Bool(true)),
        "false" | "FALSE" => return Ok(RawValue::Bool(false)),
        _ => {}
    }
    if let Ok(v) = t.parse::<i64>() {
        return Ok(RawValue::Int(v));
    }
    let mut chars = t.chars();
    let ok = chars.next().is_some_and(|c| c.is_alphabetic())
        && chars.all(|c| c.is_alphanumeric() || c == '_');
    if ok {
        Ok(RawValue::Name(t.to_string()))
    } else {
        Err(BindingError::Syntax {
            line,
            message: format!("cannot read value `{t}`"),
        })
    }
}

impl Bindings {
    /// Parse `name=value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Bindings, BindingError> {
        let mut entries = Vec::new();
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(BindingError::Syntax {
                    line,
                    message: "expected `name=value`".into(),
                });
            };
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(BindingError::Syntax {
                    line,
                    message: "missing name".into(),
                });
            }
            let value = RawValue::parse(value, line)?;
            if !seen.insert(key.clone()) {
                return Err(BindingError::Duplicate { name: key, line });
            }
            entries.push((key, value, line));
        }
        Ok(Bindings { entries })
    }

    pub fn get(&self, name: &str) -> Option<&RawValue> {
        self.entries
            .iter()
            .find(|(k, _, _)| k == name)
            .map(|(_, v, _)| v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    /// Value of every constant, including defaults for unbound class-typed ones.
    pub constants: ConstantBindings,
    /// Constants whose value came from the bindings file.
    pub bound: BTreeSet<String>,
    pub carriers: BTreeMap<String, u32>,
    /// Integer parameters range over `[-param_bound, param_bound]`.
    pub param_bound: i64,
}

impl Interpretation {
    /// Build and validate an interpretation. Basic-typed constants must be
    /// bound; an unbound set constant is empty and an unbound carrier
    /// constant is the first element, mirroring the emitted once functions.
    pub fn from_bindings(
        model: &EventBModel,
        env: &TypeEnv,
        bindings: &Bindings,
    ) -> Result<Interpretation, BindingError> {
        let mut carriers: BTreeMap<String, u32> = model
            .carrier_sets()
            .map(|s| (s.name.clone(), DEFAULT_CARRIER_SIZE))
            .collect();
        for (name, value, line) in &bindings.entries {
            match model.kind_of(name) {
                Some(SymbolKind::CarrierSet) => match value {
                    RawValue::Int(n) if *n >= 1 && *n <= u32::MAX as i64 => {
                        carriers.insert(name.clone(), *n as u32);
                    }
                    _ => {
                        return Err(BindingError::IllTyped {
                            name: name.clone(),
                            value: value.to_string(),
                            ty: "positive size".into(),
                            line: *line,
                        })
                    }
                },
                Some(SymbolKind::Constant) => {}
                _ => {
                    return Err(BindingError::UnknownName {
                        name: name.clone(),
                        line: *line,
                    })
                }
            }
        }

        let mut constants = ConstantBindings::new();
        let mut bound = BTreeSet::new();
        for k in model.constants() {
            let Some(ty) = env.global(&k.name) else {
                return Err(BindingError::MissingBinding(k.name.clone()));
            };
            let entry = bindings.entries.iter().find(|(n, _, _)| *n == k.name);
            let value = match entry {
                Some((_, raw, line)) => {
                    bound.insert(k.name.clone());
                    convert(raw, ty, &carriers).ok_or_else(|| BindingError::IllTyped {
                        name: k.name.clone(),
                        value: raw.to_string(),
                        ty: ty.to_string(),
                        line: *line,
                    })?
                }
                None => match ty {
                    EbType::SetOf(_) => Value::SetV(BTreeSet::new()),
                    EbType::Carrier(s) => Value::Atom(s.clone(), 1),
                    _ => return Err(BindingError::MissingBinding(k.name.clone())),
                },
            };
            constants.insert(k.name.clone(), value);
        }
        let interp = Interpretation {
            constants,
            bound,
            carriers,
            param_bound: DEFAULT_PARAM_BOUND,
        };
        check_axioms(model, &interp)?;
        Ok(interp)
    }

    pub fn with_param_bound(mut self, bound: i64) -> Self {
        self.param_bound = bound;
        self
    }

    /// Check a raw value against a type under this interpretation.
    pub fn value_of(&self, raw: &RawValue, ty: &EbType) -> Option<Value> {
        convert(raw, ty, &self.carriers)
    }

    pub fn carrier_size(&self, set: &str) -> u32 {
        self.carriers
            .get(set)
            .copied()
            .unwrap_or(DEFAULT_CARRIER_SIZE)
    }

    pub fn atoms(&self, set: &str) -> Vec<Value> {
        (1..=self.carrier_size(set))
            .map(|i| Value::Atom(set.to_string(), i))
            .collect()
    }
}

fn convert(raw: &RawValue, ty: &EbType, carriers: &BTreeMap<String, u32>) -> Option<Value> {
    match (raw, ty) {
        (RawValue::Int(v), EbType::Int) => Some(Value::Int(*v)),
        (RawValue::Bool(b), EbType::Bool) => Some(Value::Bool(*b)),
        (RawValue::Name(n), EbType::Carrier(s)) => {
            let size = *carriers.get(s)?;
            (1..=size)
                .find(|i| atom_name(s, *i) == *n)
                .map(|i| Value::Atom(s.clone(), i))
        }
        (RawValue::Set(items), EbType::SetOf(inner)) => items
            .iter()
            .map(|x| convert(x, inner, carriers))
            .collect::<Option<BTreeSet<_>>>()
            .map(Value::SetV),
        _ => None,
    }
}

/// Evaluate every axiom in order; the first false one is blamed on the
/// first constant it mentions.
pub fn check_axioms(model: &EventBModel, interp: &Interpretation) -> Result<(), BindingError> {
    let empty = SimState::new();
    for (_, ax) in model.axioms() {
        let holds =
            eval(model, &ax.predicate, &empty, interp).map_err(|source| BindingError::Eval {
                axiom: ax.label.clone(),
                source,
            })?;
        if holds != Value::Bool(true) {
            let constant = ax
                .predicate
                .identifiers()
                .into_iter()
                .map(|(n, _)| n)
                .find(|n| model.kind_of(n) == Some(SymbolKind::Constant))
                .unwrap_or("")
                .to_string();
            return Err(BindingError::ViolatesAxioms {
                constant,
                axiom: ax.label.clone(),
            });
        }
    }
    Ok(())
}
