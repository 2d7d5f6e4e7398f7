use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Runtime value of a variable, constant or parameter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Bool(bool),
    SetV(BTreeSet<Value>),
    /// Element `index` (1-based) of a carrier set.
    Atom(String, u32),
}

impl Value {
    pub fn set<I: IntoIterator<Item = Value>>(items: I) -> Value {
        Value::SetV(items.into_iter().collect())
    }

    pub fn ints<I: IntoIterator<Item = i64>>(items: I) -> Value {
        Value::set(items.into_iter().map(Value::Int))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<&BTreeSet<Value>> {
        match self {
            Value::SetV(s) => Some(s),
            _ => None,
        }
    }
}

pub fn atom_name(set: &str, index: u32) -> String {
    format!("{set}_{index}")
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(true) => write!(f, "TRUE"),
            Value::Bool(false) => write!(f, "FALSE"),
            Value::Atom(s, i) => write!(f, "{}", atom_name(s, *i)),
            Value::SetV(items) => {
                write!(f, "{{")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Assignment of values to every machine variable.
pub type SimState = BTreeMap<String, Value>;

/// `n=1, r={S_1}` in variable-name order.
pub fn format_state(state: &SimState) -> String {
    state
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}
