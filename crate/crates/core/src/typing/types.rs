use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EbType {
    Int,
    Bool,
    Carrier(String),
    SetOf(Box<EbType>),
}

impl EbType {
    pub fn set_of(inner: EbType) -> EbType {
        EbType::SetOf(Box::new(inner))
    }

    /// Basic types map to expanded Eiffel types (INTEGER, BOOLEAN) for
    /// which creation is meaningless.
    pub fn is_basic(&self) -> bool {
        matches!(self, EbType::Int | EbType::Bool)
    }

    pub fn is_set(&self) -> bool {
        matches!(self, EbType::SetOf(_))
    }

    pub fn element(&self) -> Option<&EbType> {
        match self {
            EbType::SetOf(t) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for EbType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EbType::Int => write!(f, "INT"),
            EbType::Bool => write!(f, "BOOL"),
            EbType::Carrier(s) => write!(f, "{s}"),
            EbType::SetOf(t) => write!(f, "POW({t})"),
        }
    }
}

/// Identifies a typed name. Parameters are scoped to their event, so two
/// events may use the same parameter name at different types.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeKey {
    Global(String),
    Param { event: String, name: String },
}

impl TypeKey {
    pub fn global(name: &str) -> Self {
        TypeKey::Global(name.to_string())
    }

    pub fn param(event: &str, name: &str) -> Self {
        TypeKey::Param {
            event: event.to_string(),
            name: name.to_string(),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            TypeKey::Global(n) => n,
            TypeKey::Param { name, .. } => name,
        }
    }
}

impl fmt::Display for TypeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeKey::Global(n) => write!(f, "{n}"),
            TypeKey::Param { event, name } => write!(f, "{event}.{name}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeEnv {
    pub types: BTreeMap<TypeKey, EbType>,
    /// Label of the invariant, axiom or guard that fixed each type
    /// (`builtin` for carrier sets, `usage` for context-inferred types).
    pub origins: BTreeMap<TypeKey, String>,
    /// Identifiers typed through `NAT`; each carries one pending `>= 0` constraint.
    pub nat: BTreeSet<TypeKey>,
}

impl TypeEnv {
    /// Look `name` up in the scope of `event` (parameters shadow nothing,
    /// the linker rejects such clashes).
    pub fn lookup(&self, event: Option<&str>, name: &str) -> Option<&EbType> {
        if let Some(ev) = event {
            if let Some(t) = self.types.get(&TypeKey::param(ev, name)) {
                return Some(t);
            }
        }
        self.types.get(&TypeKey::global(name))
    }

    pub fn global(&self, name: &str) -> Option<&EbType> {
        self.types.get(&TypeKey::global(name))
    }

    pub fn has_nat_constraint(&self, key: &TypeKey) -> bool {
        self.nat.contains(key)
    }

    pub fn insert(&mut self, key: TypeKey, ty: EbType, origin: &str) {
        self.types.insert(key.clone(), ty);
        self.origins.insert(key, origin.to_string());
    }
}
