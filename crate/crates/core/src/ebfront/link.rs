use super::ast::*;
use super::token::Pos;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("{pos}: unresolved identifier `{name}`")]
    UnresolvedIdentifier {
        name: String,
        unit: String,
        pos: Pos,
    },
    #[error("{pos}: context `{name}` is seen but was not supplied")]
    MissingContext {
        name: String,
        unit: String,
        pos: Pos,
    },
    #[error("{pos}: `{name}` is declared more than once")]
    DuplicateDeclaration {
        name: String,
        unit: String,
        pos: Pos,
    },
    #[error("{pos}: label `{label}` is used by more than one seen context")]
    DuplicateLabel {
        label: String,
        unit: String,
        pos: Pos,
    },
    #[error("{pos}: variable `{name}` is not assigned by the initialisation")]
    UninitialisedVariable {
        name: String,
        unit: String,
        pos: Pos,
    },
}

impl LinkError {
    pub fn pos(&self) -> Pos {
        match self {
            LinkError::UnresolvedIdentifier { pos, .. }
            | LinkError::MissingContext { pos, .. }
            | LinkError::DuplicateDeclaration { pos, .. }
            | LinkError::DuplicateLabel { pos, .. }
            | LinkError::UninitialisedVariable { pos, .. } => *pos,
        }
    }

    /// Name of the machine or context the error was found in.
    pub fn unit(&self) -> &str {
        match self {
            LinkError::UnresolvedIdentifier { unit, .. }
            | LinkError::MissingContext { unit, .. }
            | LinkError::DuplicateDeclaration { unit, .. }
            | LinkError::DuplicateLabel { unit, .. }
            | LinkError::UninitialisedVariable { unit, .. } => unit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymbolKind {
    Variable,
    Constant,
    CarrierSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub kind: SymbolKind,
    /// Declaring machine or context.
    pub unit: String,
    pub pos: Pos,
}

/// Global declarations; event parameters are scoped to their event and
/// looked up through [`EventBModel::resolve`].
pub type SymbolTable = BTreeMap<String, Symbol>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolved {
    Global(SymbolKind),
    Parameter,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventBModel {
    pub machine: MachineAst,
    /// Seen contexts, in `sees` order.
    pub contexts: Vec<ContextAst>,
    pub symbols: SymbolTable,
}

impl EventBModel {
    pub fn resolve(&self, event: Option<&EventAst>, name: &str) -> Option<Resolved> {
        if event.is_some_and(|ev| ev.has_param(name)) {
            return Some(Resolved::Parameter);
        }
        self.symbols.get(name).map(|s| Resolved::Global(s.kind))
    }

    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        self.symbols.get(name).map(|s| s.kind)
    }

    pub fn is_variable(&self, name: &str) -> bool {
        self.kind_of(name) == Some(SymbolKind::Variable)
    }

    pub fn is_carrier_set(&self, name: &str) -> bool {
        self.kind_of(name) == Some(SymbolKind::CarrierSet)
    }

    pub fn constants(&self) -> impl Iterator<Item = &Ident> {
        self.contexts.iter().flat_map(|c| c.constants.iter())
    }

    pub fn carrier_sets(&self) -> impl Iterator<Item = &Ident> {
        self.contexts.iter().flat_map(|c| c.sets.iter())
    }

    pub fn axioms(&self) -> impl Iterator<Item = (&ContextAst, &LabeledPredicate)> {
        self.contexts
            .iter()
            .flat_map(|c| c.axioms.iter().map(move |a| (c, a)))
    }

    /// Initialisation followed by the ordinary events.
    pub fn all_events(&self) -> impl Iterator<Item = &EventAst> {
        std::iter::once(&self.machine.initialisation).chain(self.machine.events.iter())
    }

    pub fn has_context(&self) -> bool {
        !self.contexts.is_empty()
    }

    /// Structural copy with all source positions cleared.
    pub fn without_positions(&self) -> EventBModel {
        let mut m = self.clone();
        m.machine.erase_positions();
        m.contexts.erase_positions();
        for s in m.symbols.values_mut() {
            s.pos = Pos::default();
        }
        m
    }
}

fn check_resolved(
    e: &Expr,
    unit: &str,
    symbols: &SymbolTable,
    params: &[Ident],
) -> Result<(), LinkError> {
    for (name, pos) in e.identifiers() {
        let known = symbols.contains_key(name) || params.iter().any(|p| p.name == name);
        if !known {
            return Err(LinkError::UnresolvedIdentifier {
                name: name.to_string(),
                unit: unit.to_string(),
                pos,
            });
        }
    }
    Ok(())
}

/// Resolve a machine against the contexts it sees.
pub fn link(machine: MachineAst, contexts: Vec<ContextAst>) -> Result<EventBModel, LinkError> {
    let unit = machine.name.name.clone();
    let mut by_name: BTreeMap<String, ContextAst> = BTreeMap::new();
    for c in contexts {
        by_name.entry(c.name.name.clone()).or_insert(c);
    }
    let mut seen = Vec::new();
    for s in &machine.sees {
        match by_name.remove(&s.name) {
            Some(c) => seen.push(c),
            None => {
                return Err(LinkError::MissingContext {
                    name: s.name.clone(),
                    unit: unit.clone(),
                    pos: s.pos,
                })
            }
        }
    }

    let mut symbols = SymbolTable::new();
    let mut declare = |name: &Ident, kind: SymbolKind, owner: &str| -> Result<(), LinkError> {
        if symbols.contains_key(&name.name) {
            return Err(LinkError::DuplicateDeclaration {
                name: name.name.clone(),
                unit: owner.to_string(),
                pos: name.pos,
            });
        }
        symbols.insert(
            name.name.clone(),
            Symbol {
                kind,
                unit: owner.to_string(),
                pos: name.pos,
            },
        );
        Ok(())
    };
    for c in &seen {
        for s in &c.sets {
            declare(s, SymbolKind::CarrierSet, &c.name.name)?;
        }
        for k in &c.constants {
            declare(k, SymbolKind::Constant, &c.name.name)?;
        }
    }
    for v in &machine.variables {
        declare(v, SymbolKind::Variable, &unit)?;
    }

    let mut axiom_labels = BTreeMap::new();
    for c in &seen {
        for ax in &c.axioms {
            if axiom_labels.insert(ax.label.clone(), ()).is_some() {
                return Err(LinkError::DuplicateLabel {
                    label: ax.label.clone(),
                    unit: c.name.name.clone(),
                    pos: ax.pos,
                });
            }
            let ctx_symbols: SymbolTable = symbols
                .iter()
                .filter(|(_, s)| s.kind != SymbolKind::Variable)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            check_resolved(&ax.predicate, &c.name.name, &ctx_symbols, &[])?;
        }
    }
    for inv in &machine.invariants {
        check_resolved(&inv.predicate, &unit, &symbols, &[])?;
    }
    for ev in std::iter::once(&machine.initialisation).chain(machine.events.iter()) {
        for p in &ev.params {
            if symbols.contains_key(&p.name) {
                return Err(LinkError::DuplicateDeclaration {
                    name: p.name.clone(),
                    unit: unit.clone(),
                    pos: p.pos,
                });
            }
        }
        for g in &ev.guards {
            check_resolved(&g.predicate, &unit, &symbols, &ev.params)?;
        }
        for a in &ev.actions {
            check_resolved(&a.rhs, &unit, &symbols, &ev.params)?;
        }
    }
    for v in &machine.variables {
        if !machine
            .initialisation
            .actions
            .iter()
            .any(|a| a.target == v.name)
        {
            return Err(LinkError::UninitialisedVariable {
                name: v.name.clone(),
                unit: unit.clone(),
                pos: v.pos,
            });
        }
    }

    Ok(EventBModel {
        machine,
        contexts: seen,
        symbols,
    })
}
