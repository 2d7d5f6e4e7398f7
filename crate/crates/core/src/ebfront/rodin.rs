//! Ingestion of Rodin unchecked-model exports (`.bum` machine files and
//! `.buc` context files). Predicate and assignment attributes are parsed
//! with the same expression grammar as the surface syntax.

use super::ast::*;
use super::lexer::{lex, LexError};
use super::link::{link, EventBModel, LinkError};
use super::parser::{assemble_machine, parse_assignment, parse_expr, validate_context, ParseError};
use super::token::Pos;
use thiserror::Error;

const NS: &str = "org.eventb.core.";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RodinError {
    #[error("malformed XML: {0}")]
    Xml(String),
    #[error("unsupported Rodin element `{0}`")]
    UnsupportedElement(String),
    #[error("element `{element}` at {pos} is missing attribute `{attribute}`")]
    MissingAttribute {
        element: String,
        attribute: String,
        pos: Pos,
    },
    #[error("label `{label}` at {pos} is not a valid identifier")]
    InvalidLabel { label: String, pos: Pos },
    #[error("in `{label}` at {pos}: {source}")]
    Lex {
        label: String,
        pos: Pos,
        source: LexError,
    },
    #[error("in `{label}` at {pos}: {source}")]
    Parse {
        label: String,
        pos: Pos,
        source: ParseError,
    },
    #[error(transparent)]
    Structure(ParseError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

impl RodinError {
    pub fn pos(&self) -> Option<Pos> {
        match self {
            RodinError::Xml(_) | RodinError::UnsupportedElement(_) => None,
            RodinError::MissingAttribute { pos, .. }
            | RodinError::InvalidLabel { pos, .. }
            | RodinError::Lex { pos, .. }
            | RodinError::Parse { pos, .. } => Some(*pos),
            RodinError::Structure(e) => Some(e.pos()),
            RodinError::Link(e) => Some(e.pos()),
        }
    }
}

type Node<'a, 'i> = roxmltree::Node<'a, 'i>;

fn local_name<'a>(node: &Node<'a, '_>) -> &'a str {
    let name = node.tag_name().name();
    name.strip_prefix(NS).unwrap_or(name)
}

fn node_pos(node: &Node) -> Pos {
    let p = node.document().text_pos_at(node.range().start);
    Pos::new(p.row as usize, p.col as usize)
}

fn attr<'a>(node: &Node<'a, '_>, name: &str) -> Option<&'a str> {
    node.attributes()
        .find(|a| a.name() == format!("{NS}{name}") || a.name() == name)
        .map(|a| a.value())
}

fn required_attr<'a>(node: &Node<'a, '_>, name: &str) -> Result<&'a str, RodinError> {
    attr(node, name).ok_or_else(|| RodinError::MissingAttribute {
        element: local_name(node).to_string(),
        attribute: format!("{NS}{name}"),
        pos: node_pos(node),
    })
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(char::is_alphabetic) && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Label attribute, or `<prefix>_<k>` when the export left it empty.
fn label_of(node: &Node, prefix: &str, index: usize) -> Result<String, RodinError> {
    match attr(node, "label").map(str::trim) {
        Some(l) if !l.is_empty() => {
            if is_identifier(l) {
                Ok(l.to_string())
            } else {
                Err(RodinError::InvalidLabel {
                    label: l.to_string(),
                    pos: node_pos(node),
                })
            }
        }
        _ => Ok(format!("{prefix}_{index}")),
    }
}

fn identifier_of(node: &Node) -> Result<Ident, RodinError> {
    let text = required_attr(node, "identifier")?.trim();
    let pos = node_pos(node);
    if !is_identifier(text) {
        return Err(RodinError::InvalidLabel {
            label: text.to_string(),
            pos,
        });
    }
    Ok(Ident::new(text, pos))
}

/// Relocate every expression position to the owning XML element.
fn relocate(e: &mut Expr, pos: Pos) {
    e.erase_positions();
    fn set(e: &mut Expr, pos: Pos) {
        e.pos = pos;
        match &mut e.kind {
            ExprKind::Unary(_, x) | ExprKind::Pow(x) => set(x, pos),
            ExprKind::Binary(_, l, r) => {
                set(l, pos);
                set(r, pos);
            }
            ExprKind::SetLit(xs) => xs.iter_mut().for_each(|x| set(x, pos)),
            _ => {}
        }
    }
    set(e, pos);
}

fn predicate_of(node: &Node, label: String) -> Result<LabeledPredicate, RodinError> {
    let pos = node_pos(node);
    let text = required_attr(node, "predicate")?;
    let tokens = lex(text).map_err(|source| RodinError::Lex {
        label: label.clone(),
        pos,
        source,
    })?;
    let mut predicate = parse_expr(&tokens).map_err(|source| RodinError::Parse {
        label: label.clone(),
        pos,
        source,
    })?;
    relocate(&mut predicate, pos);
    Ok(LabeledPredicate {
        label,
        predicate,
        pos,
    })
}

fn action_of(node: &Node, label: String) -> Result<LabeledAction, RodinError> {
    let pos = node_pos(node);
    let text = required_attr(node, "assignment")?;
    let tokens = lex(text).map_err(|source| RodinError::Lex {
        label: label.clone(),
        pos,
        source,
    })?;
    let (target, mut rhs) = match parse_assignment(&tokens) {
        Ok(v) => v,
        Err(ParseError::Unsupported { .. }) => {
            return Err(RodinError::UnsupportedElement(
                "non-deterministic assignment".into(),
            ))
        }
        Err(source) => return Err(RodinError::Parse { label, pos, source }),
    };
    relocate(&mut rhs, pos);
    Ok(LabeledAction {
        label,
        target: target.name,
        rhs,
        pos,
    })
}

fn unsupported(node: &Node) -> RodinError {
    let name = local_name(node);
    let reported = match name {
        "refinesMachine" | "refinesEvent" => "refines",
        "extendsContext" => "extends",
        other => other,
    };
    RodinError::UnsupportedElement(reported.to_string())
}

fn parse_document(text: &str) -> Result<roxmltree::Document<'_>, RodinError> {
    roxmltree::Document::parse(text).map_err(|e| RodinError::Xml(e.to_string()))
}

fn event_of(node: &Node, index: usize) -> Result<EventAst, RodinError> {
    let pos = node_pos(node);
    let name = label_of(node, "evt", index)?;
    if attr(node, "extended") == Some("true") {
        return Err(RodinError::UnsupportedElement("extended".into()));
    }
    let mut ev = EventAst {
        name: Ident::new(&name, pos),
        params: vec![],
        guards: vec![],
        actions: vec![],
    };
    for child in node.children().filter(Node::is_element) {
        match local_name(&child) {
            "parameter" => ev.params.push(identifier_of(&child)?),
            "guard" => {
                let label = label_of(&child, "grd", ev.guards.len() + 1)?;
                ev.guards.push(predicate_of(&child, label)?);
            }
            "action" => {
                let label = label_of(&child, "act", ev.actions.len() + 1)?;
                ev.actions.push(action_of(&child, label)?);
            }
            _ => return Err(unsupported(&child)),
        }
    }
    Ok(ev)
}

/// Read a `.bum` machine export.
pub fn parse_rodin_machine(xml: &str) -> Result<MachineAst, RodinError> {
    let doc = parse_document(xml)?;
    let root = doc.root_element();
    if local_name(&root) != "machineFile" {
        return Err(RodinError::Xml(format!(
            "expected a machineFile root element, found `{}`",
            root.tag_name().name()
        )));
    }
    let root_pos = node_pos(&root);
    let mut sees = Vec::new();
    let mut variables = Vec::new();
    let mut invariants = Vec::new();
    let mut events = Vec::new();
    for child in root.children().filter(Node::is_element) {
        match local_name(&child) {
            "seesContext" => {
                let target = required_attr(&child, "target")?.trim();
                sees.push(Ident::new(target, node_pos(&child)));
            }
            "variable" => variables.push(identifier_of(&child)?),
            "invariant" => {
                let label = label_of(&child, "inv", invariants.len() + 1)?;
                invariants.push(predicate_of(&child, label)?);
            }
            "event" => events.push(event_of(&child, events.len() + 1)?),
            _ => return Err(unsupported(&child)),
        }
    }
    let name = attr(&root, "name").unwrap_or("machine").to_string();
    assemble_machine(
        Ident::new(&name, root_pos),
        sees,
        variables,
        invariants,
        events,
    )
    .map_err(RodinError::Structure)
}

/// Read a `.buc` context export.
pub fn parse_rodin_context(xml: &str) -> Result<ContextAst, RodinError> {
    let doc = parse_document(xml)?;
    let root = doc.root_element();
    if local_name(&root) != "contextFile" {
        return Err(RodinError::Xml(format!(
            "expected a contextFile root element, found `{}`",
            root.tag_name().name()
        )));
    }
    let name = attr(&root, "name").unwrap_or("context").to_string();
    let mut ctx = ContextAst {
        name: Ident::new(&name, node_pos(&root)),
        constants: vec![],
        sets: vec![],
        axioms: vec![],
    };
    for child in root.children().filter(Node::is_element) {
        match local_name(&child) {
            "constant" => ctx.constants.push(identifier_of(&child)?),
            "carrierSet" => ctx.sets.push(identifier_of(&child)?),
            "axiom" => {
                let label = label_of(&child, "axm", ctx.axioms.len() + 1)?;
                ctx.axioms.push(predicate_of(&child, label)?);
            }
            _ => return Err(unsupported(&child)),
        }
    }
    validate_context(&ctx).map_err(RodinError::Structure)?;
    Ok(ctx)
}

/// Ingest a Rodin machine export and the context exports it sees.
///
/// Rodin keeps component names in file names, not in the documents. A root
/// element may carry a `name` attribute; contexts without one take their
/// name from the machine's `sees` list by position. Callers reading from
/// disk should prefer [`ingest_rodin_named`].
pub fn ingest_rodin(machine_xml: &str, context_xmls: &[&str]) -> Result<EventBModel, RodinError> {
    let machine = parse_rodin_machine(machine_xml)?;
    let mut contexts = Vec::new();
    for (i, xml) in context_xmls.iter().enumerate() {
        let mut c = parse_rodin_context(xml)?;
        if !has_name_attribute(xml)? {
            if let Some(seen) = machine.sees.get(i) {
                c.name.name = seen.name.clone();
            }
        }
        contexts.push(c);
    }
    Ok(link(machine, contexts)?)
}

fn has_name_attribute(xml: &str) -> Result<bool, RodinError> {
    let doc = parse_document(xml)?;
    Ok(attr(&doc.root_element(), "name").is_some())
}

/// Like [`ingest_rodin`], naming each component explicitly (typically from its file stem).
pub fn ingest_rodin_named(
    machine: (&str, &str),
    contexts: &[(&str, &str)],
) -> Result<EventBModel, RodinError> {
    let mut m = parse_rodin_machine(machine.1)?;
    m.name.name = machine.0.to_string();
    let contexts = contexts
        .iter()
        .map(|(name, xml)| {
            let mut c = parse_rodin_context(xml)?;
            c.name.name = name.to_string();
            Ok(c)
        })
        .collect::<Result<Vec<_>, RodinError>>()?;
    Ok(link(m, contexts)?)
}
