//! Type inference for variables, constants and event parameters.
//!
//! Types are harvested from membership, subset and equality atoms that occur
//! at the top level of invariant, axiom and guard conjunctions, iterated to a
//! fixpoint so that `x : s` can use the type of an already-typed set `s`.
//! Variables and constants that no atom types fall back to arithmetic and
//! assignment usage. Parameters must be typed by a guard atom.

use super::diag::{codes, Diagnostic};
use super::types::{EbType, TypeEnv, TypeKey};
use crate::ebfront::{BinOp, EventAst, EventBModel, Expr, ExprKind, Pos, SymbolKind, UnOp};
use std::collections::BTreeMap;

/// Type of a type-atom expression (`INT`, `NAT`, `BOOL`, a carrier set, `POW(..)`).
pub fn atom_type(model: &EventBModel, e: &Expr) -> Option<EbType> {
    match &e.kind {
        ExprKind::IntType | ExprKind::NatType => Some(EbType::Int),
        ExprKind::BoolType => Some(EbType::Bool),
        ExprKind::Ident(n) if model.is_carrier_set(n) => Some(EbType::Carrier(n.clone())),
        ExprKind::Pow(inner) => atom_type(model, inner).map(EbType::set_of),
        _ => None,
    }
}

pub fn is_type_atom(model: &EventBModel, e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Ident(n) => model.is_carrier_set(n),
        ExprKind::Pow(inner) => is_type_atom(model, inner),
        _ => e.is_type_atom(),
    }
}

pub fn key_for(model: &EventBModel, event: Option<&EventAst>, name: &str) -> Option<TypeKey> {
    if let Some(ev) = event {
        if ev.has_param(name) {
            return Some(TypeKey::param(&ev.name.name, name));
        }
    }
    match model.kind_of(name)? {
        SymbolKind::Variable | SymbolKind::Constant => Some(TypeKey::global(name)),
        SymbolKind::CarrierSet => None,
    }
}

/// Best-effort type of a value expression under a partial environment.
pub fn partial_type(
    model: &EventBModel,
    env: &TypeEnv,
    event: Option<&EventAst>,
    e: &Expr,
) -> Option<EbType> {
    match &e.kind {
        ExprKind::Int(_) => Some(EbType::Int),
        ExprKind::Bool(_) => Some(EbType::Bool),
        ExprKind::Ident(n) => {
            if model.is_carrier_set(n) && !event.is_some_and(|ev| ev.has_param(n)) {
                return Some(EbType::set_of(EbType::Carrier(n.clone())));
            }
            env.lookup(event.map(|ev| ev.name.name.as_str()), n)
                .cloned()
        }
        ExprKind::Unary(UnOp::Neg, _) => Some(EbType::Int),
        ExprKind::Unary(UnOp::Not, _) => Some(EbType::Bool),
        ExprKind::Binary(op, l, r) => {
            if op.is_arithmetic() {
                Some(EbType::Int)
            } else if op.is_set_op() {
                partial_type(model, env, event, l).or_else(|| partial_type(model, env, event, r))
            } else {
                Some(EbType::Bool)
            }
        }
        ExprKind::SetLit(elems) => elems
            .iter()
            .find_map(|x| partial_type(model, env, event, x))
            .map(EbType::set_of),
        ExprKind::EmptySet
        | ExprKind::IntType
        | ExprKind::NatType
        | ExprKind::BoolType
        | ExprKind::Pow(_) => None,
    }
}

enum Rule<'m> {
    Member(&'m Expr),
    Subset(&'m Expr),
    Equal(&'m Expr),
}

struct Constraint<'m> {
    key: TypeKey,
    rule: Rule<'m>,
    event: Option<&'m EventAst>,
    origin: String,
    unit: String,
    pos: Pos,
}

struct Site<'m> {
    origin: String,
    unit: String,
    event: Option<&'m EventAst>,
    pred: &'m Expr,
}

fn sites(model: &EventBModel) -> Vec<Site<'_>> {
    let mut out = Vec::new();
    for (ctx, ax) in model.axioms() {
        out.push(Site {
            origin: ax.label.clone(),
            unit: ctx.name.name.clone(),
            event: None,
            pred: &ax.predicate,
        });
    }
    let unit = &model.machine.name.name;
    for inv in &model.machine.invariants {
        out.push(Site {
            origin: inv.label.clone(),
            unit: unit.clone(),
            event: None,
            pred: &inv.predicate,
        });
    }
    for ev in &model.machine.events {
        for g in &ev.guards {
            out.push(Site {
                origin: format!("{}/{}", ev.name.name, g.label),
                unit: unit.clone(),
                event: Some(ev),
                pred: &g.predicate,
            });
        }
    }
    out
}

fn constraints<'m>(model: &'m EventBModel) -> Vec<Constraint<'m>> {
    let mut out = Vec::new();
    for site in sites(model) {
        for c in site.pred.conjuncts() {
            let ExprKind::Binary(op, l, r) = &c.kind else {
                continue;
            };
            let mut push = |id: &'m Expr, rule: Rule<'m>| {
                if let ExprKind::Ident(n) = &id.kind {
                    if let Some(key) = key_for(model, site.event, n) {
                        out.push(Constraint {
                            key,
                            rule,
                            event: site.event,
                            origin: site.origin.clone(),
                            unit: site.unit.clone(),
                            pos: c.pos,
                        });
                    }
                }
            };
            match op {
                BinOp::In => push(l, Rule::Member(r)),
                BinOp::Subset => push(l, Rule::Subset(r)),
                BinOp::Eq => {
                    push(l, Rule::Equal(r));
                    push(r, Rule::Equal(l));
                }
                _ => {}
            }
        }
    }
    out
}

struct Solver<'m> {
    model: &'m EventBModel,
    env: TypeEnv,
    conflicts: BTreeMap<TypeKey, Diagnostic>,
}

impl<'m> Solver<'m> {
    fn candidate(&self, c: &Constraint<'m>) -> Option<EbType> {
        let model = self.model;
        match c.rule {
            Rule::Member(rhs) => atom_type(model, rhs).or_else(|| {
                partial_type(model, &self.env, c.event, rhs)?
                    .element()
                    .cloned()
            }),
            Rule::Subset(rhs) => atom_type(model, rhs)
                .map(EbType::set_of)
                .or_else(|| partial_type(model, &self.env, c.event, rhs).filter(EbType::is_set)),
            Rule::Equal(other) => partial_type(model, &self.env, c.event, other),
        }
    }

    fn offer(&mut self, key: &TypeKey, ty: EbType, origin: &str, unit: &str, pos: Pos) -> bool {
        match self.env.types.get(key) {
            None => {
                self.env.insert(key.clone(), ty, origin);
                true
            }
            Some(existing) if *existing == ty => {
                if self
                    .env
                    .origins
                    .get(key)
                    .is_some_and(|o| origin < o.as_str())
                {
                    self.env.origins.insert(key.clone(), origin.to_string());
                }
                false
            }
            Some(existing) => {
                let (a, b) = if existing < &ty {
                    (existing, &ty)
                } else {
                    (&ty, existing)
                };
                let diag = Diagnostic::error(
                    codes::CONFLICTING_TYPES,
                    unit,
                    pos,
                    format!("`{}` is constrained to both {a} and {b}", key.name()),
                );
                let entry = self
                    .conflicts
                    .entry(key.clone())
                    .or_insert_with(|| diag.clone());
                if diag.pos < entry.pos {
                    *entry = diag;
                }
                false
            }
        }
    }

    fn harvest(&mut self, cs: &[Constraint<'m>]) -> bool {
        let mut progress = false;
        loop {
            let mut changed = false;
            for c in cs {
                if let Some(ty) = self.candidate(c) {
                    changed |= self.offer(&c.key, ty, &c.origin, &c.unit, c.pos);
                }
                if matches!(c.rule, Rule::Member(rhs) if matches!(rhs.kind, ExprKind::NatType)) {
                    self.env.nat.insert(c.key.clone());
                }
            }
            progress |= changed;
            if !changed {
                return progress;
            }
        }
    }

    /// Fallback for globals that no atom typed: arithmetic or ordering
    /// operands are INT, assignment targets take the type of their rhs.
    fn usage(&mut self) -> bool {
        let model = self.model;
        let mut found: Vec<(TypeKey, EbType)> = Vec::new();
        let untyped = |env: &TypeEnv, name: &str| {
            matches!(
                model.kind_of(name),
                Some(SymbolKind::Variable | SymbolKind::Constant)
            ) && env.global(name).is_none()
        };
        let visit = |e: &Expr, event: Option<&EventAst>, found: &mut Vec<(TypeKey, EbType)>| {
            e.walk(&mut |x| {
                let operands: Vec<&Expr> = match &x.kind {
                    ExprKind::Binary(op, l, r) if op.is_arithmetic() || op.is_ordering() => {
                        vec![l, r]
                    }
                    ExprKind::Unary(UnOp::Neg, inner) => vec![inner],
                    _ => vec![],
                };
                for o in operands {
                    if let ExprKind::Ident(n) = &o.kind {
                        if !event.is_some_and(|ev| ev.has_param(n)) && untyped(&self.env, n) {
                            found.push((TypeKey::global(n), EbType::Int));
                        }
                    }
                }
            });
        };
        for (_, ax) in model.axioms() {
            visit(&ax.predicate, None, &mut found);
        }
        for inv in &model.machine.invariants {
            visit(&inv.predicate, None, &mut found);
        }
        for ev in model.all_events() {
            for g in &ev.guards {
                visit(&g.predicate, Some(ev), &mut found);
            }
            for a in &ev.actions {
                visit(&a.rhs, Some(ev), &mut found);
                if untyped(&self.env, &a.target) {
                    if let Some(t) = partial_type(model, &self.env, Some(ev), &a.rhs) {
                        found.push((TypeKey::global(&a.target), t));
                    }
                }
            }
        }
        found.sort();
        found.dedup();
        let mut progress = false;
        for (key, ty) in found {
            if !self.env.types.contains_key(&key) {
                self.env.insert(key, ty, "usage");
                progress = true;
            }
        }
        progress
    }
}

/// Infer a type for every variable, constant, parameter and carrier set.
pub fn infer_types(model: &EventBModel) -> Result<TypeEnv, Vec<Diagnostic>> {
    let mut solver = Solver {
        model,
        env: TypeEnv::default(),
        conflicts: BTreeMap::new(),
    };
    for s in model.carrier_sets() {
        solver.env.insert(
            TypeKey::global(&s.name),
            EbType::set_of(EbType::Carrier(s.name.clone())),
            "builtin",
        );
    }
    let cs = constraints(model);
    loop {
        solver.harvest(&cs);
        if !solver.usage() {
            break;
        }
    }

    let Solver { env, conflicts, .. } = solver;
    let mut diags: Vec<Diagnostic> = conflicts.into_values().collect();
    let machine = &model.machine.name.name;
    for v in &model.machine.variables {
        if env.global(&v.name).is_none() {
            diags.push(Diagnostic::error(
                codes::NO_TYPE,
                machine,
                v.pos,
                format!("no typing constraint found for variable `{}`", v.name),
            ));
        }
    }
    for c in &model.contexts {
        for k in &c.constants {
            if env.global(&k.name).is_none() {
                diags.push(Diagnostic::error(
                    codes::NO_TYPE,
                    &c.name.name,
                    k.pos,
                    format!("no typing constraint found for constant `{}`", k.name),
                ));
            }
        }
    }
    for ev in &model.machine.events {
        for p in &ev.params {
            if !env
                .types
                .contains_key(&TypeKey::param(&ev.name.name, &p.name))
            {
                diags.push(Diagnostic::error(
                    codes::UNTYPED_PARAMETER,
                    machine,
                    p.pos,
                    format!(
                        "parameter `{}` of event `{}` has no typing guard",
                        p.name, ev.name.name
                    ),
                ));
            }
        }
    }
    if diags.is_empty() {
        Ok(env)
    } else {
        diags.sort();
        Err(diags)
    }
}
