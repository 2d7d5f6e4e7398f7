use super::eiffel::{
    Assertion, EBinOp, EExpr, EStmt, EType, EiffelAttribute, EiffelFeature, EiffelUnit,
    FeatureGroup, LValue, Parent, RoutineKind, SetFeature,
};
use super::naming::{element_class, mangle, temp_name, temporaries};
use super::runtime::emit_runtime;
use super::xi::{eiffel_type, xi_expected, xi_expr, Mode, XiContext};
use super::EmitError;
use crate::animator::{check_axioms, BindingError, Interpretation, Value};
use crate::ebfront::{EventAst, EventBModel, ExprKind};
use crate::typing::{EbType, TypeEnv, TypeKey};

pub const CONSTANTS_CLASS: &str = "CONSTANTS";
pub const INIT_FEATURE: &str = "initialisation";
pub const GROUP_INIT: &str = "Initialisation";
pub const GROUP_EVENTS: &str = "Events";
pub const GROUP_ACCESS: &str = "Access";
pub const GROUP_CONSTANTS: &str = "Constants";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EmitOptions {
    /// Render constants unqualified (`d` instead of `ctx.d`).
    pub bare_constants: bool,
}

/// All units emitted for one model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub machine: EiffelUnit,
    pub constants: Option<EiffelUnit>,
    pub carriers: Vec<EiffelUnit>,
    pub runtime: EiffelUnit,
}

impl Translation {
    /// Machine, constants, carrier classes, runtime.
    pub fn units(&self) -> Vec<&EiffelUnit> {
        let mut out = vec![&self.machine];
        out.extend(self.constants.iter());
        out.extend(self.carriers.iter());
        out.push(&self.runtime);
        out
    }
}

fn context<'a>(model: &'a EventBModel, env: &'a TypeEnv, opts: EmitOptions) -> XiContext<'a> {
    XiContext {
        qualify: !opts.bare_constants,
        ..XiContext::new(model, env)
    }
}

fn var_type<'e>(env: &'e TypeEnv, name: &str) -> Result<&'e EbType, EmitError> {
    env.global(name)
        .ok_or_else(|| EmitError::Untyped(name.to_string()))
}

fn header(ev: &EventAst, model: &EventBModel) -> String {
    format!(
        "Translated from event {} ({})",
        ev.name.name, model.machine.name.name
    )
}

/// One postcondition per action, relating the new value to the old-wrapped rhs.
fn ensures(ev: &EventAst, cx: &XiContext) -> Result<Vec<Assertion>, EmitError> {
    ev.actions
        .iter()
        .map(|a| {
            let ty = var_type(cx.env, &a.target)?;
            let rhs = xi_expected(&a.rhs, cx, Mode::OldWrapped, ty)?;
            let target = EExpr::Attr(mangle(&a.target));
            let expr = if ty.is_set() {
                EExpr::call(target, SetFeature::IsEqual, vec![rhs])
            } else {
                EExpr::binary(EBinOp::Eq, target, rhs)
            };
            Ok(Assertion::new(&a.label, expr))
        })
        .collect()
}

fn assignments(ev: &EventAst, cx: &XiContext, fresh: bool) -> Result<Vec<EStmt>, EmitError> {
    let mut out = Vec::new();
    for a in &ev.actions {
        let ty = var_type(cx.env, &a.target)?;
        let value = xi_expected(&a.rhs, cx, Mode::Plain, ty)?;
        let name = mangle(&a.target);
        if ty.is_set() {
            if fresh {
                out.push(EStmt::Create {
                    target: LValue::Attr(name.clone()),
                    procedure: Some("make_empty".into()),
                });
            }
            out.push(EStmt::AssignFrom {
                target: name,
                value,
            });
        } else {
            out.push(EStmt::Assign {
                target: LValue::Attr(name),
                value,
            });
        }
    }
    Ok(out)
}

/// Guarded event to a routine: guards become the precondition, actions the
/// body and postcondition.
pub fn translate_event(
    model: &EventBModel,
    env: &TypeEnv,
    ev: &EventAst,
    opts: EmitOptions,
) -> Result<EiffelFeature, EmitError> {
    let temps = temporaries(ev);
    let cx = context(model, env, opts).in_event(ev);
    let mut f = EiffelFeature::procedure(&mangle(&ev.name.name));
    f.comment = Some(header(ev, model));
    for p in &ev.params {
        let ty = env
            .types
            .get(&TypeKey::param(&ev.name.name, &p.name))
            .ok_or_else(|| EmitError::Untyped(p.name.clone()))?;
        f.args.push((mangle(&p.name), eiffel_type(ty)));
    }
    for g in &ev.guards {
        f.require.push(Assertion::new(
            &g.label,
            xi_expr(&g.predicate, &cx, Mode::Plain)?,
        ));
    }
    for t in &temps {
        let ty = var_type(env, t)?;
        let current = EExpr::Attr(mangle(t));
        let value = if ty.is_set() {
            EExpr::call(current, SetFeature::Twin, vec![])
        } else {
            current
        };
        f.locals.push((temp_name(t), eiffel_type(ty)));
        f.body.push(EStmt::Assign {
            target: LValue::Local(temp_name(t)),
            value,
        });
    }
    let body_cx = XiContext {
        temps: &temps,
        ..cx
    };
    f.body.extend(assignments(ev, &body_cx, false)?);
    f.ensure = ensures(ev, &cx)?;
    Ok(f)
}

/// Initialisation to the creation procedure.
pub fn translate_init(
    model: &EventBModel,
    env: &TypeEnv,
    opts: EmitOptions,
) -> Result<EiffelFeature, EmitError> {
    let init = &model.machine.initialisation;
    for a in &init.actions {
        if let Some((v, pos)) = a
            .rhs
            .identifiers()
            .into_iter()
            .find(|(n, _)| model.is_variable(n))
        {
            return Err(EmitError::InitReadsState {
                action: a.label.clone(),
                variable: v.to_string(),
                pos,
            });
        }
    }
    let cx = context(model, env, opts).in_event(init);
    let mut f = EiffelFeature::procedure(INIT_FEATURE);
    f.comment = Some(header(init, model));
    if model.has_context() {
        f.body.push(EStmt::Create {
            target: LValue::Attr("ctx".into()),
            procedure: None,
        });
    }
    f.body.extend(assignments(init, &cx, true)?);
    f.ensure = ensures(init, &cx)?;
    Ok(f)
}

fn fresh_tag(base: &str, taken: &[Assertion]) -> String {
    if !taken.iter().any(|a| a.tag == base) {
        return base.to_string();
    }
    (2..)
        .map(|i| format!("{base}_{i}"))
        .find(|t| !taken.iter().any(|a| a.tag == *t))
        .expect("unbounded suffixes")
}

/// Is `v : NAT` already stated as a whole invariant?
fn nat_stated(model: &EventBModel, var: &str) -> bool {
    model.machine.invariants.iter().any(|inv| {
        matches!(&inv.predicate.kind, ExprKind::Binary(crate::ebfront::BinOp::In, l, r)
            if matches!(&l.kind, ExprKind::Ident(n) if n == var) && matches!(r.kind, ExprKind::NatType))
    })
}

/// Machine to a class with a creation procedure, one routine per event,
/// one attribute per variable and the invariants.
pub fn translate_machine(
    model: &EventBModel,
    env: &TypeEnv,
    opts: EmitOptions,
) -> Result<EiffelUnit, EmitError> {
    let m = &model.machine;
    let mut unit = EiffelUnit::new(&m.name.name);
    unit.creators.push(INIT_FEATURE.into());

    let mut init = FeatureGroup::new(GROUP_INIT);
    init.features.push(translate_init(model, env, opts)?);
    unit.groups.push(init);

    let mut events = FeatureGroup::new(GROUP_EVENTS);
    for ev in &m.events {
        events.features.push(translate_event(model, env, ev, opts)?);
    }
    unit.groups.push(events);

    let mut access = FeatureGroup::new(GROUP_ACCESS);
    if model.has_context() {
        access.attributes.push(EiffelAttribute {
            name: "ctx".into(),
            ty: EType::Class(CONSTANTS_CLASS.into()),
            comment: None,
        });
    }
    for v in &m.variables {
        access.attributes.push(EiffelAttribute {
            name: mangle(&v.name),
            ty: eiffel_type(var_type(env, &v.name)?),
            comment: None,
        });
    }
    unit.groups.push(access);

    let cx = context(model, env, opts);
    for inv in &m.invariants {
        unit.invariant.push(Assertion::new(
            &inv.label,
            xi_expr(&inv.predicate, &cx, Mode::Plain)?,
        ));
    }
    for v in &m.variables {
        if env.has_nat_constraint(&TypeKey::global(&v.name)) && !nat_stated(model, &v.name) {
            let tag = fresh_tag(&format!("{}_nat", mangle(&v.name)), &unit.invariant);
            let clause = EExpr::binary(EBinOp::Ge, EExpr::Attr(mangle(&v.name)), EExpr::Int(0));
            unit.invariant.push(Assertion::new(&tag, clause));
        }
    }
    Ok(unit)
}

fn literal(v: &Value) -> Option<EExpr> {
    match v {
        Value::Int(i) => Some(EExpr::Int(*i)),
        Value::Bool(b) => Some(EExpr::Bool(*b)),
        _ => None,
    }
}

/// Contexts to the CONSTANTS class: once functions and axioms as invariant.
pub fn translate_context(
    model: &EventBModel,
    env: &TypeEnv,
    interp: &Interpretation,
) -> Result<EiffelUnit, EmitError> {
    for k in model.constants() {
        let basic = env.global(&k.name).is_none_or(EbType::is_basic);
        if basic && !interp.bound.contains(&k.name) {
            return Err(EmitError::MissingBinding(k.name.clone()));
        }
    }
    check_axioms(model, interp).map_err(|e| match e {
        BindingError::ViolatesAxioms { constant, axiom } => {
            EmitError::BindingViolatesAxioms { constant, axiom }
        }
        other => EmitError::Binding(other),
    })?;

    let mut unit = EiffelUnit::new(CONSTANTS_CLASS);
    let mut group = FeatureGroup::new(GROUP_CONSTANTS);
    for c in &model.contexts {
        for k in &c.constants {
            let ty = var_type(env, &k.name)?;
            let mut f = EiffelFeature::procedure(&mangle(&k.name));
            f.result = Some(eiffel_type(ty));
            f.comment = Some(format!("Constant `{}' of context {}", k.name, c.name.name));
            f.kind = RoutineKind::Once;
            let bound = interp
                .constants
                .get(&k.name)
                .filter(|_| interp.bound.contains(&k.name));
            f.body.push(match (ty, bound) {
                (EbType::SetOf(inner), Some(Value::SetV(items))) if inner.is_basic() => {
                    EStmt::Assign {
                        target: LValue::Result,
                        value: EExpr::SetLit {
                            elem: eiffel_type(inner.as_ref()),
                            elems: items.iter().filter_map(literal).collect(),
                        },
                    }
                }
                (EbType::SetOf(_), _) => EStmt::Create {
                    target: LValue::Result,
                    procedure: Some("make_empty".into()),
                },
                (EbType::Carrier(_), _) => EStmt::Create {
                    target: LValue::Result,
                    procedure: None,
                },
                (_, Some(v)) => EStmt::Assign {
                    target: LValue::Result,
                    value: literal(v).ok_or_else(|| EmitError::MissingBinding(k.name.clone()))?,
                },
                (_, None) => return Err(EmitError::MissingBinding(k.name.clone())),
            });
            group.features.push(f);
        }
    }
    unit.groups.push(group);

    let cx = XiContext {
        qualify: false,
        ..XiContext::new(model, env)
    };
    for (_, ax) in model.axioms() {
        unit.invariant.push(Assertion::new(
            &ax.label,
            xi_expr(&ax.predicate, &cx, Mode::Plain)?,
        ));
    }
    Ok(unit)
}

/// One class per carrier set plus its element class.
pub fn translate_carrier_sets(model: &EventBModel) -> Vec<EiffelUnit> {
    let mut out = Vec::new();
    for s in model.carrier_sets() {
        let elem = element_class(&s.name);
        let mut set = EiffelUnit::new(&s.name);
        set.parents.push(Parent {
            ty: EType::ebset(EType::Class(elem.clone())),
            redefine: vec![],
        });
        out.push(set);
        out.push(EiffelUnit::new(&elem));
    }
    out
}

/// Translate a typed model into every unit it needs.
pub fn translate(
    model: &EventBModel,
    env: &TypeEnv,
    interp: &Interpretation,
    opts: EmitOptions,
) -> Result<Translation, EmitError> {
    let machine = translate_machine(model, env, opts)?;
    let constants = if model.has_context() {
        Some(translate_context(model, env, interp)?)
    } else {
        None
    };
    Ok(Translation {
        machine,
        constants,
        carriers: translate_carrier_sets(model),
        runtime: emit_runtime(),
    })
}
