use super::eval::{eval, eval_with, EvalError};
use super::interp::{BindingError, Interpretation};
use super::value::{SimState, Value};
use crate::ebfront::{EventAst, EventBModel, SymbolKind};
use crate::emitter::EmitError;
use crate::typing::{EbType, TypeEnv, TypeKey};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnimError {
    #[error(transparent)]
    Binding(#[from] BindingError),
    #[error("{context}: {source}")]
    Eval { context: String, source: EvalError },
    #[error("event {event}: {guard} not satisfied")]
    NotEnabled { event: String, guard: String },
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("event {event} takes {expected} argument(s), {found} given")]
    Arity {
        event: String,
        expected: usize,
        found: usize,
    },
    #[error("event {event}: parameter `{param}` is set-valued and cannot be enumerated")]
    UnsupportedParameter { event: String, param: String },
    #[error("state space exceeds the cap of {0} states")]
    StateSpaceExceeded(usize),
    #[error(transparent)]
    Emit(#[from] EmitError),
}

fn eval_error(model: &EventBModel, context: String, e: EvalError) -> AnimError {
    match e {
        EvalError::Unbound(n) if model.kind_of(&n) == Some(SymbolKind::Constant) => {
            AnimError::Binding(BindingError::MissingBinding(n))
        }
        source => AnimError::Eval { context, source },
    }
}

pub fn params(ev: &EventAst, args: &[Value]) -> Result<BTreeMap<String, Value>, AnimError> {
    if ev.params.len() != args.len() {
        return Err(AnimError::Arity {
            event: ev.name.name.clone(),
            expected: ev.params.len(),
            found: args.len(),
        });
    }
    Ok(ev
        .params
        .iter()
        .zip(args)
        .map(|(p, v)| (p.name.clone(), v.clone()))
        .collect())
}

/// Values of the initialisation's right-hand sides under the constants.
pub fn init_state(model: &EventBModel, interp: &Interpretation) -> Result<SimState, AnimError> {
    let empty = SimState::new();
    let mut state = SimState::new();
    for a in &model.machine.initialisation.actions {
        let v = eval(model, &a.rhs, &empty, interp)
            .map_err(|e| eval_error(model, format!("INITIALISATION/{}", a.label), e))?;
        state.insert(a.target.clone(), v);
    }
    Ok(state)
}

/// Label of the first guard that does not hold, if any.
pub fn failing_guard(
    model: &EventBModel,
    state: &SimState,
    interp: &Interpretation,
    ev: &EventAst,
    args: &[Value],
) -> Result<Option<String>, AnimError> {
    let ps = params(ev, args)?;
    for g in &ev.guards {
        let v = eval_with(model, &g.predicate, state, interp, &ps)
            .map_err(|e| eval_error(model, format!("{}/{}", ev.name.name, g.label), e))?;
        if v != Value::Bool(true) {
            return Ok(Some(g.label.clone()));
        }
    }
    Ok(None)
}

pub fn enabled(
    model: &EventBModel,
    state: &SimState,
    interp: &Interpretation,
    ev: &EventAst,
    args: &[Value],
) -> Result<bool, AnimError> {
    Ok(failing_guard(model, state, interp, ev, args)?.is_none())
}

/// Fire an enabled event: every rhs is read in the pre-state.
pub fn fire(
    model: &EventBModel,
    state: &SimState,
    interp: &Interpretation,
    ev: &EventAst,
    args: &[Value],
) -> Result<SimState, AnimError> {
    if let Some(guard) = failing_guard(model, state, interp, ev, args)? {
        return Err(AnimError::NotEnabled {
            event: ev.name.name.clone(),
            guard,
        });
    }
    apply(model, state, interp, ev, args)
}

/// Apply the actions without consulting the guards.
pub(crate) fn apply(
    model: &EventBModel,
    state: &SimState,
    interp: &Interpretation,
    ev: &EventAst,
    args: &[Value],
) -> Result<SimState, AnimError> {
    let ps = params(ev, args)?;
    let mut updates = Vec::with_capacity(ev.actions.len());
    for a in &ev.actions {
        let v = eval_with(model, &a.rhs, state, interp, &ps)
            .map_err(|e| eval_error(model, format!("{}/{}", ev.name.name, a.label), e))?;
        updates.push((a.target.clone(), v));
    }
    let mut next = state.clone();
    next.extend(updates);
    Ok(next)
}

fn domain(
    interp: &Interpretation,
    ev: &EventAst,
    name: &str,
    ty: &EbType,
) -> Result<Vec<Value>, AnimError> {
    Ok(match ty {
        EbType::Int => (-interp.param_bound..=interp.param_bound)
            .map(Value::Int)
            .collect(),
        EbType::Bool => vec![Value::Bool(false), Value::Bool(true)],
        EbType::Carrier(s) => interp.atoms(s),
        EbType::SetOf(_) => {
            return Err(AnimError::UnsupportedParameter {
                event: ev.name.name.clone(),
                param: name.to_string(),
            })
        }
    })
}

/// Every argument tuple of an event, in lexicographic order.
pub fn arg_space(
    env: &TypeEnv,
    interp: &Interpretation,
    ev: &EventAst,
) -> Result<Vec<Vec<Value>>, AnimError> {
    let mut tuples: Vec<Vec<Value>> = vec![vec![]];
    for p in &ev.params {
        let ty = env
            .types
            .get(&TypeKey::param(&ev.name.name, &p.name))
            .ok_or_else(|| AnimError::UnsupportedParameter {
                event: ev.name.name.clone(),
                param: p.name.clone(),
            })?;
        let values = domain(interp, ev, &p.name, ty)?;
        tuples = tuples
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect();
    }
    Ok(tuples)
}
