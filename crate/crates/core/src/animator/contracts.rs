//! Comparison of emitted contracts with source semantics, clause by clause.

use super::eval::{eval, eval_with, EvalError, TargetFrame};
use super::interp::Interpretation;
use super::sim::{params, AnimError};
use super::value::{SimState, Value};
use crate::ebfront::{EventAst, EventBModel, LabeledPredicate};
use crate::emitter::naming::mangle;
use crate::emitter::{
    Assertion, EStmt, EiffelFeature, EiffelUnit, LValue, Translation, INIT_FEATURE,
};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Require,
    Ensure,
    Body,
    Invariant,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Require => "require",
            Side::Ensure => "ensure",
            Side::Body => "body",
            Side::Invariant => "invariant",
        })
    }
}

/// A disagreement found at one state, before it is tied to a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub event: String,
    pub args: Vec<Value>,
    pub tag: String,
    pub side: Side,
    pub detail: String,
}

fn show(r: &Result<Value, EvalError>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error ({e})"),
    }
}

/// Emitted contracts of one machine class plus what they are compared to.
pub struct ContractOracle<'a> {
    pub model: &'a EventBModel,
    pub interp: &'a Interpretation,
    pub machine: &'a EiffelUnit,
    pub constants: Option<&'a EiffelUnit>,
}

impl<'a> ContractOracle<'a> {
    pub fn new(model: &'a EventBModel, interp: &'a Interpretation, t: &'a Translation) -> Self {
        ContractOracle {
            model,
            interp,
            machine: &t.machine,
            constants: t.constants.as_ref(),
        }
    }

    fn frame(&self, state: &SimState) -> TargetFrame {
        TargetFrame::new(state, self.interp)
    }

    fn feature(&self, ev: &EventAst) -> Option<&'a EiffelFeature> {
        let name = if ev.is_initialisation() {
            INIT_FEATURE.to_string()
        } else {
            mangle(&ev.name.name)
        };
        self.machine.feature(&name)
    }

    /// Axioms against the CONSTANTS invariant, once per run.
    pub fn check_constants(&self) -> Vec<Finding> {
        let Some(unit) = self.constants else {
            return vec![];
        };
        let source: Vec<&LabeledPredicate> = self.model.axioms().map(|(_, a)| a).collect();
        let empty = SimState::new();
        self.compare_clauses(
            &source,
            &unit.invariant,
            |p| eval(self.model, p, &empty, self.interp),
            &self.frame(&empty),
            "CONSTANTS",
            &[],
            Side::Invariant,
            false,
        )
    }

    /// Per-tag agreement of invariant clauses in one state.
    pub fn check_invariants(&self, state: &SimState) -> Vec<Finding> {
        let source: Vec<&LabeledPredicate> = self.model.machine.invariants.iter().collect();
        self.compare_clauses(
            &source,
            &self.machine.invariant,
            |p| eval(self.model, p, state, self.interp),
            &self.frame(state),
            "",
            &[],
            Side::Invariant,
            false,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn compare_clauses(
        &self,
        source: &[&LabeledPredicate],
        emitted: &[Assertion],
        eval_source: impl Fn(&crate::ebfront::Expr) -> Result<Value, EvalError>,
        frame: &TargetFrame,
        event: &str,
        args: &[Value],
        side: Side,
        sequential: bool,
    ) -> Vec<Finding> {
        let mut out = Vec::new();
        let finding = |tag: &str, detail: String| Finding {
            event: event.to_string(),
            args: args.to_vec(),
            tag: tag.to_string(),
            side,
            detail,
        };
        for p in source {
            let Some(clause) = emitted.iter().find(|a| a.tag == p.label) else {
                out.push(finding(
                    &p.label,
                    "no emitted clause carries this tag".into(),
                ));
                continue;
            };
            let s = eval_source(&p.predicate);
            let t = frame.eval(&clause.expr);
            if s != t {
                out.push(finding(
                    &p.label,
                    format!("source is {}, emitted is {}", show(&s), show(&t)),
                ));
                if sequential {
                    break;
                }
            }
            if sequential && s != Ok(Value::Bool(true)) {
                break;
            }
        }
        if sequential && !out.is_empty() {
            return out;
        }
        for clause in emitted {
            if source.iter().any(|p| p.label == clause.tag) {
                continue;
            }
            // Synthesized clauses have no source counterpart; they must hold.
            let t = frame.eval(&clause.expr);
            if t != Ok(Value::Bool(true)) {
                out.push(finding(
                    &clause.tag,
                    format!("extra clause is {}", show(&t)),
                ));
            }
        }
        out
    }

    /// Require equivalence, and for enabled firings ensure validity and body
    /// agreement against the source successor `post`.
    pub fn check_event(
        &self,
        state: &SimState,
        ev: &EventAst,
        args: &[Value],
        post: Option<&SimState>,
    ) -> Result<Vec<Finding>, AnimError> {
        let name = ev.name.name.as_str();
        let Some(f) = self.feature(ev) else {
            return Ok(vec![Finding {
                event: name.to_string(),
                args: args.to_vec(),
                tag: mangle(name),
                side: Side::Require,
                detail: "no emitted feature".into(),
            }]);
        };
        let ps = params(ev, args)?;
        let frame = self.frame(state).with_args(&ps);
        let guards: Vec<&LabeledPredicate> = ev.guards.iter().collect();
        let mut out = self.compare_clauses(
            &guards,
            &f.require,
            |p| eval_with(self.model, p, state, self.interp, &ps),
            &frame,
            name,
            args,
            Side::Require,
            true,
        );
        if let Some(post) = post {
            out.extend(self.check_effect(f, state, post, ev, args, &ps));
        }
        Ok(out)
    }

    /// Initialisation: body and postcondition against the initial state.
    pub fn check_init(&self, init: &SimState) -> Vec<Finding> {
        let ev = &self.model.machine.initialisation;
        match self.feature(ev) {
            Some(f) => self.check_effect(f, &SimState::new(), init, ev, &[], &BTreeMap::new()),
            None => vec![Finding {
                event: ev.name.name.clone(),
                args: vec![],
                tag: INIT_FEATURE.into(),
                side: Side::Body,
                detail: "no emitted creation procedure".into(),
            }],
        }
    }

    fn check_effect(
        &self,
        f: &EiffelFeature,
        pre: &SimState,
        post: &SimState,
        ev: &EventAst,
        args: &[Value],
        ps: &BTreeMap<String, Value>,
    ) -> Vec<Finding> {
        let name = ev.name.name.as_str();
        let mut out = Vec::new();
        let finding = |tag: &str, side: Side, detail: String| Finding {
            event: name.to_string(),
            args: args.to_vec(),
            tag: tag.to_string(),
            side,
            detail,
        };
        let frame = self.frame(post).with_old(pre).with_args(ps);
        for a in &ev.actions {
            if !f.ensure.iter().any(|c| c.tag == a.label) {
                out.push(finding(
                    &a.label,
                    Side::Ensure,
                    "no emitted clause carries this tag".into(),
                ));
            }
        }
        for clause in &f.ensure {
            let t = frame.eval(&clause.expr);
            if t != Ok(Value::Bool(true)) {
                out.push(finding(
                    &clause.tag,
                    Side::Ensure,
                    format!("clause is {}", show(&t)),
                ));
            }
        }
        match execute(self.model, f, pre, self.interp, ps) {
            Ok(got) if got == *post => {}
            Ok(got) => {
                let diff: Vec<String> = post
                    .iter()
                    .filter(|(k, v)| got.get(*k) != Some(*v))
                    .map(|(k, v)| {
                        let g = got.get(k).map(|x| x.to_string()).unwrap_or("unset".into());
                        format!("{k}: source {v}, body {g}")
                    })
                    .collect();
                out.push(finding(&f.name, Side::Body, diff.join(", ")));
            }
            Err(e) => out.push(finding(&f.name, Side::Body, format!("body fails: {e}"))),
        }
        out
    }
}

/// Run an emitted routine body from `pre`, returning the state it leaves.
pub fn execute(
    model: &EventBModel,
    f: &EiffelFeature,
    pre: &SimState,
    interp: &Interpretation,
    args: &BTreeMap<String, Value>,
) -> Result<SimState, EvalError> {
    let names: BTreeMap<String, String> = model
        .machine
        .variables
        .iter()
        .map(|v| (mangle(&v.name), v.name.clone()))
        .collect();
    let mut frame = TargetFrame::new(pre, interp).with_args(args);
    for s in &f.body {
        match s {
            EStmt::Create {
                target: LValue::Attr(n),
                procedure: Some(_),
            } => {
                frame
                    .attrs
                    .insert(n.clone(), Value::SetV(Default::default()));
            }
            EStmt::Create { .. } => {}
            EStmt::Assign { target, value } => {
                let v = frame.eval(value)?;
                match target {
                    LValue::Attr(n) => frame.attrs.insert(n.clone(), v),
                    LValue::Local(n) => frame.locals.insert(n.clone(), v),
                    LValue::Result => None,
                };
            }
            EStmt::AssignFrom { target, value } => {
                let v = frame.eval(value)?;
                frame.attrs.insert(target.clone(), v);
            }
            EStmt::Raw(text) => return Err(EvalError::Type(format!("cannot execute `{text}`"))),
        }
    }
    let mut out = SimState::new();
    for (m, v) in frame.attrs {
        if m == "ctx" {
            continue;
        }
        let key = names.get(&m).cloned().unwrap_or(m);
        out.insert(key, v);
    }
    Ok(out)
}
