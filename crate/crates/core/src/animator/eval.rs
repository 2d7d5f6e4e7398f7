//! Evaluation of source expressions and of emitted contract trees.
//!
//! Both evaluators share the same arithmetic: checked 64-bit integers,
//! division truncating toward zero and `mod` taking the dividend's sign.
//! Conjunction, disjunction and implication short-circuit left to right on
//! both sides so that errors surface identically.

use super::interp::Interpretation;
use super::value::{SimState, Value};
use crate::ebfront::{BinOp, EventBModel, Expr, ExprKind, UnOp};
use crate::emitter::eiffel::{EBinOp, EExpr, SetFeature};
use crate::emitter::naming::mangle;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow")]
    Overflow,
    #[error("`{0}` has no value")]
    Unbound(String),
    #[error("{0}")]
    Type(String),
}

fn int(v: &Value) -> Result<i64, EvalError> {
    v.as_int()
        .ok_or_else(|| EvalError::Type(format!("integer expected, found {v}")))
}

fn boolean(v: &Value) -> Result<bool, EvalError> {
    v.as_bool()
        .ok_or_else(|| EvalError::Type(format!("boolean expected, found {v}")))
}

fn set(v: Value) -> Result<BTreeSet<Value>, EvalError> {
    match v {
        Value::SetV(s) => Ok(s),
        other => Err(EvalError::Type(format!("set expected, found {other}"))),
    }
}

fn arith(a: i64, b: i64, f: fn(i64, i64) -> Option<i64>) -> Result<Value, EvalError> {
    f(a, b).map(Value::Int).ok_or(EvalError::Overflow)
}

fn divide(a: i64, b: i64, rem: bool) -> Result<Value, EvalError> {
    if b == 0 {
        return Err(EvalError::DivisionByZero);
    }
    let r = if rem {
        a.checked_rem(b)
    } else {
        a.checked_div(b)
    };
    r.map(Value::Int).ok_or(EvalError::Overflow)
}

/// Evaluate a closed source expression (no parameters in scope).
pub fn eval(
    model: &EventBModel,
    e: &Expr,
    state: &SimState,
    interp: &Interpretation,
) -> Result<Value, EvalError> {
    eval_with(model, e, state, interp, &BTreeMap::new())
}

/// Evaluate a source expression with event parameters bound.
pub fn eval_with(
    model: &EventBModel,
    e: &Expr,
    state: &SimState,
    interp: &Interpretation,
    params: &BTreeMap<String, Value>,
) -> Result<Value, EvalError> {
    Source {
        model,
        state,
        interp,
        params,
    }
    .eval(e)
}

struct Source<'a> {
    model: &'a EventBModel,
    state: &'a SimState,
    interp: &'a Interpretation,
    params: &'a BTreeMap<String, Value>,
}

impl Source<'_> {
    fn eval(&self, e: &Expr) -> Result<Value, EvalError> {
        match &e.kind {
            ExprKind::Int(v) => Ok(Value::Int(*v)),
            ExprKind::Bool(b) => Ok(Value::Bool(*b)),
            ExprKind::Ident(n) => self.lookup(n),
            ExprKind::EmptySet => Ok(Value::SetV(BTreeSet::new())),
            ExprKind::SetLit(items) => items
                .iter()
                .map(|x| self.eval(x))
                .collect::<Result<BTreeSet<_>, _>>()
                .map(Value::SetV),
            ExprKind::BoolType => Ok(Value::set([Value::Bool(false), Value::Bool(true)])),
            ExprKind::IntType | ExprKind::NatType | ExprKind::Pow(_) => {
                Err(EvalError::Type("infinite set used as a value".into()))
            }
            ExprKind::Unary(UnOp::Neg, x) => int(&self.eval(x)?)?
                .checked_neg()
                .map(Value::Int)
                .ok_or(EvalError::Overflow),
            ExprKind::Unary(UnOp::Not, x) => Ok(Value::Bool(!boolean(&self.eval(x)?)?)),
            ExprKind::Binary(op, l, r) => self.binary(*op, l, r),
        }
    }

    fn lookup(&self, n: &str) -> Result<Value, EvalError> {
        if let Some(v) = self.params.get(n).or_else(|| self.state.get(n)) {
            return Ok(v.clone());
        }
        if let Some(v) = self.interp.constants.get(n) {
            return Ok(v.clone());
        }
        if self.model.is_carrier_set(n) {
            return Ok(Value::set(self.interp.atoms(n)));
        }
        Err(EvalError::Unbound(n.to_string()))
    }

    /// Membership in a type atom, without materializing infinite sets.
    fn member_of_type(&self, v: &Value, ty: &Expr) -> Result<Option<bool>, EvalError> {
        Ok(Some(match (&ty.kind, v) {
            (ExprKind::IntType, _) => matches!(v, Value::Int(_)),
            (ExprKind::NatType, _) => int(v)? >= 0,
            (ExprKind::BoolType, _) => matches!(v, Value::Bool(_)),
            (ExprKind::Ident(s), _)
                if self.model.is_carrier_set(s) && !self.params.contains_key(s) =>
            {
                matches!(v, Value::Atom(set, i) if set == s && *i <= self.interp.carrier_size(s))
            }
            (ExprKind::Pow(inner), Value::SetV(items)) => {
                for x in items {
                    if self.member_of_type(x, inner)? != Some(true) {
                        return Ok(Some(false));
                    }
                }
                true
            }
            (ExprKind::Pow(_), _) => false,
            _ => return Ok(None),
        }))
    }

    fn binary(&self, op: BinOp, l: &Expr, r: &Expr) -> Result<Value, EvalError> {
        match op {
            BinOp::And => {
                if !boolean(&self.eval(l)?)? {
                    return Ok(Value::Bool(false));
                }
                Ok(Value::Bool(boolean(&self.eval(r)?)?))
            }
            BinOp::Or => {
                if boolean(&self.eval(l)?)? {
                    return Ok(Value::Bool(true));
                }
                Ok(Value::Bool(boolean(&self.eval(r)?)?))
            }
            BinOp::Implies => {
                if !boolean(&self.eval(l)?)? {
                    return Ok(Value::Bool(true));
                }
                Ok(Value::Bool(boolean(&self.eval(r)?)?))
            }
            BinOp::In => {
                let v = self.eval(l)?;
                if let Some(b) = self.member_of_type(&v, r)? {
                    return Ok(Value::Bool(b));
                }
                Ok(Value::Bool(set(self.eval(r)?)?.contains(&v)))
            }
            BinOp::Subset => {
                let a = set(self.eval(l)?)?;
                if matches!(
                    r.kind,
                    ExprKind::IntType | ExprKind::NatType | ExprKind::BoolType | ExprKind::Pow(_)
                ) || matches!(&r.kind, ExprKind::Ident(s) if self.model.is_carrier_set(s))
                {
                    for x in &a {
                        if self.member_of_type(x, r)? != Some(true) {
                            return Ok(Value::Bool(false));
                        }
                    }
                    return Ok(Value::Bool(true));
                }
                let b = set(self.eval(r)?)?;
                Ok(Value::Bool(a.is_subset(&b)))
            }
            _ => {
                let a = self.eval(l)?;
                let b = self.eval(r)?;
                strict(op, a, b)
            }
        }
    }
}

fn strict(op: BinOp, a: Value, b: Value) -> Result<Value, EvalError> {
    Ok(match op {
        BinOp::Equiv => Value::Bool(boolean(&a)? == boolean(&b)?),
        BinOp::Eq => Value::Bool(a == b),
        BinOp::Ne => Value::Bool(a != b),
        BinOp::Lt => Value::Bool(int(&a)? < int(&b)?),
        BinOp::Le => Value::Bool(int(&a)? <= int(&b)?),
        BinOp::Gt => Value::Bool(int(&a)? > int(&b)?),
        BinOp::Ge => Value::Bool(int(&a)? >= int(&b)?),
        BinOp::Add => arith(int(&a)?, int(&b)?, i64::checked_add)?,
        BinOp::Sub => arith(int(&a)?, int(&b)?, i64::checked_sub)?,
        BinOp::Mul => arith(int(&a)?, int(&b)?, i64::checked_mul)?,
        BinOp::Div => divide(int(&a)?, int(&b)?, false)?,
        BinOp::Mod => divide(int(&a)?, int(&b)?, true)?,
        BinOp::Union => Value::SetV(set(a)?.union(&set(b)?).cloned().collect()),
        BinOp::Inter => Value::SetV(set(a)?.intersection(&set(b)?).cloned().collect()),
        BinOp::Diff => Value::SetV(set(a)?.difference(&set(b)?).cloned().collect()),
        BinOp::And | BinOp::Or | BinOp::Implies | BinOp::In | BinOp::Subset => {
            unreachable!("handled by the caller")
        }
    })
}

/// Names visible to an emitted contract, keyed by emitted (mangled) name.
#[derive(Debug, Clone, Default)]
pub struct TargetFrame {
    pub attrs: BTreeMap<String, Value>,
    pub old: Option<BTreeMap<String, Value>>,
    pub args: BTreeMap<String, Value>,
    pub locals: BTreeMap<String, Value>,
    pub consts: BTreeMap<String, Value>,
}

pub fn mangled(map: &BTreeMap<String, Value>) -> BTreeMap<String, Value> {
    map.iter().map(|(k, v)| (mangle(k), v.clone())).collect()
}

impl TargetFrame {
    pub fn new(state: &SimState, interp: &Interpretation) -> Self {
        TargetFrame {
            attrs: mangled(state),
            consts: mangled(&interp.constants),
            ..TargetFrame::default()
        }
    }

    pub fn with_old(mut self, old: &SimState) -> Self {
        self.old = Some(mangled(old));
        self
    }

    pub fn with_args(mut self, args: &BTreeMap<String, Value>) -> Self {
        self.args = mangled(args);
        self
    }

    fn get<'m>(map: &'m BTreeMap<String, Value>, name: &str) -> Result<&'m Value, EvalError> {
        map.get(name)
            .ok_or_else(|| EvalError::Unbound(name.to_string()))
    }

    /// Evaluate an emitted expression tree.
    pub fn eval(&self, e: &EExpr) -> Result<Value, EvalError> {
        match e {
            EExpr::Int(v) => Ok(Value::Int(*v)),
            EExpr::Bool(b) => Ok(Value::Bool(*b)),
            EExpr::Attr(n) => Self::get(&self.attrs, n).cloned(),
            EExpr::Old { name, .. } => match &self.old {
                Some(old) => Self::get(old, name).cloned(),
                None => Err(EvalError::Unbound(format!("old {name}"))),
            },
            EExpr::Arg(n) => Self::get(&self.args, n).cloned(),
            EExpr::Local(n) => Self::get(&self.locals, n).cloned(),
            EExpr::Const { name, .. } => Self::get(&self.consts, name).cloned(),
            EExpr::Not(x) => Ok(Value::Bool(!boolean(&self.eval(x)?)?)),
            EExpr::Neg(x) => int(&self.eval(x)?)?
                .checked_neg()
                .map(Value::Int)
                .ok_or(EvalError::Overflow),
            EExpr::Binary(op, l, r) => self.binary(*op, l, r),
            EExpr::Call {
                target,
                feature,
                args,
            } => {
                let t = set(self.eval(target)?)?;
                let mut vals = args
                    .iter()
                    .map(|a| self.eval(a))
                    .collect::<Result<Vec<_>, _>>()?;
                let arg = |vals: &mut Vec<Value>| {
                    vals.pop().ok_or_else(|| {
                        EvalError::Type(format!("`{}` needs an argument", feature.name()))
                    })
                };
                Ok(match feature {
                    SetFeature::Has => Value::Bool(t.contains(&arg(&mut vals)?)),
                    SetFeature::IsSubset => Value::Bool(t.is_subset(&set(arg(&mut vals)?)?)),
                    SetFeature::IsEqual => Value::Bool(t == set(arg(&mut vals)?)?),
                    SetFeature::Union => {
                        Value::SetV(t.union(&set(arg(&mut vals)?)?).cloned().collect())
                    }
                    SetFeature::Intersection => {
                        Value::SetV(t.intersection(&set(arg(&mut vals)?)?).cloned().collect())
                    }
                    SetFeature::Difference => {
                        Value::SetV(t.difference(&set(arg(&mut vals)?)?).cloned().collect())
                    }
                    SetFeature::Twin => Value::SetV(t),
                })
            }
            EExpr::SetLit { elems, .. } => elems
                .iter()
                .map(|x| self.eval(x))
                .collect::<Result<BTreeSet<_>, _>>()
                .map(Value::SetV),
            EExpr::Raw(text) => Err(EvalError::Type(format!("cannot evaluate `{text}`"))),
        }
    }

    fn binary(&self, op: EBinOp, l: &EExpr, r: &EExpr) -> Result<Value, EvalError> {
        let lhs = self.eval(l)?;
        match op {
            EBinOp::And if !boolean(&lhs)? => return Ok(Value::Bool(false)),
            EBinOp::Or if boolean(&lhs)? => return Ok(Value::Bool(true)),
            EBinOp::Implies if !boolean(&lhs)? => return Ok(Value::Bool(true)),
            EBinOp::And | EBinOp::Or | EBinOp::Implies => {
                return Ok(Value::Bool(boolean(&self.eval(r)?)?))
            }
            _ => {}
        }
        let rhs = self.eval(r)?;
        let src = match op {
            EBinOp::Eq => BinOp::Eq,
            EBinOp::Ne => BinOp::Ne,
            EBinOp::Lt => BinOp::Lt,
            EBinOp::Le => BinOp::Le,
            EBinOp::Gt => BinOp::Gt,
            EBinOp::Ge => BinOp::Ge,
            EBinOp::Add => BinOp::Add,
            EBinOp::Sub => BinOp::Sub,
            EBinOp::Mul => BinOp::Mul,
            EBinOp::IntDiv => BinOp::Div,
            EBinOp::Mod => BinOp::Mod,
            EBinOp::And | EBinOp::Or | EBinOp::Implies => unreachable!(),
        };
        strict(src, lhs, rhs)
    }
}
