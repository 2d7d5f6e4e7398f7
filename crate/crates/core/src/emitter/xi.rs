use super::eiffel::{EBinOp, EExpr, EType, SetFeature};
use super::naming::{mangle, temp_name};
use super::EmitError;
use crate::ebfront::{BinOp, EventAst, EventBModel, Expr, ExprKind, SymbolKind, UnOp};
use crate::typing::{is_type_atom, type_of, EbType, Ty, TypeEnv};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Plain,
    /// Machine-variable reads refer to the pre-state.
    OldWrapped,
}

/// Everything the translation of one expression depends on.
#[derive(Clone, Copy)]
pub struct XiContext<'a> {
    pub model: &'a EventBModel,
    pub env: &'a TypeEnv,
    pub event: Option<&'a EventAst>,
    /// Qualify constants as `ctx.c`.
    pub qualify: bool,
    /// Variables read through their pre-state temporary.
    pub temps: &'a [String],
}

impl<'a> XiContext<'a> {
    pub fn new(model: &'a EventBModel, env: &'a TypeEnv) -> Self {
        XiContext {
            model,
            env,
            event: None,
            qualify: true,
            temps: &[],
        }
    }

    pub fn in_event(self, event: &'a EventAst) -> Self {
        XiContext {
            event: Some(event),
            ..self
        }
    }

    fn ty(&self, e: &Expr) -> Option<Ty> {
        type_of(self.model, self.env, self.event, e)
    }
}

pub fn eiffel_type(t: &EbType) -> EType {
    match t {
        EbType::Int => EType::Integer,
        EbType::Bool => EType::Boolean,
        EbType::Carrier(s) => EType::Class(s.clone()),
        EbType::SetOf(inner) => EType::ebset(eiffel_type(inner)),
    }
}

fn ty_to_eiffel(t: &Ty) -> EType {
    match t {
        Ty::Int => EType::Integer,
        Ty::Bool => EType::Boolean,
        Ty::Carrier(s) => EType::Class(s.clone()),
        Ty::Set(inner) => EType::ebset(ty_to_eiffel(inner)),
        Ty::Any => EType::Any,
    }
}

/// Translate a predicate or expression.
pub fn xi_expr(e: &Expr, cx: &XiContext, mode: Mode) -> Result<EExpr, EmitError> {
    xi(e, cx, mode, None)
}

/// Translate with an expected type, which fixes the element type of `{}`.
pub fn xi_expected(
    e: &Expr,
    cx: &XiContext,
    mode: Mode,
    want: &EbType,
) -> Result<EExpr, EmitError> {
    xi(e, cx, mode, Some(&Ty::from_eb(want)))
}

fn unsupported(e: &Expr, kind: &str) -> EmitError {
    EmitError::UnsupportedExpr {
        kind: kind.to_string(),
        pos: e.pos,
    }
}

fn set_hint(cx: &XiContext, l: &Expr, r: &Expr, outer: Option<&Ty>) -> Option<Ty> {
    let a = cx.ty(l).unwrap_or(Ty::Any);
    let b = cx.ty(r).unwrap_or(Ty::Any);
    let t = a.unify(&b)?;
    match outer {
        Some(o) => t.unify(o),
        None => Some(t),
    }
}

fn is_set(cx: &XiContext, e: &Expr) -> bool {
    matches!(cx.ty(e), Some(Ty::Set(_)))
}

fn xi(e: &Expr, cx: &XiContext, mode: Mode, hint: Option<&Ty>) -> Result<EExpr, EmitError> {
    let go = |x: &Expr, h: Option<&Ty>| xi(x, cx, mode, h);
    Ok(match &e.kind {
        ExprKind::Int(v) => EExpr::Int(*v),
        ExprKind::Bool(b) => EExpr::Bool(*b),
        ExprKind::Ident(n) => ident(e, n, cx, mode)?,
        ExprKind::IntType | ExprKind::NatType | ExprKind::BoolType | ExprKind::Pow(_) => {
            return Err(unsupported(e, "type expression used as a value"))
        }
        ExprKind::EmptySet => {
            let elem = match hint {
                Some(Ty::Set(t)) => ty_to_eiffel(t),
                _ => EType::Any,
            };
            EExpr::SetLit {
                elem,
                elems: vec![],
            }
        }
        ExprKind::SetLit(elems) => {
            let ty = cx.ty(e).unwrap_or(Ty::Set(Box::new(Ty::Any)));
            let ty = hint.and_then(|h| ty.unify(h)).unwrap_or(ty);
            let elem = match &ty {
                Ty::Set(t) => ty_to_eiffel(t),
                _ => EType::Any,
            };
            EExpr::SetLit {
                elem,
                elems: elems
                    .iter()
                    .map(|x| go(x, None))
                    .collect::<Result<_, _>>()?,
            }
        }
        ExprKind::Unary(UnOp::Neg, inner) => EExpr::Neg(Box::new(go(inner, None)?)),
        ExprKind::Unary(UnOp::Not, inner) => EExpr::Not(Box::new(go(inner, None)?)),
        ExprKind::Binary(op, l, r) => binary(*op, l, r, cx, mode, hint)?,
    })
}

fn ident(e: &Expr, n: &str, cx: &XiContext, mode: Mode) -> Result<EExpr, EmitError> {
    if cx.event.is_some_and(|ev| ev.has_param(n)) {
        return Ok(EExpr::Arg(mangle(n)));
    }
    match cx.model.kind_of(n) {
        Some(SymbolKind::Variable) => {
            let is_set = cx.env.global(n).is_some_and(EbType::is_set);
            Ok(if cx.temps.iter().any(|t| t == n) {
                EExpr::Local(temp_name(n))
            } else if mode == Mode::OldWrapped {
                EExpr::Old {
                    name: mangle(n),
                    is_set,
                }
            } else {
                EExpr::Attr(mangle(n))
            })
        }
        Some(SymbolKind::Constant) => Ok(EExpr::Const {
            name: mangle(n),
            qualified: cx.qualify,
        }),
        Some(SymbolKind::CarrierSet) => Err(unsupported(e, "carrier set used as a value")),
        None => Err(unsupported(e, "unresolved identifier")),
    }
}

fn binary(
    op: BinOp,
    l: &Expr,
    r: &Expr,
    cx: &XiContext,
    mode: Mode,
    hint: Option<&Ty>,
) -> Result<EExpr, EmitError> {
    let go = |x: &Expr, h: Option<&Ty>| xi(x, cx, mode, h);
    let simple = |o: EBinOp| -> Result<EExpr, EmitError> {
        Ok(EExpr::binary(o, go(l, None)?, go(r, None)?))
    };
    match op {
        BinOp::Equiv => simple(EBinOp::Eq),
        BinOp::Implies => simple(EBinOp::Implies),
        BinOp::Or => simple(EBinOp::Or),
        BinOp::And => simple(EBinOp::And),
        BinOp::Lt => simple(EBinOp::Lt),
        BinOp::Le => simple(EBinOp::Le),
        BinOp::Gt => simple(EBinOp::Gt),
        BinOp::Ge => simple(EBinOp::Ge),
        BinOp::Add => simple(EBinOp::Add),
        BinOp::Sub => simple(EBinOp::Sub),
        BinOp::Mul => simple(EBinOp::Mul),
        BinOp::Div => simple(EBinOp::IntDiv),
        BinOp::Mod => simple(EBinOp::Mod),
        BinOp::Eq | BinOp::Ne => {
            if is_set(cx, l) || is_set(cx, r) {
                let h = set_hint(cx, l, r, None);
                let eq = EExpr::call(
                    go(l, h.as_ref())?,
                    SetFeature::IsEqual,
                    vec![go(r, h.as_ref())?],
                );
                Ok(if op == BinOp::Eq {
                    eq
                } else {
                    EExpr::Not(Box::new(eq))
                })
            } else {
                simple(if op == BinOp::Eq {
                    EBinOp::Eq
                } else {
                    EBinOp::Ne
                })
            }
        }
        BinOp::In => {
            if is_type_atom(cx.model, r) {
                // Typing atoms carry no runtime constraint except NAT.
                Ok(match r.kind {
                    ExprKind::NatType => EExpr::binary(EBinOp::Ge, go(l, None)?, EExpr::Int(0)),
                    _ => EExpr::Bool(true),
                })
            } else {
                let h = cx.ty(l).map(|t| Ty::Set(Box::new(t)));
                Ok(EExpr::call(
                    go(r, h.as_ref())?,
                    SetFeature::Has,
                    vec![go(l, None)?],
                ))
            }
        }
        BinOp::Subset => {
            if is_type_atom(cx.model, r) {
                if matches!(r.kind, ExprKind::NatType) {
                    return Err(unsupported(r, "subset of NAT"));
                }
                Ok(EExpr::Bool(true))
            } else {
                let h = set_hint(cx, l, r, None);
                Ok(EExpr::call(
                    go(l, h.as_ref())?,
                    SetFeature::IsSubset,
                    vec![go(r, h.as_ref())?],
                ))
            }
        }
        BinOp::Union | BinOp::Inter | BinOp::Diff => {
            let feature = match op {
                BinOp::Union => SetFeature::Union,
                BinOp::Inter => SetFeature::Intersection,
                _ => SetFeature::Difference,
            };
            let h = set_hint(cx, l, r, hint);
            Ok(EExpr::call(
                go(l, h.as_ref())?,
                feature,
                vec![go(r, h.as_ref())?],
            ))
        }
    }
}
