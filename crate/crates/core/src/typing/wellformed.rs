use super::diag::{codes, Diagnostic};
use super::infer::{atom_type, is_type_atom};
use super::types::{EbType, TypeEnv};
use crate::ebfront::{BinOp, EventAst, EventBModel, Expr, ExprKind, UnOp};
use crate::emitter::naming;

/// Expression type with a wildcard element for `{}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ty {
    Int,
    Bool,
    Carrier(String),
    Set(Box<Ty>),
    Any,
}

impl Ty {
    pub fn from_eb(t: &EbType) -> Ty {
        match t {
            EbType::Int => Ty::Int,
            EbType::Bool => Ty::Bool,
            EbType::Carrier(s) => Ty::Carrier(s.clone()),
            EbType::SetOf(inner) => Ty::Set(Box::new(Ty::from_eb(inner))),
        }
    }

    /// Most specific common type, if the two are compatible.
    pub fn unify(&self, other: &Ty) -> Option<Ty> {
        match (self, other) {
            (Ty::Any, t) | (t, Ty::Any) => Some(t.clone()),
            (Ty::Set(a), Ty::Set(b)) => a.unify(b).map(|t| Ty::Set(Box::new(t))),
            (a, b) if a == b => Some(a.clone()),
            _ => None,
        }
    }

    pub fn to_eb(&self) -> Option<EbType> {
        Some(match self {
            Ty::Int => EbType::Int,
            Ty::Bool => EbType::Bool,
            Ty::Carrier(s) => EbType::Carrier(s.clone()),
            Ty::Set(t) => EbType::set_of(t.to_eb()?),
            Ty::Any => return None,
        })
    }
}

impl std::fmt::Display for Ty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ty::Int => write!(f, "INT"),
            Ty::Bool => write!(f, "BOOL"),
            Ty::Carrier(s) => write!(f, "{s}"),
            Ty::Set(t) => write!(f, "POW({t})"),
            Ty::Any => write!(f, "?"),
        }
    }
}

/// Type of a value expression under a complete environment, or `None` when
/// it is ill-typed. Shared with the emitter, which needs element types for
/// set literals.
pub fn type_of(
    model: &EventBModel,
    env: &TypeEnv,
    event: Option<&EventAst>,
    e: &Expr,
) -> Option<Ty> {
    let mut sink = Vec::new();
    Checker {
        model,
        env,
        event,
        unit: "",
        diags: &mut sink,
    }
    .expr(e)
}

struct Checker<'a> {
    model: &'a EventBModel,
    env: &'a TypeEnv,
    event: Option<&'a EventAst>,
    unit: &'a str,
    diags: &'a mut Vec<Diagnostic>,
}

impl Checker<'_> {
    fn report(&mut self, code: &'static str, e: &Expr, msg: String) -> Option<Ty> {
        self.diags
            .push(Diagnostic::error(code, self.unit, e.pos, msg));
        None
    }

    fn expect(&mut self, e: &Expr, want: &Ty, what: &str) -> Option<Ty> {
        let got = self.expr(e)?;
        match got.unify(want) {
            Some(t) => Some(t),
            None => self.report(
                codes::OPERAND_MISMATCH,
                e,
                format!("{what} expects {want}, found {got}"),
            ),
        }
    }

    fn expr(&mut self, e: &Expr) -> Option<Ty> {
        match &e.kind {
            ExprKind::Int(_) => Some(Ty::Int),
            ExprKind::Bool(_) => Some(Ty::Bool),
            ExprKind::Ident(n) => {
                let scope = self.event.map(|ev| ev.name.name.as_str());
                if self.model.is_carrier_set(n) && !self.event.is_some_and(|ev| ev.has_param(n)) {
                    return self.report(
                        codes::UNSUPPORTED,
                        e,
                        format!("carrier set `{n}` may only be used as a type"),
                    );
                }
                match self.env.lookup(scope, n) {
                    Some(t) => Some(Ty::from_eb(t)),
                    None => self.report(codes::OPERAND_MISMATCH, e, format!("`{n}` has no type")),
                }
            }
            ExprKind::IntType | ExprKind::NatType | ExprKind::BoolType | ExprKind::Pow(_) => self
                .report(
                    codes::UNSUPPORTED,
                    e,
                    "type expressions may only appear on the right of `:` or `<:`".into(),
                ),
            ExprKind::EmptySet => Some(Ty::Set(Box::new(Ty::Any))),
            ExprKind::SetLit(elems) => {
                let mut elem = Ty::Any;
                for x in elems {
                    let t = self.expr(x)?;
                    if matches!(t, Ty::Set(_)) {
                        return self.report(
                            codes::UNSUPPORTED,
                            x,
                            "set-valued elements in set literals are not supported".into(),
                        );
                    }
                    elem = match elem.unify(&t) {
                        Some(u) => u,
                        None => {
                            return self.report(
                                codes::OPERAND_MISMATCH,
                                x,
                                format!("set literal mixes {elem} and {t}"),
                            )
                        }
                    };
                }
                Some(Ty::Set(Box::new(elem)))
            }
            ExprKind::Unary(UnOp::Neg, inner) => self.expect(inner, &Ty::Int, "`-`"),
            ExprKind::Unary(UnOp::Not, inner) => self.expect(inner, &Ty::Bool, "`not`"),
            ExprKind::Binary(op, l, r) => self.binary(e, *op, l, r),
        }
    }

    fn binary(&mut self, e: &Expr, op: BinOp, l: &Expr, r: &Expr) -> Option<Ty> {
        let what = format!("`{}`", op.symbol());
        if op.is_logical() {
            let a = self.expect(l, &Ty::Bool, &what);
            let b = self.expect(r, &Ty::Bool, &what);
            return a.and(b).map(|_| Ty::Bool);
        }
        if op.is_arithmetic() {
            let a = self.expect(l, &Ty::Int, &what);
            let b = self.expect(r, &Ty::Int, &what);
            return a.and(b).map(|_| Ty::Int);
        }
        if op.is_ordering() {
            let a = self.expect(l, &Ty::Int, &what);
            let b = self.expect(r, &Ty::Int, &what);
            return a.and(b).map(|_| Ty::Bool);
        }
        match op {
            BinOp::Eq | BinOp::Ne => {
                let a = self.expr(l)?;
                let b = self.expr(r)?;
                if a.unify(&b).is_none() {
                    return self.report(
                        codes::OPERAND_MISMATCH,
                        e,
                        format!("cannot compare {a} with {b}"),
                    );
                }
                Some(Ty::Bool)
            }
            BinOp::In => {
                if is_type_atom(self.model, r) {
                    let want = self.atom(r)?;
                    self.expect(l, &want, &what)?;
                } else {
                    let s = self.expr(r)?;
                    let Ty::Set(elem) = s else {
                        return self.report(
                            codes::OPERAND_MISMATCH,
                            r,
                            format!("`:` expects a set on the right, found {s}"),
                        );
                    };
                    self.expect(l, &elem, &what)?;
                }
                Some(Ty::Bool)
            }
            BinOp::Subset => {
                if matches!(r.kind, ExprKind::NatType) {
                    return self.report(
                        codes::UNSUPPORTED,
                        r,
                        "`<: NAT` constrains every element and is not supported".into(),
                    );
                }
                if is_type_atom(self.model, r) {
                    let elem = self.atom(r)?;
                    self.expect(l, &Ty::Set(Box::new(elem)), &what)?;
                } else {
                    let s = self.expr(r)?;
                    if !matches!(s, Ty::Set(_)) {
                        return self.report(
                            codes::OPERAND_MISMATCH,
                            r,
                            format!("`<:` expects a set on the right, found {s}"),
                        );
                    }
                    self.expect(l, &s, &what)?;
                }
                Some(Ty::Bool)
            }
            BinOp::Union | BinOp::Inter | BinOp::Diff => {
                let a = self.expr(l)?;
                if !matches!(a, Ty::Set(_)) {
                    return self.report(
                        codes::OPERAND_MISMATCH,
                        l,
                        format!("{what} expects a set, found {a}"),
                    );
                }
                self.expect(r, &a, &what)
            }
            _ => unreachable!("operator classes are exhaustive"),
        }
    }

    /// Element type denoted by a type atom; `NAT` is accepted only directly.
    fn atom(&mut self, r: &Expr) -> Option<Ty> {
        if let ExprKind::Pow(inner) = &r.kind {
            if contains_nat(inner) {
                return self.report(
                    codes::UNSUPPORTED,
                    r,
                    "POW(NAT) constrains every element and is not supported".into(),
                );
            }
        }
        atom_type(self.model, r).map(|t| Ty::from_eb(&t))
    }

    fn predicate(&mut self, p: &Expr) {
        if let Some(t) = self.expr(p) {
            if t != Ty::Bool {
                self.report(
                    codes::NOT_A_PREDICATE,
                    p,
                    format!("predicate expected, found an expression of type {t}"),
                );
            }
        }
    }
}

fn contains_nat(e: &Expr) -> bool {
    let mut found = false;
    e.walk(&mut |x| found |= matches!(x.kind, ExprKind::NatType));
    found
}

/// Check every predicate and action of a typed model.
pub fn check_wellformed(model: &EventBModel, env: &TypeEnv) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for (ctx, ax) in model.axioms() {
        Checker {
            model,
            env,
            event: None,
            unit: &ctx.name.name,
            diags: &mut diags,
        }
        .predicate(&ax.predicate);
    }
    let unit = model.machine.name.name.as_str();
    for inv in &model.machine.invariants {
        Checker {
            model,
            env,
            event: None,
            unit,
            diags: &mut diags,
        }
        .predicate(&inv.predicate);
    }
    for ev in model.all_events() {
        let mut c = Checker {
            model,
            env,
            event: Some(ev),
            unit,
            diags: &mut diags,
        };
        for g in &ev.guards {
            c.predicate(&g.predicate);
        }
        for a in &ev.actions {
            let Some(rhs) = c.expr(&a.rhs) else { continue };
            let Some(target) = env.global(&a.target) else {
                continue;
            };
            let target = Ty::from_eb(target);
            if rhs.unify(&target).is_none() {
                c.report(
                    codes::ACTION_MISMATCH,
                    &a.rhs,
                    format!("`{}` has type {target} but is assigned {rhs}", a.target),
                );
            }
        }
    }
    for a in &model.machine.initialisation.actions {
        if let Some((v, pos)) = a
            .rhs
            .identifiers()
            .into_iter()
            .find(|(n, _)| model.is_variable(n))
        {
            diags.push(Diagnostic::error(
                codes::INIT_READS_STATE,
                unit,
                pos,
                format!(
                    "initialisation action `{}` reads machine variable `{v}`",
                    a.label
                ),
            ));
        }
    }
    diags.extend(naming::check_names(model, env));
    diags.sort();
    diags.dedup();
    diags
}
