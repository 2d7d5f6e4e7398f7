use super::token::Pos;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Equiv,
    Implies,
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    In,
    Subset,
    Union,
    Diff,
    Inter,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

/// Binding strength of surface operators, lowest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Prec {
    Equiv,
    Implies,
    Or,
    And,
    Not,
    Relation,
    Union,
    Inter,
    Additive,
    Multiplicative,
    Negate,
    Atom,
}

impl BinOp {
    pub fn prec(self) -> Prec {
        use BinOp::*;
        match self {
            Equiv => Prec::Equiv,
            Implies => Prec::Implies,
            Or => Prec::Or,
            And => Prec::And,
            Eq | Ne | Lt | Le | Gt | Ge | In | Subset => Prec::Relation,
            Union | Diff => Prec::Union,
            Inter => Prec::Inter,
            Add | Sub => Prec::Additive,
            Mul | Div | Mod => Prec::Multiplicative,
        }
    }

    pub fn symbol(self) -> &'static str {
        use BinOp::*;
        match self {
            Equiv => "<=>",
            Implies => "=>",
            Or => "or",
            And => "&",
            Eq => "=",
            Ne => "/=",
            Lt => "<",
            Le => "<=",
            Gt => ">",
            Ge => ">=",
            In => ":",
            Subset => "<:",
            Union => "\\/",
            Diff => "\\",
            Inter => "/\\",
            Add => "+",
            Sub => "-",
            Mul => "*",
            Div => "div",
            Mod => "mod",
        }
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(
            self,
            BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Mod
        )
    }

    pub fn is_ordering(self) -> bool {
        matches!(self, BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge)
    }

    pub fn is_logical(self) -> bool {
        matches!(self, BinOp::Equiv | BinOp::Implies | BinOp::Or | BinOp::And)
    }

    pub fn is_set_op(self) -> bool {
        matches!(self, BinOp::Union | BinOp::Inter | BinOp::Diff)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Int(i64),
    Bool(bool),
    Ident(String),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    SetLit(Vec<Expr>),
    EmptySet,
    IntType,
    NatType,
    BoolType,
    Pow(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Self {
        Expr { kind, pos }
    }

    pub fn ident(name: &str) -> Self {
        Expr::new(ExprKind::Ident(name.to_string()), Pos::default())
    }

    pub fn int(v: i64) -> Self {
        Expr::new(ExprKind::Int(v), Pos::default())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        let pos = lhs.pos;
        Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos)
    }

    pub fn prec(&self) -> Prec {
        match &self.kind {
            ExprKind::Binary(op, ..) => op.prec(),
            ExprKind::Unary(UnOp::Not, _) => Prec::Not,
            ExprKind::Unary(UnOp::Neg, _) => Prec::Negate,
            _ => Prec::Atom,
        }
    }

    /// True for `INT`, `NAT`, `BOOL`, `POW(..)`; carrier-set names are not
    /// distinguishable here and are handled by the type checker.
    pub fn is_type_atom(&self) -> bool {
        matches!(
            self.kind,
            ExprKind::IntType | ExprKind::NatType | ExprKind::BoolType | ExprKind::Pow(_)
        )
    }

    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Unary(_, e) | ExprKind::Pow(e) => vec![e],
            ExprKind::Binary(_, l, r) => vec![l, r],
            ExprKind::SetLit(es) => es.iter().collect(),
            _ => vec![],
        }
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    /// Identifiers in order of first occurrence.
    pub fn identifiers(&self) -> Vec<(&str, Pos)> {
        let mut out: Vec<(&str, Pos)> = Vec::new();
        self.walk(&mut |e| {
            if let ExprKind::Ident(n) = &e.kind {
                if !out.iter().any(|(m, _)| *m == n) {
                    out.push((n, e.pos));
                }
            }
        });
        out
    }

    pub fn mentions(&self, name: &str) -> bool {
        let mut found = false;
        self.walk(&mut |e| {
            if matches!(&e.kind, ExprKind::Ident(n) if n == name) {
                found = true;
            }
        });
        found
    }

    /// Top-level conjuncts of a predicate.
    pub fn conjuncts(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Binary(BinOp::And, l, r) => {
                let mut v = l.conjuncts();
                v.extend(r.conjuncts());
                v
            }
            _ => vec![self],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPredicate {
    pub label: String,
    pub predicate: Expr,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledAction {
    pub label: String,
    pub target: String,
    pub rhs: Expr,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

impl Ident {
    pub fn new(name: &str, pos: Pos) -> Self {
        Ident {
            name: name.to_string(),
            pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventAst {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub guards: Vec<LabeledPredicate>,
    pub actions: Vec<LabeledAction>,
}

impl EventAst {
    pub fn is_initialisation(&self) -> bool {
        is_initialisation_name(&self.name.name)
    }

    pub fn guard(&self, label: &str) -> Option<&LabeledPredicate> {
        self.guards.iter().find(|g| g.label == label)
    }

    pub fn has_param(&self, name: &str) -> bool {
        self.params.iter().any(|p| p.name == name)
    }
}

pub fn is_initialisation_name(name: &str) -> bool {
    name.eq_ignore_ascii_case("initialisation")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineAst {
    pub name: Ident,
    pub sees: Vec<Ident>,
    pub variables: Vec<Ident>,
    pub invariants: Vec<LabeledPredicate>,
    pub initialisation: EventAst,
    pub events: Vec<EventAst>,
}

impl MachineAst {
    pub fn event(&self, name: &str) -> Option<&EventAst> {
        if is_initialisation_name(name) {
            return Some(&self.initialisation);
        }
        self.events.iter().find(|e| e.name.name == name)
    }

    pub fn has_variable(&self, name: &str) -> bool {
        self.variables.iter().any(|v| v.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextAst {
    pub name: Ident,
    pub constants: Vec<Ident>,
    pub sets: Vec<Ident>,
    pub axioms: Vec<LabeledPredicate>,
}

/// Resets every source position to the default, so models read through
/// different front ends can be compared structurally.
pub trait ErasePositions {
    fn erase_positions(&mut self);
}

impl ErasePositions for Expr {
    fn erase_positions(&mut self) {
        self.pos = Pos::default();
        match &mut self.kind {
            ExprKind::Unary(_, e) | ExprKind::Pow(e) => e.erase_positions(),
            ExprKind::Binary(_, l, r) => {
                l.erase_positions();
                r.erase_positions();
            }
            ExprKind::SetLit(es) => es.iter_mut().for_each(|e| e.erase_positions()),
            _ => {}
        }
    }
}

impl ErasePositions for Ident {
    fn erase_positions(&mut self) {
        self.pos = Pos::default();
    }
}

impl ErasePositions for LabeledPredicate {
    fn erase_positions(&mut self) {
        self.pos = Pos::default();
        self.predicate.erase_positions();
    }
}

impl ErasePositions for LabeledAction {
    fn erase_positions(&mut self) {
        self.pos = Pos::default();
        self.rhs.erase_positions();
    }
}

impl<T: ErasePositions> ErasePositions for Vec<T> {
    fn erase_positions(&mut self) {
        self.iter_mut().for_each(|x| x.erase_positions());
    }
}

impl ErasePositions for EventAst {
    fn erase_positions(&mut self) {
        self.name.erase_positions();
        self.params.erase_positions();
        self.guards.erase_positions();
        self.actions.erase_positions();
    }
}

impl ErasePositions for MachineAst {
    fn erase_positions(&mut self) {
        self.name.erase_positions();
        self.sees.erase_positions();
        self.variables.erase_positions();
        self.invariants.erase_positions();
        self.initialisation.erase_positions();
        self.events.erase_positions();
    }
}

impl ErasePositions for ContextAst {
    fn erase_positions(&mut self) {
        self.name.erase_positions();
        self.constants.erase_positions();
        self.sets.erase_positions();
        self.axioms.erase_positions();
    }
}
