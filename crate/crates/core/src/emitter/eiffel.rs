//! Target-language AST. Contract expressions stay as trees until rendering
//! so the animator can evaluate exactly what gets printed.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EType {
    Integer,
    Boolean,
    Any,
    /// A named class, possibly a formal generic such as `G`.
    Class(String),
    EbSet(Box<EType>),
    Generic(String, Vec<EType>),
    LikeCurrent,
}

impl EType {
    pub fn ebset(inner: EType) -> EType {
        EType::EbSet(Box::new(inner))
    }

    /// Class names this type mentions.
    pub fn class_names(&self, out: &mut Vec<String>) {
        match self {
            EType::Integer => out.push("INTEGER".into()),
            EType::Boolean => out.push("BOOLEAN".into()),
            EType::Any => out.push("ANY".into()),
            EType::Class(n) => out.push(n.clone()),
            EType::EbSet(t) => {
                out.push("EBSET".into());
                t.class_names(out);
            }
            EType::Generic(n, args) => {
                out.push(n.clone());
                args.iter().for_each(|a| a.class_names(out));
            }
            EType::LikeCurrent => {}
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetFeature {
    Has,
    IsSubset,
    Union,
    Intersection,
    Difference,
    IsEqual,
    Twin,
}

impl SetFeature {
    pub fn name(self) -> &'static str {
        match self {
            SetFeature::Has => "has",
            SetFeature::IsSubset => "is_subset",
            SetFeature::Union => "union",
            SetFeature::Intersection => "intersection",
            SetFeature::Difference => "difference",
            SetFeature::IsEqual => "is_equal",
            SetFeature::Twin => "twin",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EBinOp {
    Implies,
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    IntDiv,
    Mod,
}

impl EBinOp {
    pub fn symbol(self) -> &'static str {
        use EBinOp::*;
        match self {
            Implies => "implies",
            Or => "or",
            And => "and",
            Eq => "=",
            Ne => "/=",
            Lt => "<",
            Le => "<=",
            Gt => ">",
            Ge => ">=",
            Add => "+",
            Sub => "-",
            Mul => "*",
            IntDiv => "//",
            Mod => "\\\\",
        }
    }

    fn level(self) -> u8 {
        use EBinOp::*;
        match self {
            Implies => 1,
            Or => 2,
            And => 3,
            Eq | Ne | Lt | Le | Gt | Ge => 4,
            Add | Sub => 5,
            Mul | IntDiv | Mod => 6,
        }
    }

    fn left_assoc(self) -> bool {
        use EBinOp::*;
        matches!(self, Or | And | Add | Sub | Mul | IntDiv | Mod)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EExpr {
    Int(i64),
    Bool(bool),
    /// Attribute of the current object (a machine variable).
    Attr(String),
    /// `old v`; set-valued attributes are captured as `(old v.twin)`.
    Old {
        name: String,
        is_set: bool,
    },
    Arg(String),
    Local(String),
    Const {
        name: String,
        qualified: bool,
    },
    Not(Box<EExpr>),
    Neg(Box<EExpr>),
    Binary(EBinOp, Box<EExpr>, Box<EExpr>),
    Call {
        target: Box<EExpr>,
        feature: SetFeature,
        args: Vec<EExpr>,
    },
    SetLit {
        elem: EType,
        elems: Vec<EExpr>,
    },
    /// Verbatim text; used only by the fixed runtime class.
    Raw(String),
}

impl EExpr {
    pub fn binary(op: EBinOp, l: EExpr, r: EExpr) -> EExpr {
        EExpr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn call(target: EExpr, feature: SetFeature, args: Vec<EExpr>) -> EExpr {
        EExpr::Call {
            target: Box::new(target),
            feature,
            args,
        }
    }

    fn level(&self) -> u8 {
        match self {
            EExpr::Binary(op, ..) => op.level(),
            EExpr::Not(_) | EExpr::Neg(_) | EExpr::SetLit { .. } => 7,
            EExpr::Old { is_set: false, .. } => 7,
            EExpr::Int(v) if *v < 0 => 7,
            EExpr::Raw(_) => 0,
            _ => 8,
        }
    }

    fn starts_with_minus(&self) -> bool {
        match self {
            EExpr::Neg(_) => true,
            EExpr::Int(v) => *v < 0,
            EExpr::Binary(_, l, _) => l.starts_with_minus(),
            _ => false,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write_child(&self, out: &mut String, paren: bool) {
        if paren {
            out.push('(');
            self.write(out);
            out.push(')');
        } else {
            self.write(out);
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            EExpr::Int(v) => out.push_str(&v.to_string()),
            EExpr::Bool(true) => out.push_str("True"),
            EExpr::Bool(false) => out.push_str("False"),
            EExpr::Attr(n) | EExpr::Arg(n) | EExpr::Local(n) => out.push_str(n),
            EExpr::Old {
                name,
                is_set: false,
            } => {
                out.push_str("old ");
                out.push_str(name);
            }
            EExpr::Old { name, is_set: true } => {
                out.push_str("(old ");
                out.push_str(name);
                out.push_str(".twin)");
            }
            EExpr::Const { name, qualified } => {
                if *qualified {
                    out.push_str("ctx.");
                }
                out.push_str(name);
            }
            EExpr::Not(inner) => {
                out.push_str("not ");
                inner.write_child(out, inner.level() < 7);
            }
            EExpr::Neg(inner) => {
                out.push('-');
                inner.write_child(out, inner.level() < 7 || inner.starts_with_minus());
            }
            EExpr::Binary(op, l, r) => {
                let p = op.level();
                l.write_child(out, l.level() < p || (l.level() == p && !op.left_assoc()));
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                r.write_child(out, r.level() <= p);
            }
            EExpr::Call {
                target,
                feature,
                args,
            } => {
                target.write_child(out, target.level() < 8);
                out.push('.');
                out.push_str(feature.name());
                if !args.is_empty() {
                    out.push_str(" (");
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        a.write(out);
                    }
                    out.push(')');
                }
            }
            EExpr::SetLit { elem, elems } => {
                out.push_str("create {");
                out.push_str(&render_type(&EType::ebset(elem.clone())));
                out.push_str("}.");
                if elems.is_empty() {
                    out.push_str("make_empty");
                } else {
                    out.push_str("make_from_array (<<");
                    for (i, e) in elems.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        e.write(out);
                    }
                    out.push_str(">>)");
                }
            }
            EExpr::Raw(text) => out.push_str(text),
        }
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a EExpr)) {
        f(self);
        match self {
            EExpr::Not(e) | EExpr::Neg(e) => e.walk(f),
            EExpr::Binary(_, l, r) => {
                l.walk(f);
                r.walk(f);
            }
            EExpr::Call { target, args, .. } => {
                target.walk(f);
                args.iter().for_each(|a| a.walk(f));
            }
            EExpr::SetLit { elems, .. } => elems.iter().for_each(|e| e.walk(f)),
            _ => {}
        }
    }
}

pub fn render_type(t: &EType) -> String {
    match t {
        EType::Integer => "INTEGER".into(),
        EType::Boolean => "BOOLEAN".into(),
        EType::Any => "ANY".into(),
        EType::Class(n) => n.clone(),
        EType::EbSet(inner) => format!("EBSET [{}]", render_type(inner)),
        EType::Generic(n, args) => {
            let args: Vec<String> = args.iter().map(render_type).collect();
            format!("{n} [{}]", args.join(", "))
        }
        EType::LikeCurrent => "like Current".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LValue {
    Attr(String),
    Local(String),
    Result,
}

impl LValue {
    pub fn render(&self) -> &str {
        match self {
            LValue::Attr(n) | LValue::Local(n) => n,
            LValue::Result => "Result",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EStmt {
    /// `create target` or `create target.procedure`.
    Create {
        target: LValue,
        procedure: Option<String>,
    },
    Assign {
        target: LValue,
        value: EExpr,
    },
    /// `target.assign_from (value)` for set-valued attributes.
    AssignFrom {
        target: String,
        value: EExpr,
    },
    /// Verbatim, possibly multi-line; used only by the fixed runtime class.
    Raw(String),
}

impl EStmt {
    pub fn render(&self) -> String {
        match self {
            EStmt::Create {
                target,
                procedure: None,
            } => format!("create {}", target.render()),
            EStmt::Create {
                target,
                procedure: Some(p),
            } => format!("create {}.{p}", target.render()),
            EStmt::Assign { target, value } => format!("{} := {}", target.render(), value.render()),
            EStmt::AssignFrom { target, value } => {
                format!("{target}.assign_from ({})", value.render())
            }
            EStmt::Raw(text) => text.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assertion {
    pub tag: String,
    pub expr: EExpr,
}

impl Assertion {
    pub fn new(tag: &str, expr: EExpr) -> Self {
        Assertion {
            tag: tag.to_string(),
            expr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoutineKind {
    Do,
    Once,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EiffelFeature {
    pub name: String,
    pub args: Vec<(String, EType)>,
    pub result: Option<EType>,
    pub comment: Option<String>,
    pub require: Vec<Assertion>,
    pub locals: Vec<(String, EType)>,
    pub kind: RoutineKind,
    pub body: Vec<EStmt>,
    pub ensure: Vec<Assertion>,
}

impl EiffelFeature {
    pub fn procedure(name: &str) -> Self {
        EiffelFeature {
            name: name.to_string(),
            args: vec![],
            result: None,
            comment: None,
            require: vec![],
            locals: vec![],
            kind: RoutineKind::Do,
            body: vec![],
            ensure: vec![],
        }
    }

    pub fn is_once(&self) -> bool {
        self.kind == RoutineKind::Once
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EiffelAttribute {
    pub name: String,
    pub ty: EType,
    pub comment: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureGroup {
    pub comment: String,
    /// Export clause such as `{EBSET}`; `None` exports to all clients.
    pub export: Option<String>,
    pub features: Vec<EiffelFeature>,
    pub attributes: Vec<EiffelAttribute>,
}

impl FeatureGroup {
    pub fn new(comment: &str) -> Self {
        FeatureGroup {
            comment: comment.to_string(),
            export: None,
            features: vec![],
            attributes: vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parent {
    pub ty: EType,
    pub redefine: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EiffelUnit {
    pub name: String,
    pub generics: Vec<String>,
    pub parents: Vec<Parent>,
    pub creators: Vec<String>,
    pub groups: Vec<FeatureGroup>,
    pub invariant: Vec<Assertion>,
}

impl EiffelUnit {
    pub fn new(name: &str) -> Self {
        EiffelUnit {
            name: name.to_string(),
            generics: vec![],
            parents: vec![],
            creators: vec![],
            groups: vec![],
            invariant: vec![],
        }
    }

    pub fn group(&self, comment: &str) -> Option<&FeatureGroup> {
        self.groups.iter().find(|g| g.comment == comment)
    }

    pub fn features(&self) -> impl Iterator<Item = &EiffelFeature> {
        self.groups.iter().flat_map(|g| g.features.iter())
    }

    pub fn attributes(&self) -> impl Iterator<Item = &EiffelAttribute> {
        self.groups.iter().flat_map(|g| g.attributes.iter())
    }

    pub fn feature(&self, name: &str) -> Option<&EiffelFeature> {
        self.features().find(|f| f.name == name)
    }

    pub fn feature_mut(&mut self, name: &str) -> Option<&mut EiffelFeature> {
        self.groups
            .iter_mut()
            .flat_map(|g| g.features.iter_mut())
            .find(|f| f.name == name)
    }

    /// Output file name: class name lower-cased with a `.e` extension.
    pub fn file_name(&self) -> String {
        format!("{}.e", self.name.to_lowercase())
    }
}
