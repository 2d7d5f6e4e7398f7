use std::fmt;

/// A 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn new(line: usize, column: usize) -> Self {
        Pos { line, column }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Machine,
    Sees,
    Variables,
    Invariants,
    Events,
    Event,
    Any,
    Where,
    Then,
    End,
    Context,
    Constants,
    Sets,
    Axioms,
    Int,
    Nat,
    Bool,
    Pow,
    True,
    False,
    // Recognised only so the parser can reject them with a clear message.
    Refines,
    Extends,
    Variant,
    With,
}

impl Keyword {
    pub fn from_word(word: &str) -> Option<Keyword> {
        use Keyword::*;
        Some(match word {
            "machine" => Machine,
            "sees" => Sees,
            "variables" => Variables,
            "invariants" => Invariants,
            "events" => Events,
            "event" => Event,
            "any" => Any,
            "where" => Where,
            "then" => Then,
            "end" => End,
            "context" => Context,
            "constants" => Constants,
            "sets" => Sets,
            "axioms" => Axioms,
            "INT" | "ℤ" => Int,
            "NAT" | "ℕ" => Nat,
            "BOOL" => Bool,
            "POW" | "ℙ" => Pow,
            "TRUE" | "true" | "⊤" => True,
            "FALSE" | "false" | "⊥" => False,
            "refines" => Refines,
            "extends" => Extends,
            "variant" => Variant,
            "with" => With,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        use Keyword::*;
        match self {
            Machine => "machine",
            Sees => "sees",
            Variables => "variables",
            Invariants => "invariants",
            Events => "events",
            Event => "event",
            Any => "any",
            Where => "where",
            Then => "then",
            End => "end",
            Context => "context",
            Constants => "constants",
            Sets => "sets",
            Axioms => "axioms",
            Int => "INT",
            Nat => "NAT",
            Bool => "BOOL",
            Pow => "POW",
            True => "TRUE",
            False => "FALSE",
            Refines => "refines",
            Extends => "extends",
            Variant => "variant",
            With => "with",
        }
    }
}

/// Operators in their canonical ASCII spelling. Unicode forms lex to the same variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Becomes,
    BecomesIn,
    BecomesSuchThat,
    Colon,
    Subset,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Not,
    Implies,
    Equiv,
    Union,
    Inter,
    Minus,
    SetMinus,
    Plus,
    Times,
    Div,
    Mod,
    EmptySet,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        use Op::*;
        match self {
            Becomes => ":=",
            BecomesIn => "::",
            BecomesSuchThat => ":|",
            Colon => ":",
            Subset => "<:",
            Eq => "=",
            Ne => "/=",
            Lt => "<",
            Le => "<=",
            Gt => ">",
            Ge => ">=",
            And => "&",
            Or => "or",
            Not => "not",
            Implies => "=>",
            Equiv => "<=>",
            Union => "\\/",
            Inter => "/\\",
            Minus => "-",
            SetMinus => "\\",
            Plus => "+",
            Times => "*",
            Div => "div",
            Mod => "mod",
            EmptySet => "{}",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Punct {
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident,
    Int(i64),
    Op(Op),
    LabelMarker,
    Punct(Punct),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Raw source text of the token.
    pub lexeme: String,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Ident => format!("identifier `{}`", self.lexeme),
            TokenKind::Int(_) => format!("integer `{}`", self.lexeme),
            _ => format!("`{}`", self.lexeme),
        }
    }
}
