//! Recursive-descent parser for machines and contexts, with a
//! precedence-climbing expression grammar.

use super::ast::*;
use super::token::{Keyword, Op, Pos, Punct, Token, TokenKind};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{pos}: expected {}, found {found}", expected.join(" or "))]
    Unexpected {
        pos: Pos,
        found: String,
        expected: Vec<String>,
    },
    #[error("{pos}: unexpected end of input, expected {}", expected.join(" or "))]
    UnexpectedEof { pos: Pos, expected: Vec<String> },
    #[error("{pos}: duplicate {what} `{name}`")]
    Duplicate {
        what: &'static str,
        name: String,
        pos: Pos,
    },
    #[error("{pos}: machine `{machine}` has no INITIALISATION event")]
    MissingInitialisation { machine: String, pos: Pos },
    #[error("{pos}: the initialisation event may not declare {what}")]
    InvalidInitialisation { what: &'static str, pos: Pos },
    #[error("{pos}: action target `{name}` is not a declared variable")]
    UnknownTarget { name: String, pos: Pos },
    #[error("{pos}: unsupported construct: {construct}")]
    Unsupported { construct: String, pos: Pos },
    #[error("{pos}: NAT may only appear as the right operand of `:` or `<:`")]
    MisplacedNat { pos: Pos },
    #[error("{pos}: comparison operators do not associate; add parentheses")]
    ChainedRelation { pos: Pos },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Unexpected { pos, .. }
            | ParseError::UnexpectedEof { pos, .. }
            | ParseError::Duplicate { pos, .. }
            | ParseError::MissingInitialisation { pos, .. }
            | ParseError::InvalidInitialisation { pos, .. }
            | ParseError::UnknownTarget { pos, .. }
            | ParseError::Unsupported { pos, .. }
            | ParseError::MisplacedNat { pos }
            | ParseError::ChainedRelation { pos } => *pos,
        }
    }
}

pub type ParseResult<T> = Result<T, ParseError>;

/// Parse a machine from a token stream produced by [`super::lex`].
pub fn parse_machine(tokens: &[Token]) -> ParseResult<MachineAst> {
    let mut p = Parser::new(tokens);
    let m = p.machine()?;
    p.expect_eof()?;
    Ok(m)
}

/// Parse a context from a token stream produced by [`super::lex`].
pub fn parse_context(tokens: &[Token]) -> ParseResult<ContextAst> {
    let mut p = Parser::new(tokens);
    let c = p.context()?;
    p.expect_eof()?;
    Ok(c)
}

/// Parse a standalone predicate or expression (used for Rodin attribute strings).
pub fn parse_expr(tokens: &[Token]) -> ParseResult<Expr> {
    let mut p = Parser::new(tokens);
    let e = p.expr()?;
    p.expect_eof()?;
    check_nat_placement(&e, false)?;
    Ok(e)
}

/// Parse `target := rhs` (used for Rodin assignment attributes).
pub fn parse_assignment(tokens: &[Token]) -> ParseResult<(Ident, Expr)> {
    let mut p = Parser::new(tokens);
    let target = p.ident()?;
    p.assignment_op()?;
    let rhs = p.expr()?;
    p.expect_eof()?;
    check_nat_placement(&rhs, false)?;
    Ok((target, rhs))
}

struct Parser<'t> {
    tokens: &'t [Token],
    idx: usize,
}

impl<'t> Parser<'t> {
    fn new(tokens: &'t [Token]) -> Self {
        Parser { tokens, idx: 0 }
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.idx)
    }

    fn peek_kind(&self) -> Option<&'t TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn advance(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.idx);
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn eof_pos(&self) -> Pos {
        self.tokens.last().map(Token::pos).unwrap_or(Pos::new(1, 1))
    }

    fn error<T>(&self, expected: &[&str]) -> ParseResult<T> {
        let expected = expected.iter().map(|s| s.to_string()).collect();
        Err(match self.peek() {
            Some(t) => ParseError::Unexpected {
                pos: t.pos(),
                found: t.describe(),
                expected,
            },
            None => ParseError::UnexpectedEof {
                pos: self.eof_pos(),
                expected,
            },
        })
    }

    fn at_keyword(&self, kw: Keyword) -> bool {
        self.peek_kind() == Some(&TokenKind::Keyword(kw))
    }

    fn at_op(&self, op: Op) -> bool {
        self.peek_kind() == Some(&TokenKind::Op(op))
    }

    fn at_punct(&self, p: Punct) -> bool {
        self.peek_kind() == Some(&TokenKind::Punct(p))
    }

    fn eat_keyword(&mut self, kw: Keyword) -> bool {
        if self.at_keyword(kw) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn eat_punct(&mut self, p: Punct) -> bool {
        if self.at_punct(p) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: Keyword) -> ParseResult<Pos> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Keyword(kw) => {
                self.idx += 1;
                Ok(t.pos())
            }
            _ => self.error(&[&format!("`{}`", kw.as_str())]),
        }
    }

    fn expect_punct(&mut self, p: Punct, text: &str) -> ParseResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.error(&[&format!("`{text}`")])
        }
    }

    fn expect_eof(&self) -> ParseResult<()> {
        if self.peek().is_some() {
            self.error(&["end of input"])
        } else {
            Ok(())
        }
    }

    fn ident(&mut self) -> ParseResult<Ident> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident => {
                self.idx += 1;
                Ok(Ident::new(&t.lexeme, t.pos()))
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn at_ident(&self) -> bool {
        self.peek_kind() == Some(&TokenKind::Ident)
    }

    fn reject_unsupported(&self) -> ParseResult<()> {
        let Some(t) = self.peek() else { return Ok(()) };
        let construct = match &t.kind {
            TokenKind::Keyword(Keyword::Refines) => "refines",
            TokenKind::Keyword(Keyword::Extends) => "extends",
            TokenKind::Keyword(Keyword::Variant) => "variant",
            TokenKind::Keyword(Keyword::With) => "witness",
            _ => return Ok(()),
        };
        Err(ParseError::Unsupported {
            construct: construct.to_string(),
            pos: t.pos(),
        })
    }

    fn ident_list(&mut self) -> ParseResult<Vec<Ident>> {
        let mut out = Vec::new();
        while self.at_ident() {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn label(&mut self) -> ParseResult<(String, Pos)> {
        let pos = match self.peek() {
            Some(t) if t.kind == TokenKind::LabelMarker => t.pos(),
            _ => return self.error(&["`@label`"]),
        };
        self.idx += 1;
        let id = self.ident()?;
        Ok((id.name, pos))
    }

    fn labeled_predicates(&mut self) -> ParseResult<Vec<LabeledPredicate>> {
        let mut out = Vec::new();
        while self.peek_kind() == Some(&TokenKind::LabelMarker) {
            let (label, pos) = self.label()?;
            let predicate = self.expr()?;
            check_nat_placement(&predicate, false)?;
            out.push(LabeledPredicate {
                label,
                predicate,
                pos,
            });
        }
        Ok(out)
    }

    fn assignment_op(&mut self) -> ParseResult<()> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Op(Op::Becomes) => {
                self.idx += 1;
                Ok(())
            }
            Some(t) if matches!(t.kind, TokenKind::Op(Op::BecomesIn | Op::BecomesSuchThat)) => {
                Err(ParseError::Unsupported {
                    construct: format!("non-deterministic assignment `{}`", t.lexeme),
                    pos: t.pos(),
                })
            }
            _ => self.error(&["`:=`"]),
        }
    }

    fn labeled_actions(&mut self) -> ParseResult<Vec<LabeledAction>> {
        let mut out = Vec::new();
        while self.peek_kind() == Some(&TokenKind::LabelMarker) {
            let (label, pos) = self.label()?;
            let target = self.ident()?;
            self.assignment_op()?;
            let rhs = self.expr()?;
            check_nat_placement(&rhs, false)?;
            out.push(LabeledAction {
                label,
                target: target.name,
                rhs,
                pos,
            });
        }
        Ok(out)
    }

    fn machine(&mut self) -> ParseResult<MachineAst> {
        self.expect_keyword(Keyword::Machine)?;
        let name = self.ident()?;
        self.reject_unsupported()?;

        let mut sees = Vec::new();
        if self.eat_keyword(Keyword::Sees) {
            loop {
                sees.push(self.ident()?);
                if !self.eat_punct(Punct::Comma) {
                    break;
                }
            }
        }
        self.reject_unsupported()?;

        let mut variables = Vec::new();
        if self.eat_keyword(Keyword::Variables) {
            variables = self.ident_list()?;
        }
        let mut invariants = Vec::new();
        if self.eat_keyword(Keyword::Invariants) {
            invariants = self.labeled_predicates()?;
        }
        self.reject_unsupported()?;

        self.expect_keyword(Keyword::Events)?;
        let mut events = Vec::new();
        while self.at_keyword(Keyword::Event) {
            events.push(self.event()?);
        }
        self.reject_unsupported()?;
        self.expect_keyword(Keyword::End)?;

        assemble_machine(name, sees, variables, invariants, events)
    }

    fn event(&mut self) -> ParseResult<EventAst> {
        self.expect_keyword(Keyword::Event)?;
        let name = self.ident()?;
        self.reject_unsupported()?;
        let mut params = Vec::new();
        if self.eat_keyword(Keyword::Any) {
            params = self.ident_list()?;
        }
        let mut guards = Vec::new();
        if self.eat_keyword(Keyword::Where) {
            guards = self.labeled_predicates()?;
        }
        self.reject_unsupported()?;
        let mut actions = Vec::new();
        if self.eat_keyword(Keyword::Then) {
            actions = self.labeled_actions()?;
        }
        self.reject_unsupported()?;
        self.expect_keyword(Keyword::End)?;
        Ok(EventAst {
            name,
            params,
            guards,
            actions,
        })
    }

    fn context(&mut self) -> ParseResult<ContextAst> {
        self.expect_keyword(Keyword::Context)?;
        let name = self.ident()?;
        self.reject_unsupported()?;
        let mut constants = Vec::new();
        let mut sets = Vec::new();
        let mut axioms = Vec::new();
        let (mut had_constants, mut had_sets, mut had_axioms) = (false, false, false);
        loop {
            if !had_sets && self.eat_keyword(Keyword::Sets) {
                had_sets = true;
                sets = self.ident_list()?;
            } else if !had_constants && self.eat_keyword(Keyword::Constants) {
                had_constants = true;
                constants = self.ident_list()?;
            } else if !had_axioms && self.eat_keyword(Keyword::Axioms) {
                had_axioms = true;
                axioms = self.labeled_predicates()?;
            } else {
                break;
            }
        }
        self.reject_unsupported()?;
        self.expect_keyword(Keyword::End)?;
        let ctx = ContextAst {
            name,
            constants,
            sets,
            axioms,
        };
        validate_context(&ctx)?;
        Ok(ctx)
    }

    // ---- expressions ----

    fn expr(&mut self) -> ParseResult<Expr> {
        self.equiv()
    }

    fn left_assoc(
        &mut self,
        next: fn(&mut Self) -> ParseResult<Expr>,
        ops: &[(Op, BinOp)],
    ) -> ParseResult<Expr> {
        let mut lhs = next(self)?;
        'outer: loop {
            for (tok, op) in ops {
                if self.at_op(*tok) {
                    self.idx += 1;
                    let rhs = next(self)?;
                    let pos = lhs.pos;
                    lhs = Expr::new(ExprKind::Binary(*op, Box::new(lhs), Box::new(rhs)), pos);
                    continue 'outer;
                }
            }
            return Ok(lhs);
        }
    }

    fn equiv(&mut self) -> ParseResult<Expr> {
        self.left_assoc(Self::implies, &[(Op::Equiv, BinOp::Equiv)])
    }

    fn implies(&mut self) -> ParseResult<Expr> {
        self.left_assoc(Self::or, &[(Op::Implies, BinOp::Implies)])
    }

    fn or(&mut self) -> ParseResult<Expr> {
        self.left_assoc(Self::and, &[(Op::Or, BinOp::Or)])
    }

    fn and(&mut self) -> ParseResult<Expr> {
        self.left_assoc(Self::not, &[(Op::And, BinOp::And)])
    }

    fn not(&mut self) -> ParseResult<Expr> {
        if let Some(t) = self.peek().filter(|t| t.kind == TokenKind::Op(Op::Not)) {
            self.idx += 1;
            let inner = self.not()?;
            return Ok(Expr::new(
                ExprKind::Unary(UnOp::Not, Box::new(inner)),
                t.pos(),
            ));
        }
        self.relation()
    }

    fn relation_op(&self) -> Option<BinOp> {
        Some(match self.peek_kind()? {
            TokenKind::Op(Op::Eq) => BinOp::Eq,
            TokenKind::Op(Op::Ne) => BinOp::Ne,
            TokenKind::Op(Op::Lt) => BinOp::Lt,
            TokenKind::Op(Op::Le) => BinOp::Le,
            TokenKind::Op(Op::Gt) => BinOp::Gt,
            TokenKind::Op(Op::Ge) => BinOp::Ge,
            TokenKind::Op(Op::Colon) => BinOp::In,
            TokenKind::Op(Op::Subset) => BinOp::Subset,
            _ => return None,
        })
    }

    fn relation(&mut self) -> ParseResult<Expr> {
        let lhs = self.union()?;
        let Some(op) = self.relation_op() else {
            return Ok(lhs);
        };
        self.idx += 1;
        let rhs = self.union()?;
        if self.relation_op().is_some() {
            return Err(ParseError::ChainedRelation {
                pos: self.peek().map(Token::pos).unwrap_or(lhs.pos),
            });
        }
        let pos = lhs.pos;
        Ok(Expr::new(
            ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
            pos,
        ))
    }

    fn union(&mut self) -> ParseResult<Expr> {
        self.left_assoc(
            Self::inter,
            &[(Op::Union, BinOp::Union), (Op::SetMinus, BinOp::Diff)],
        )
    }

    fn inter(&mut self) -> ParseResult<Expr> {
        self.left_assoc(Self::additive, &[(Op::Inter, BinOp::Inter)])
    }

    fn additive(&mut self) -> ParseResult<Expr> {
        self.left_assoc(
            Self::multiplicative,
            &[(Op::Plus, BinOp::Add), (Op::Minus, BinOp::Sub)],
        )
    }

    fn multiplicative(&mut self) -> ParseResult<Expr> {
        self.left_assoc(
            Self::negate,
            &[
                (Op::Times, BinOp::Mul),
                (Op::Div, BinOp::Div),
                (Op::Mod, BinOp::Mod),
            ],
        )
    }

    fn negate(&mut self) -> ParseResult<Expr> {
        if let Some(t) = self.peek().filter(|t| t.kind == TokenKind::Op(Op::Minus)) {
            self.idx += 1;
            let inner = self.negate()?;
            return Ok(Expr::new(
                ExprKind::Unary(UnOp::Neg, Box::new(inner)),
                t.pos(),
            ));
        }
        self.atom()
    }

    fn atom(&mut self) -> ParseResult<Expr> {
        const EXPECTED: &[&str] = &["expression"];
        let Some(t) = self.peek() else {
            return self.error(EXPECTED);
        };
        let pos = t.pos();
        let kind = match &t.kind {
            TokenKind::Int(v) => {
                self.advance();
                ExprKind::Int(*v)
            }
            TokenKind::Ident => {
                self.advance();
                ExprKind::Ident(t.lexeme.clone())
            }
            TokenKind::Keyword(Keyword::True) => {
                self.advance();
                ExprKind::Bool(true)
            }
            TokenKind::Keyword(Keyword::False) => {
                self.advance();
                ExprKind::Bool(false)
            }
            TokenKind::Keyword(Keyword::Int) => {
                self.advance();
                ExprKind::IntType
            }
            TokenKind::Keyword(Keyword::Nat) => {
                self.advance();
                ExprKind::NatType
            }
            TokenKind::Keyword(Keyword::Bool) => {
                self.advance();
                ExprKind::BoolType
            }
            TokenKind::Keyword(Keyword::Pow) => {
                self.advance();
                self.expect_punct(Punct::LParen, "(")?;
                let inner = self.expr()?;
                self.expect_punct(Punct::RParen, ")")?;
                ExprKind::Pow(Box::new(inner))
            }
            TokenKind::Op(Op::EmptySet) => {
                self.advance();
                ExprKind::EmptySet
            }
            TokenKind::Punct(Punct::LParen) => {
                self.advance();
                let mut inner = self.expr()?;
                self.expect_punct(Punct::RParen, ")")?;
                inner.pos = pos;
                return Ok(inner);
            }
            TokenKind::Punct(Punct::LBrace) => {
                self.advance();
                if self.eat_punct(Punct::RBrace) {
                    ExprKind::EmptySet
                } else {
                    let mut elems = vec![self.expr()?];
                    while self.eat_punct(Punct::Comma) {
                        elems.push(self.expr()?);
                    }
                    self.expect_punct(Punct::RBrace, "}")?;
                    ExprKind::SetLit(elems)
                }
            }
            _ => return self.error(EXPECTED),
        };
        Ok(Expr::new(kind, pos))
    }
}

fn unique<'a>(
    what: &'static str,
    items: impl IntoIterator<Item = (&'a str, Pos)>,
) -> ParseResult<()> {
    let mut seen = HashSet::new();
    for (name, pos) in items {
        if !seen.insert(name) {
            return Err(ParseError::Duplicate {
                what,
                name: name.to_string(),
                pos,
            });
        }
    }
    Ok(())
}

fn validate_event(ev: &EventAst, variables: &[Ident]) -> ParseResult<()> {
    unique(
        "parameter",
        ev.params.iter().map(|p| (p.name.as_str(), p.pos)),
    )?;
    unique(
        "guard label",
        ev.guards.iter().map(|g| (g.label.as_str(), g.pos)),
    )?;
    unique(
        "action label",
        ev.actions.iter().map(|a| (a.label.as_str(), a.pos)),
    )?;
    unique(
        "assignment to variable",
        ev.actions.iter().map(|a| (a.target.as_str(), a.pos)),
    )?;
    for a in &ev.actions {
        if !variables.iter().any(|v| v.name == a.target) {
            return Err(ParseError::UnknownTarget {
                name: a.target.clone(),
                pos: a.pos,
            });
        }
    }
    Ok(())
}

/// Split the initialisation out of the event list and check the machine's
/// structural invariants. Shared by the surface parser and Rodin ingestion.
pub(crate) fn assemble_machine(
    name: Ident,
    sees: Vec<Ident>,
    variables: Vec<Ident>,
    invariants: Vec<LabeledPredicate>,
    all_events: Vec<EventAst>,
) -> ParseResult<MachineAst> {
    unique(
        "seen context",
        sees.iter().map(|s| (s.name.as_str(), s.pos)),
    )?;
    unique(
        "variable",
        variables.iter().map(|v| (v.name.as_str(), v.pos)),
    )?;
    unique(
        "invariant label",
        invariants.iter().map(|i| (i.label.as_str(), i.pos)),
    )?;

    let mut initialisation: Option<EventAst> = None;
    let mut events: Vec<EventAst> = Vec::new();
    for ev in all_events {
        validate_event(&ev, &variables)?;
        let dup = if ev.is_initialisation() {
            initialisation.is_some()
        } else {
            events.iter().any(|e| e.name.name == ev.name.name)
        };
        if dup {
            return Err(ParseError::Duplicate {
                what: "event",
                name: ev.name.name,
                pos: ev.name.pos,
            });
        }
        if ev.is_initialisation() {
            if let Some(p) = ev.params.first() {
                return Err(ParseError::InvalidInitialisation {
                    what: "parameters",
                    pos: p.pos,
                });
            }
            if let Some(g) = ev.guards.first() {
                return Err(ParseError::InvalidInitialisation {
                    what: "guards",
                    pos: g.pos,
                });
            }
            initialisation = Some(ev);
        } else {
            events.push(ev);
        }
    }
    let initialisation = initialisation.ok_or_else(|| ParseError::MissingInitialisation {
        machine: name.name.clone(),
        pos: name.pos,
    })?;
    Ok(MachineAst {
        name,
        sees,
        variables,
        invariants,
        initialisation,
        events,
    })
}

pub(crate) fn validate_context(c: &ContextAst) -> ParseResult<()> {
    unique(
        "name",
        c.sets
            .iter()
            .chain(c.constants.iter())
            .map(|i| (i.name.as_str(), i.pos)),
    )?;
    unique(
        "axiom label",
        c.axioms.iter().map(|a| (a.label.as_str(), a.pos)),
    )
}

/// NAT is a constrained type atom and may only be the direct right operand
/// of membership or subset.
pub(crate) fn check_nat_placement(e: &Expr, allowed: bool) -> ParseResult<()> {
    match &e.kind {
        ExprKind::NatType if !allowed => Err(ParseError::MisplacedNat { pos: e.pos }),
        ExprKind::Binary(BinOp::In | BinOp::Subset, l, r) => {
            check_nat_placement(l, false)?;
            check_nat_placement(r, true)
        }
        _ => e
            .children()
            .into_iter()
            .try_for_each(|c| check_nat_placement(c, false)),
    }
}
