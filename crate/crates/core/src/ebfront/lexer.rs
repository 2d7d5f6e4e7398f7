//! Tokenizer for the ASCII surface syntax. The Unicode operators used by
//! Rodin exports (`∈`, `≔`, `ℕ`, ...) lex to the same tokens as their
//! ASCII spellings so both front doors share one expression grammar.

use super::token::{Keyword, Op, Punct, Token, TokenKind};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("{line}:{column}: illegal character `{ch}`")]
    IllegalChar {
        ch: char,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: unterminated block comment")]
    UnterminatedComment { line: usize, column: usize },
    #[error("{line}:{column}: integer literal `{text}` out of range")]
    IntegerOverflow {
        text: String,
        line: usize,
        column: usize,
    },
}

impl LexError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            LexError::IllegalChar { line, column, .. }
            | LexError::UnterminatedComment { line, column }
            | LexError::IntegerOverflow { line, column, .. } => (*line, *column),
        }
    }
}

// Longest match first.
const ASCII_OPS: &[(&str, Op)] = &[
    ("<=>", Op::Equiv),
    (":=", Op::Becomes),
    ("::", Op::BecomesIn),
    (":|", Op::BecomesSuchThat),
    ("<:", Op::Subset),
    ("<=", Op::Le),
    (">=", Op::Ge),
    ("/=", Op::Ne),
    ("=>", Op::Implies),
    ("\\/", Op::Union),
    ("/\\", Op::Inter),
    (":∈", Op::BecomesIn),
    (":∣", Op::BecomesSuchThat),
    (":", Op::Colon),
    ("=", Op::Eq),
    ("<", Op::Lt),
    (">", Op::Gt),
    ("&", Op::And),
    ("\\", Op::SetMinus),
    ("+", Op::Plus),
    ("-", Op::Minus),
    ("*", Op::Times),
    ("/", Op::Div),
];

fn unicode_op(c: char) -> Option<TokenKind> {
    let op = match c {
        '∈' => Op::Colon,
        '⊆' => Op::Subset,
        '≠' => Op::Ne,
        '≤' => Op::Le,
        '≥' => Op::Ge,
        '∧' => Op::And,
        '∨' => Op::Or,
        '¬' => Op::Not,
        '⇒' => Op::Implies,
        '⇔' => Op::Equiv,
        '∪' => Op::Union,
        '∩' => Op::Inter,
        '∖' => Op::SetMinus,
        '≔' => Op::Becomes,
        '÷' => Op::Div,
        '−' => Op::Minus,
        '∗' | '×' => Op::Times,
        '∅' => Op::EmptySet,
        '⊤' => return Some(TokenKind::Keyword(Keyword::True)),
        '⊥' => return Some(TokenKind::Keyword(Keyword::False)),
        _ => return None,
    };
    Some(TokenKind::Op(op))
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

struct Cursor {
    chars: Vec<char>,
    idx: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.idx + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i) == Some(c))
    }
}

/// Tokenize `source`, discarding whitespace and comments.
pub fn lex(source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor {
        chars: source.chars().collect(),
        idx: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if cur.starts_with("//") {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if cur.starts_with("/*") {
            cur.bump();
            cur.bump();
            loop {
                if cur.starts_with("*/") {
                    cur.bump();
                    cur.bump();
                    break;
                }
                if cur.bump().is_none() {
                    return Err(LexError::UnterminatedComment { line, column });
                }
            }
            continue;
        }

        let push = |tokens: &mut Vec<Token>, kind: TokenKind, lexeme: String| {
            tokens.push(Token {
                kind,
                lexeme,
                line,
                column,
            })
        };

        if c.is_ascii_digit() {
            let mut text = String::new();
            while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                text.push(d);
                cur.bump();
            }
            let value = text.parse::<i64>().map_err(|_| LexError::IntegerOverflow {
                text: text.clone(),
                line,
                column,
            })?;
            push(&mut tokens, TokenKind::Int(value), text);
            continue;
        }

        if is_ident_start(c) {
            let mut text = String::new();
            while let Some(d) = cur.peek().filter(|&d| is_ident_continue(d)) {
                text.push(d);
                cur.bump();
            }
            let kind = match text.as_str() {
                "or" => TokenKind::Op(Op::Or),
                "not" => TokenKind::Op(Op::Not),
                "div" => TokenKind::Op(Op::Div),
                "mod" => TokenKind::Op(Op::Mod),
                w => match Keyword::from_word(w) {
                    Some(kw) => TokenKind::Keyword(kw),
                    None => TokenKind::Ident,
                },
            };
            push(&mut tokens, kind, text);
            continue;
        }

        if c == '@' {
            cur.bump();
            push(&mut tokens, TokenKind::LabelMarker, "@".into());
            continue;
        }

        let punct = match c {
            '(' => Some(Punct::LParen),
            ')' => Some(Punct::RParen),
            '{' => Some(Punct::LBrace),
            '}' => Some(Punct::RBrace),
            ',' => Some(Punct::Comma),
            _ => None,
        };
        if let Some(p) = punct {
            cur.bump();
            push(&mut tokens, TokenKind::Punct(p), c.to_string());
            continue;
        }

        if let Some((text, op)) = ASCII_OPS.iter().find(|(text, _)| cur.starts_with(text)) {
            for _ in text.chars() {
                cur.bump();
            }
            push(&mut tokens, TokenKind::Op(*op), (*text).to_string());
            continue;
        }

        if let Some(kind) = unicode_op(c) {
            cur.bump();
            push(&mut tokens, kind, c.to_string());
            continue;
        }

        return Err(LexError::IllegalChar {
            ch: c,
            line,
            column,
        });
    }

    Ok(tokens)
}
