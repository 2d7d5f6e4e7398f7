use crate::ebfront::Pos;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Stable diagnostic codes.
pub mod codes {
    pub const NO_TYPE: &str = "TYPE001";
    pub const CONFLICTING_TYPES: &str = "TYPE002";
    pub const UNTYPED_PARAMETER: &str = "TYPE003";
    pub const OPERAND_MISMATCH: &str = "TYPE010";
    pub const ACTION_MISMATCH: &str = "TYPE011";
    pub const NOT_A_PREDICATE: &str = "TYPE012";
    pub const INIT_READS_STATE: &str = "TYPE013";
    pub const UNSUPPORTED: &str = "TYPE014";
    pub const NAME_COLLISION: &str = "NAME001";
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    /// Machine or context the position refers to.
    pub unit: String,
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: &'static str, unit: &str, pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            unit: unit.to_string(),
            pos,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `SEVERITY CODE file:line:col message`
    pub fn render(&self, file: &str) -> String {
        format!(
            "{} {} {}:{}:{} {}",
            self.severity, self.code, file, self.pos.line, self.pos.column, self.message
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&self.unit))
    }
}
