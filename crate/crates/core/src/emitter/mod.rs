//! Translation of typed Event-B models into Eiffel classes.

mod check;
pub mod eiffel;
pub mod naming;
mod render;
mod runtime;
mod translate;
mod xi;

pub use check::{check_blocks, self_check};
pub use eiffel::{
    render_type, Assertion, EBinOp, EExpr, EStmt, EType, EiffelAttribute, EiffelFeature,
    EiffelUnit, FeatureGroup, LValue, Parent, RoutineKind, SetFeature,
};
pub use render::{normalize, render};
pub use runtime::{emit_runtime, runtime_interface, RUNTIME_CLASS};
pub use translate::{
    translate, translate_carrier_sets, translate_context, translate_event, translate_init,
    translate_machine, EmitOptions, Translation, CONSTANTS_CLASS, GROUP_ACCESS, GROUP_CONSTANTS,
    GROUP_EVENTS, GROUP_INIT, INIT_FEATURE,
};
pub use xi::{eiffel_type, xi_expected, xi_expr, Mode, XiContext};

use crate::animator::BindingError;
use crate::ebfront::Pos;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("{pos}: unsupported construct: {kind}")]
    UnsupportedExpr { kind: String, pos: Pos },
    #[error("{pos}: initialisation action {action} reads machine variable `{variable}`")]
    InitReadsState {
        action: String,
        variable: String,
        pos: Pos,
    },
    #[error("constant `{0}` needs a binding")]
    MissingBinding(String),
    #[error("binding of `{constant}` violates axiom {axiom}")]
    BindingViolatesAxioms { constant: String, axiom: String },
    #[error(transparent)]
    Binding(BindingError),
    #[error("`{0}` has no type")]
    Untyped(String),
    #[error("emitted classes are malformed: {}", .0.join("; "))]
    SelfCheck(Vec<String>),
}

impl Translation {
    /// Rendered `(file name, text)` pairs in emission order.
    pub fn files(&self) -> Vec<(String, String)> {
        self.units()
            .into_iter()
            .map(|u| (u.file_name(), render(u)))
            .collect()
    }

    pub fn self_check(&self) -> Result<(), EmitError> {
        self_check(&self.units()).map_err(EmitError::SelfCheck)
    }
}
