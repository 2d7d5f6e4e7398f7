//! Event-B type inference and well-formedness checking.

mod diag;
mod infer;
mod types;
mod wellformed;

pub use diag::{codes, Diagnostic, Severity};
pub use infer::{atom_type, infer_types, is_type_atom, key_for, partial_type};
pub use types::{EbType, TypeEnv, TypeKey};
pub use wellformed::{check_wellformed, type_of, Ty};

use crate::ebfront::EventBModel;

/// Infer types and check well-formedness in one step.
pub fn typecheck(model: &EventBModel) -> Result<TypeEnv, Vec<Diagnostic>> {
    let env = infer_types(model)?;
    let diags = check_wellformed(model, &env);
    if diags.iter().any(Diagnostic::is_error) {
        Err(diags)
    } else {
        Ok(env)
    }
}
