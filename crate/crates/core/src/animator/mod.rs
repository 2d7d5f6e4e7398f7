//! Explicit-state interpreter for linked models, used as the semantic
//! oracle for emitted contracts.

mod contracts;
mod eval;
mod explore;
mod interp;
mod report;
mod sim;
mod value;

pub use contracts::{execute, ContractOracle, Finding, Side};
pub use eval::{eval, eval_with, EvalError, TargetFrame};
pub use explore::{
    check_contract_equivalence, check_translation, explore, ExploreOptions, Mismatch, Node,
    ReachabilityReport, Step, Violation, DEFAULT_MAX_DEPTH, DEFAULT_STATE_CAP,
};
pub use interp::{
    check_axioms, BindingError, Bindings, ConstantBindings, Interpretation, RawValue,
    DEFAULT_CARRIER_SIZE, DEFAULT_PARAM_BOUND,
};
pub use report::Record;
pub use sim::{arg_space, enabled, failing_guard, fire, init_state, params, AnimError};
pub use value::{atom_name, format_state, SimState, Value};
