#![allow(dead_code)]

pub mod generate;

use eb2dbc_core::animator::{Bindings, Interpretation};
use eb2dbc_core::ebfront::{load_model, EventBModel};
use eb2dbc_core::typing::{typecheck, TypeEnv};
use std::path::PathBuf;

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn m0() -> EventBModel {
    load_model(&fixture("m0.ebm"), &[&fixture("c0.ebc")]).expect("m0 loads")
}

pub fn typed(machine: &str, contexts: &[&str]) -> (EventBModel, TypeEnv) {
    let model = load_model(machine, contexts).expect("model loads");
    let env = typecheck(&model).unwrap_or_else(|d| panic!("type errors: {d:?}"));
    (model, env)
}

pub fn interp(model: &EventBModel, env: &TypeEnv, bindings: &str) -> Interpretation {
    Interpretation::from_bindings(
        model,
        env,
        &Bindings::parse(bindings).expect("bindings parse"),
    )
    .expect("bindings valid")
}

pub fn m0_with(d: i64) -> (EventBModel, TypeEnv, Interpretation) {
    let model = m0();
    let env = typecheck(&model).expect("m0 types");
    let i = interp(&model, &env, &format!("d={d}"));
    (model, env, i)
}
