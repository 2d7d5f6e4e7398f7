mod common;

use common::{fixture, interp, m0, m0_with, typed};
use eb2dbc_core::animator::{Interpretation, Value};
use eb2dbc_core::ebfront::{lex, parse_expr};
use eb2dbc_core::emitter::{
    check_blocks, normalize, render, runtime_interface, translate, translate_context,
    translate_event, xi_expr, EStmt, EType, EmitError, EmitOptions, Mode, XiContext,
    CONSTANTS_CLASS, INIT_FEATURE,
};
use eb2dbc_core::typing::typecheck;

const BARE: EmitOptions = EmitOptions {
    bare_constants: true,
};

fn xi(machine: &str, contexts: &[&str], text: &str, mode: Mode) -> String {
    let (model, env) = typed(machine, contexts);
    let e = parse_expr(&lex(text).unwrap()).unwrap();
    let cx = XiContext::new(&model, &env);
    xi_expr(&e, &cx, mode).unwrap().render()
}

const SETS_CTX: &str = "context c sets S constants k axioms @axm1 k : S end";
const SETS_M: &str = "machine m sees c variables r n b invariants \
    @inv1 r <: S @inv2 n : NAT @inv3 b : BOOL events \
    event INITIALISATION then @act1 r := {} @act2 n := 0 @act3 b := FALSE end \
    event add any x where @grd1 x : S @grd2 not (x : r) then @act1 r := r \\/ {x} end end";

#[test]
fn golden_cars_on_bridge() {
    let (model, env, i) = m0_with(2);
    let t = translate(&model, &env, &i, BARE).unwrap();
    let text = render(&t.machine);
    assert_eq!(
        normalize(&text),
        normalize(&fixture("m0.golden.e")),
        "{text}"
    );
}

#[test]
fn golden_constants_class() {
    let (model, env, i) = m0_with(2);
    let t = translate(&model, &env, &i, BARE).unwrap();
    let c = t.constants.as_ref().expect("has a context");
    assert_eq!(c.name, CONSTANTS_CLASS);
    let text = render(c);
    assert_eq!(
        normalize(&text),
        normalize(&fixture("constants.golden.e")),
        "{text}"
    );
}

#[test]
fn qualified_constants_by_default() {
    let (model, env, i) = m0_with(2);
    let t = translate(&model, &env, &i, EmitOptions::default()).unwrap();
    let text = render(&t.machine);
    assert!(text.contains("grd1: n < ctx.d"), "{text}");
    assert!(text.contains("inv2: n <= ctx.d"), "{text}");
    // The constants class itself never qualifies.
    let c = render(t.constants.as_ref().unwrap());
    assert!(c.contains("axm2: d > 0"), "{c}");
}

#[test]
fn machine_structure_counts() {
    let (model, env, i) = m0_with(2);
    let t = translate(&model, &env, &i, BARE).unwrap();
    let m = &t.machine;
    assert_eq!(m.creators, vec![INIT_FEATURE.to_string()]);
    assert_eq!(m.features().count(), 3);
    assert_eq!(m.invariant.len(), 2);
    let names: Vec<_> = m
        .attributes()
        .map(|a| (a.name.as_str(), a.ty.clone()))
        .collect();
    assert_eq!(
        names,
        vec![
            ("ctx", EType::Class("CONSTANTS".into())),
            ("n", EType::Integer)
        ]
    );
    let f = m.feature("ml_out").unwrap();
    assert_eq!(f.require.len(), 1);
    assert_eq!(f.ensure.len(), 1);
    assert_eq!(f.ensure[0].tag, "act1");
}

#[test]
fn xi_nat_membership() {
    let m = fixture("m0.ebm");
    let c = fixture("c0.ebc");
    assert_eq!(xi(&m, &[&c], "n : NAT", Mode::Plain), "n >= 0");
    assert_eq!(xi(&m, &[&c], "n : INT", Mode::Plain), "True");
}

#[test]
fn xi_old_wrapping() {
    let m = fixture("m0.ebm");
    let c = fixture("c0.ebc");
    assert_eq!(xi(&m, &[&c], "n + 1", Mode::OldWrapped), "old n + 1");
    assert_eq!(xi(&m, &[&c], "n + 1", Mode::Plain), "n + 1");
    assert_eq!(xi(&m, &[&c], "n - (1 - n)", Mode::Plain), "n - (1 - n)");
    assert_eq!(xi(&m, &[&c], "-(-n)", Mode::Plain), "-(-n)");
}

#[test]
fn xi_arithmetic_and_logic() {
    let m = fixture("m0.ebm");
    let c = fixture("c0.ebc");
    assert_eq!(
        xi(&m, &[&c], "n div 2 = n mod 2", Mode::Plain),
        "n // 2 = n \\\\ 2"
    );
    assert_eq!(
        xi(&m, &[&c], "n > 0 => (n < 5 or not n = 3)", Mode::Plain),
        "n > 0 implies n < 5 or not (n = 3)"
    );
    assert_eq!(
        xi(&m, &[&c], "(n < 1) <=> (n > 1)", Mode::Plain),
        "(n < 1) = (n > 1)"
    );
}

#[test]
fn xi_set_operations() {
    assert_eq!(
        xi(SETS_M, &[SETS_CTX], "r \\/ {k}", Mode::Plain),
        "r.union (create {EBSET [S]}.make_from_array (<<ctx.k>>))"
    );
    assert_eq!(
        xi(SETS_M, &[SETS_CTX], "k : r", Mode::Plain),
        "r.has (ctx.k)"
    );
    assert_eq!(
        xi(SETS_M, &[SETS_CTX], "not (k : r)", Mode::Plain),
        "not r.has (ctx.k)"
    );
    assert_eq!(
        xi(SETS_M, &[SETS_CTX], "r /\\ r <: r \\ r", Mode::Plain),
        "r.intersection (r).is_subset (r.difference (r))"
    );
    assert_eq!(
        xi(SETS_M, &[SETS_CTX], "r = r", Mode::Plain),
        "r.is_equal (r)"
    );
    assert_eq!(xi(SETS_M, &[SETS_CTX], "r <: S", Mode::Plain), "True");
    assert_eq!(xi(SETS_M, &[SETS_CTX], "k : S", Mode::Plain), "True");
    assert_eq!(
        xi(SETS_M, &[SETS_CTX], "r \\/ {k}", Mode::OldWrapped),
        "(old r.twin).union (create {EBSET [S]}.make_from_array (<<ctx.k>>))"
    );
}

#[test]
fn parameterised_event() {
    let m = "machine m variables n invariants @inv1 n : INT events \
             event INITIALISATION then @act1 n := 0 end \
             event set any x where @grd1 x : INT @grd2 x > n then @act1 n := x end end";
    let (model, env) = typed(m, &[]);
    let f = translate_event(&model, &env, &model.machine.events[0], BARE).unwrap();
    assert_eq!(f.args, vec![("x".to_string(), EType::Integer)]);
    let tags: Vec<_> = f.require.iter().map(|a| a.tag.as_str()).collect();
    assert_eq!(tags, ["grd1", "grd2"]);
    assert_eq!(f.require[0].expr.render(), "True");
    assert_eq!(f.require[1].expr.render(), "x > n");
    assert_eq!(f.ensure[0].expr.render(), "n = x");
}

#[test]
fn swap_uses_temporary() {
    let m = "machine m variables a b invariants @inv1 a : INT @inv2 b : INT events \
             event INITIALISATION then @act1 a := 1 @act2 b := 2 end \
             event swap then @act1 a := b @act2 b := a end end";
    let (model, env) = typed(m, &[]);
    let f = translate_event(&model, &env, &model.machine.events[0], BARE).unwrap();
    assert_eq!(f.locals, vec![("old_a".to_string(), EType::Integer)]);
    let body: Vec<_> = f.body.iter().map(EStmt::render).collect();
    assert_eq!(body, ["old_a := a", "a := b", "b := old_a"]);
    let ensure: Vec<_> = f.ensure.iter().map(|a| a.expr.render()).collect();
    assert_eq!(ensure, ["a = old b", "b = old a"]);
}

#[test]
fn independent_actions_need_no_temporary() {
    let m = "machine m variables a b invariants @inv1 a : INT @inv2 b : INT events \
             event INITIALISATION then @act1 a := 1 @act2 b := 2 end \
             event bump then @act1 a := a + 1 @act2 b := b + 1 end end";
    let (model, env) = typed(m, &[]);
    let f = translate_event(&model, &env, &model.machine.events[0], BARE).unwrap();
    assert!(f.locals.is_empty());
}

#[test]
fn machine_without_context_has_no_ctx() {
    let m = "machine m variables n invariants @inv1 n : NAT events \
             event INITIALISATION then @act1 n := 0 end end";
    let (model, env) = typed(m, &[]);
    let i = interp(&model, &env, "");
    let t = translate(&model, &env, &i, BARE).unwrap();
    assert!(t.constants.is_none());
    let text = render(&t.machine);
    assert!(!text.contains("ctx"), "{text}");
    // Zero events still gives an (empty) events group and a valid class.
    assert_eq!(t.machine.features().count(), 1);
    t.self_check().unwrap();
    check_blocks(&text).unwrap();
}

#[test]
fn initialisation_reading_state_is_rejected() {
    let m = "machine m variables n k invariants @inv1 n : NAT @inv2 k : NAT events \
             event INITIALISATION then @act1 n := 0 @act2 k := n end end";
    let model = eb2dbc_core::ebfront::load_model(m, &[]).unwrap();
    // Typing already refuses it; the emitter refuses it on its own too.
    assert!(typecheck(&model).is_err());
    let env = eb2dbc_core::typing::infer_types(&model).unwrap();
    let err = eb2dbc_core::emitter::translate_init(&model, &env, BARE).unwrap_err();
    match err {
        EmitError::InitReadsState {
            action, variable, ..
        } => {
            assert_eq!(action, "act2");
            assert_eq!(variable, "n");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn set_variables_and_carrier_classes() {
    let (model, env) = typed(SETS_M, &[SETS_CTX]);
    let i = interp(&model, &env, "");
    let t = translate(&model, &env, &i, BARE).unwrap();
    let r = t.machine.attributes().find(|a| a.name == "r").unwrap();
    assert_eq!(render_ty(&r.ty), "EBSET [S]");
    let names: Vec<_> = t.carriers.iter().map(|u| u.name.as_str()).collect();
    assert_eq!(names, ["S", "S_ELEM"]);
    assert_eq!(render_ty(&t.carriers[0].parents[0].ty), "EBSET [S_ELEM]");
    let init = render(&t.machine);
    assert!(init.contains("create r.make_empty"), "{init}");
    assert!(init.contains("r.assign_from ("), "{init}");
    let add = t.machine.feature("add").unwrap();
    assert_eq!(add.args, vec![("x".to_string(), EType::Class("S".into()))]);
    assert_eq!(add.require[1].expr.render(), "not r.has (x)");
    assert_eq!(
        add.ensure[0].expr.render(),
        "r.is_equal ((old r.twin).union (create {EBSET [S]}.make_from_array (<<x>>)))"
    );
    t.self_check().unwrap();
    for (_, text) in t.files() {
        check_blocks(&text).unwrap();
    }
}

fn render_ty(t: &EType) -> String {
    eb2dbc_core::emitter::render_type(t)
}

#[test]
fn binding_violating_axiom_is_reported() {
    let model = m0();
    let env = typecheck(&model).unwrap();
    let mut i = interp(&model, &env, "d=2");
    i.constants.insert("d".into(), Value::Int(0));
    match translate_context(&model, &env, &i) {
        Err(EmitError::BindingViolatesAxioms { constant, axiom }) => {
            assert_eq!(constant, "d");
            assert_eq!(axiom, "axm2");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn missing_binding_is_reported() {
    let model = m0();
    let env = typecheck(&model).unwrap();
    let mut i = interp(&model, &env, "d=2");
    i.bound.remove("d");
    assert_eq!(
        translate_context(&model, &env, &i).unwrap_err(),
        EmitError::MissingBinding("d".into())
    );
}

#[test]
fn bound_set_constant_renders_literal() {
    let c = "context c constants ks axioms @axm1 ks <: INT end";
    let m = "machine m sees c variables n invariants @inv1 n : INT @inv2 n : ks events \
             event INITIALISATION then @act1 n := 1 end end";
    let (model, env) = typed(m, &[c]);
    let i: Interpretation = interp(&model, &env, "ks={1,3}");
    let unit = translate_context(&model, &env, &i).unwrap();
    let text = render(&unit);
    assert!(
        text.contains("Result := create {EBSET [INTEGER]}.make_from_array (<<1, 3>>)"),
        "{text}"
    );
}

#[test]
fn output_is_deterministic() {
    let (model, env, i) = m0_with(3);
    let a = translate(&model, &env, &i, EmitOptions::default())
        .unwrap()
        .files();
    let b = translate(&model, &env, &i, EmitOptions::default())
        .unwrap()
        .files();
    assert_eq!(a, b);
    let names: Vec<_> = a.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["m0.e", "constants.e", "ebset.e"]);
}

#[test]
fn runtime_class_interface() {
    let (model, env, i) = m0_with(2);
    let t = translate(&model, &env, &i, BARE).unwrap();
    let rt = render(&t.runtime);
    check_blocks(&rt).unwrap();
    let iface = runtime_interface();
    for f in [
        "make_empty",
        "has",
        "count",
        "is_subset",
        "is_equal",
        "union",
        "intersection",
        "difference",
        "extend",
        "assign_from",
    ] {
        assert!(iface.iter().any(|x| x == f), "missing {f}");
        assert!(t.runtime.feature(f).is_some(), "missing {f}");
    }
    assert!(rt.starts_with("class EBSET [G]"), "{rt}");
    // Value semantics: equality is element-wise, assignment copies.
    let eq = t.runtime.feature("is_equal").unwrap();
    assert!(eq.body.iter().any(|s| s.render().contains("is_subset")));
}

#[test]
fn self_check_catches_dangling_reference() {
    let (model, env, i) = m0_with(2);
    let mut t = translate(&model, &env, &i, BARE).unwrap();
    t.self_check().unwrap();
    let f = t.machine.feature_mut("ml_in").unwrap();
    f.require[0].expr = eb2dbc_core::emitter::EExpr::Attr("nope".into());
    assert!(matches!(t.self_check(), Err(EmitError::SelfCheck(_))));
}
