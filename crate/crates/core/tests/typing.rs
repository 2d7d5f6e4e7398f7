mod common;

use common::{fixture, m0};
use eb2dbc_core::ebfront::load_model;
use eb2dbc_core::typing::{codes, infer_types, typecheck, EbType, TypeKey};

fn codes_of(machine: &str, contexts: &[&str]) -> Vec<&'static str> {
    let model = load_model(machine, contexts).expect("links");
    match typecheck(&model) {
        Ok(_) => vec![],
        Err(d) => d.iter().map(|x| x.code).collect(),
    }
}

#[test]
fn cars_on_bridge_types() {
    let model = m0();
    let env = typecheck(&model).unwrap();
    assert_eq!(env.global("n"), Some(&EbType::Int));
    assert_eq!(env.global("d"), Some(&EbType::Int));
    assert!(env.has_nat_constraint(&TypeKey::global("n")));
    assert!(env.has_nat_constraint(&TypeKey::global("d")));
    assert_eq!(env.origins[&TypeKey::global("n")], "inv1");
    assert_eq!(env.origins[&TypeKey::global("d")], "axm1");
}

#[test]
fn boolean_membership() {
    let m = "machine m variables b invariants @inv1 b : BOOL events \
             event INITIALISATION then @act1 b := TRUE end end";
    let model = load_model(m, &[]).unwrap();
    let env = typecheck(&model).unwrap();
    assert_eq!(env.global("b"), Some(&EbType::Bool));
    assert!(env.nat.is_empty());
}

#[test]
fn carrier_and_subset() {
    let c = "context c sets S constants k axioms @axm1 k : S end";
    let m = "machine m sees c variables r invariants @inv1 r <: S events \
             event INITIALISATION then @act1 r := {} end end";
    let model = load_model(m, &[c]).unwrap();
    let env = typecheck(&model).unwrap();
    let s = EbType::Carrier("S".into());
    assert_eq!(env.global("k"), Some(&s));
    assert_eq!(env.global("r"), Some(&EbType::set_of(s.clone())));
    assert_eq!(env.global("S"), Some(&EbType::set_of(s)));
}

#[test]
fn membership_in_typed_set_uses_fixpoint() {
    let c = "context c sets S constants k axioms @axm1 k : s0 @axm2 s0 <: S end";
    let c = c.replace("constants k", "constants k s0");
    let m = "machine m sees c variables x invariants @inv1 x : s0 events \
             event INITIALISATION then @act1 x := k end end";
    let model = load_model(m, &[&c]).unwrap();
    let env = infer_types(&model).unwrap();
    assert_eq!(env.global("k"), Some(&EbType::Carrier("S".into())));
    assert_eq!(env.global("x"), Some(&EbType::Carrier("S".into())));
}

#[test]
fn parameters_are_typed_by_guards() {
    let m = "machine m variables n invariants @inv1 n : INT events \
             event INITIALISATION then @act1 n := 0 end \
             event set any x where @grd1 x : INT @grd2 x > n then @act1 n := x end end";
    let model = load_model(m, &[]).unwrap();
    let env = typecheck(&model).unwrap();
    assert_eq!(env.lookup(Some("set"), "x"), Some(&EbType::Int));
    assert_eq!(env.origins[&TypeKey::param("set", "x")], "set/grd1");
}

#[test]
fn untyped_parameter_is_type003() {
    let m = "machine m variables n invariants @inv1 n : INT events \
             event INITIALISATION then @act1 n := 0 end \
             event set any x where @grd1 x = x then @act1 n := 1 end end";
    assert_eq!(codes_of(m, &[]), vec![codes::UNTYPED_PARAMETER]);
}

#[test]
fn untyped_variable_is_type001() {
    let m = "machine m variables v w invariants @inv1 v : INT events \
             event INITIALISATION then @act1 v := 0 @act2 w := {} end end";
    assert_eq!(codes_of(m, &[]), vec![codes::NO_TYPE]);
}

#[test]
fn conflicting_constraints_are_type002() {
    let m = "machine m variables v invariants @inv1 v : INT @inv2 v : BOOL events \
             event INITIALISATION then @act1 v := 0 end end";
    assert_eq!(codes_of(m, &[]), vec![codes::CONFLICTING_TYPES]);
}

#[test]
fn usage_fallback_types_arithmetic_operands() {
    let m = "machine m variables v invariants @inv1 v + 1 > 0 events \
             event INITIALISATION then @act1 v := 0 end end";
    let model = load_model(m, &[]).unwrap();
    let env = typecheck(&model).unwrap();
    assert_eq!(env.global("v"), Some(&EbType::Int));
    assert_eq!(env.origins[&TypeKey::global("v")], "usage");
}

#[test]
fn wellformed_cars_on_bridge() {
    let model = load_model(&fixture("m0.ebm"), &[&fixture("c0.ebc")]).unwrap();
    assert!(typecheck(&model).is_ok());
}

#[test]
fn action_type_mismatch_is_type011() {
    let m = "machine m variables n invariants @inv1 n : NAT events \
             event INITIALISATION then @act1 n := 0 end \
             event clear then @act1 n := {} end end";
    assert_eq!(codes_of(m, &[]), vec![codes::ACTION_MISMATCH]);
}

#[test]
fn non_boolean_guard_is_type012() {
    let m = "machine m variables n invariants @inv1 n : NAT events \
             event INITIALISATION then @act1 n := 0 end \
             event bad where @grd1 n + 1 then @act1 n := 0 end end";
    assert_eq!(codes_of(m, &[]), vec![codes::NOT_A_PREDICATE]);
}

#[test]
fn operand_mismatch_is_type010() {
    let m = "machine m variables n b invariants @inv1 n : NAT @inv2 b : BOOL events \
             event INITIALISATION then @act1 n := 0 @act2 b := FALSE end \
             event bad where @grd1 n + b > 0 then @act1 n := 0 end end";
    assert_eq!(codes_of(m, &[]), vec![codes::OPERAND_MISMATCH]);
}

#[test]
fn initialisation_reading_state_is_type013() {
    let m = "machine m variables n invariants @inv1 n : NAT events \
             event INITIALISATION then @act1 n := n + 1 end end";
    assert_eq!(codes_of(m, &[]), vec![codes::INIT_READS_STATE]);
}

#[test]
fn nat_element_sets_are_unsupported() {
    let m = "machine m variables r invariants @inv1 r : POW(NAT) events \
             event INITIALISATION then @act1 r := {} end end";
    // Rejected by the parser already; never reaches typing.
    assert!(load_model(m, &[]).is_err());
    let m = "machine m variables r invariants @inv1 r <: NAT events \
             event INITIALISATION then @act1 r := {} end end";
    assert!(codes_of(m, &[]).contains(&codes::UNSUPPORTED));
}

#[test]
fn colliding_names_are_name001() {
    let m = "machine m variables n N invariants @inv1 n : NAT @inv2 N : NAT events \
             event INITIALISATION then @act1 n := 0 @act2 N := 0 end end";
    assert_eq!(codes_of(m, &[]), vec![codes::NAME_COLLISION]);
    let m = "machine m variables do invariants @inv1 do : NAT events \
             event INITIALISATION then @act1 do := 0 end end";
    assert_eq!(codes_of(m, &[]), vec![codes::NAME_COLLISION]);
}

#[test]
fn diagnostics_render_with_file_position() {
    let m = "machine m variables n invariants @inv1 n : NAT events\n\
             event INITIALISATION then @act1 n := {} end end";
    let model = load_model(m, &[]).unwrap();
    let d = typecheck(&model).unwrap_err();
    assert_eq!(d.len(), 1);
    let line = d[0].render("m.ebm");
    assert!(line.starts_with("error TYPE011 m.ebm:2:"), "{line}");
}

#[test]
fn permuting_invariants_gives_same_environment() {
    let invs = [
        "@inv1 a : NAT",
        "@inv2 b : BOOL",
        "@inv3 r <: S",
        "@inv4 a <= k",
    ];
    let c = "context c sets S constants k axioms @axm1 k : NAT end";
    let build = |order: &[usize]| {
        let body: Vec<&str> = order.iter().map(|&i| invs[i]).collect();
        format!(
            "machine m sees c variables a b r invariants {} events \
             event INITIALISATION then @act1 a := 0 @act2 b := TRUE @act3 r := {{}} end end",
            body.join(" ")
        )
    };
    let base = {
        let model = load_model(&build(&[0, 1, 2, 3]), &[c]).unwrap();
        typecheck(&model).unwrap()
    };
    for order in [[3, 2, 1, 0], [1, 3, 0, 2], [2, 0, 3, 1]] {
        let model = load_model(&build(&order), &[c]).unwrap();
        let env = typecheck(&model).unwrap();
        assert_eq!(env.types, base.types);
        assert_eq!(env.nat, base.nat);
        assert_eq!(env.origins, base.origins);
    }
}

#[test]
fn permuting_conflicts_gives_same_codes() {
    let a = "machine m variables v invariants @inv1 v : INT @inv2 v : BOOL events \
             event INITIALISATION then @act1 v := 0 end end";
    let b = "machine m variables v invariants @inv2 v : BOOL @inv1 v : INT events \
             event INITIALISATION then @act1 v := 0 end end";
    assert_eq!(codes_of(a, &[]), codes_of(b, &[]));
}
