//! Randomised checks over generated well-typed models.

mod common;

use common::generate::{
    blueprint, contracts_agree, frame_and_simultaneity, moving_share, print_parse_identity,
    render_deterministic, structure_preserved, CASES,
};
use common::interp;
use eb2dbc_core::animator::{fire, SimState};
use eb2dbc_core::ebfront::load_model;
use eb2dbc_core::typing::typecheck;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn translation_is_total_and_preserves_structure(s in blueprint()) {
        structure_preserved(&s)?;
    }

    #[test]
    fn rendering_is_deterministic(s in blueprint()) {
        render_deterministic(&s)?;
    }

    #[test]
    fn printing_then_parsing_is_identity(s in blueprint()) {
        print_parse_identity(&s)?;
    }

    #[test]
    fn contracts_agree_with_source(s in blueprint()) {
        contracts_agree(&s)?;
    }

    #[test]
    fn firing_respects_frame_and_simultaneity(s in blueprint()) {
        frame_and_simultaneity(&s)?;
    }
}

#[test]
fn swap_is_simultaneous_for_any_values() {
    let m = "machine m variables a b invariants @inv1 a : INT @inv2 b : INT events \
             event INITIALISATION then @act1 a := 0 @act2 b := 0 end \
             event swap then @act1 a := b @act2 b := a end end";
    let model = load_model(m, &[]).unwrap();
    let env = typecheck(&model).unwrap();
    let i = interp(&model, &env, "");
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(CASES));
    runner
        .run(&(-100i64..100, -100i64..100), |(a, b)| {
            use eb2dbc_core::animator::Value::Int;
            let s: SimState = [("a".to_string(), Int(a)), ("b".to_string(), Int(b))].into();
            let next = fire(&model, &s, &i, &model.machine.events[0], &[]).unwrap();
            prop_assert_eq!(&next["a"], &Int(b));
            prop_assert_eq!(&next["b"], &Int(a));
            Ok(())
        })
        .unwrap();
}

#[test]
fn generated_models_do_move() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let moving = moving_share(&mut runner, CASES);
    assert!(
        moving * 2 > CASES,
        "only {moving} of {CASES} models ever fire"
    );
}
