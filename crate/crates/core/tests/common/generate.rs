//! Random well-typed models and the properties checked on them.
//! Shared between the core property suite and the acceptance run.

#![allow(dead_code)]

use eb2dbc_core::animator::{
    arg_space, check_contract_equivalence, eval_with, explore, fire, params, Bindings,
    ExploreOptions, Interpretation, SimState,
};
use eb2dbc_core::ebfront::{load_model, print_context, print_machine, EventBModel};
use eb2dbc_core::emitter::{translate, EmitOptions, INIT_FEATURE};
use eb2dbc_core::typing::{typecheck, TypeEnv};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use std::collections::BTreeMap;

pub const CASES: u32 = 256;

/// Integer expression over abstract leaves, resolved against a scope later.
#[derive(Debug, Clone)]
enum IExpr {
    Lit(i64),
    Var(usize),
    Param,
    Const,
    Bin(&'static str, Box<IExpr>, Box<IExpr>),
    Neg(Box<IExpr>),
}

#[derive(Debug, Clone)]
enum Pred {
    Cmp(&'static str, IExpr, IExpr),
    Flag(bool),
    Member(IExpr),
    Not(Box<Pred>),
    Bin(&'static str, Box<Pred>, Box<Pred>),
    Guarded(IExpr),
}

#[derive(Debug, Clone)]
enum Act {
    Int(usize, IExpr),
    Flag(bool),
    Add(IExpr),
    Remove(IExpr),
}

#[derive(Debug, Clone)]
struct Event {
    param: bool,
    guards: Vec<Pred>,
    acts: Vec<Act>,
}

#[derive(Debug, Clone)]
pub struct Blueprint {
    ints: usize,
    nat: Vec<bool>,
    extra_invs: Vec<Pred>,
    events: Vec<Event>,
}

struct Scope<'a> {
    plan: &'a Blueprint,
    param: bool,
}

impl IExpr {
    fn show(&self, s: &Scope) -> String {
        match self {
            IExpr::Lit(i) => i.to_string(),
            IExpr::Var(k) => format!("v{}", k % s.plan.ints),
            IExpr::Param if s.param => "x".into(),
            IExpr::Param => "k".into(),
            IExpr::Const => "k".into(),
            IExpr::Bin(op, l, r) => format!("({} {op} {})", l.show(s), r.show(s)),
            IExpr::Neg(e) => format!("-({})", e.show(s)),
        }
    }
}

impl Pred {
    fn show(&self, s: &Scope) -> String {
        match self {
            Pred::Cmp(op, l, r) => format!("{} {op} {}", l.show(s), r.show(s)),
            Pred::Flag(v) => format!("b = {}", if *v { "TRUE" } else { "FALSE" }),
            Pred::Member(e) => format!("{} : r", e.show(s)),
            Pred::Not(p) => format!("not ({})", p.show(s)),
            Pred::Bin(op, l, r) => format!("({}) {op} ({})", l.show(s), r.show(s)),
            // Division guarded against a zero divisor by short-circuit.
            Pred::Guarded(e) => format!("(k /= 0 & {} div k >= 0)", e.show(s)),
        }
    }
}

fn iexpr() -> impl Strategy<Value = IExpr> {
    let leaf = prop_oneof![
        (-2i64..=3).prop_map(IExpr::Lit),
        (0usize..3).prop_map(IExpr::Var),
        Just(IExpr::Param),
        Just(IExpr::Const),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (
                prop_oneof![Just("+"), Just("-"), Just("*")],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, l, r)| IExpr::Bin(op, Box::new(l), Box::new(r))),
            inner.prop_map(|e| IExpr::Neg(Box::new(e))),
        ]
    })
}

fn pred() -> impl Strategy<Value = Pred> {
    let cmp = prop_oneof![
        Just("<"),
        Just("<="),
        Just(">"),
        Just(">="),
        Just("="),
        Just("/=")
    ];
    let leaf = prop_oneof![
        3 => (cmp, iexpr(), iexpr()).prop_map(|(op, l, r)| Pred::Cmp(op, l, r)),
        1 => any::<bool>().prop_map(Pred::Flag),
        1 => iexpr().prop_map(Pred::Member),
        1 => iexpr().prop_map(Pred::Guarded),
    ];
    leaf.prop_recursive(2, 4, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|p| Pred::Not(Box::new(p))),
            (
                prop_oneof![Just("&"), Just("or"), Just("=>"), Just("<=>")],
                inner.clone(),
                inner
            )
                .prop_map(|(op, l, r)| Pred::Bin(op, Box::new(l), Box::new(r))),
        ]
    })
}

fn act() -> impl Strategy<Value = Act> {
    prop_oneof![
        3 => (0usize..3, iexpr()).prop_map(|(v, e)| Act::Int(v, e)),
        1 => any::<bool>().prop_map(Act::Flag),
        1 => iexpr().prop_map(Act::Add),
        1 => iexpr().prop_map(Act::Remove),
    ]
}

fn event() -> impl Strategy<Value = Event> {
    (
        any::<bool>(),
        prop::collection::vec(pred(), 0..3),
        prop::collection::vec(act(), 1..4),
    )
        .prop_map(|(param, guards, acts)| Event {
            param,
            guards,
            acts,
        })
}

pub fn blueprint() -> impl Strategy<Value = Blueprint> {
    (1usize..=3)
        .prop_flat_map(|ints| {
            (
                Just(ints),
                prop::collection::vec(any::<bool>(), ints),
                prop::collection::vec(pred(), 0..2),
                prop::collection::vec(event(), 1..4),
            )
        })
        .prop_map(|(ints, nat, extra_invs, events)| Blueprint {
            ints,
            nat,
            extra_invs,
            events,
        })
}

const CONTEXT: &str = "context c\nconstants k\naxioms\n  @axm1 k : INT\n  @axm2 k >= 0\nend\n";

impl Blueprint {
    /// Source text; actions on one variable are deduplicated to keep
    /// assignments disjoint.
    pub fn source(&self) -> String {
        let mut out = String::from("machine m sees c\nvariables");
        for i in 0..self.ints {
            out.push_str(&format!(" v{i}"));
        }
        out.push_str(" b r\ninvariants\n");
        for (i, nat) in self.nat.iter().enumerate() {
            let ty = if *nat { "NAT" } else { "INT" };
            out.push_str(&format!("  @inv{} v{i} : {ty}\n", i + 1));
        }
        let base = self.ints;
        out.push_str(&format!("  @inv{} b : BOOL\n", base + 1));
        out.push_str(&format!("  @inv{} r <: INT\n", base + 2));
        let top = Scope {
            plan: self,
            param: false,
        };
        for (j, p) in self.extra_invs.iter().enumerate() {
            out.push_str(&format!("  @inv{} {}\n", base + 3 + j, p.show(&top)));
        }
        out.push_str("events\n  event INITIALISATION\n  then\n");
        for i in 0..self.ints {
            out.push_str(&format!("    @act{} v{i} := {}\n", i + 1, i));
        }
        out.push_str(&format!("    @act{} b := FALSE\n", base + 1));
        out.push_str(&format!("    @act{} r := {{}}\n  end\n", base + 2));
        for (n, ev) in self.events.iter().enumerate() {
            let s = Scope {
                plan: self,
                param: ev.param,
            };
            out.push_str(&format!("  event e{n}\n"));
            if ev.param {
                out.push_str("  any x\n");
            }
            let mut guards: Vec<String> = vec![];
            if ev.param {
                guards.push("x : INT".into());
            }
            guards.extend(ev.guards.iter().map(|g| g.show(&s)));
            if !guards.is_empty() {
                out.push_str("  where\n");
                for (i, g) in guards.iter().enumerate() {
                    out.push_str(&format!("    @grd{} {g}\n", i + 1));
                }
            }
            let mut seen = vec![];
            let mut acts = vec![];
            for a in &ev.acts {
                let (target, rhs) = match a {
                    Act::Int(v, e) => (format!("v{}", v % self.ints), e.show(&s)),
                    Act::Flag(v) => ("b".into(), if *v { "TRUE" } else { "FALSE" }.to_string()),
                    Act::Add(e) => ("r".into(), format!("r \\/ {{{}}}", e.show(&s))),
                    Act::Remove(e) => ("r".into(), format!("r \\ {{{}}}", e.show(&s))),
                };
                if !seen.contains(&target) {
                    seen.push(target.clone());
                    acts.push(format!("{target} := {rhs}"));
                }
            }
            if !acts.is_empty() {
                out.push_str("  then\n");
                for (i, a) in acts.iter().enumerate() {
                    out.push_str(&format!("    @act{} {a}\n", i + 1));
                }
            }
            out.push_str("  end\n");
        }
        out.push_str("end\n");
        out
    }
}

fn labels<'a>(it: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut v: Vec<String> = it.map(str::to_string).collect();
    v.sort();
    v
}

pub fn build(plan: &Blueprint) -> (EventBModel, String) {
    let text = plan.source();
    let model = load_model(&text, &[CONTEXT]).unwrap_or_else(|e| panic!("{e}\n{text}"));
    (model, text)
}

pub fn small() -> ExploreOptions {
    ExploreOptions {
        max_depth: 3,
        state_cap: 50_000,
        jobs: 1,
    }
}

fn interp(model: &EventBModel, env: &TypeEnv, text: &str) -> Interpretation {
    Interpretation::from_bindings(model, env, &Bindings::parse(text).unwrap()).unwrap()
}

/// Every accepted model translates; features, clauses and tags line up
/// with events, guards, actions and labels.
pub fn structure_preserved(plan: &Blueprint) -> Result<(), TestCaseError> {
    let (model, text) = build(plan);
    let env = typecheck(&model).unwrap_or_else(|d| panic!("{d:?}\n{text}"));
    let i = interp(&model, &env, "k=1");
    let t = translate(&model, &env, &i, EmitOptions::default())
        .unwrap_or_else(|e| panic!("{e}\n{text}"));
    t.self_check().unwrap();

    let m = &model.machine;
    let unit = &t.machine;
    prop_assert_eq!(unit.features().count(), m.events.len() + 1);
    prop_assert!(unit.feature(INIT_FEATURE).is_some());
    for ev in &m.events {
        let f = unit.feature(&ev.name.name.to_lowercase()).unwrap();
        prop_assert_eq!(f.require.len(), ev.guards.len());
        prop_assert_eq!(f.ensure.len(), ev.actions.len());
        prop_assert_eq!(f.args.len(), ev.params.len());
        prop_assert_eq!(
            labels(f.require.iter().map(|a| a.tag.as_str())),
            labels(ev.guards.iter().map(|g| g.label.as_str()))
        );
        prop_assert_eq!(
            labels(f.ensure.iter().map(|a| a.tag.as_str())),
            labels(ev.actions.iter().map(|a| a.label.as_str()))
        );
    }
    // Source invariant labels all survive; extra clauses are synthesized
    // range facts only.
    let emitted = labels(unit.invariant.iter().map(|a| a.tag.as_str()));
    let source = labels(m.invariants.iter().map(|a| a.label.as_str()));
    for l in &source {
        prop_assert!(emitted.contains(l), "lost {}", l);
    }
    for l in emitted.iter().filter(|l| !source.contains(l)) {
        prop_assert!(l.ends_with("_nat"), "unexpected {}", l);
    }
    let axioms = labels(
        t.constants
            .as_ref()
            .unwrap()
            .invariant
            .iter()
            .map(|a| a.tag.as_str()),
    );
    prop_assert_eq!(axioms, vec!["axm1".to_string(), "axm2".to_string()]);
    Ok(())
}

pub fn render_deterministic(plan: &Blueprint) -> Result<(), TestCaseError> {
    let (model, _) = build(plan);
    let env = typecheck(&model).unwrap();
    let i = interp(&model, &env, "k=2");
    let a = translate(&model, &env, &i, EmitOptions::default())
        .unwrap()
        .files();
    let again = build(plan).0;
    let env2 = typecheck(&again).unwrap();
    let b = translate(&again, &env2, &i, EmitOptions::default())
        .unwrap()
        .files();
    prop_assert_eq!(a, b);
    Ok(())
}

pub fn print_parse_identity(plan: &Blueprint) -> Result<(), TestCaseError> {
    let (model, _) = build(plan);
    let printed = print_machine(&model.machine);
    let ctx = print_context(&model.contexts[0]);
    let back = load_model(&printed, &[&ctx]).unwrap_or_else(|e| panic!("{e}\n{printed}"));
    prop_assert_eq!(back.without_positions(), model.without_positions());
    Ok(())
}

pub fn contracts_agree(plan: &Blueprint) -> Result<(), TestCaseError> {
    let (model, text) = build(plan);
    let env = typecheck(&model).unwrap();
    let i = interp(&model, &env, "k=1").with_param_bound(1);
    let r = check_contract_equivalence(&model, &env, &i, small())
        .unwrap_or_else(|e| panic!("{e}\n{text}"));
    prop_assert!(r.mismatches.is_empty(), "{}\n{}", r.render_text(), text);
    Ok(())
}

/// Firing changes exactly the assigned variables, each to its right-hand
/// side read in the pre-state.
pub fn frame_and_simultaneity(plan: &Blueprint) -> Result<(), TestCaseError> {
    let (model, _) = build(plan);
    let env = typecheck(&model).unwrap();
    let i = interp(&model, &env, "k=1").with_param_bound(1);
    let r = explore(&model, &env, &i, small()).unwrap();
    for s in r.states() {
        for ev in &model.machine.events {
            for args in arg_space(&env, &i, ev).unwrap() {
                let Ok(next) = fire(&model, s, &i, ev, &args) else {
                    continue;
                };
                let ps = params(ev, &args).unwrap();
                let updates: BTreeMap<_, _> = ev
                    .actions
                    .iter()
                    .map(|a| {
                        (
                            a.target.clone(),
                            eval_with(&model, &a.rhs, s, &i, &ps).unwrap(),
                        )
                    })
                    .collect();
                for (k, v) in s {
                    if !updates.contains_key(k) {
                        prop_assert_eq!(&next[k], v);
                    }
                }
                let mut want: SimState = s.clone();
                want.extend(updates);
                prop_assert_eq!(next, want);
            }
        }
    }
    Ok(())
}

/// Share of generated models that reach more than their initial state.
pub fn moving_share(runner: &mut proptest::test_runner::TestRunner, cases: u32) -> u32 {
    use proptest::strategy::ValueTree;
    let mut moving = 0;
    for _ in 0..cases {
        let plan = blueprint().new_tree(runner).unwrap().current();
        let (model, _) = build(&plan);
        let env = typecheck(&model).unwrap();
        let i = interp(&model, &env, "k=1").with_param_bound(1);
        if explore(&model, &env, &i, small()).unwrap().explored() > 1 {
            moving += 1;
        }
    }
    moving
}
