//! Breadth-first exploration of the reachable state space.

use super::contracts::{ContractOracle, Finding, Side};
use super::eval::EvalError;
use super::interp::Interpretation;
use super::sim::{apply, arg_space, failing_guard, init_state, AnimError};
use super::value::{SimState, Value};
use crate::ebfront::{EventAst, EventBModel};
use crate::emitter::{translate, EmitOptions, Translation};
use crate::typing::TypeEnv;
use rayon::prelude::*;
use std::collections::HashMap;

pub const DEFAULT_MAX_DEPTH: usize = 10;
pub const DEFAULT_STATE_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreOptions {
    /// Maximum number of firings from the initial state.
    pub max_depth: usize,
    /// Exploration fails once more than this many states are visited.
    pub state_cap: usize,
    /// Worker threads per frontier level; 1 explores sequentially.
    pub jobs: usize,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            max_depth: DEFAULT_MAX_DEPTH,
            state_cap: DEFAULT_STATE_CAP,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub parent: usize,
    pub event: String,
    pub args: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub state: SimState,
    pub depth: usize,
    /// How this state was first reached; `None` for the initial state.
    pub via: Option<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub node: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// Node index, or `None` for findings about the constants alone.
    pub node: Option<usize>,
    pub event: String,
    pub args: Vec<Value>,
    pub tag: String,
    pub side: Side,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReachabilityReport {
    /// Visited states in breadth-first discovery order.
    pub nodes: Vec<Node>,
    pub depth_reached: usize,
    pub violations: Vec<Violation>,
    pub deadlocks: Vec<usize>,
    pub mismatches: Vec<Mismatch>,
}

impl ReachabilityReport {
    pub fn explored(&self) -> usize {
        self.nodes.len()
    }

    pub fn states(&self) -> Vec<&SimState> {
        self.nodes.iter().map(|n| &n.state).collect()
    }

    /// Firing sequence from the initial state to `node`.
    pub fn witness(&self, node: usize) -> Vec<(String, Vec<Value>, SimState)> {
        let mut out = Vec::new();
        let mut at = node;
        while let Some(step) = &self.nodes[at].via {
            out.push((
                step.event.clone(),
                step.args.clone(),
                self.nodes[at].state.clone(),
            ));
            at = step.parent;
        }
        out.reverse();
        out
    }

    /// No invariant violations and no contract mismatches.
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.mismatches.is_empty()
    }
}

/// Outcome of expanding one state.
struct Expansion {
    violations: Vec<String>,
    findings: Vec<Finding>,
    successors: Vec<(String, Vec<Value>, SimState)>,
    deadlock: bool,
}

struct Explorer<'a> {
    model: &'a EventBModel,
    interp: &'a Interpretation,
    spaces: Vec<(&'a EventAst, Vec<Vec<Value>>)>,
    oracle: Option<ContractOracle<'a>>,
}

impl Explorer<'_> {
    fn expand(&self, state: &SimState) -> Result<Expansion, AnimError> {
        let model = self.model;
        let mut x = Expansion {
            violations: vec![],
            findings: vec![],
            successors: vec![],
            deadlock: true,
        };
        let empty = Default::default();
        for inv in &model.machine.invariants {
            let v = super::eval::eval_with(model, &inv.predicate, state, self.interp, &empty)
                .map_err(|source| AnimError::Eval {
                    context: inv.label.clone(),
                    source,
                })?;
            if v != Value::Bool(true) {
                x.violations.push(inv.label.clone());
            }
        }
        if let Some(o) = &self.oracle {
            x.findings.extend(o.check_invariants(state));
        }
        for (ev, space) in &self.spaces {
            for args in space {
                let post = match failing_guard(model, state, self.interp, ev, args) {
                    Ok(None) => Some(apply(model, state, self.interp, ev, args)?),
                    Ok(Some(_)) => None,
                    // A guard that cannot be evaluated leaves the event disabled;
                    // the oracle still compares both sides at this point.
                    Err(AnimError::Eval {
                        source: EvalError::DivisionByZero | EvalError::Overflow,
                        ..
                    }) => None,
                    Err(e) => return Err(e),
                };
                if let Some(o) = &self.oracle {
                    x.findings
                        .extend(o.check_event(state, ev, args, post.as_ref())?);
                }
                if let Some(next) = post {
                    x.deadlock = false;
                    x.successors
                        .push((ev.name.name.clone(), args.clone(), next));
                }
            }
        }
        Ok(x)
    }
}

fn run(
    model: &EventBModel,
    env: &TypeEnv,
    interp: &Interpretation,
    opts: ExploreOptions,
    oracle: Option<ContractOracle<'_>>,
) -> Result<ReachabilityReport, AnimError> {
    let spaces = model
        .machine
        .events
        .iter()
        .map(|ev| Ok((ev, arg_space(env, interp, ev)?)))
        .collect::<Result<Vec<_>, AnimError>>()?;
    let explorer = Explorer {
        model,
        interp,
        spaces,
        oracle,
    };

    let mut report = ReachabilityReport::default();
    let init = init_state(model, interp)?;
    if let Some(o) = &explorer.oracle {
        for f in o.check_constants() {
            report.mismatches.push(tie(None, f));
        }
        for f in o.check_init(&init) {
            report.mismatches.push(tie(Some(0), f));
        }
    }
    let mut index: HashMap<SimState, usize> = HashMap::new();
    index.insert(init.clone(), 0);
    report.nodes.push(Node {
        state: init,
        depth: 0,
        via: None,
    });

    let pool = if opts.jobs > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .ok()
    } else {
        None
    };

    let mut level_start = 0;
    loop {
        let level_end = report.nodes.len();
        if level_start == level_end {
            break;
        }
        let depth = report.nodes[level_start].depth;
        report.depth_reached = depth;
        let states: Vec<&SimState> = report.nodes[level_start..level_end]
            .iter()
            .map(|n| &n.state)
            .collect();
        let expansions: Vec<Result<Expansion, AnimError>> = match &pool {
            Some(p) => p.install(|| states.par_iter().map(|s| explorer.expand(s)).collect()),
            None => states.iter().map(|s| explorer.expand(s)).collect(),
        };
        for (offset, x) in expansions.into_iter().enumerate() {
            let node = level_start + offset;
            let x = x?;
            for label in x.violations {
                report.violations.push(Violation { node, label });
            }
            for f in x.findings {
                report.mismatches.push(tie(Some(node), f));
            }
            if x.deadlock {
                report.deadlocks.push(node);
            }
            if depth >= opts.max_depth {
                continue;
            }
            for (event, args, next) in x.successors {
                if index.contains_key(&next) {
                    continue;
                }
                if report.nodes.len() >= opts.state_cap {
                    return Err(AnimError::StateSpaceExceeded(opts.state_cap));
                }
                index.insert(next.clone(), report.nodes.len());
                report.nodes.push(Node {
                    state: next,
                    depth: depth + 1,
                    via: Some(Step {
                        parent: node,
                        event,
                        args,
                    }),
                });
            }
        }
        level_start = level_end;
    }
    Ok(report)
}

fn tie(node: Option<usize>, f: Finding) -> Mismatch {
    Mismatch {
        node,
        event: f.event,
        args: f.args,
        tag: f.tag,
        side: f.side,
        detail: f.detail,
    }
}

/// Visit every state reachable within `opts.max_depth` firings, checking
/// the source invariants and recording deadlocks.
pub fn explore(
    model: &EventBModel,
    env: &TypeEnv,
    interp: &Interpretation,
    opts: ExploreOptions,
) -> Result<ReachabilityReport, AnimError> {
    run(model, env, interp, opts, None)
}

/// Explore while comparing an existing translation with the source at every
/// visited state, event and argument tuple.
pub fn check_translation(
    model: &EventBModel,
    env: &TypeEnv,
    interp: &Interpretation,
    opts: ExploreOptions,
    translation: &Translation,
) -> Result<ReachabilityReport, AnimError> {
    run(
        model,
        env,
        interp,
        opts,
        Some(ContractOracle::new(model, interp, translation)),
    )
}

/// Translate the model and check the result against the source.
pub fn check_contract_equivalence(
    model: &EventBModel,
    env: &TypeEnv,
    interp: &Interpretation,
    opts: ExploreOptions,
) -> Result<ReachabilityReport, AnimError> {
    let t = translate(model, env, interp, EmitOptions::default())?;
    check_translation(model, env, interp, opts, &t)
}
