use super::explore::ReachabilityReport;
use super::value::{format_state, SimState, Value};
use serde::Serialize;
use std::collections::BTreeMap;

/// One finding in the line-delimited report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub kind: &'static str,
    pub state: Option<BTreeMap<String, String>>,
    pub event: Option<String>,
    pub args: Vec<String>,
    pub tag: Option<String>,
    pub detail: Option<String>,
}

fn state_map(s: &SimState) -> BTreeMap<String, String> {
    s.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}

fn args(a: &[Value]) -> Vec<String> {
    a.iter().map(Value::to_string).collect()
}

fn call(event: &str, a: &[Value]) -> String {
    if a.is_empty() {
        event.to_string()
    } else {
        format!("{event}({})", args(a).join(", "))
    }
}

impl ReachabilityReport {
    /// `N states explored, M mismatches`
    pub fn summary(&self) -> String {
        format!(
            "{} states explored, {} mismatches",
            self.explored(),
            self.mismatches.len()
        )
    }

    pub fn records(&self) -> Vec<Record> {
        let mut out = Vec::new();
        for v in &self.violations {
            out.push(Record {
                kind: "invariant_violation",
                state: Some(state_map(&self.nodes[v.node].state)),
                event: None,
                args: vec![],
                tag: Some(v.label.clone()),
                detail: None,
            });
        }
        for &d in &self.deadlocks {
            out.push(Record {
                kind: "deadlock",
                state: Some(state_map(&self.nodes[d].state)),
                event: None,
                args: vec![],
                tag: None,
                detail: None,
            });
        }
        for m in &self.mismatches {
            out.push(Record {
                kind: "contract_mismatch",
                state: m.node.map(|n| state_map(&self.nodes[n].state)),
                event: Some(m.event.clone()).filter(|e| !e.is_empty()),
                args: args(&m.args),
                tag: Some(m.tag.clone()),
                detail: Some(format!("{}: {}", m.side, m.detail)),
            });
        }
        out.push(Record {
            kind: "summary",
            state: None,
            event: None,
            args: vec![],
            tag: None,
            detail: Some(format!(
                "{}, {} invariant violations, {} deadlocks, depth {}",
                self.summary(),
                self.violations.len(),
                self.deadlocks.len(),
                self.depth_reached
            )),
        });
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.summary());
        out.push('\n');
        out.push_str(&format!(
            "{} invariant violations, {} deadlocks, depth {}\n",
            self.violations.len(),
            self.deadlocks.len(),
            self.depth_reached
        ));
        for v in &self.violations {
            out.push_str(&format!(
                "invariant {} violated in [{}]\n",
                v.label,
                format_state(&self.nodes[v.node].state)
            ));
            for (event, a, state) in self.witness(v.node) {
                out.push_str(&format!(
                    "  after {} -> [{}]\n",
                    call(&event, &a),
                    format_state(&state)
                ));
            }
        }
        for &d in &self.deadlocks {
            out.push_str(&format!(
                "deadlock in [{}]\n",
                format_state(&self.nodes[d].state)
            ));
        }
        for m in &self.mismatches {
            let at = match m.node {
                Some(n) => format!(" in [{}]", format_state(&self.nodes[n].state)),
                None => String::new(),
            };
            let ev = if m.event.is_empty() {
                String::new()
            } else {
                format!(" {}", call(&m.event, &m.args))
            };
            out.push_str(&format!(
                "mismatch {} {}{ev}{at}: {}\n",
                m.side, m.tag, m.detail
            ));
        }
        out
    }
}
