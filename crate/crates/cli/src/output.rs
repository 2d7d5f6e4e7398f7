//! Terminal output: diagnostics, summary tables.

use crate::load::Fail;
use eb2dbc_core::emitter::Translation;
use std::io::IsTerminal;

fn color() -> bool {
    std::env::var("EB2DBC_COLOR").map_or(true, |v| v != "0") && std::io::stderr().is_terminal()
}

fn paint(line: &str) -> String {
    if !color() {
        return line.to_string();
    }
    match line.split_once(' ') {
        Some(("error", rest)) => format!("\x1b[1;31merror\x1b[0m {rest}"),
        Some(("warning", rest)) => format!("\x1b[1;33mwarning\x1b[0m {rest}"),
        _ => line.to_string(),
    }
}

pub fn report_failure(fail: &Fail) {
    match fail {
        Fail::Model(lines) => {
            for l in lines {
                eprintln!("{}", paint(l));
            }
        }
        Fail::Io(e) => eprintln!("{}", paint(&format!("error {e:#}"))),
    }
}

/// One row per emitted class: features and assertion clauses.
pub fn summary_table(t: &Translation) -> String {
    let mut rows = vec![[
        "class".to_string(),
        "features".into(),
        "require".into(),
        "ensure".into(),
        "invariant".into(),
    ]];
    for u in t.units() {
        let req: usize = u.features().map(|f| f.require.len()).sum();
        let ens: usize = u.features().map(|f| f.ensure.len()).sum();
        rows.push([
            u.name.clone(),
            u.features().count().to_string(),
            req.to_string(),
            ens.to_string(),
            u.invariant.len().to_string(),
        ]);
    }
    let width = rows.iter().map(|r| r[0].len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        out.push_str(&format!(
            "{:<width$}  {:>8}  {:>7}  {:>6}  {:>9}\n",
            r[0], r[1], r[2], r[3], r[4]
        ));
    }
    out
}
