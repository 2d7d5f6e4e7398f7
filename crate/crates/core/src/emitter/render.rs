use super::eiffel::{render_type, EiffelAttribute, EiffelFeature, EiffelUnit, RoutineKind};
use std::fmt::Write;

const IND: &str = "  ";

fn line(out: &mut String, depth: usize, text: &str) {
    for l in text.lines() {
        if l.is_empty() {
            out.push('\n');
            continue;
        }
        for _ in 0..depth {
            out.push_str(IND);
        }
        out.push_str(l);
        out.push('\n');
    }
}

fn signature(f: &EiffelFeature) -> String {
    let mut s = f.name.clone();
    if !f.args.is_empty() {
        let args: Vec<String> = f
            .args
            .iter()
            .map(|(n, t)| format!("{n}: {}", render_type(t)))
            .collect();
        let _ = write!(s, " ({})", args.join("; "));
    }
    if let Some(r) = &f.result {
        let _ = write!(s, ": {}", render_type(r));
    }
    s
}

fn feature(out: &mut String, f: &EiffelFeature) {
    line(out, 1, &signature(f));
    if let Some(c) = &f.comment {
        line(out, 3, &format!("-- {c}"));
    }
    if !f.require.is_empty() {
        line(out, 2, "require");
        for a in &f.require {
            line(out, 3, &format!("{}: {}", a.tag, a.expr.render()));
        }
    }
    if !f.locals.is_empty() {
        line(out, 2, "local");
        for (n, t) in &f.locals {
            line(out, 3, &format!("{n}: {}", render_type(t)));
        }
    }
    line(
        out,
        2,
        match f.kind {
            RoutineKind::Do => "do",
            RoutineKind::Once => "once",
        },
    );
    for s in &f.body {
        line(out, 3, &s.render());
    }
    if !f.ensure.is_empty() {
        line(out, 2, "ensure");
        for a in &f.ensure {
            line(out, 3, &format!("{}: {}", a.tag, a.expr.render()));
        }
    }
    line(out, 2, "end");
}

fn attribute(out: &mut String, a: &EiffelAttribute) {
    line(out, 1, &format!("{}: {}", a.name, render_type(&a.ty)));
    if let Some(c) = &a.comment {
        line(out, 3, &format!("-- {c}"));
    }
}

/// Deterministic source text of a unit.
pub fn render(unit: &EiffelUnit) -> String {
    let mut out = String::new();
    let mut head = format!("class {}", unit.name);
    if !unit.generics.is_empty() {
        let _ = write!(head, " [{}]", unit.generics.join(", "));
    }
    line(&mut out, 0, &head);

    if !unit.parents.is_empty() {
        out.push('\n');
        line(&mut out, 0, "inherit");
        for p in &unit.parents {
            line(&mut out, 1, &render_type(&p.ty));
            if !p.redefine.is_empty() {
                line(&mut out, 2, "redefine");
                line(&mut out, 3, &p.redefine.join(", "));
                line(&mut out, 2, "end");
            }
        }
    }

    if !unit.creators.is_empty() {
        out.push('\n');
        line(&mut out, 0, "create");
        line(&mut out, 1, &unit.creators.join(", "));
    }

    for g in &unit.groups {
        out.push('\n');
        match &g.export {
            Some(e) => line(&mut out, 0, &format!("feature {e} -- {}", g.comment)),
            None => line(&mut out, 0, &format!("feature -- {}", g.comment)),
        }
        for f in &g.features {
            out.push('\n');
            feature(&mut out, f);
        }
        for a in &g.attributes {
            out.push('\n');
            attribute(&mut out, a);
        }
    }

    if !unit.invariant.is_empty() {
        out.push('\n');
        line(&mut out, 0, "invariant");
        for a in &unit.invariant {
            line(&mut out, 1, &format!("{}: {}", a.tag, a.expr.render()));
        }
    }
    out.push('\n');
    line(&mut out, 0, "end");
    out
}

/// Token stream with whitespace and `--` comments removed, for comparing
/// rendered text against reference listings.
pub fn normalize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for raw in text.lines() {
        let code = strip_comment(raw);
        let chars: Vec<char> = code.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_alphanumeric() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(chars[start..i].iter().collect());
            } else if c == '"' {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    i += 1;
                }
                i = (i + 1).min(chars.len());
                tokens.push(chars[start..i].iter().collect());
            } else {
                let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
                if [":=", "/=", "<=", ">=", "//", "\\\\", "<<", ">>"].contains(&two.as_str()) {
                    tokens.push(two);
                    i += 2;
                } else {
                    tokens.push(c.to_string());
                    i += 1;
                }
            }
        }
    }
    tokens
}

fn strip_comment(line: &str) -> &str {
    let mut in_string = false;
    let bytes = line.as_bytes();
    for i in 0..bytes.len() {
        match bytes[i] {
            b'"' => in_string = !in_string,
            b'-' if !in_string && bytes.get(i + 1) == Some(&b'-') => return &line[..i],
            _ => {}
        }
    }
    line
}
