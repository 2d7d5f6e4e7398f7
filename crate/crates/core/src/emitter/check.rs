//! Well-formedness self-check over emitted units.

use super::eiffel::{Assertion, EExpr, EStmt, EType, EiffelFeature, EiffelUnit, LValue};
use super::render::{normalize, render};
use super::runtime::runtime_interface;
use std::collections::BTreeSet;

const KERNEL: &[&str] = &["ANY", "ARRAY", "ARRAYED_LIST", "BOOLEAN", "INTEGER"];
const OPENERS: &[&str] = &[
    "class", "do", "once", "if", "across", "redefine", "check", "inspect", "from",
];

/// `class … end` and every compound inside it must balance.
pub fn check_blocks(text: &str) -> Result<(), String> {
    let tokens = normalize(text);
    if tokens.first().map(String::as_str) != Some("class") {
        return Err("text does not start with `class`".into());
    }
    let mut depth: i64 = 0;
    for (i, t) in tokens.iter().enumerate() {
        if OPENERS.contains(&t.as_str()) {
            depth += 1;
        } else if t == "end" {
            depth -= 1;
            if depth < 0 {
                return Err(format!("unmatched `end` at token {i}"));
            }
            if depth == 0 && i + 1 != tokens.len() {
                return Err(format!("text continues after the class ends at token {i}"));
            }
        }
    }
    if depth != 0 {
        return Err(format!("{depth} unclosed block(s)"));
    }
    Ok(())
}

fn unique_tags(unit: &str, section: &str, clauses: &[Assertion], errs: &mut Vec<String>) {
    let mut seen = BTreeSet::new();
    for a in clauses {
        if !seen.insert(a.tag.as_str()) {
            errs.push(format!("{unit}: tag `{}` repeated in {section}", a.tag));
        }
    }
}

struct Names<'a> {
    classes: BTreeSet<String>,
    set_features: Vec<String>,
    constants: Option<BTreeSet<String>>,
    errs: &'a mut Vec<String>,
}

impl Names<'_> {
    fn ty(&mut self, unit: &EiffelUnit, t: &EType) {
        let mut names = Vec::new();
        t.class_names(&mut names);
        for n in names {
            if !self.classes.contains(&n) && !unit.generics.contains(&n) {
                self.errs
                    .push(format!("{}: unknown class `{n}`", unit.name));
            }
        }
    }

    fn expr(&mut self, unit: &EiffelUnit, f: Option<&EiffelFeature>, e: &EExpr) {
        let attrs: BTreeSet<&str> = unit.attributes().map(|a| a.name.as_str()).collect();
        let mut problems = Vec::new();
        let mut types = Vec::new();
        e.walk(&mut |x| match x {
            EExpr::Attr(n) | EExpr::Old { name: n, .. } if !attrs.contains(n.as_str()) => {
                problems.push(format!("{}: `{n}` is not an attribute", unit.name))
            }
            EExpr::Arg(n) if !f.is_some_and(|f| f.args.iter().any(|(a, _)| a == n)) => {
                problems.push(format!("{}: `{n}` is not an argument", unit.name))
            }
            EExpr::Local(n) if !f.is_some_and(|f| f.locals.iter().any(|(a, _)| a == n)) => {
                problems.push(format!("{}: `{n}` is not a local", unit.name))
            }
            EExpr::Const { name, qualified } => {
                let known = match &self.constants {
                    Some(c) => c.contains(name),
                    None => false,
                };
                if !known {
                    problems.push(format!("{}: constant `{name}` is not defined", unit.name));
                }
                if *qualified && !attrs.contains("ctx") {
                    problems.push(format!("{}: `ctx` is not an attribute", unit.name));
                }
            }
            EExpr::Call { feature, .. }
                if !self.set_features.iter().any(|n| n == feature.name()) =>
            {
                problems.push(format!(
                    "{}: EBSET has no feature `{}`",
                    unit.name,
                    feature.name()
                ))
            }
            EExpr::SetLit { elem, .. } => types.push(EType::ebset(elem.clone())),
            _ => {}
        });
        self.errs.extend(problems);
        for t in types {
            self.ty(unit, &t);
        }
    }
}

/// Check a closed set of units: balanced blocks, known classes, known
/// set features, resolvable names and unique tags.
pub fn self_check(units: &[&EiffelUnit]) -> Result<(), Vec<String>> {
    let mut errs = Vec::new();
    let mut classes: BTreeSet<String> = KERNEL.iter().map(|s| s.to_string()).collect();
    classes.extend(units.iter().map(|u| u.name.clone()));
    let constants = units
        .iter()
        .find(|u| u.name == super::translate::CONSTANTS_CLASS)
        .map(|u| u.features().map(|f| f.name.clone()).collect());
    let mut names = Names {
        classes,
        set_features: runtime_interface(),
        constants,
        errs: &mut errs,
    };

    for unit in units {
        if let Err(e) = check_blocks(&render(unit)) {
            names.errs.push(format!("{}: {e}", unit.name));
        }
        for c in &unit.creators {
            if unit.feature(c).is_none() {
                names
                    .errs
                    .push(format!("{}: creator `{c}` is not a feature", unit.name));
            }
        }
        for p in &unit.parents {
            names.ty(unit, &p.ty);
        }
        for a in unit.attributes() {
            names.ty(unit, &a.ty);
        }
        unique_tags(&unit.name, "invariant", &unit.invariant, names.errs);
        for a in &unit.invariant {
            names.expr(unit, None, &a.expr);
        }
        for f in unit.features() {
            for (_, t) in f.args.iter().chain(f.locals.iter()) {
                names.ty(unit, t);
            }
            if let Some(r) = &f.result {
                names.ty(unit, r);
            }
            unique_tags(
                &unit.name,
                &format!("{} require", f.name),
                &f.require,
                names.errs,
            );
            unique_tags(
                &unit.name,
                &format!("{} ensure", f.name),
                &f.ensure,
                names.errs,
            );
            for a in f.require.iter().chain(f.ensure.iter()) {
                names.expr(unit, Some(f), &a.expr);
            }
            for s in &f.body {
                match s {
                    EStmt::Assign { target, value } => {
                        if let LValue::Attr(n) = target {
                            names.expr(unit, Some(f), &EExpr::Attr(n.clone()));
                        }
                        if let LValue::Local(n) = target {
                            names.expr(unit, Some(f), &EExpr::Local(n.clone()));
                        }
                        names.expr(unit, Some(f), value);
                    }
                    EStmt::AssignFrom { target, value } => {
                        names.expr(unit, Some(f), &EExpr::Attr(target.clone()));
                        names.expr(unit, Some(f), value);
                    }
                    EStmt::Create {
                        target: LValue::Attr(n),
                        ..
                    } => names.expr(unit, Some(f), &EExpr::Attr(n.clone())),
                    _ => {}
                }
            }
        }
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}
