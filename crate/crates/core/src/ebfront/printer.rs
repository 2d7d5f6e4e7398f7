//! Debug printer back to the ASCII surface syntax. Output re-parses to a
//! structurally identical AST.

use super::ast::*;
use std::fmt::Write;

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}

fn write_child(out: &mut String, child: &Expr, paren: bool) {
    if paren {
        out.push('(');
        write_expr(out, child);
        out.push(')');
    } else {
        write_expr(out, child);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match &e.kind {
        ExprKind::Int(v) if *v < 0 => {
            let _ = write!(out, "(-{})", v.unsigned_abs());
        }
        ExprKind::Int(v) => {
            let _ = write!(out, "{v}");
        }
        ExprKind::Bool(true) => out.push_str("TRUE"),
        ExprKind::Bool(false) => out.push_str("FALSE"),
        ExprKind::Ident(n) => out.push_str(n),
        ExprKind::IntType => out.push_str("INT"),
        ExprKind::NatType => out.push_str("NAT"),
        ExprKind::BoolType => out.push_str("BOOL"),
        ExprKind::EmptySet => out.push_str("{}"),
        ExprKind::Pow(inner) => {
            out.push_str("POW(");
            write_expr(out, inner);
            out.push(')');
        }
        ExprKind::SetLit(elems) => {
            out.push('{');
            for (i, el) in elems.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, el);
            }
            out.push('}');
        }
        ExprKind::Unary(UnOp::Not, inner) => {
            out.push_str("not ");
            write_child(out, inner, inner.prec() < Prec::Not);
        }
        ExprKind::Unary(UnOp::Neg, inner) => {
            out.push('-');
            write_child(out, inner, inner.prec() < Prec::Negate);
        }
        ExprKind::Binary(op, l, r) => {
            let p = op.prec();
            let non_assoc = p == Prec::Relation;
            write_child(out, l, l.prec() < p || (non_assoc && l.prec() == p));
            let _ = write!(out, " {} ", op.symbol());
            write_child(out, r, r.prec() <= p);
        }
    }
}

fn write_labeled_preds(out: &mut String, kw: &str, preds: &[LabeledPredicate], indent: &str) {
    if preds.is_empty() {
        return;
    }
    let _ = writeln!(out, "{indent}{kw}");
    for p in preds {
        let _ = writeln!(out, "{indent}  @{} {}", p.label, print_expr(&p.predicate));
    }
}

fn write_idents(out: &mut String, kw: &str, ids: &[Ident]) {
    if ids.is_empty() {
        return;
    }
    let names: Vec<&str> = ids.iter().map(|i| i.name.as_str()).collect();
    let _ = writeln!(out, "{kw} {}", names.join(" "));
}

fn write_event(out: &mut String, ev: &EventAst) {
    let _ = writeln!(out, "  event {}", ev.name.name);
    if !ev.params.is_empty() {
        let names: Vec<&str> = ev.params.iter().map(|i| i.name.as_str()).collect();
        let _ = writeln!(out, "    any {}", names.join(" "));
    }
    write_labeled_preds(out, "where", &ev.guards, "    ");
    if !ev.actions.is_empty() {
        out.push_str("    then\n");
        for a in &ev.actions {
            let _ = writeln!(
                out,
                "      @{} {} := {}",
                a.label,
                a.target,
                print_expr(&a.rhs)
            );
        }
    }
    out.push_str("  end\n");
}

pub fn print_machine(m: &MachineAst) -> String {
    let mut out = format!("machine {}", m.name.name);
    if !m.sees.is_empty() {
        let names: Vec<&str> = m.sees.iter().map(|i| i.name.as_str()).collect();
        let _ = write!(out, " sees {}", names.join(", "));
    }
    out.push('\n');
    write_idents(&mut out, "variables", &m.variables);
    write_labeled_preds(&mut out, "invariants", &m.invariants, "");
    out.push_str("events\n");
    write_event(&mut out, &m.initialisation);
    for ev in &m.events {
        write_event(&mut out, ev);
    }
    out.push_str("end\n");
    out
}

pub fn print_context(c: &ContextAst) -> String {
    let mut out = format!("context {}\n", c.name.name);
    write_idents(&mut out, "sets", &c.sets);
    write_idents(&mut out, "constants", &c.constants);
    write_labeled_preds(&mut out, "axioms", &c.axioms, "");
    out.push_str("end\n");
    out
}
