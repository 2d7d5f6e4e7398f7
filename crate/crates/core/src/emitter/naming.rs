//! Name mangling and collision detection for emitted identifiers.

use crate::ebfront::{EventBModel, Pos};
use crate::typing::{codes, Diagnostic, TypeEnv};
use std::collections::BTreeMap;

/// Reserved words of the target language, compared case-insensitively.
pub const RESERVED: &[&str] = &[
    "across",
    "agent",
    "alias",
    "all",
    "and",
    "as",
    "assign",
    "attribute",
    "check",
    "class",
    "convert",
    "create",
    "current",
    "debug",
    "deferred",
    "do",
    "else",
    "elseif",
    "end",
    "ensure",
    "expanded",
    "export",
    "external",
    "false",
    "feature",
    "from",
    "frozen",
    "if",
    "implies",
    "inherit",
    "inspect",
    "invariant",
    "like",
    "local",
    "loop",
    "not",
    "note",
    "obsolete",
    "old",
    "once",
    "only",
    "or",
    "precursor",
    "redefine",
    "rename",
    "require",
    "rescue",
    "result",
    "retry",
    "select",
    "separate",
    "some",
    "then",
    "true",
    "tuple",
    "undefine",
    "until",
    "variant",
    "void",
    "when",
    "xor",
];

/// Class names supplied by the runtime or the kernel library.
pub const KERNEL_CLASSES: &[&str] = &[
    "ANY",
    "ARRAY",
    "ARRAYED_LIST",
    "BOOLEAN",
    "CONSTANTS",
    "EBSET",
    "INTEGER",
    "NONE",
    "STRING",
];

/// Features every class inherits from ANY.
pub const ANY_FEATURES: &[&str] = &[
    "conforms_to",
    "copy",
    "deep_copy",
    "deep_equal",
    "deep_twin",
    "default",
    "default_create",
    "default_rescue",
    "do_nothing",
    "equal",
    "generating_type",
    "generator",
    "io",
    "is_deep_equal",
    "is_equal",
    "operating_environment",
    "out",
    "print",
    "same_type",
    "standard_copy",
    "standard_equal",
    "standard_is_equal",
    "standard_twin",
    "tagged_out",
    "twin",
];

/// Feature and attribute names: lower-cased, underscores preserved.
pub fn mangle(name: &str) -> String {
    name.to_lowercase()
}

pub fn temp_name(var: &str) -> String {
    format!("old_{}", mangle(var))
}

pub fn element_class(set: &str) -> String {
    format!("{set}_ELEM")
}

pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name.to_lowercase().as_str())
}

/// Variables read by a later action after an earlier action assigned them.
/// These need a pre-state temporary in the emitted body.
pub fn temporaries(ev: &crate::ebfront::EventAst) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for (i, a) in ev.actions.iter().enumerate() {
        for later in &ev.actions[i + 1..] {
            if later.rhs.mentions(&a.target) && !out.contains(&a.target) {
                out.push(a.target.clone());
            }
        }
    }
    out
}

struct Scope<'a> {
    unit: &'a str,
    what: &'a str,
    seen: BTreeMap<String, (String, Pos)>,
    diags: &'a mut Vec<Diagnostic>,
}

impl Scope<'_> {
    fn add(&mut self, name: &str, emitted: &str, pos: Pos) {
        let key = emitted.to_lowercase();
        if is_reserved(&key) {
            self.diags.push(Diagnostic::error(
                codes::NAME_COLLISION,
                self.unit,
                pos,
                format!("`{name}` becomes the reserved word `{emitted}`"),
            ));
            return;
        }
        if let Some((first, _)) = self.seen.get(&key) {
            self.diags.push(Diagnostic::error(
                codes::NAME_COLLISION,
                self.unit,
                pos,
                format!(
                    "`{name}` and `{first}` both become {} `{emitted}`",
                    self.what
                ),
            ));
            return;
        }
        self.seen.insert(key, (name.to_string(), pos));
    }
}

/// Report identifiers that would collide or clash with reserved words
/// once emitted.
pub fn check_names(model: &EventBModel, _env: &TypeEnv) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let m = &model.machine;
    let unit = m.name.name.as_str();

    // Class names share one namespace.
    let mut classes = Scope {
        unit,
        what: "class",
        seen: BTreeMap::new(),
        diags: &mut diags,
    };
    for k in KERNEL_CLASSES {
        classes
            .seen
            .insert(k.to_lowercase(), (k.to_string(), Pos::default()));
    }
    let inherited: BTreeMap<String, (String, Pos)> = ANY_FEATURES
        .iter()
        .map(|f| (f.to_string(), (format!("inherited {f}"), Pos::default())))
        .collect();
    classes.add(&m.name.name, &m.name.name, m.name.pos);
    for s in model.carrier_sets() {
        classes.add(&s.name, &s.name, s.pos);
        classes.add(&s.name, &element_class(&s.name), s.pos);
    }

    // Features of the machine class.
    let mut features = Scope {
        unit,
        what: "feature",
        seen: inherited.clone(),
        diags: &mut diags,
    };
    features.add(
        &m.initialisation.name.name,
        "initialisation",
        m.initialisation.name.pos,
    );
    if !model.contexts.is_empty() {
        features.add("ctx", "ctx", Pos::default());
    }
    for ev in &m.events {
        features.add(&ev.name.name, &mangle(&ev.name.name), ev.name.pos);
    }
    for v in &m.variables {
        features.add(&v.name, &mangle(&v.name), v.pos);
    }
    let machine_features = features.seen.clone();

    // Arguments and locals must differ from each other and from features.
    for ev in &m.events {
        let mut locals = Scope {
            unit,
            what: "name",
            seen: machine_features.clone(),
            diags: &mut diags,
        };
        for p in &ev.params {
            locals.add(&p.name, &mangle(&p.name), p.pos);
        }
        for t in temporaries(ev) {
            locals.add(&t, &temp_name(&t), ev.name.pos);
        }
    }

    // Once functions of CONSTANTS, one class for all seen contexts.
    let mut all_consts = Scope {
        unit,
        what: "feature",
        seen: inherited.clone(),
        diags: &mut diags,
    };
    for k in model.constants() {
        all_consts.add(&k.name, &mangle(&k.name), k.pos);
    }

    // Assertion tags are identifiers too.
    let tag = |unit: &str, label: &str, pos: Pos, diags: &mut Vec<Diagnostic>| {
        if is_reserved(label) {
            diags.push(Diagnostic::error(
                codes::NAME_COLLISION,
                unit,
                pos,
                format!("label `{label}` is a reserved word of the target language"),
            ));
        }
    };
    for (c, ax) in model.axioms() {
        tag(&c.name.name, &ax.label, ax.pos, &mut diags);
    }
    for inv in &m.invariants {
        tag(unit, &inv.label, inv.pos, &mut diags);
    }
    for ev in model.all_events() {
        for g in &ev.guards {
            tag(unit, &g.label, g.pos, &mut diags);
        }
        for a in &ev.actions {
            tag(unit, &a.label, a.pos, &mut diags);
        }
    }

    diags.sort();
    diags.dedup();
    diags
}
