//! The fixed EBSET support class.

use super::eiffel::{
    Assertion, EExpr, EStmt, EType, EiffelAttribute, EiffelFeature, EiffelUnit, FeatureGroup,
    LValue, Parent,
};

pub const RUNTIME_CLASS: &str = "EBSET";

fn g() -> EType {
    EType::Class("G".into())
}

fn same() -> EType {
    EType::ebset(g())
}

fn raw(text: &str) -> EStmt {
    EStmt::Raw(text.to_string())
}

fn clause(tag: &str, text: &str) -> Assertion {
    Assertion::new(tag, EExpr::Raw(text.to_string()))
}

fn routine(name: &str, comment: &str) -> EiffelFeature {
    let mut f = EiffelFeature::procedure(name);
    f.comment = Some(comment.to_string());
    f
}

fn make_result() -> EStmt {
    EStmt::Create {
        target: LValue::Result,
        procedure: Some("make_empty".into()),
    }
}

pub fn emit_runtime() -> EiffelUnit {
    let mut unit = EiffelUnit::new(RUNTIME_CLASS);
    unit.generics.push("G".into());
    unit.parents.push(Parent {
        ty: EType::Any,
        redefine: vec!["default_create".into(), "is_equal".into(), "copy".into()],
    });
    unit.creators = vec![
        "make_empty".into(),
        "make_from_array".into(),
        "default_create".into(),
    ];

    let mut init = FeatureGroup::new("Initialisation");
    let mut make_empty = routine("make_empty", "Create an empty set.");
    make_empty.body = vec![raw("create items.make (0)"), raw("items.compare_objects")];
    make_empty.ensure = vec![clause("empty", "count = 0")];
    init.features.push(make_empty);

    let mut dc = routine("default_create", "Create an empty set.");
    dc.body = vec![raw("make_empty")];
    init.features.push(dc);

    let mut from_array = routine(
        "make_from_array",
        "Create a set holding the elements of `a'.",
    );
    from_array
        .args
        .push(("a".into(), EType::Generic("ARRAY".into(), vec![g()])));
    from_array.body = vec![
        raw("make_empty"),
        raw("across a as c loop\n  extend (c.item)\nend"),
    ];
    init.features.push(from_array);
    unit.groups.push(init);

    let mut access = FeatureGroup::new("Access");
    let mut has = routine("has", "Is `x' an element of the set?");
    has.args.push(("x".into(), g()));
    has.result = Some(EType::Boolean);
    has.body = vec![raw("Result := items.has (x)")];
    access.features.push(has);

    let mut count = routine("count", "Number of elements.");
    count.result = Some(EType::Integer);
    count.body = vec![raw("Result := items.count")];
    access.features.push(count);
    unit.groups.push(access);

    let mut cmp = FeatureGroup::new("Comparison");
    let mut subset = routine("is_subset", "Is every element of the set in `other'?");
    subset.args.push(("other".into(), same()));
    subset.result = Some(EType::Boolean);
    subset.body = vec![raw(
        "Result := across items as c all other.has (c.item) end",
    )];
    cmp.features.push(subset);

    let mut eq = routine("is_equal", "Do both sets have the same elements?");
    eq.args.push(("other".into(), EType::LikeCurrent));
    eq.result = Some(EType::Boolean);
    eq.body = vec![raw(
        "Result := count = other.count and then is_subset (other)",
    )];
    cmp.features.push(eq);
    unit.groups.push(cmp);

    let mut ops = FeatureGroup::new("Basic operations");
    let binop = |name: &str, comment: &str, body: &str, ensure: Vec<Assertion>| {
        let mut f = routine(name, comment);
        f.args.push(("other".into(), same()));
        f.result = Some(same());
        f.body = vec![make_result(), raw(body)];
        f.ensure = ensure;
        f
    };
    ops.features.push(binop(
        "union",
        "Elements in the set or in `other'.",
        "across items as c loop\n  Result.extend (c.item)\nend\nacross other.items as c loop\n  Result.extend (c.item)\nend",
        vec![
            clause("left", "is_subset (Result)"),
            clause("right", "other.is_subset (Result)"),
        ],
    ));
    ops.features.push(binop(
        "intersection",
        "Elements in both the set and `other'.",
        "across items as c loop\n  if other.has (c.item) then\n    Result.extend (c.item)\n  end\nend",
        vec![
            clause("in_current", "Result.is_subset (Current)"),
            clause("in_other", "Result.is_subset (other)"),
        ],
    ));
    ops.features.push(binop(
        "difference",
        "Elements in the set but not in `other'.",
        "across items as c loop\n  if not other.has (c.item) then\n    Result.extend (c.item)\n  end\nend",
        vec![clause("in_current", "Result.is_subset (Current)")],
    ));
    unit.groups.push(ops);

    let mut change = FeatureGroup::new("Element change");
    let mut extend = routine("extend", "Add `x'.");
    extend.args.push(("x".into(), g()));
    extend.body = vec![raw("if not items.has (x) then\n  items.extend (x)\nend")];
    extend.ensure = vec![clause("added", "has (x)")];
    change.features.push(extend);

    let mut assign = routine(
        "assign_from",
        "Make the set hold exactly the elements of `other'.",
    );
    assign.args.push(("other".into(), same()));
    assign.body = vec![raw(
        "if other /= Current then\n  items.wipe_out\n  across other.items as c loop\n    items.extend (c.item)\n  end\nend",
    )];
    assign.ensure = vec![clause("same", "is_equal (other)")];
    change.features.push(assign);

    let mut copy = routine("copy", "Copy the elements of `other' into a fresh list.");
    copy.args.push(("other".into(), EType::LikeCurrent));
    copy.body = vec![raw(
        "if other /= Current then\n  standard_copy (other)\n  items := other.items.twin\nend",
    )];
    change.features.push(copy);
    unit.groups.push(change);

    let mut imp = FeatureGroup::new("Implementation");
    imp.export = Some("{EBSET}".into());
    imp.attributes.push(EiffelAttribute {
        name: "items".into(),
        ty: EType::Generic("ARRAYED_LIST".into(), vec![g()]),
        comment: None,
    });
    unit.groups.push(imp);

    unit.invariant.push(clause("items_exist", "items /= Void"));
    unit
}

/// Features a generated contract may call on a set.
pub fn runtime_interface() -> Vec<String> {
    let mut names: Vec<String> = emit_runtime().features().map(|f| f.name.clone()).collect();
    names.push("twin".into());
    names
}
