use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_eb2dbc"))
        .args(args)
        .env("EB2DBC_COLOR", "0")
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn m0(command: &str, extra: &[&str]) -> Run {
    let (m, c, b) = (fixture("m0.ebm"), fixture("c0.ebc"), fixture("d2.bindings"));
    let mut args = vec![command, &m, &c, "--bindings", &b];
    args.extend_from_slice(extra);
    run(&args)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn listing(dir: &Path) -> Vec<(String, String)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read_to_string(e.path()).unwrap_or_default(),
            )
        })
        .collect();
    v.sort();
    v
}

#[test]
fn translate_writes_classes_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let r = m0("translate", &["--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let names: Vec<_> = listing(&out).into_iter().map(|(n, _)| n).collect();
    assert_eq!(names, ["constants.e", "ebset.e", "m0.e"]);
    let row = r.stdout.lines().find(|l| l.starts_with("m0 ")).unwrap();
    let cols: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(cols, ["m0", "3", "2", "3", "2"]);
    let m0 = fs::read_to_string(out.join("m0.e")).unwrap();
    assert!(m0.contains("grd1: n < ctx.d"), "{m0}");
}

#[test]
fn translate_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    assert_eq!(m0("translate", &["--out", out.to_str().unwrap()]).code, 0);
    let first = listing(&out);
    assert_eq!(m0("translate", &["--out", out.to_str().unwrap()]).code, 0);
    assert_eq!(listing(&out), first);
}

#[test]
fn type_error_exits_one_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.ebm",
        "machine bad variables n invariants @inv1 n : NAT events\n\
         event INITIALISATION then @act1 n := {} end end\n",
    );
    let out = dir.path().join("out");
    let r = run(&[
        "translate",
        bad.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 1);
    let line = r.stderr.lines().next().unwrap();
    assert!(line.starts_with("error TYPE011 "), "{line}");
    assert!(line.contains("bad.ebm:2:"), "{line}");
    assert!(!out.exists());
}

#[test]
fn failure_leaves_previous_output_alone() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    fs::create_dir(&out).unwrap();
    write(&out, "m0.e", "previous");
    let bindings = write(dir.path(), "zero.bindings", "d=0\n");
    let (m, c) = (fixture("m0.ebm"), fixture("c0.ebc"));
    let r = run(&[
        "translate",
        &m,
        &c,
        "--bindings",
        bindings.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("axm2"), "{}", r.stderr);
    assert_eq!(
        listing(&out),
        vec![("m0.e".to_string(), "previous".to_string())]
    );
}

#[test]
fn unwritable_output_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = write(dir.path(), "file", "");
    let out = blocker.join("sub");
    let r = m0("translate", &["--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 2, "{}", r.stderr);
}

#[cfg(unix)]
#[test]
fn read_only_directory_exits_two() {
    use std::os::unix::fs::PermissionsExt;
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ro");
    fs::create_dir(&out).unwrap();
    fs::set_permissions(&out, fs::Permissions::from_mode(0o555)).unwrap();
    // Privileged users ignore the mode bits; nothing to test then.
    if fs::write(out.join("probe"), "").is_ok() {
        return;
    }
    let r = m0("translate", &["--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    fs::set_permissions(&out, fs::Permissions::from_mode(0o755)).unwrap();
}

#[test]
fn check_reports_clean_run() {
    let r = m0("check", &["--max-depth", "10"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(
        r.stdout.starts_with("3 states explored, 0 mismatches\n"),
        "{}",
        r.stdout
    );
}

#[test]
fn check_records_are_json_lines() {
    let r = m0("check", &["--format", "records", "--jobs", "2"]);
    assert_eq!(r.code, 0);
    let lines: Vec<serde_json::Value> = r
        .stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["kind"], "summary");
    let first = r.stdout.lines().next().unwrap();
    assert!(
        first.starts_with(r#"{"kind":"summary","state":null,"event""#),
        "{first}"
    );
}

#[test]
fn check_reports_seeded_violation() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "up.ebm",
        "machine up variables n invariants @inv1 n : INT @inv2 n <= 0 events\n\
         event INITIALISATION then @act1 n := 0 end\n\
         event inc then @act1 n := n + 1 end end\n",
    );
    let r = run(&["check", m.to_str().unwrap(), "--max-depth", "2"]);
    assert_eq!(r.code, 1);
    assert!(
        r.stdout.contains("invariant inv2 violated in [n=1]"),
        "{}",
        r.stdout
    );
    assert!(r.stdout.contains("after inc -> [n=1]"), "{}", r.stdout);
}

#[test]
fn check_state_cap_exits_two() {
    let r = m0("check", &["--state-cap", "1"]);
    assert_eq!(r.code, 2);
    assert!(
        r.stderr.contains("state space exceeds the cap of 1 states"),
        "{}",
        r.stderr
    );
}

#[test]
fn invalid_flag_values_are_rejected() {
    assert_eq!(m0("check", &["--max-depth", "0"]).code, 2);
    assert_eq!(m0("check", &["--param-bound", "-1"]).code, 2);
    assert_eq!(m0("check", &["--format", "xml"]).code, 2);
}

#[test]
fn animate_replays_script() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s", "ML_out\nML_out\n# back one\nML_in\n");
    let r = m0("animate", &["--script", s.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let ns: Vec<&str> = r
        .stdout
        .lines()
        .map(|l| l.rsplit("n=").next().unwrap())
        .collect();
    assert_eq!(ns, ["0", "1", "2", "1"]);
}

#[test]
fn animate_stops_at_disabled_event() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s", "ML_in\nML_out\n");
    let r = m0("animate", &["--script", s.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("grd1 not satisfied"), "{}", r.stderr);
    assert_eq!(r.stdout.lines().count(), 1);
}

#[test]
fn animate_empty_script_prints_initial_state() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s", "");
    let r = m0("animate", &["--script", s.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "INITIALISATION -> n=0\n");
}

#[test]
fn animate_takes_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "p.ebm",
        "machine p variables n r invariants @inv1 n : INT @inv2 r <: INT events\n\
         event INITIALISATION then @act1 n := 0 @act2 r := {} end\n\
         event put any x s where @grd1 x : INT @grd2 s <: INT & x > n then \
         @act1 n := x @act2 r := r \\/ s end end\n",
    );
    let s = write(dir.path(), "s", "put(3, {1, 2})\nput(2, {})\n");
    let r = run(&[
        "animate",
        m.to_str().unwrap(),
        "--script",
        s.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 1, "{}", r.stdout);
    assert!(
        r.stdout.contains("put(3, {1, 2}) -> n=3, r={1, 2}"),
        "{}",
        r.stdout
    );
    assert!(r.stderr.contains("grd2 not satisfied"), "{}", r.stderr);
    let s = write(dir.path(), "bad", "put(1)\n");
    let r = run(&[
        "animate",
        m.to_str().unwrap(),
        "--script",
        s.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 1);
    assert!(
        r.stderr.contains("takes 2 argument(s), 1 given"),
        "{}",
        r.stderr
    );
}

#[test]
fn contexts_found_through_search_directory() {
    let (m, dir, b) = (fixture("m0.ebm"), fixture(""), fixture("d2.bindings"));
    let r = run(&["check", &m, "--search", &dir, "--bindings", &b]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = run(&["check", &m, "--bindings", &b]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("LINK001"), "{}", r.stderr);
}

#[test]
fn rodin_inputs_are_detected() {
    let (m, c, b) = (fixture("m0.bum"), fixture("c0.buc"), fixture("d2.bindings"));
    let r = run(&["check", &m, &c, "--bindings", &b]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("3 states explored, 0 mismatches"));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "x.ebm",
        "machine x\nvariables n\ninvariants @inv1 n : : NAT\n",
    );
    let r = run(&["check", m.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    let line = r.stderr.lines().next().unwrap();
    assert!(
        line.starts_with(&format!("error PARSE001 {}:3:", m.display())),
        "{line}"
    );
    assert!(!line.contains('\x1b'));
}
