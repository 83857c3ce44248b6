use std::path::PathBuf;
use std::process::{Command, Output};

const BOOL2: &str = "(1+1)*(1+1)";
const BOOL3: &str = "(1+1)*((1+1)*(1+1))";
const LABELED3: &str = "(1+(1+1))*((1+(1+1))*(1+(1+1)))";

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn ex(name: &str) -> String {
    root().join("examples/pi").join(name).display().to_string()
}

fn fixture(name: &str) -> String {
    root().join("tests/fixtures").join(name).display().to_string()
}

fn pi_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pi"));
    cmd.args(args).env_remove("PI_BRUTE_FORCE_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn pi")
}

fn pi(args: &[&str]) -> Output {
    pi_env(args, &[])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[track_caller]
fn expect_ok(args: &[&str]) -> String {
    let o = pi(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

/// Exit status and the `ERROR <kind>` of the first stderr line.
#[track_caller]
fn expect_err(args: &[&str], env: &[(&str, &str)], status: i32, kind: &str) {
    let o = pi_env(args, env);
    let err = stderr(&o);
    assert_eq!(o.status.code(), Some(status), "{args:?}: {err}");
    let first = err.lines().next().unwrap_or("");
    assert!(first.starts_with(&format!("ERROR {kind}: ")), "{args:?}: {first}");
    assert!(stdout(&o).is_empty());
}

#[track_caller]
fn golden(args: &[&str], file: &str) {
    let want = std::fs::read_to_string(root().join("tests/golden").join(file)).unwrap();
    assert_eq!(expect_ok(args), want, "{args:?} vs {file}");
}

#[test]
fn goldens() {
    let (reverse, not, word) = (ex("reverse.pi"), ex("not.pi"), ex("not_word3.pi"));
    let (if_not, if_cnot) = (ex("if_not.pi"), ex("if_cnot.pi"));
    let labeled = "(inl (),(inr inl (),inr inr ()))";
    golden(&["run", &reverse, "--in", LABELED3, "--value", labeled, "--trace"], "reverse_trace.txt");
    golden(
        &["run", &reverse, "--in", LABELED3, "--value", labeled, "--trace", "--format", "json"],
        "reverse_trace.json",
    );
    golden(
        &["run", &reverse, "--in", "1*(1*1)", "--value", "((),((),()))", "--trace"],
        "reverse_trace_unit.txt",
    );
    golden(&["run", &not, "--in", "1+1", "--value", "inl ()"], "not_run.txt");
    golden(&["run", &word, "--in", BOOL3, "--value", "(inl (),(inr (),inl ()))"], "not_word3_run.txt");
    golden(
        &["run", &if_cnot, "--in", BOOL3, "--value", "(inl (),(inl (),inr ()))", "--reverse"],
        "if_cnot_reverse.txt",
    );
    golden(&["perm", &not, "--in", "1+1"], "not_perm.txt");
    golden(&["perm", &if_not, "--in", BOOL2], "if_not_perm.txt");
    golden(&["perm", &if_cnot, "--in", BOOL3], "if_cnot_perm.txt");
    golden(&["perm", &ex("cnot.perm")], "cnot_perm.txt");
    golden(&["perm", &ex("toffoli.perm")], "toffoli_perm.txt");
    golden(&["perm", &ex("fulladder.perm")], "fulladder_perm.txt");
    golden(&["perm", &ex("fulladder.perm"), "--format", "json"], "fulladder_perm.json");
    golden(&["equiv", &ex("swapfl1.pi"), &ex("swapfl2.pi"), "--in", "1+(1+1)"], "swapfl_equiv.txt");
    golden(&["prove", &ex("swapfl.piproof")], "swapfl_prove.txt");
    golden(&["invert", &ex("swapfl2.pi")], "swapfl2_invert.txt");
    golden(&["normalize", "--type", BOOL2], "normalize_bool2.txt");
    golden(&["rules"], "rules.txt");
}

#[test]
fn unit_trace_has_three_lines() {
    let out = expect_ok(&["run", &ex("reverse.pi"), "--in", "1*(1*1)", "--value", "((),((),()))", "--trace"]);
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn every_subcommand_speaks_json() {
    let runs: Vec<Vec<String>> = vec![
        vec!["run".into(), ex("not.pi"), "--in".into(), "1+1".into(), "--value".into(), "inr ()".into()],
        vec!["invert".into(), ex("reverse.pi")],
        vec!["perm".into(), ex("if_not.pi"), "--in".into(), BOOL2.into()],
        vec!["equiv".into(), ex("swapfl1.pi"), ex("swapfl2.pi"), "--in".into(), "1+(1+1)".into()],
        vec!["normalize".into(), "--type".into(), BOOL3.into()],
        vec!["prove".into(), ex("swapfl.piproof")],
        vec!["rules".into()],
    ];
    for mut args in runs {
        args.extend(["--format".to_string(), "json".to_string()]);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = expect_ok(&refs);
        serde_json::from_str::<serde_json::Value>(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}"));
    }
}

#[test]
fn rules_dump_is_the_registry() {
    let out = expect_ok(&["rules", "--dump"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rules = v.as_array().unwrap();
    assert_eq!(rules.len(), 108);
    let hexagon = rules.iter().find(|r| r["name"] == "hexagonl_plus_r").unwrap();
    assert_eq!(hexagon["direction"], "r2l");
    assert_eq!(hexagon["group"], "commutativity");
}

#[test]
fn output_is_deterministic() {
    let args = ["rules", "--dump"];
    assert_eq!(expect_ok(&args), expect_ok(&args));
    let args = ["normalize", "--type", "((1+1)*(1+(1+1)))+0", "--format", "json"];
    assert_eq!(expect_ok(&args), expect_ok(&args));
}

#[test]
fn bundled_programs_all_run() {
    for (file, ty) in [
        ("reverse.pi", BOOL3),
        ("not.pi", "1+1"),
        ("not_word3.pi", BOOL3),
        ("if_not.pi", BOOL2),
        ("if_cnot.pi", BOOL3),
        ("swapfl1.pi", "1+(1+1)"),
        ("swapfl2.pi", "1+(1+1)"),
    ] {
        expect_ok(&["perm", &ex(file), "--in", ty]);
        expect_ok(&["invert", &ex(file)]);
    }
    for file in ["cnot.perm", "toffoli.perm", "fulladder.perm"] {
        expect_ok(&["perm", &ex(file)]);
    }
}

#[test]
fn domain_failures_exit_1() {
    let none: &[(&str, &str)] = &[];
    expect_err(&["prove", &fixture("bad_step4.piproof")], none, 1, "NotExact");
    let o = pi(&["prove", &fixture("bad_step4.piproof")]);
    assert!(stderr(&o).contains("step 4 (line 9)"), "{}", stderr(&o));
    expect_err(&["prove", &fixture("bad_syntax.piproof")], none, 1, "ParseError");
    expect_err(&["perm", &fixture("ill_typed.pi"), "--in", "1+1"], none, 1, "TypeError");
    expect_err(&["invert", &fixture("syntax_error.pi")], none, 1, "ParseError");
    expect_err(&["run", &ex("not.pi"), "--in", "1+1", "--value", "((),())"], none, 1, "IllTypedValue");
    expect_err(&["run", &ex("not.pi"), "--in", "1+", "--value", "inl ()"], none, 1, "ParseError");
    expect_err(&["run", &ex("reverse.pi"), "--in", "1+1", "--value", "inl ()"], none, 1, "TypeError");
    expect_err(&["equiv", &ex("not.pi"), &ex("swapfl1.pi"), "--in", "1+1"], none, 1, "TypeError");
    expect_err(&["normalize", "--type", "1 + * 1"], none, 1, "ParseError");
    expect_err(
        &["equiv", &ex("swapfl1.pi"), &ex("swapfl2.pi"), "--in", "1+(1+1)"],
        &[("PI_BRUTE_FORCE_CAP", "2")],
        1,
        "RefusedTooLarge",
    );
}

#[test]
fn inequivalent_programs_exit_1() {
    expect_ok(&["equiv", &ex("not.pi"), &ex("not.pi"), "--in", "1+1"]);
    let o = pi(&["equiv", &fixture("id.pi"), &ex("not.pi"), "--in", "1+1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stderr(&o).lines().next().unwrap(),
        "ERROR NotEquivalent: not equivalent (0/2 values agree); first difference at inl (): inl () vs inr ()"
    );
}

#[test]
fn usage_failures_exit_2() {
    let none: &[(&str, &str)] = &[];
    expect_err(&[], none, 2, "Usage");
    expect_err(&["frobnicate"], none, 2, "Usage");
    expect_err(&["run", &ex("not.pi"), "--value", "inl ()"], none, 2, "Usage");
    expect_err(&["prove", "/nonexistent/proof.piproof"], none, 2, "Usage");
    expect_err(&["perm", &ex("not.pi")], none, 2, "Usage");
    expect_err(&["rules", "--format", "yaml"], none, 2, "Usage");
    expect_err(
        &["equiv", &ex("swapfl1.pi"), &ex("swapfl2.pi"), "--in", "1+(1+1)"],
        &[("PI_BRUTE_FORCE_CAP", "lots")],
        2,
        "Usage",
    );
}

#[test]
fn help_exits_0() {
    let o = pi(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for sub in ["run", "invert", "perm", "equiv", "normalize", "prove", "rules"] {
        assert!(stdout(&o).contains(sub), "{sub} missing from help");
    }
}
