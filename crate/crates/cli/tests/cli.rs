use std::path::{Path, PathBuf};
use std::process::Command;

fn corpus(name: &str) -> String {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    p.to_string_lossy().into_owned()
}

fn dsub(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = dsub_cli::run(std::iter::once("dsub").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_prints_the_step_type() {
    let (code, out, _) = dsub(&["check", &corpus("minimality_w.dsub"), "--env", &corpus("gamma_star.env")]);
    assert_eq!((code, out.as_str()), (0, "{V: Top .. Top}\n"));
    // The env header is used when --env is absent.
    let (code, out, _) = dsub(&["check", &corpus("minimality_w.dsub")]);
    assert_eq!((code, out.as_str()), (0, "{V: Top .. Top}\n"));
}

#[test]
fn untypable_reports_a_location() {
    let (code, out, err) = dsub(&["check", &corpus("apply_non_function.dsub")]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("untypable at body"), "{err}");
}

#[test]
fn emitted_trace_is_json() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    let trace_s = trace.to_string_lossy();
    let (code, _, _) = dsub(&["check", &corpus("minimality_w.dsub"), "--emit-trace", &trace_s]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(v["rule"], "T-Let");
    assert_eq!(v["judgment"]["kind"], "typ");
}

#[test]
fn subtyping_examples() {
    let g = corpus("gamma_star.env");
    assert_eq!(dsub(&["sub", "--env", &g, "{V: Top..Top}", "{Z: Top..Top}"]).0, 1);
    assert_eq!(dsub(&["sub", "--env", &g, "all(b: {V: Top..Top}) {V: Top..Top}", "e.E"]).0, 0);
    assert_eq!(dsub(&["sub", "all(x: Top) Top", "all(x: Bot) Top"]).0, 1);
}

#[test]
fn expose_and_shift_output() {
    let dir = tempfile::tempdir().unwrap();
    let env = dir.path().join("g.env");
    std::fs::write(&env, "x : {A: Bot .. Top} ;\ny : Top ;\n").unwrap();
    let env = env.to_string_lossy();
    assert_eq!(dsub(&["expose", "--env", &env, "x.A"]), (0, "Top\n".into(), String::new()));
    assert_eq!(dsub(&["expose", "--env", &env, "y.A"]), (1, "stuck: Top\n".into(), String::new()));
    assert_eq!(dsub(&["promote", "--env", &env, "--var", "x", "{B: x.A .. x.A}"]).1, "{B: Bot .. Top}\n");
    assert_eq!(dsub(&["demote", "--env", &env, "--var", "x", "x.A"]).1, "Bot\n");
}

#[test]
fn search_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) =
        dsub(&["decl", "search", "--env", &corpus("gamma_star.env"), "--fuel", "6", "--sub", "all(b: {V: Top..Top}) {V: Top..Top}", "all(b: {V: Top..Top}) {Z: Top..Top}"]);
    assert_eq!(code, 0);
    let file = dir.path().join("found.json");
    std::fs::write(&file, out).unwrap();
    assert_eq!(dsub(&["decl", "verify", &file.to_string_lossy()]).0, 0);
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pn.csv");
    let (code, stdout, _) = dsub(&["bench", "pn", "--min", "1", "--max", "6", "--out", &out.to_string_lossy()]);
    assert_eq!((code, stdout.as_str()), (0, ""));
    let mut rows = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rows.headers().unwrap(), vec!["n", "calls"]);
    let calls: Vec<u64> = rows.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(calls, vec![1, 5, 19, 69, 251, 923]);
}

#[test]
fn output_is_byte_stable() {
    let args = ["lab", "tags", "--max-size", "3", "--fuel", "3"];
    assert_eq!(dsub(&args), dsub(&args));
    let args = ["decl", "search", "--fuel", "5", "--env", &corpus("gamma_star.env"), "--typ", &corpus("minimality_w.dsub"), "{Z: Top..Top}"];
    let first = dsub(&args);
    assert_eq!(first.0, 0);
    assert_eq!(first, dsub(&args));
}

#[test]
fn tampered_corpus_lists_the_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["minimality_w.dsub", "gamma_star.env", "b_not_c.sub"] {
        std::fs::copy(corpus(f), dir.path().join(f)).unwrap();
    }
    let src = std::fs::read_to_string(corpus("b_not_c.sub")).unwrap().replace("expect: false", "expect: true");
    std::fs::write(dir.path().join("b_not_c.sub"), src).unwrap();
    let (code, out, _) = dsub(&["corpus", "run", &dir.path().to_string_lossy()]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL b_not_c.sub: expected true, got false"), "{out}");
    assert!(out.contains("1 passed, 1 failed"), "{out}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dsub");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["sub", "Bot", "Top"]), Some(0));
    assert_eq!(status(&["sub", "Top", "Bot"]), Some(1));
    assert_eq!(status(&["nonsense"]), Some(2));
    assert_eq!(status(&["--version"]), Some(0));
}
