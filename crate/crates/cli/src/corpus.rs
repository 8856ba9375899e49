//! Golden cases. Every file states its expected outcome up front:
//!
//! - `*.dsub`: a term; `//! expect: typed T` or `//! expect: untypable`,
//!   optional `//! env: FILE`.
//! - `*.sub`: one `S <: T` line; `//! expect: true|false`, optional env.
//! - `*.json`: a derivation with a top-level `"expect": "valid"|"invalid"`.
//! - `*.univ`: a Scala-model universe with `query` lines;
//!   `//! expect:` lists one boolean per query.
//!
//! `*.env` files are support files, not cases.

use std::fs;
use std::io::Write;
use std::path::Path;

use dsub_core::declarative::{decl_verify, derivation_from_json};
use dsub_core::dotty::{parse_universe, scala_sub};
use dsub_core::step::{step_subtype, step_type, StepTypingOutcome};
use dsub_core::syntax::parse_type;
use dsub_core::TypeEnv;

use super::{header, headers, load_env, load_term, Exit, Fatal};

/// Actual vs expected outcome, or an error running the case.
type CaseResult = Result<(String, String), String>;

fn expect_header(src: &str) -> Result<String, String> {
    header(&headers(src), "expect").map(str::to_string).ok_or_else(|| "missing `//! expect:` header".into())
}

fn env_header(path: &Path, src: &str) -> Result<TypeEnv, String> {
    match header(&headers(src), "env") {
        Some(rel) => load_env(&path.parent().unwrap_or(Path::new(".")).join(rel)).map_err(|f| f.0),
        None => Ok(TypeEnv::empty()),
    }
}

fn term_case(path: &Path, src: &str) -> CaseResult {
    let expect = expect_header(src)?;
    let (g, term) = load_term(path, None).map_err(|f| f.0)?;
    let outcome = step_type(&g, &term).map_err(|e| e.to_string())?;
    let actual = match &outcome {
        StepTypingOutcome::Typed(t, _) => format!("typed {t}"),
        StepTypingOutcome::Untypable { .. } => "untypable".to_string(),
    };
    // Compare types up to alpha-equivalence, not spelling.
    if let (Some(want), StepTypingOutcome::Typed(got, _)) = (expect.strip_prefix("typed "), &outcome) {
        let want = parse_type(want).map_err(|e| e.to_string())?;
        if want.alpha_eq(got) {
            return Ok((actual.clone(), actual));
        }
    }
    Ok((actual, expect))
}

fn sub_case(path: &Path, src: &str) -> CaseResult {
    let expect = expect_header(src)?;
    let g = env_header(path, src)?;
    let body: String = src.lines().filter(|l| !l.trim_start().starts_with("//")).collect::<Vec<_>>().join(" ");
    let (s, t) = body.split_once("<:").ok_or("expected `S <: T`")?;
    let s = parse_type(s).map_err(|e| e.to_string())?;
    let t = parse_type(t).map_err(|e| e.to_string())?;
    let holds = step_subtype(&g, &s, &t).map_err(|e| e.to_string())?.holds();
    Ok((holds.to_string(), expect))
}

fn json_case(src: &str) -> CaseResult {
    let v: serde_json::Value = serde_json::from_str(src).map_err(|e| e.to_string())?;
    let expect = v.get("expect").and_then(|e| e.as_str()).ok_or("missing top-level \"expect\"")?.to_string();
    let d = derivation_from_json(src).map_err(|e| e.to_string())?;
    let actual = if decl_verify(&d).is_ok() { "valid" } else { "invalid" };
    Ok((actual.to_string(), expect))
}

fn univ_case(src: &str) -> CaseResult {
    let expect = expect_header(src)?.split_whitespace().collect::<Vec<_>>().join(" ");
    let file = parse_universe(src).map_err(|e| e.to_string())?;
    let results = file
        .queries
        .iter()
        .map(|(a, b)| scala_sub(&file.universe, a, b).map(|s| s.result.to_string()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok((results.join(" "), expect))
}

fn run_case(path: &Path) -> Option<CaseResult> {
    let ext = path.extension()?.to_str()?;
    if !matches!(ext, "dsub" | "sub" | "json" | "univ") {
        return None;
    }
    let src = match fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => return Some(Err(e.to_string())),
    };
    Some(match ext {
        "dsub" => term_case(path, &src),
        "sub" => sub_case(path, &src),
        "json" => json_case(&src),
        _ => univ_case(&src),
    })
}

/// Runs every case in `dir` in name order. Exit 1 on any mismatch, 2 if
/// the directory is missing or holds no cases.
pub fn run_corpus(dir: &Path, out: &mut dyn Write) -> Exit {
    let entries = fs::read_dir(dir).map_err(|e| Fatal(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
    paths.sort();
    let (mut passed, mut failed) = (0, 0);
    for path in &paths {
        let Some(result) = run_case(path) else { continue };
        let name = path.file_name().unwrap_or_default().to_string_lossy();
        match result {
            Ok((actual, expected)) if actual == expected => {
                passed += 1;
                writeln!(out, "PASS {name}")?;
            }
            Ok((actual, expected)) => {
                failed += 1;
                writeln!(out, "FAIL {name}: expected {expected}, got {actual}")?;
            }
            Err(e) => {
                failed += 1;
                writeln!(out, "FAIL {name}: {e}")?;
            }
        }
    }
    if passed + failed == 0 {
        return Err(Fatal(format!("{}: no corpus cases", dir.display())));
    }
    writeln!(out, "{passed} passed, {failed} failed")?;
    Ok(if failed == 0 { 0 } else { 1 })
}
