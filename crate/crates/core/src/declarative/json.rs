//! JSON form of derivations and step traces.
//!
//! ```json
//! {"rule": "Trans",
//!  "judgment": {"kind": "sub", "env": [["e", "{E: ...}"]], "lhs": "...", "rhs": "..."},
//!  "premises": [...]}
//! ```
//!
//! Typing judgments use `"kind": "typ"` with `"term"` and `"type"`. Step
//! traces add `"expose"` (`"type"`, `"exposed"`) and `"promote"` /
//! `"demote"` (`"type"`, `"var"`, `"result"`).

use serde_json::{json, Map, Value};

use crate::env::{EnvError, TypeEnv};
use crate::syntax::{parse_term, parse_type, ParseError, Term, Type, VarName};
use crate::trace::{StepJudgment, StepTrace};

use super::{DeclRule, Derivation, Judgment};

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{at}: {message}")]
    Shape { at: String, message: String },
    #[error("{at}: {source}")]
    Parse { at: String, source: ParseError },
    #[error("{at}: {source}")]
    Env { at: String, source: EnvError },
}

fn env_json(env: &TypeEnv) -> Value {
    Value::Array(
        env.bindings()
            .into_iter()
            .map(|(x, t)| json!([x.as_str(), t.to_string()]))
            .collect(),
    )
}

fn judgment_json(j: &Judgment) -> Value {
    match j {
        Judgment::Sub { env, lhs, rhs } => json!({
            "kind": "sub", "env": env_json(env), "lhs": lhs.to_string(), "rhs": rhs.to_string()
        }),
        Judgment::Typ { env, term, ty } => json!({
            "kind": "typ", "env": env_json(env), "term": term.to_string(), "type": ty.to_string()
        }),
    }
}

fn step_judgment_json(j: &StepJudgment) -> Value {
    match j {
        StepJudgment::Sub { env, lhs, rhs } => json!({
            "kind": "sub", "env": env_json(env), "lhs": lhs.to_string(), "rhs": rhs.to_string()
        }),
        StepJudgment::Typ { env, term, ty } => json!({
            "kind": "typ", "env": env_json(env), "term": term.to_string(), "type": ty.to_string()
        }),
        StepJudgment::Expose { env, ty, exposed } => json!({
            "kind": "expose", "env": env_json(env), "type": ty.to_string(), "exposed": exposed.to_string()
        }),
        StepJudgment::Promote { env, ty, var, result } => json!({
            "kind": "promote", "env": env_json(env), "type": ty.to_string(),
            "var": var.as_str(), "result": result.to_string()
        }),
        StepJudgment::Demote { env, ty, var, result } => json!({
            "kind": "demote", "env": env_json(env), "type": ty.to_string(),
            "var": var.as_str(), "result": result.to_string()
        }),
    }
}

pub fn derivation_to_json(d: &Derivation) -> Value {
    json!({
        "rule": d.rule.name(),
        "judgment": judgment_json(&d.judgment),
        "premises": d.premises.iter().map(derivation_to_json).collect::<Vec<_>>(),
    })
}

pub fn trace_to_json(t: &StepTrace) -> Value {
    json!({
        "rule": t.rule.name(),
        "judgment": step_judgment_json(&t.judgment),
        "premises": t.children.iter().map(trace_to_json).collect::<Vec<_>>(),
    })
}

fn shape(at: &str, message: impl Into<String>) -> JsonError {
    JsonError::Shape { at: at.to_string(), message: message.into() }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value, JsonError> {
    obj.get(key).ok_or_else(|| shape(at, format!("missing field \"{key}\"")))
}

fn text<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a str, JsonError> {
    field(obj, key, at)?.as_str().ok_or_else(|| shape(at, format!("\"{key}\" must be a string")))
}

fn ty_field(obj: &Map<String, Value>, key: &str, at: &str) -> Result<Type, JsonError> {
    parse_type(text(obj, key, at)?).map_err(|source| JsonError::Parse { at: format!("{at}.{key}"), source })
}

fn term_field(obj: &Map<String, Value>, key: &str, at: &str) -> Result<Term, JsonError> {
    parse_term(text(obj, key, at)?).map_err(|source| JsonError::Parse { at: format!("{at}.{key}"), source })
}

fn env_field(obj: &Map<String, Value>, at: &str) -> Result<TypeEnv, JsonError> {
    let items = field(obj, "env", at)?.as_array().ok_or_else(|| shape(at, "\"env\" must be an array"))?;
    let mut bindings = Vec::with_capacity(items.len());
    for item in items {
        let pair = item
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| shape(at, "each binding must be a [variable, type] pair"))?;
        let (Some(x), Some(t)) = (pair[0].as_str(), pair[1].as_str()) else {
            return Err(shape(at, "binding entries must be strings"));
        };
        let x = VarName::new(x).map_err(|e| shape(at, e.to_string()))?;
        let t = parse_type(t).map_err(|source| JsonError::Parse { at: format!("{at}.env"), source })?;
        bindings.push((x, t));
    }
    TypeEnv::from_bindings(bindings).map_err(|source| JsonError::Env { at: at.to_string(), source })
}

fn judgment_from(v: &Value, at: &str) -> Result<Judgment, JsonError> {
    let obj = v.as_object().ok_or_else(|| shape(at, "judgment must be an object"))?;
    let env = env_field(obj, at)?;
    match text(obj, "kind", at)? {
        "sub" => Ok(Judgment::Sub { env, lhs: ty_field(obj, "lhs", at)?, rhs: ty_field(obj, "rhs", at)? }),
        "typ" => Ok(Judgment::Typ { env, term: term_field(obj, "term", at)?, ty: ty_field(obj, "type", at)? }),
        other => Err(shape(at, format!("unknown judgment kind \"{other}\""))),
    }
}

fn derivation_from(v: &Value, at: &str) -> Result<Derivation, JsonError> {
    let obj = v.as_object().ok_or_else(|| shape(at, "derivation must be an object"))?;
    let name = text(obj, "rule", at)?;
    let rule = DeclRule::from_name(name).ok_or_else(|| shape(at, format!("unknown rule \"{name}\"")))?;
    let judgment = judgment_from(field(obj, "judgment", at)?, &format!("{at}.judgment"))?;
    let premises = match obj.get("premises") {
        None => Vec::new(),
        Some(Value::Array(ps)) => ps
            .iter()
            .enumerate()
            .map(|(i, p)| derivation_from(p, &format!("{at}.premises[{i}]")))
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(shape(at, "\"premises\" must be an array")),
    };
    Ok(Derivation { rule, judgment, premises })
}

pub fn derivation_from_json(src: &str) -> Result<Derivation, JsonError> {
    let v: Value = serde_json::from_str(src)?;
    derivation_from(&v, "$")
}
