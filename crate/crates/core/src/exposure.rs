//! Exposure: find a supertype of a type that is not a path.
//!
//! `expose(Γ, x.A)` looks up `Γ(x)`, exposes it, and when that yields a
//! declaration `{A: S..U}` continues with `U`; `Bot` short-circuits to
//! `Bot`. Any other type is its own exposure. Recursion only consults
//! bindings strictly before the head variable, so it terminates on
//! well-formed environments.

use crate::env::TypeEnv;
use crate::syntax::{Type, VarName};
use crate::trace::{StepJudgment, StepRule, StepTrace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExposureResult {
    /// Never a path.
    Exposed(Type),
    /// `path` could not be exposed because its head variable's type exposes
    /// to `blocker`: `Top`, a function type, or a declaration of another
    /// label.
    Stuck { path: Type, blocker: Type },
}

impl ExposureResult {
    pub fn exposed(&self) -> Option<&Type> {
        match self {
            ExposureResult::Exposed(t) => Some(t),
            ExposureResult::Stuck { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExposeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(VarName),
}

/// A successful exposure with its derivation, or the stuck point.
pub type Traced = Result<(Type, StepTrace), ExposureResult>;

pub fn expose(g: &TypeEnv, t: &Type) -> Result<ExposureResult, ExposeError> {
    Ok(match expose_traced(g, t)? {
        Ok((exposed, _)) => ExposureResult::Exposed(exposed),
        Err(stuck) => stuck,
    })
}

/// Exposure with its X-* derivation. The `Err` side of the inner result is
/// always `ExposureResult::Stuck`.
pub fn expose_traced(g: &TypeEnv, t: &Type) -> Result<Traced, ExposeError> {
    let Type::Path(x, a) = t else {
        let j = StepJudgment::Expose { env: g.clone(), ty: t.clone(), exposed: t.clone() };
        return Ok(Ok((t.clone(), StepTrace::leaf(StepRule::XOther, j))));
    };
    let (prefix, head_ty) =
        g.prefix_before(x).ok_or_else(|| ExposeError::UnboundVariable(x.clone()))?;
    let head = expose_traced(g, head_ty)?;
    if cfg!(debug_assertions) {
        let full = match &head {
            Ok((t, _)) => ExposureResult::Exposed(t.clone()),
            Err(stuck) => stuck.clone(),
        };
        let local = expose(&prefix, head_ty)?;
        assert_eq!(full, local, "exposure of {head_ty} depends on bindings after `{x}`");
    }
    let (head_exposed, head_trace) = match head {
        Ok(pair) => pair,
        Err(stuck) => return Ok(Err(stuck)),
    };
    match &head_exposed {
        Type::Bot => {
            let j = StepJudgment::Expose { env: g.clone(), ty: t.clone(), exposed: Type::Bot };
            Ok(Ok((Type::Bot, StepTrace::node(StepRule::XBot, j, vec![head_trace]))))
        }
        Type::Decl(b, _, upper) if b == a => match expose_traced(g, upper)? {
            Ok((v, upper_trace)) => {
                let j = StepJudgment::Expose { env: g.clone(), ty: t.clone(), exposed: v.clone() };
                Ok(Ok((v, StepTrace::node(StepRule::XPath, j, vec![head_trace, upper_trace]))))
            }
            Err(stuck) => Ok(Err(stuck)),
        },
        _ => Ok(Err(ExposureResult::Stuck { path: t.clone(), blocker: head_exposed })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{label, parse_type, var};

    fn env(src: &str) -> TypeEnv {
        TypeEnv::parse(src).unwrap()
    }

    fn ty(src: &str) -> Type {
        parse_type(src).unwrap()
    }

    #[test]
    fn exposes_through_declaration() {
        let g = env("x : {A: Bot .. Top} ;");
        assert_eq!(expose(&g, &ty("x.A")).unwrap(), ExposureResult::Exposed(Type::Top));
        assert_eq!(expose(&g, &Type::Top).unwrap(), ExposureResult::Exposed(Type::Top));
    }

    #[test]
    fn bottom_head_exposes_to_bottom() {
        let g = env("x : Bot ;");
        assert_eq!(expose(&g, &ty("x.A")).unwrap(), ExposureResult::Exposed(Type::Bot));
    }

    #[test]
    fn chained_paths() {
        let g = env("x : {A: Bot .. Top} ;\ny : {B: Bot .. x.A} ;");
        let (v, trace) = expose_traced(&g, &ty("y.B")).unwrap().unwrap();
        assert_eq!(v, Type::Top);
        assert_eq!(trace.rule, StepRule::XPath);
        assert_eq!(trace.children[1].rule, StepRule::XPath);
    }

    #[test]
    fn head_through_path_type() {
        // Γ(z) is itself a path that exposes to a declaration
        let g = env("x : {A: Bot .. {B: Top .. Top}} ;\nz : x.A ;");
        assert_eq!(expose(&g, &ty("z.B")).unwrap(), ExposureResult::Exposed(Type::Top));
    }

    #[test]
    fn stuck_cases() {
        let g = env("x : Top ;\ny : {B: Bot .. Top} ;\nf : all(z: Top) Top ;");
        for (path, blocker) in [("x.A", "Top"), ("y.A", "{B: Bot .. Top}"), ("f.A", "all(z: Top) Top")] {
            match expose(&g, &ty(path)).unwrap() {
                ExposureResult::Stuck { path: p, blocker: b } => {
                    assert_eq!(p, ty(path));
                    assert_eq!(b, ty(blocker));
                }
                other => panic!("{path}: {other:?}"),
            }
        }
    }

    #[test]
    fn unbound_head() {
        assert_eq!(
            expose(&TypeEnv::empty(), &Type::path(var("x"), label("A"))),
            Err(ExposeError::UnboundVariable(var("x")))
        );
    }
}
