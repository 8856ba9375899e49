use crate::env::TypeEnv;
use crate::exposure::ExposeError;
use crate::syntax::{Type, VarName};

/// Termination measure for step subtyping.
///
/// `Top` and `Bot` weigh 1; a declaration weighs one more than its heavier
/// bound; `x.A` weighs one more than `Γ(x)` measured in the bindings before
/// `x`; a function type weighs one more than its result measured with the
/// parameter bound.
pub fn weight(g: &TypeEnv, t: &Type) -> Result<u64, ExposeError> {
    weigh(g, t, &mut Vec::new())
}

/// `locals` holds the weight of each enclosing binder's parameter type,
/// innermost last.
fn weigh<'a>(g: &TypeEnv, t: &'a Type, locals: &mut Vec<(&'a VarName, u64)>) -> Result<u64, ExposeError> {
    match t {
        Type::Top | Type::Bot => Ok(1),
        Type::Decl(_, s, u) => Ok(1 + weigh(g, s, locals)?.max(weigh(g, u, locals)?)),
        Type::Path(x, _) => {
            if let Some((_, w)) = locals.iter().rev().find(|(y, _)| *y == x) {
                return Ok(1 + w);
            }
            let (prefix, tx) =
                g.prefix_before(x).ok_or_else(|| ExposeError::UnboundVariable(x.clone()))?;
            Ok(1 + weight(&prefix, tx)?)
        }
        Type::All(x, s, u) => {
            let ws = weigh(g, s, locals)?;
            locals.push((x, ws));
            let wu = weigh(g, u, locals);
            locals.pop();
            Ok(1 + wu?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    fn w(env: &str, t: &str) -> u64 {
        weight(&TypeEnv::parse(env).unwrap(), &parse_type(t).unwrap()).unwrap()
    }

    #[test]
    fn weights_follow_the_equations() {
        assert_eq!(w("", "Top"), 1);
        assert_eq!(w("", "Bot"), 1);
        assert_eq!(w("", "{A: Top .. Top}"), 2);
        assert_eq!(w("x : Top ;", "x.A"), 2);
        assert_eq!(w("", "all(x: Top) x.A"), 3);
        assert_eq!(w("x : {A: Bot .. {B: Top .. Top}} ;", "x.A"), 4);
        // binder shadows the environment variable
        assert_eq!(w("x : {A: Bot .. {B: Top .. Top}} ;", "all(x: Top) x.A"), 3);
    }

    #[test]
    fn weight_ignores_later_bindings() {
        assert_eq!(w("x : Top ;\ny : {A: Top .. Top} ;", "x.A"), 2);
        assert_eq!(w("x : Top ;\ny : {A: Top .. Top} ;", "y.A"), 3);
    }
}
