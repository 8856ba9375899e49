//! Promotion and demotion: erase a variable from a type by moving to a
//! supertype (promotion) or a subtype (demotion).
//!
//! The two relations are mutually recursive: function parameters and
//! declaration lower bounds flip direction. Occurrences `x.A` of the erased
//! variable are replaced by the upper (promotion) or lower (demotion) bound
//! of `A` in the exposure of `Γ(x)`.

use std::fmt;

use crate::env::TypeEnv;
use crate::exposure::{expose_traced, ExposeError, ExposureResult};
use crate::syntax::{Type, VarName};
use crate::trace::{StepJudgment, StepRule, StepTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Promote,
    Demote,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Promote => Direction::Demote,
            Direction::Demote => Direction::Promote,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Promote => "promote",
            Direction::Demote => "demote",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftResult {
    /// The erased variable does not occur free in the result.
    Shifted(Type),
    /// A required exposure got stuck.
    ShiftStuck(String),
}

impl ShiftResult {
    pub fn shifted(&self) -> Option<&Type> {
        match self {
            ShiftResult::Shifted(t) => Some(t),
            ShiftResult::ShiftStuck(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShiftError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(VarName),
    #[error("structural size did not decrease: {child} (size {child_size}) under {parent} (size {parent_size})")]
    SizeViolation { parent: Type, parent_size: usize, child: Type, child_size: usize },
}

impl From<ExposeError> for ShiftError {
    fn from(e: ExposeError) -> Self {
        match e {
            ExposeError::UnboundVariable(x) => ShiftError::UnboundVariable(x),
        }
    }
}

pub type ShiftTraced = Result<(Type, StepTrace), String>;

pub fn promote(g: &TypeEnv, t: &Type, x: &VarName) -> Result<ShiftResult, ShiftError> {
    shift(g, t, x, Direction::Promote)
}

pub fn demote(g: &TypeEnv, t: &Type, x: &VarName) -> Result<ShiftResult, ShiftError> {
    shift(g, t, x, Direction::Demote)
}

pub fn shift(g: &TypeEnv, t: &Type, x: &VarName, dir: Direction) -> Result<ShiftResult, ShiftError> {
    Ok(match shift_traced(g, t, x, dir)? {
        Ok((t, _)) => ShiftResult::Shifted(t),
        Err(reason) => ShiftResult::ShiftStuck(reason),
    })
}

pub fn shift_traced(
    g: &TypeEnv,
    t: &Type,
    x: &VarName,
    dir: Direction,
) -> Result<ShiftTraced, ShiftError> {
    if !g.contains(x) {
        return Err(ShiftError::UnboundVariable(x.clone()));
    }
    go(g, t, x, dir)
}

fn judgment(g: &TypeEnv, t: &Type, x: &VarName, dir: Direction, result: &Type) -> StepJudgment {
    let (env, ty, var, result) = (g.clone(), t.clone(), x.clone(), result.clone());
    match dir {
        Direction::Promote => StepJudgment::Promote { env, ty, var, result },
        Direction::Demote => StepJudgment::Demote { env, ty, var, result },
    }
}

fn pick(dir: Direction, promote: StepRule, demote: StepRule) -> StepRule {
    match dir {
        Direction::Promote => promote,
        Direction::Demote => demote,
    }
}

fn recurse(
    g: &TypeEnv,
    parent: &Type,
    child: &Type,
    x: &VarName,
    dir: Direction,
) -> Result<ShiftTraced, ShiftError> {
    if cfg!(debug_assertions) && child.size() >= parent.size() {
        return Err(ShiftError::SizeViolation {
            parent: parent.clone(),
            parent_size: parent.size(),
            child: child.clone(),
            child_size: child.size(),
        });
    }
    go(g, child, x, dir)
}

fn go(g: &TypeEnv, t: &Type, x: &VarName, dir: Direction) -> Result<ShiftTraced, ShiftError> {
    let leaf = |rule: StepRule, result: Type| {
        let j = judgment(g, t, x, dir, &result);
        Ok(Ok((result, StepTrace::leaf(rule, j))))
    };
    match t {
        Type::Top => leaf(pick(dir, StepRule::PTop, StepRule::DTop), Type::Top),
        Type::Bot => leaf(pick(dir, StepRule::PBot, StepRule::DBot), Type::Bot),
        Type::Path(y, _) if y != x => leaf(pick(dir, StepRule::PVar, StepRule::DVar), t.clone()),
        Type::Path(_, a) => {
            let head_ty = g.lookup(x).ok_or_else(|| ShiftError::UnboundVariable(x.clone()))?;
            let (exposed, head_trace) = match expose_traced(g, head_ty)? {
                Ok(pair) => pair,
                Err(ExposureResult::Stuck { path, blocker }) => {
                    return Ok(Err(format!("cannot expose {path}: its head exposes to {blocker}")))
                }
                Err(ExposureResult::Exposed(_)) => unreachable!(),
            };
            let (rule, result) = match (&exposed, dir) {
                (Type::Bot, Direction::Promote) => (StepRule::PUpBot, Type::Bot),
                (Type::Bot, Direction::Demote) => (StepRule::DDownBot, Type::Top),
                (Type::Decl(b, _, upper), Direction::Promote) if b == a => {
                    (StepRule::PUp, upper.as_ref().clone())
                }
                (Type::Decl(b, lower, _), Direction::Demote) if b == a => {
                    (StepRule::DDown, lower.as_ref().clone())
                }
                _ => {
                    return Ok(Err(format!(
                        "type of `{x}` exposes to {exposed}, which declares no member {a}"
                    )))
                }
            };
            let j = judgment(g, t, x, dir, &result);
            Ok(Ok((result, StepTrace::node(rule, j, vec![head_trace]))))
        }
        Type::Decl(a, lower, upper) => {
            let (lo, lo_trace) = match recurse(g, t, lower, x, dir.flip())? {
                Ok(pair) => pair,
                Err(stuck) => return Ok(Err(stuck)),
            };
            let (hi, hi_trace) = match recurse(g, t, upper, x, dir)? {
                Ok(pair) => pair,
                Err(stuck) => return Ok(Err(stuck)),
            };
            let result = Type::decl(a.clone(), lo, hi);
            let j = judgment(g, t, x, dir, &result);
            let rule = pick(dir, StepRule::PDecl, StepRule::DDecl);
            Ok(Ok((result, StepTrace::node(rule, j, vec![lo_trace, hi_trace]))))
        }
        Type::All(y, param, _) if y == x && !param.has_free(x) => {
            leaf(pick(dir, StepRule::PCap, StepRule::DCap), t.clone())
        }
        Type::All(y, param, body) => {
            // The binder must be fresh for the extended environment.
            let y2 = if y == x || g.contains(y) {
                let mut avoid = body.free_vars();
                avoid.insert(x.clone());
                g.fresh_name(y, &avoid)
            } else {
                y.clone()
            };
            let body = body.rename(y, &y2);
            let (p2, p_trace) = match recurse(g, t, param, x, dir.flip())? {
                Ok(pair) => pair,
                Err(stuck) => return Ok(Err(stuck)),
            };
            // Promotion binds the demoted parameter, demotion the original.
            let bound = match dir {
                Direction::Promote => p2.clone(),
                Direction::Demote => param.as_ref().clone(),
            };
            let inner = g
                .extend(y2.clone(), bound)
                .map_err(|_| ShiftError::UnboundVariable(x.clone()))?;
            if cfg!(debug_assertions) && body.size() >= t.size() {
                return Err(ShiftError::SizeViolation {
                    parent: t.clone(),
                    parent_size: t.size(),
                    child: body.clone(),
                    child_size: body.size(),
                });
            }
            let (b2, b_trace) = match go(&inner, &body, x, dir)? {
                Ok(pair) => pair,
                Err(stuck) => return Ok(Err(stuck)),
            };
            let result = Type::all(y2, p2, b2);
            let j = judgment(g, t, x, dir, &result);
            let rule = pick(dir, StepRule::PLam, StepRule::DLam);
            Ok(Ok((result, StepTrace::node(rule, j, vec![p_trace, b_trace]))))
        }
    }
}
