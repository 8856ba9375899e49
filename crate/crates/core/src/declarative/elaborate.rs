use crate::env::TypeEnv;
use crate::exposure::expose_traced;
use crate::shift::{shift_traced, Direction};
use crate::step::{Checker, StepTypingOutcome, Subtyping};
use crate::syntax::{var, Term, Type, TypeLabel, VarName};
use crate::trace::{StepJudgment, StepRule, StepTrace};

use super::{DeclRule, Derivation, Judgment};

/// A trace node that has no declarative counterpart, or a query whose
/// algorithmic result was negative and so has nothing to elaborate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot elaborate {rule}: {reason}")]
pub struct ElaborationGap {
    pub rule: String,
    pub reason: String,
}

fn gap(rule: impl ToString, reason: impl Into<String>) -> ElaborationGap {
    ElaborationGap { rule: rule.to_string(), reason: reason.into() }
}

type Elab = Result<Derivation, ElaborationGap>;

/// Derivation of `Γ ⊢ T <: T'` where `T'` is the exposure of `T`.
pub fn elaborate_exposure(g: &TypeEnv, t: &Type) -> Elab {
    match expose_traced(g, t) {
        Ok(Ok((_, trace))) => elaborate_step(&trace),
        Ok(Err(stuck)) => Err(gap("exposure", format!("{t} does not expose: {stuck:?}"))),
        Err(e) => Err(gap("exposure", e.to_string())),
    }
}

/// Derivation of `Γ ⊢ T <: T'` for promotion, `Γ ⊢ T' <: T` for demotion.
pub fn elaborate_shift(g: &TypeEnv, t: &Type, x: &VarName, dir: Direction) -> Elab {
    match shift_traced(g, t, x, dir) {
        Ok(Ok((_, trace))) => elaborate_step(&trace),
        Ok(Err(reason)) => Err(gap(dir, reason)),
        Err(e) => Err(gap(dir, e.to_string())),
    }
}

pub fn elaborate_subtype(g: &TypeEnv, s: &Type, t: &Type) -> Elab {
    match Checker::default().subtype(g, s, t) {
        Ok(Subtyping::Holds(trace)) => elaborate_step(&trace),
        Ok(Subtyping::Fails(_)) => Err(gap("step subtyping", format!("{s} <: {t} does not hold"))),
        Err(e) => Err(gap("step subtyping", e.to_string())),
    }
}

pub fn elaborate_typing(g: &TypeEnv, t: &Term) -> Elab {
    match Checker::default().type_term(g, t) {
        Ok(StepTypingOutcome::Typed(_, trace)) => elaborate_step(&trace),
        Ok(StepTypingOutcome::Untypable { reason, .. }) => Err(gap("step typing", reason)),
        Err(e) => Err(gap("step typing", e.to_string())),
    }
}

fn sub(g: &TypeEnv, lhs: &Type, rhs: &Type) -> Judgment {
    Judgment::sub(g, lhs.clone(), rhs.clone())
}

fn refl(g: &TypeEnv, t: &Type) -> Derivation {
    Derivation::leaf(DeclRule::Refl, sub(g, t, t))
}

fn bot_below(g: &TypeEnv, t: &Type) -> Derivation {
    Derivation::leaf(DeclRule::Bot, sub(g, &Type::Bot, t))
}

fn sides(d: &Derivation) -> (&Type, &Type) {
    d.sides().expect("subtyping derivation")
}

/// `Trans`, dropping reflexive sides.
fn trans(d1: Derivation, d2: Derivation) -> Derivation {
    if d1.rule == DeclRule::Refl {
        return d2;
    }
    if d2.rule == DeclRule::Refl {
        return d1;
    }
    let j = sub(d1.judgment.env(), sides(&d1).0, sides(&d2).1);
    Derivation::node(DeclRule::Trans, j, vec![d1, d2])
}

/// `Sub`, or the typing itself when the subtyping is reflexivity.
fn subsume(typing: Derivation, s: Derivation) -> Derivation {
    if s.rule == DeclRule::Refl {
        return typing;
    }
    let Judgment::Typ { env, term, .. } = &typing.judgment else {
        unreachable!("first premise of Sub is a typing")
    };
    let j = Judgment::typ(env, term.clone(), sides(&s).1.clone());
    Derivation::node(DeclRule::Sub, j, vec![typing, s])
}

fn var_rule(g: &TypeEnv, x: &VarName) -> Result<Derivation, ElaborationGap> {
    let t = g.lookup(x).ok_or_else(|| gap("Var", format!("`{x}` is unbound")))?;
    Ok(Derivation::leaf(DeclRule::Var, Judgment::typ(g, Term::Var(x.clone()), t.clone())))
}

/// `Γ ⊢ x : want`, given a derivation of `Γ(x) <: E` where `E` is either
/// `want` or `Bot`.
fn var_at(g: &TypeEnv, x: &VarName, head: Derivation, want: Type) -> Elab {
    let head = if sides(&head).1.alpha_eq(&want) {
        head
    } else if *sides(&head).1 == Type::Bot {
        trans(head, bot_below(g, &want))
    } else {
        return Err(gap("Var", format!("`{x}` is not known to have type {want}")));
    };
    Ok(subsume(var_rule(g, x)?, head))
}

fn exposed_of(tr: &StepTrace) -> Result<&Type, ElaborationGap> {
    match &tr.judgment {
        StepJudgment::Expose { exposed, .. } => Ok(exposed),
        _ => Err(gap(tr.rule, "expected an exposure premise")),
    }
}

fn child(tr: &StepTrace, i: usize) -> Result<&StepTrace, ElaborationGap> {
    tr.children.get(i).ok_or_else(|| gap(tr.rule, format!("missing premise {i}")))
}

fn path_parts(tr: &StepTrace, t: &Type) -> Result<(VarName, TypeLabel), ElaborationGap> {
    match t {
        Type::Path(x, a) => Ok((x.clone(), a.clone())),
        _ => Err(gap(tr.rule, format!("{t} is not a path"))),
    }
}

/// `Sel-<:` concluding `x.A <: upper`, from the exposure trace of `Γ(x)`.
fn sel_upper(g: &TypeEnv, x: &VarName, a: &TypeLabel, lower: &Type, upper: &Type, head: &StepTrace) -> Elab {
    let decl = Type::decl(a.clone(), lower.clone(), upper.clone());
    let typing = var_at(g, x, elaborate_step(head)?, decl)?;
    Ok(Derivation::node(DeclRule::SelSub, sub(g, &Type::path(x.clone(), a.clone()), upper), vec![typing]))
}

/// `<:-Sel` concluding `lower <: x.A`.
fn sel_lower(g: &TypeEnv, x: &VarName, a: &TypeLabel, lower: &Type, upper: &Type, head: &StepTrace) -> Elab {
    let decl = Type::decl(a.clone(), lower.clone(), upper.clone());
    let typing = var_at(g, x, elaborate_step(head)?, decl)?;
    Ok(Derivation::node(DeclRule::SubSel, sub(g, lower, &Type::path(x.clone(), a.clone())), vec![typing]))
}

/// Bounds of the declaration of `a` that a head exposure produced.
fn exposed_bounds(tr: &StepTrace, head: &StepTrace, a: &TypeLabel) -> Result<(Type, Type), ElaborationGap> {
    match exposed_of(head)? {
        Type::Decl(b, lo, hi) if b == a => Ok((lo.as_ref().clone(), hi.as_ref().clone())),
        other => Err(gap(tr.rule, format!("head exposes to {other}, not a declaration of {a}"))),
    }
}

/// Elaborates any trace produced by this crate: exposure and shift traces
/// give subtyping derivations, step subtyping and step typing traces give
/// derivations of the same judgment.
pub fn elaborate_step(tr: &StepTrace) -> Elab {
    match &tr.judgment {
        StepJudgment::Expose { env, ty, exposed } => elaborate_expose_node(tr, env, ty, exposed),
        StepJudgment::Promote { env, ty, result, .. } => elaborate_shift_node(tr, env, ty, result, Direction::Promote),
        StepJudgment::Demote { env, ty, result, .. } => elaborate_shift_node(tr, env, ty, result, Direction::Demote),
        StepJudgment::Sub { env, lhs, rhs } => elaborate_sub_node(tr, env, lhs, rhs),
        StepJudgment::Typ { env, term, ty } => elaborate_typ_node(tr, env, term, ty),
    }
}

fn elaborate_expose_node(tr: &StepTrace, g: &TypeEnv, ty: &Type, exposed: &Type) -> Elab {
    match tr.rule {
        StepRule::XOther => Ok(refl(g, ty)),
        StepRule::XPath => {
            let (x, a) = path_parts(tr, ty)?;
            let head = child(tr, 0)?;
            let (lo, hi) = exposed_bounds(tr, head, &a)?;
            let sel = sel_upper(g, &x, &a, &lo, &hi, head)?;
            Ok(trans(sel, elaborate_step(child(tr, 1)?)?))
        }
        StepRule::XBot => {
            let (x, a) = path_parts(tr, ty)?;
            sel_upper(g, &x, &a, &Type::Bot, exposed, child(tr, 0)?)
        }
        other => Err(gap(other, "not an exposure rule")),
    }
}

fn elaborate_shift_node(tr: &StepTrace, g: &TypeEnv, ty: &Type, result: &Type, dir: Direction) -> Elab {
    use StepRule::*;
    match tr.rule {
        PTop | PBot | PVar | PCap | DTop | DBot | DVar | DCap => Ok(refl(g, ty)),
        PUp => {
            let (x, a) = path_parts(tr, ty)?;
            let head = child(tr, 0)?;
            let (lo, hi) = exposed_bounds(tr, head, &a)?;
            sel_upper(g, &x, &a, &lo, &hi, head)
        }
        PUpBot => {
            let (x, a) = path_parts(tr, ty)?;
            sel_upper(g, &x, &a, &Type::Bot, &Type::Bot, child(tr, 0)?)
        }
        DDown => {
            let (x, a) = path_parts(tr, ty)?;
            let head = child(tr, 0)?;
            let (lo, hi) = exposed_bounds(tr, head, &a)?;
            sel_lower(g, &x, &a, &lo, &hi, head)
        }
        DDownBot => {
            let (x, a) = path_parts(tr, ty)?;
            sel_lower(g, &x, &a, &Type::Top, &Type::Top, child(tr, 0)?)
        }
        PDecl | DDecl => {
            let lower = elaborate_step(child(tr, 0)?)?;
            let upper = elaborate_step(child(tr, 1)?)?;
            let j = match dir {
                Direction::Promote => sub(g, ty, result),
                Direction::Demote => sub(g, result, ty),
            };
            Ok(Derivation::node(DeclRule::TypTyp, j, vec![lower, upper]))
        }
        PLam | DLam => {
            let param = elaborate_step(child(tr, 0)?)?;
            let body = elaborate_step(child(tr, 1)?)?;
            let j = match dir {
                Direction::Promote => sub(g, ty, result),
                Direction::Demote => sub(g, result, ty),
            };
            Ok(Derivation::node(DeclRule::AllAll, j, vec![param, body]))
        }
        other => Err(gap(other, format!("not a {dir} rule"))),
    }
}

fn elaborate_sub_node(tr: &StepTrace, g: &TypeEnv, lhs: &Type, rhs: &Type) -> Elab {
    let j = sub(g, lhs, rhs);
    match tr.rule {
        StepRule::SBot => Ok(Derivation::leaf(DeclRule::Bot, j)),
        StepRule::STop => Ok(Derivation::leaf(DeclRule::Top, j)),
        StepRule::SRefl => Ok(Derivation::leaf(DeclRule::Refl, j)),
        StepRule::STypTyp => {
            let lower = elaborate_step(child(tr, 0)?)?;
            let upper = elaborate_step(child(tr, 1)?)?;
            Ok(Derivation::node(DeclRule::TypTyp, j, vec![lower, upper]))
        }
        StepRule::SAllAll => {
            let (Type::All(_, p1, _), Type::All(_, p2, _)) = (lhs, rhs) else {
                return Err(gap(tr.rule, "sides are not function types"));
            };
            let params = Derivation::leaf(DeclRule::Refl, sub(g, p2, p1));
            let body = elaborate_step(child(tr, 0)?)?;
            Ok(Derivation::node(DeclRule::AllAll, j, vec![params, body]))
        }
        StepRule::SSubSel => {
            let (x, a) = path_parts(tr, lhs)?;
            let head = child(tr, 0)?;
            let (lo, hi) = exposed_bounds(tr, head, &a)?;
            let sel = sel_upper(g, &x, &a, &lo, &hi, head)?;
            Ok(trans(sel, elaborate_step(child(tr, 1)?)?))
        }
        StepRule::SSelSub => {
            let (x, a) = path_parts(tr, rhs)?;
            let head = child(tr, 0)?;
            let (lo, hi) = exposed_bounds(tr, head, &a)?;
            let sel = sel_lower(g, &x, &a, &lo, &hi, head)?;
            Ok(trans(elaborate_step(child(tr, 1)?)?, sel))
        }
        StepRule::SSubBot => {
            let (x, a) = path_parts(tr, lhs)?;
            sel_upper(g, &x, &a, &Type::Bot, rhs, child(tr, 0)?)
        }
        StepRule::SBotSub => {
            let (x, a) = path_parts(tr, rhs)?;
            sel_lower(g, &x, &a, lhs, &Type::Top, child(tr, 0)?)
        }
        other => Err(gap(other, "not a subtyping rule")),
    }
}

fn elaborate_typ_node(tr: &StepTrace, g: &TypeEnv, term: &Term, ty: &Type) -> Elab {
    let j = Judgment::typ(g, term.clone(), ty.clone());
    match (tr.rule, term) {
        (StepRule::TVar, Term::Var(_)) => Ok(Derivation::leaf(DeclRule::Var, j)),
        (StepRule::TTypI, Term::Tag(..)) => Ok(Derivation::leaf(DeclRule::TypI, j)),
        (StepRule::TAllI, Term::Lam(..)) => {
            let body = elaborate_step(child(tr, 0)?)?;
            Ok(Derivation::node(DeclRule::AllI, j, vec![body]))
        }
        (StepRule::TAllE, Term::App(..)) => {
            let fun = subsume(elaborate_step(child(tr, 0)?)?, elaborate_step(child(tr, 1)?)?);
            let arg = subsume(elaborate_step(child(tr, 2)?)?, elaborate_step(child(tr, 3)?)?);
            Ok(Derivation::node(DeclRule::AllE, j, vec![fun, arg]))
        }
        (StepRule::TAppBot, Term::App(f, y)) => {
            let arg_ty = g.lookup(y).ok_or_else(|| gap(tr.rule, format!("`{y}` is unbound")))?;
            let z = g.fresh_name(&var("z"), &arg_ty.free_vars());
            let fun_ty = Type::all(z, arg_ty.clone(), Type::Bot);
            let to_bot = elaborate_step(child(tr, 1)?)?;
            let fun = var_at(g, f, to_bot, fun_ty)?;
            let arg = elaborate_step(child(tr, 2)?)?;
            Ok(Derivation::node(DeclRule::AllE, j, vec![fun, arg]))
        }
        (StepRule::TLet, Term::Let(..)) => {
            let rhs = elaborate_step(child(tr, 0)?)?;
            let body = subsume(elaborate_step(child(tr, 1)?)?, elaborate_step(child(tr, 2)?)?);
            Ok(Derivation::node(DeclRule::Let, j, vec![rhs, body]))
        }
        (other, _) => Err(gap(other, format!("does not apply to the term {term}"))),
    }
}
