//! Step typing and step subtyping: syntax-directed, transitivity-free
//! decision procedures that are sound for declarative D<: and always
//! terminate.
//!
//! Subtyping recursion is instrumented: when `Config::check_measure` is on
//! (the default in debug builds) every recursive query must have a strictly
//! smaller weight sum than its parent, and a hard depth limit turns runaway
//! recursion into [`StepError::InternalLimit`].

mod weight;

use std::collections::BTreeSet;

use crate::env::TypeEnv;
use crate::exposure::{expose_traced, ExposureResult};
use crate::shift::{shift_traced, Direction, ShiftError};
use crate::syntax::{Term, Type, VarName};
use crate::trace::{StepJudgment, StepRule, StepTrace};

pub use weight::weight;

pub const DEFAULT_DEPTH_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub depth_limit: usize,
    pub check_measure: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { depth_limit: DEFAULT_DEPTH_LIMIT, check_measure: cfg!(debug_assertions) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("recursion depth limit {0} exceeded")]
    InternalLimit(usize),
    #[error("weight did not decrease in {rule}: {child_judgment} weighs {child}, parent {parent_judgment} weighs {parent}")]
    MeasureViolation {
        rule: StepRule,
        parent_judgment: String,
        parent: u64,
        child_judgment: String,
        child: u64,
    },
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

/// Outcome of a step subtyping query.
#[derive(Debug, Clone, PartialEq)]
pub enum Subtyping {
    Holds(StepTrace),
    /// No rule applies. Carries a note when the query itself was malformed.
    Fails(Option<String>),
}

impl Subtyping {
    pub fn holds(&self) -> bool {
        matches!(self, Subtyping::Holds(_))
    }

    pub fn trace(&self) -> Option<&StepTrace> {
        match self {
            Subtyping::Holds(t) => Some(t),
            Subtyping::Fails(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepTypingOutcome {
    Typed(Type, StepTrace),
    /// `location` names the failing subterm as a dotted path of
    /// `rhs`/`body` selectors from the root (empty for the root).
    Untypable { reason: String, location: String },
}

impl StepTypingOutcome {
    pub fn ty(&self) -> Option<&Type> {
        match self {
            StepTypingOutcome::Typed(t, _) => Some(t),
            StepTypingOutcome::Untypable { .. } => None,
        }
    }

    pub fn trace(&self) -> Option<&StepTrace> {
        match self {
            StepTypingOutcome::Typed(_, tr) => Some(tr),
            StepTypingOutcome::Untypable { .. } => None,
        }
    }
}

pub fn step_subtype(g: &TypeEnv, s: &Type, t: &Type) -> Result<Subtyping, StepError> {
    Checker::default().subtype(g, s, t)
}

pub fn step_type(g: &TypeEnv, t: &Term) -> Result<StepTypingOutcome, StepError> {
    Checker::default().type_term(g, t)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Checker {
    pub config: Config,
}

type SubResult = Result<Option<StepTrace>, StepError>;

struct Untypable {
    reason: String,
    location: Vec<&'static str>,
}

type TypResult = Result<Result<(Type, StepTrace), Untypable>, StepError>;

fn untypable(reason: impl Into<String>) -> TypResult {
    Ok(Err(Untypable { reason: reason.into(), location: Vec::new() }))
}

fn within(step: &'static str, r: TypResult) -> TypResult {
    r.map(|inner| {
        inner.map_err(|mut u| {
            u.location.push(step);
            u
        })
    })
}

impl Checker {
    pub fn new(config: Config) -> Self {
        Checker { config }
    }

    pub fn subtype(&self, g: &TypeEnv, s: &Type, t: &Type) -> Result<Subtyping, StepError> {
        for ty in [s, t] {
            if let Some(x) = ty.free_vars().into_iter().find(|x| !g.contains(x)) {
                return Ok(Subtyping::Fails(Some(format!("{ty} mentions unbound variable `{x}`"))));
            }
        }
        Ok(match self.sub(g, s, t, 0, None)? {
            Some(trace) => Subtyping::Holds(trace),
            None => Subtyping::Fails(None),
        })
    }

    fn measure(&self, g: &TypeEnv, s: &Type, t: &Type) -> Option<u64> {
        match (weight(g, s), weight(g, t)) {
            (Ok(a), Ok(b)) => Some(a + b),
            _ => None,
        }
    }

    fn sub(
        &self,
        g: &TypeEnv,
        s: &Type,
        t: &Type,
        depth: usize,
        parent: Option<(StepRule, &StepJudgment, u64)>,
    ) -> SubResult {
        if depth > self.config.depth_limit {
            return Err(StepError::InternalLimit(self.config.depth_limit));
        }
        let here = StepJudgment::Sub { env: g.clone(), lhs: s.clone(), rhs: t.clone() };
        let mut own = None;
        if self.config.check_measure {
            own = self.measure(g, s, t);
            if let (Some((rule, pj, pm)), Some(m)) = (parent, own) {
                if m >= pm {
                    return Err(StepError::MeasureViolation {
                        rule,
                        parent_judgment: pj.to_string(),
                        parent: pm,
                        child_judgment: here.to_string(),
                        child: m,
                    });
                }
            }
        }
        let child = |rule: StepRule| own.map(|m| (rule, &here, m));
        let done = |rule: StepRule, children: Vec<StepTrace>| {
            Ok(Some(StepTrace::node(rule, here.clone(), children)))
        };

        if *s == Type::Bot {
            return done(StepRule::SBot, vec![]);
        }
        if *t == Type::Top {
            return done(StepRule::STop, vec![]);
        }
        if s.is_path() && s == t {
            return done(StepRule::SRefl, vec![]);
        }
        match (s, t) {
            (Type::Decl(a, s1, t1), Type::Decl(b, s2, t2)) if a == b => {
                let Some(lower) = self.sub(g, s2, s1, depth + 1, child(StepRule::STypTyp))? else {
                    return Ok(None);
                };
                let Some(upper) = self.sub(g, t1, t2, depth + 1, child(StepRule::STypTyp))? else {
                    return Ok(None);
                };
                return done(StepRule::STypTyp, vec![lower, upper]);
            }
            (Type::All(x1, p1, r1), Type::All(x2, p2, r2)) if p1.alpha_eq(p2) => {
                let z = g.fresh_name(x1, &BTreeSet::new());
                let inner = g.extend(z.clone(), p1.as_ref().clone()).expect("parameter is in scope");
                let (r1, r2) = (r1.rename(x1, &z), r2.rename(x2, &z));
                // measured in the extended environment
                let child_parent = own.map(|m| (StepRule::SAllAll, &here, m));
                return match self.sub(&inner, &r1, &r2, depth + 1, child_parent)? {
                    Some(body) => done(StepRule::SAllAll, vec![body]),
                    None => Ok(None),
                };
            }
            _ => {}
        }
        if let Type::Path(x, a) = s {
            if let Some((exposed, expo)) = head_exposure(g, x) {
                match &exposed {
                    Type::Bot => return done(StepRule::SSubBot, vec![expo]),
                    Type::Decl(b, _, upper) if b == a => {
                        if let Some(rest) = self.sub(g, upper, t, depth + 1, child(StepRule::SSubSel))? {
                            return done(StepRule::SSubSel, vec![expo, rest]);
                        }
                    }
                    _ => {}
                }
            }
        }
        if let Type::Path(x, a) = t {
            if let Some((exposed, expo)) = head_exposure(g, x) {
                match &exposed {
                    Type::Bot => return done(StepRule::SBotSub, vec![expo]),
                    Type::Decl(b, lower, _) if b == a => {
                        if let Some(rest) = self.sub(g, s, lower, depth + 1, child(StepRule::SSelSub))? {
                            return done(StepRule::SSelSub, vec![expo, rest]);
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(None)
    }

    pub fn type_term(&self, g: &TypeEnv, t: &Term) -> Result<StepTypingOutcome, StepError> {
        Ok(match self.typ(g, t, 0)? {
            Ok((ty, trace)) => StepTypingOutcome::Typed(ty, trace),
            Err(u) => {
                let mut loc = u.location;
                loc.reverse();
                StepTypingOutcome::Untypable { reason: u.reason, location: loc.join(".") }
            }
        })
    }

    fn typ(&self, g: &TypeEnv, t: &Term, depth: usize) -> TypResult {
        if depth > self.config.depth_limit {
            return Err(StepError::InternalLimit(self.config.depth_limit));
        }
        let judge = |ty: &Type| StepJudgment::Typ { env: g.clone(), term: t.clone(), ty: ty.clone() };
        match t {
            Term::Var(x) => match g.lookup(x) {
                Some(ty) => Ok(Ok((ty.clone(), StepTrace::leaf(StepRule::TVar, judge(ty))))),
                None => untypable(format!("unbound variable `{x}`")),
            },
            Term::Tag(a, alias) => {
                if !g.covers(alias) {
                    return untypable(format!("type {alias} is not in scope"));
                }
                let ty = Type::decl(a.clone(), alias.clone(), alias.clone());
                let trace = StepTrace::leaf(StepRule::TTypI, judge(&ty));
                Ok(Ok((ty, trace)))
            }
            Term::Lam(x, param, body) => {
                if !g.covers(param) {
                    return untypable(format!("parameter type {param} is not in scope"));
                }
                let (x2, body) = freshen_binder(g, x, body);
                let inner = g.extend(x2.clone(), param.clone()).expect("checked scope");
                let (u, body_trace) = match within("body", self.typ(&inner, &body, depth + 1))? {
                    Ok(pair) => pair,
                    Err(e) => return Ok(Err(e)),
                };
                let ty = Type::all(x2, param.clone(), u);
                let trace = StepTrace::node(StepRule::TAllI, judge(&ty), vec![body_trace]);
                Ok(Ok((ty, trace)))
            }
            Term::App(f, y) => {
                let Some(fun_ty) = g.lookup(f) else {
                    return untypable(format!("unbound variable `{f}`"));
                };
                let Some(arg_ty) = g.lookup(y) else {
                    return untypable(format!("unbound variable `{y}`"));
                };
                let fun_trace = StepTrace::leaf(
                    StepRule::TVar,
                    StepJudgment::Typ { env: g.clone(), term: Term::Var(f.clone()), ty: fun_ty.clone() },
                );
                let arg_trace = StepTrace::leaf(
                    StepRule::TVar,
                    StepJudgment::Typ { env: g.clone(), term: Term::Var(y.clone()), ty: arg_ty.clone() },
                );
                let (exposed, expo) = match expose_traced(g, fun_ty) {
                    Ok(Ok(pair)) => pair,
                    Ok(Err(_)) | Err(_) => return untypable("function position not exposable"),
                };
                match &exposed {
                    Type::Bot => {
                        let trace = StepTrace::node(
                            StepRule::TAppBot,
                            judge(&Type::Bot),
                            vec![fun_trace, expo, arg_trace],
                        );
                        Ok(Ok((Type::Bot, trace)))
                    }
                    Type::All(z, param, result) => {
                        let Some(sub) = self.sub(g, arg_ty, param, depth + 1, None)? else {
                            return untypable(format!(
                                "argument `{y}` has type {arg_ty}, which is not a step subtype of {param}"
                            ));
                        };
                        let ty = result.rename(z, y);
                        let trace = StepTrace::node(
                            StepRule::TAllE,
                            judge(&ty),
                            vec![fun_trace, expo, arg_trace, sub],
                        );
                        Ok(Ok((ty, trace)))
                    }
                    other => untypable(format!(
                        "function position not exposable: `{f}` exposes to {other}"
                    )),
                }
            }
            Term::Let(x, rhs, body) => {
                let (rhs_ty, rhs_trace) = match within("rhs", self.typ(g, rhs, depth + 1))? {
                    Ok(pair) => pair,
                    Err(e) => return Ok(Err(e)),
                };
                let (x2, body) = freshen_binder(g, x, body);
                let inner = g.extend(x2.clone(), rhs_ty).expect("step types are in scope");
                let (u, body_trace) = match within("body", self.typ(&inner, &body, depth + 1))? {
                    Ok(pair) => pair,
                    Err(e) => return Ok(Err(e)),
                };
                let (ty, promo) = match shift_traced(&inner, &u, &x2, Direction::Promote)? {
                    Ok(pair) => pair,
                    Err(reason) => return untypable(format!("cannot promote {u} away from `{x2}`: {reason}")),
                };
                let trace =
                    StepTrace::node(StepRule::TLet, judge(&ty), vec![rhs_trace, body_trace, promo]);
                Ok(Ok((ty, trace)))
            }
        }
    }
}

/// Renames a term binder away from the environment's domain.
fn freshen_binder(g: &TypeEnv, x: &VarName, body: &Term) -> (VarName, Term) {
    if !g.contains(x) {
        return (x.clone(), body.clone());
    }
    let x2 = g.fresh_name(x, &body.free_vars());
    let body = body.rename(x, &x2);
    (x2, body)
}

/// Exposure of `Γ(x)` with its trace; `None` when unbound or stuck.
fn head_exposure(g: &TypeEnv, x: &VarName) -> Option<(Type, StepTrace)> {
    let tx = g.lookup(x)?;
    match expose_traced(g, tx) {
        Ok(Ok(pair)) => Some(pair),
        Ok(Err(ExposureResult::Stuck { .. })) | Ok(Err(ExposureResult::Exposed(_))) | Err(_) => None,
    }
}

#[cfg(test)]
mod tests;
