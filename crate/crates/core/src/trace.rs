//! Derivation traces produced by the algorithmic relations (exposure,
//! promotion, demotion, step typing, step subtyping).
//!
//! A trace is a tree of rule applications. Child order is fixed per rule:
//!
//! | rule            | children                                                   |
//! |-----------------|------------------------------------------------------------|
//! | X-Path          | exposure of `Γ(x)` to a declaration, exposure of its upper |
//! | X-Bot           | exposure of `Γ(x)` to `Bot`                                |
//! | P-Up, D-Down, P-Up-Bot, D-Down-Bot | exposure of `Γ(x)`                      |
//! | P-Decl / D-Decl | shift of lower bound, shift of upper bound                 |
//! | P-Lam / D-Lam   | shift of parameter, shift of result under the binder       |
//! | T-All-I         | typing of the body                                         |
//! | T-All-E         | typing of `x`, exposure, typing of `y`, subtyping          |
//! | T-App-Bot       | typing of `x`, exposure, typing of `y`                     |
//! | T-Let           | typing of the bound term, typing of the body, promotion    |
//! | S-Typ-<:-Typ    | lower bounds (contravariant), upper bounds                 |
//! | S-All-<:-All    | result types under the binder                              |
//! | S-<:-Sel, S-Sel-<: | exposure of `Γ(x)`, subtyping against the bound          |
//! | S-<:-Bot, S-Bot-<: | exposure of `Γ(x)`                                       |

use std::fmt;

use crate::env::TypeEnv;
use crate::syntax::{Term, Type, VarName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepRule {
    TVar,
    TAllI,
    TTypI,
    TAllE,
    TAppBot,
    TLet,
    SBot,
    STop,
    STypTyp,
    SRefl,
    SSubSel,
    SSelSub,
    SBotSub,
    SSubBot,
    SAllAll,
    XBot,
    XPath,
    XOther,
    PUp,
    PUpBot,
    PLam,
    PVar,
    PBot,
    PTop,
    PDecl,
    PCap,
    DDown,
    DDownBot,
    DLam,
    DVar,
    DBot,
    DTop,
    DDecl,
    DCap,
}

impl StepRule {
    pub const ALL: [StepRule; 34] = [
        StepRule::TVar,
        StepRule::TAllI,
        StepRule::TTypI,
        StepRule::TAllE,
        StepRule::TAppBot,
        StepRule::TLet,
        StepRule::SBot,
        StepRule::STop,
        StepRule::STypTyp,
        StepRule::SRefl,
        StepRule::SSubSel,
        StepRule::SSelSub,
        StepRule::SBotSub,
        StepRule::SSubBot,
        StepRule::SAllAll,
        StepRule::XBot,
        StepRule::XPath,
        StepRule::XOther,
        StepRule::PUp,
        StepRule::PUpBot,
        StepRule::PLam,
        StepRule::PVar,
        StepRule::PBot,
        StepRule::PTop,
        StepRule::PDecl,
        StepRule::PCap,
        StepRule::DDown,
        StepRule::DDownBot,
        StepRule::DLam,
        StepRule::DVar,
        StepRule::DBot,
        StepRule::DTop,
        StepRule::DDecl,
        StepRule::DCap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StepRule::TVar => "T-Var",
            StepRule::TAllI => "T-All-I",
            StepRule::TTypI => "T-Typ-I",
            StepRule::TAllE => "T-All-E",
            StepRule::TAppBot => "T-App-Bot",
            StepRule::TLet => "T-Let",
            StepRule::SBot => "S-Bot",
            StepRule::STop => "S-Top",
            StepRule::STypTyp => "S-Typ-<:-Typ",
            StepRule::SRefl => "S-Refl",
            StepRule::SSubSel => "S-<:-Sel",
            StepRule::SSelSub => "S-Sel-<:",
            StepRule::SBotSub => "S-Bot-<:",
            StepRule::SSubBot => "S-<:-Bot",
            StepRule::SAllAll => "S-All-<:-All",
            StepRule::XBot => "X-Bot",
            StepRule::XPath => "X-Path",
            StepRule::XOther => "X-Other",
            StepRule::PUp => "P-Up",
            StepRule::PUpBot => "P-Up-Bot",
            StepRule::PLam => "P-Lam",
            StepRule::PVar => "P-Var",
            StepRule::PBot => "P-Bot",
            StepRule::PTop => "P-Top",
            StepRule::PDecl => "P-Decl",
            StepRule::PCap => "P-Cap",
            StepRule::DDown => "D-Down",
            StepRule::DDownBot => "D-Down-Bot",
            StepRule::DLam => "D-Lam",
            StepRule::DVar => "D-Var",
            StepRule::DBot => "D-Bot",
            StepRule::DTop => "D-Top",
            StepRule::DDecl => "D-Decl",
            StepRule::DCap => "D-Cap",
        }
    }

    pub fn from_name(name: &str) -> Option<StepRule> {
        StepRule::ALL.into_iter().find(|r| r.name() == name)
    }
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The conclusion of one algorithmic rule application.
#[derive(Debug, Clone, PartialEq)]
pub enum StepJudgment {
    /// `Γ ⊢# t : T`
    Typ { env: TypeEnv, term: Term, ty: Type },
    /// `Γ ⊢# S <: T`
    Sub { env: TypeEnv, lhs: Type, rhs: Type },
    /// `Γ ⊢ T ⇑ T'`
    Expose { env: TypeEnv, ty: Type, exposed: Type },
    /// `Γ ⊢ T ⇑x T'`
    Promote { env: TypeEnv, ty: Type, var: VarName, result: Type },
    /// `Γ ⊢ T ⇓x T'`
    Demote { env: TypeEnv, ty: Type, var: VarName, result: Type },
}

impl StepJudgment {
    pub fn env(&self) -> &TypeEnv {
        match self {
            StepJudgment::Typ { env, .. }
            | StepJudgment::Sub { env, .. }
            | StepJudgment::Expose { env, .. }
            | StepJudgment::Promote { env, .. }
            | StepJudgment::Demote { env, .. } => env,
        }
    }
}

impl fmt::Display for StepJudgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepJudgment::Typ { term, ty, .. } => write!(f, "{term} : {ty}"),
            StepJudgment::Sub { lhs, rhs, .. } => write!(f, "{lhs} <: {rhs}"),
            StepJudgment::Expose { ty, exposed, .. } => write!(f, "{ty} exposes to {exposed}"),
            StepJudgment::Promote { ty, var, result, .. } => {
                write!(f, "{ty} promotes to {result} (erasing {var})")
            }
            StepJudgment::Demote { ty, var, result, .. } => {
                write!(f, "{ty} demotes to {result} (erasing {var})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace {
    pub rule: StepRule,
    pub judgment: StepJudgment,
    pub children: Vec<StepTrace>,
}

impl StepTrace {
    pub fn leaf(rule: StepRule, judgment: StepJudgment) -> StepTrace {
        StepTrace { rule, judgment, children: Vec::new() }
    }

    pub fn node(rule: StepRule, judgment: StepJudgment, children: Vec<StepTrace>) -> StepTrace {
        StepTrace { rule, judgment, children }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(StepTrace::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(StepTrace::depth).max().unwrap_or(0)
    }

    /// Pre-order walk.
    pub fn visit(&self, f: &mut impl FnMut(&StepTrace)) {
        f(self);
        for c in &self.children {
            c.visit(f);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_names_round_trip() {
        for r in StepRule::ALL {
            assert_eq!(StepRule::from_name(r.name()), Some(r));
        }
        assert_eq!(StepRule::from_name("S-Trans"), None);
    }
}
