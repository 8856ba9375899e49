//! The declarative D<: rules as explicit derivation trees.
//!
//! [`decl_verify`] checks that every node instantiates its rule schema.
//! [`search`] looks for derivations within a depth budget, and
//! [`elaborate`] turns traces of the algorithmic relations into
//! derivations, which is how step typing is checked for soundness.
//!
//! Schemas, premises in order:
//!
//! ```text
//! Top          Γ ⊢ S <: Top
//! Bot          Γ ⊢ Bot <: T
//! Refl         Γ ⊢ T <: T
//! Trans        Γ ⊢ S <: T,  Γ ⊢ T <: U                    ⟹ Γ ⊢ S <: U
//! <:-Sel       Γ ⊢ x : {A: S..T}                          ⟹ Γ ⊢ S <: x.A
//! Sel-<:       Γ ⊢ x : {A: S..T}                          ⟹ Γ ⊢ x.A <: T
//! All-<:-All   Γ ⊢ S2 <: S1,  Γ, z: S2 ⊢ T1[x:=z] <: T2[y:=z]
//!                                                         ⟹ Γ ⊢ all(x: S1) T1 <: all(y: S2) T2
//! Typ-<:-Typ   Γ ⊢ S2 <: S1,  Γ ⊢ T1 <: T2                ⟹ Γ ⊢ {A: S1..T1} <: {A: S2..T2}
//! Var          Γ(x) = T                                   ⟹ Γ ⊢ x : T
//! All-I        Γ, z: S ⊢ t[x:=z] : U[y:=z]                ⟹ Γ ⊢ lam(x: S) t : all(y: S) U
//! All-E        Γ ⊢ x : all(z: S) T,  Γ ⊢ y : S            ⟹ Γ ⊢ x y : T[z:=y]
//! Typ-I                                                     Γ ⊢ {A = T} : {A: T..T}
//! Let          Γ ⊢ t : T,  Γ, z: T ⊢ u[x:=z] : U,  z ∉ fv(U)
//!                                                         ⟹ Γ ⊢ let x = t in u : U
//! Sub          Γ ⊢ t : T,  Γ ⊢ T <: U                     ⟹ Γ ⊢ t : U
//! ```
//!
//! Types and terms are compared up to alpha-equivalence throughout.

mod elaborate;
mod json;
mod search;

use std::fmt;

use crate::env::TypeEnv;
use crate::syntax::{Term, Type};

pub use elaborate::{
    elaborate_exposure, elaborate_shift, elaborate_step, elaborate_subtype, elaborate_typing,
    ElaborationGap,
};
pub use json::{derivation_from_json, derivation_to_json, trace_to_json, JsonError};
pub use search::{candidate_pool, decl_search, pool_from, Searcher};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeclRule {
    Top,
    Bot,
    Refl,
    Trans,
    SubSel,
    SelSub,
    AllAll,
    TypTyp,
    Var,
    AllI,
    AllE,
    TypI,
    Let,
    Sub,
}

impl DeclRule {
    pub const ALL: [DeclRule; 14] = [
        DeclRule::Top,
        DeclRule::Bot,
        DeclRule::Refl,
        DeclRule::Trans,
        DeclRule::SubSel,
        DeclRule::SelSub,
        DeclRule::AllAll,
        DeclRule::TypTyp,
        DeclRule::Var,
        DeclRule::AllI,
        DeclRule::AllE,
        DeclRule::TypI,
        DeclRule::Let,
        DeclRule::Sub,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DeclRule::Top => "Top",
            DeclRule::Bot => "Bot",
            DeclRule::Refl => "Refl",
            DeclRule::Trans => "Trans",
            DeclRule::SubSel => "<:-Sel",
            DeclRule::SelSub => "Sel-<:",
            DeclRule::AllAll => "All-<:-All",
            DeclRule::TypTyp => "Typ-<:-Typ",
            DeclRule::Var => "Var",
            DeclRule::AllI => "All-I",
            DeclRule::AllE => "All-E",
            DeclRule::TypI => "Typ-I",
            DeclRule::Let => "Let",
            DeclRule::Sub => "Sub",
        }
    }

    pub fn from_name(name: &str) -> Option<DeclRule> {
        DeclRule::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            DeclRule::Top | DeclRule::Bot | DeclRule::Refl | DeclRule::Var | DeclRule::TypI => 0,
            DeclRule::SubSel | DeclRule::SelSub | DeclRule::AllI => 1,
            DeclRule::Trans
            | DeclRule::AllAll
            | DeclRule::TypTyp
            | DeclRule::AllE
            | DeclRule::Let
            | DeclRule::Sub => 2,
        }
    }
}

impl fmt::Display for DeclRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Judgment {
    Sub { env: TypeEnv, lhs: Type, rhs: Type },
    Typ { env: TypeEnv, term: Term, ty: Type },
}

impl Judgment {
    pub fn sub(env: &TypeEnv, lhs: Type, rhs: Type) -> Judgment {
        Judgment::Sub { env: env.clone(), lhs, rhs }
    }

    pub fn typ(env: &TypeEnv, term: Term, ty: Type) -> Judgment {
        Judgment::Typ { env: env.clone(), term, ty }
    }

    pub fn env(&self) -> &TypeEnv {
        match self {
            Judgment::Sub { env, .. } | Judgment::Typ { env, .. } => env,
        }
    }

    pub fn alpha_eq(&self, other: &Judgment) -> bool {
        match (self, other) {
            (Judgment::Sub { env: e1, lhs: l1, rhs: r1 }, Judgment::Sub { env: e2, lhs: l2, rhs: r2 }) => {
                e1.alpha_eq(e2) && l1.alpha_eq(l2) && r1.alpha_eq(r2)
            }
            (Judgment::Typ { env: e1, term: t1, ty: u1 }, Judgment::Typ { env: e2, term: t2, ty: u2 }) => {
                e1.alpha_eq(e2) && t1.alpha_eq(t2) && u1.alpha_eq(u2)
            }
            _ => false,
        }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgment::Sub { lhs, rhs, .. } => write!(f, "{lhs} <: {rhs}"),
            Judgment::Typ { term, ty, .. } => write!(f, "{term} : {ty}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub rule: DeclRule,
    pub judgment: Judgment,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: DeclRule, judgment: Judgment) -> Derivation {
        Derivation { rule, judgment, premises: Vec::new() }
    }

    pub fn node(rule: DeclRule, judgment: Judgment, premises: Vec<Derivation>) -> Derivation {
        Derivation { rule, judgment, premises }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Derivation::depth).max().unwrap_or(0)
    }

    /// Left and right side of a subtyping conclusion.
    pub fn sides(&self) -> Option<(&Type, &Type)> {
        match &self.judgment {
            Judgment::Sub { lhs, rhs, .. } => Some((lhs, rhs)),
            Judgment::Typ { .. } => None,
        }
    }

    /// The type of a typing conclusion.
    pub fn typed_as(&self) -> Option<&Type> {
        match &self.judgment {
            Judgment::Typ { ty, .. } => Some(ty),
            Judgment::Sub { .. } => None,
        }
    }
}

/// The first node (pre-order) that does not instantiate its schema.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{rule} at {}: {reason}", path_text(.path))]
pub struct VerifyError {
    /// Premise indices from the root.
    pub path: Vec<usize>,
    pub rule: DeclRule,
    pub judgment: String,
    pub reason: String,
}

fn path_text(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
    }
}

pub fn decl_verify(d: &Derivation) -> Result<(), VerifyError> {
    let mut path = Vec::new();
    verify_at(d, &mut path)
}

fn verify_at(d: &Derivation, path: &mut Vec<usize>) -> Result<(), VerifyError> {
    check_node(d).map_err(|reason| VerifyError {
        path: path.clone(),
        rule: d.rule,
        judgment: d.judgment.to_string(),
        reason,
    })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        verify_at(p, path)?;
        path.pop();
    }
    Ok(())
}

fn ensure(cond: bool, reason: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(reason())
    }
}

fn premise_sub<'a>(d: &'a Derivation, i: usize, env: &TypeEnv) -> Result<(&'a Type, &'a Type), String> {
    match &d.premises[i].judgment {
        Judgment::Sub { env: e, lhs, rhs } => {
            ensure(e.alpha_eq(env), || format!("premise {i} has a different environment"))?;
            Ok((lhs, rhs))
        }
        Judgment::Typ { .. } => Err(format!("premise {i} must be a subtyping judgment")),
    }
}

fn premise_typ<'a>(d: &'a Derivation, i: usize, env: &TypeEnv) -> Result<(&'a Term, &'a Type), String> {
    match &d.premises[i].judgment {
        Judgment::Typ { env: e, term, ty } => {
            ensure(e.alpha_eq(env), || format!("premise {i} has a different environment"))?;
            Ok((term, ty))
        }
        Judgment::Sub { .. } => Err(format!("premise {i} must be a typing judgment")),
    }
}

/// The binding by which premise `i`'s environment extends `env`.
fn premise_ext<'a>(d: &'a Derivation, i: usize, env: &TypeEnv) -> Result<(&'a crate::syntax::VarName, &'a Type), String> {
    let e = d.premises[i].judgment.env();
    match e.split_last() {
        Some((prefix, z, t)) if prefix.alpha_eq(env) => Ok((z, t)),
        _ => Err(format!("premise {i} must extend the environment by one binding")),
    }
}

fn premise_ext_env(d: &Derivation, i: usize) -> &TypeEnv {
    d.premises[i].judgment.env()
}

fn same(a: &Type, b: &Type, what: &str) -> Result<(), String> {
    ensure(a.alpha_eq(b), || format!("{what}: expected {b}, found {a}"))
}

fn check_scoped(j: &Judgment) -> Result<(), String> {
    let (env, fv) = match j {
        Judgment::Sub { env, lhs, rhs } => {
            let mut fv = lhs.free_vars();
            fv.extend(rhs.free_vars());
            (env, fv)
        }
        Judgment::Typ { env, term, ty } => {
            let mut fv = term.free_vars();
            fv.extend(ty.free_vars());
            (env, fv)
        }
    };
    match fv.into_iter().find(|x| !env.contains(x)) {
        Some(x) => Err(format!("`{x}` is not bound in the environment")),
        None => Ok(()),
    }
}

fn check_node(d: &Derivation) -> Result<(), String> {
    check_scoped(&d.judgment)?;
    ensure(d.premises.len() == d.rule.arity(), || {
        format!("expected {} premises, found {}", d.rule.arity(), d.premises.len())
    })?;
    let mismatch = || Err(format!("conclusion does not match the {} schema", d.rule));
    match (d.rule, &d.judgment) {
        (DeclRule::Top, Judgment::Sub { rhs, .. }) => {
            ensure(*rhs == Type::Top, || "right-hand side is not Top".into())
        }
        (DeclRule::Bot, Judgment::Sub { lhs, .. }) => {
            ensure(*lhs == Type::Bot, || "left-hand side is not Bot".into())
        }
        (DeclRule::Refl, Judgment::Sub { lhs, rhs, .. }) => same(rhs, lhs, "Refl"),
        (DeclRule::Trans, Judgment::Sub { env, lhs, rhs }) => {
            let (s, m1) = premise_sub(d, 0, env)?;
            let (m2, u) = premise_sub(d, 1, env)?;
            same(s, lhs, "left premise lower side")?;
            same(m2, m1, "midpoint")?;
            same(u, rhs, "right premise upper side")
        }
        (DeclRule::SubSel, Judgment::Sub { env, lhs, rhs: Type::Path(x, a) }) => {
            let (term, ty) = premise_typ(d, 0, env)?;
            ensure(*term == Term::Var(x.clone()), || format!("premise must type `{x}`"))?;
            match ty {
                Type::Decl(b, lower, _) if b == a => same(lower, lhs, "declared lower bound"),
                _ => Err(format!("premise must give `{x}` a declaration of {a}")),
            }
        }
        (DeclRule::SelSub, Judgment::Sub { env, lhs: Type::Path(x, a), rhs }) => {
            let (term, ty) = premise_typ(d, 0, env)?;
            ensure(*term == Term::Var(x.clone()), || format!("premise must type `{x}`"))?;
            match ty {
                Type::Decl(b, _, upper) if b == a => same(upper, rhs, "declared upper bound"),
                _ => Err(format!("premise must give `{x}` a declaration of {a}")),
            }
        }
        (
            DeclRule::AllAll,
            Judgment::Sub { env, lhs: Type::All(x1, s1, t1), rhs: Type::All(x2, s2, t2) },
        ) => {
            let (p_lhs, p_rhs) = premise_sub(d, 0, env)?;
            same(p_lhs, s2, "parameter premise lower side")?;
            same(p_rhs, s1, "parameter premise upper side")?;
            let (z, bound) = premise_ext(d, 1, env)?;
            same(bound, s2, "bound of the new binding")?;
            let (b_lhs, b_rhs) = premise_sub(d, 1, premise_ext_env(d, 1))?;
            same(b_lhs, &t1.rename(x1, z), "result premise lower side")?;
            same(b_rhs, &t2.rename(x2, z), "result premise upper side")
        }
        (
            DeclRule::TypTyp,
            Judgment::Sub { env, lhs: Type::Decl(a1, s1, t1), rhs: Type::Decl(a2, s2, t2) },
        ) => {
            ensure(a1 == a2, || format!("labels differ: {a1} and {a2}"))?;
            let (l0, r0) = premise_sub(d, 0, env)?;
            same(l0, s2, "lower premise lower side")?;
            same(r0, s1, "lower premise upper side")?;
            let (l1, r1) = premise_sub(d, 1, env)?;
            same(l1, t1, "upper premise lower side")?;
            same(r1, t2, "upper premise upper side")
        }
        (DeclRule::Var, Judgment::Typ { env, term: Term::Var(x), ty }) => match env.lookup(x) {
            Some(bound) => same(ty, bound, "type of variable"),
            None => Err(format!("`{x}` is unbound")),
        },
        (DeclRule::AllI, Judgment::Typ { env, term: Term::Lam(x, s, body), ty: Type::All(y, s2, u) }) => {
            same(s2, s, "parameter type")?;
            let (z, bound) = premise_ext(d, 0, env)?;
            same(bound, s, "bound of the new binding")?;
            let (p_term, p_ty) = premise_typ(d, 0, premise_ext_env(d, 0))?;
            ensure(p_term.alpha_eq(&body.rename(x, z)), || "premise term is not the body".into())?;
            same(p_ty, &u.rename(y, z), "premise type")
        }
        (DeclRule::AllE, Judgment::Typ { env, term: Term::App(x, y), ty }) => {
            let (f_term, f_ty) = premise_typ(d, 0, env)?;
            ensure(*f_term == Term::Var(x.clone()), || format!("first premise must type `{x}`"))?;
            let Type::All(z, s, t) = f_ty else {
                return Err(format!("first premise must give `{x}` a function type"));
            };
            let (a_term, a_ty) = premise_typ(d, 1, env)?;
            ensure(*a_term == Term::Var(y.clone()), || format!("second premise must type `{y}`"))?;
            same(a_ty, s, "argument type")?;
            same(ty, &t.rename(z, y), "result type")
        }
        (DeclRule::TypI, Judgment::Typ { term: Term::Tag(a, t), ty: Type::Decl(b, lo, hi), .. }) => {
            ensure(a == b, || format!("labels differ: {a} and {b}"))?;
            same(lo, t, "lower bound")?;
            same(hi, t, "upper bound")
        }
        (DeclRule::Let, Judgment::Typ { env, term: Term::Let(x, rhs, body), ty }) => {
            let (r_term, r_ty) = premise_typ(d, 0, env)?;
            ensure(r_term.alpha_eq(rhs), || "first premise must type the bound term".into())?;
            let (z, bound) = premise_ext(d, 1, env)?;
            same(bound, r_ty, "bound of the new binding")?;
            ensure(!ty.has_free(z), || format!("`{z}` escapes into the result type"))?;
            let (b_term, b_ty) = premise_typ(d, 1, premise_ext_env(d, 1))?;
            ensure(b_term.alpha_eq(&body.rename(x, z)), || "second premise term is not the body".into())?;
            same(b_ty, ty, "body type")
        }
        (DeclRule::Sub, Judgment::Typ { env, term, ty }) => {
            let (t0, ty0) = premise_typ(d, 0, env)?;
            ensure(t0.alpha_eq(term), || "first premise types a different term".into())?;
            let (l, r) = premise_sub(d, 1, env)?;
            same(l, ty0, "subtyping premise lower side")?;
            same(r, ty, "subtyping premise upper side")
        }
        _ => mismatch(),
    }
}
